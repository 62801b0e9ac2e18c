"""Acceptance criteria as executable checks.

``run_acceptance`` returns ``(criterion, Check)`` pairs; criteria are
numbered 1-7 in the order listed in the README.
"""
from __future__ import annotations

import time

import numpy as np

from . import verify as V
from .em import rytov_rotation_per_pitch
from .potential import ScalarPotential
from .ray import AnalyticTrajectory, integrate_ray, ray_start
from .report import Check
from .transport import helix_exact_matrix, helix_first_order_matrix, transport_spin


def _scenario(name):
    from .scenario import load_config

    return load_config(V.shipped_configs()[name])


def criterion_circle(rng, perturb=False) -> list[Check]:
    """20 random circles, theta in [1e-4, 0.5], one revolution each."""
    fids, times = [], []
    for _ in range(20):
        case = V.random_circle_case(rng, (1e-4, 0.5))
        t0 = time.perf_counter()
        infid, _ = V.circle_oracle_infidelity(case, V._random_spinor(rng))
        times.append(time.perf_counter() - t0)
        fids.append(1.0 - infid)
    return [Check("circle_min_fidelity_20_cases", min(fids), 1 - 1e-8, ">="),
            Check("circle_max_runtime_s", max(times), 1.0)]


def first_order_errors(mus=(1e-4, 1e-3, 1e-2), r0=1.0, Omega=1.0, m=1.0, c=1.0, E=1.5):
    """Operator-norm gap between the first-order and exact helix rotors over one pitch."""
    D = E + m * c**2
    s = 2 * np.pi * np.sqrt(1 + Omega**2 * r0**2) / Omega
    errs = []
    for mu in mus:
        k = 2 * D * mu * np.sqrt(1 + Omega**2 * r0**2)
        A = helix_first_order_matrix(k, r0, Omega, s, E, m, c, 0.0)
        B = helix_exact_matrix(k, r0, Omega, s, E, m, c, 0.0)
        errs.append(float(np.linalg.norm(A - B, 2)))
    return errs


def criterion_helix(rng, perturb=False) -> list[Check]:
    fid = min(1.0 - V.helix_oracle_infidelity(V.random_helix_case(rng), V._random_spinor(rng))[0]
              for _ in range(5))
    errs = first_order_errors()
    ratios = [errs[1] / errs[0], errs[2] / errs[1]]
    return [Check("helix_min_fidelity_one_pitch", fid, 1 - 1e-8, ">="),
            Check("first_order_ratio_dev_mu_1e-4_to_1e-3", abs(ratios[0] - 100), 20),
            Check("first_order_ratio_dev_mu_1e-3_to_1e-2", abs(ratios[1] - 100), 20)]


def criterion_pitch(rng, perturb=False) -> list[Check]:
    from .scenario import execute

    out = []
    for name in ("helix", "helix_harmonic"):
        rep = execute(_scenario(name), 0).report
        by = {c.name: c for c in rep.checks}
        for key in ("pitch_angle_relative_error", "pitch_axis_tilt"):
            c = by[key]
            out.append(Check(f"{name}.{key}", c.value, c.bound))
    return out


def criterion_light(rng, perturb=False) -> list[Check]:
    from .scenario import compare_pitch

    rep = compare_pitch(_scenario("compare_pitch"))
    d = rep.summary
    worst = 0.0
    for _ in range(20):
        Om, r0 = rng.uniform(0.1, 5.0, 2)
        got = rytov_rotation_per_pitch(Om, r0)
        worst = max(worst, abs(got - 2 * np.pi / np.sqrt(1 + Om**2 * r0**2)))
    return [Check("light_angle_formula_max_error", worst, 1e-12),
            Check("light_angle_minus_pi_sqrt2", abs(d["light_angle"] - np.pi * np.sqrt(2)), 1e-12),
            Check("light_angle_dynamic_error_rad", abs(d["light_angle_dynamic"] - d["light_angle"]), 1e-6)]


def criterion_free(rng, perturb=False) -> list[Check]:
    m, c = 1.0, 1.0
    pot = ScalarPotential.free(rng.normal(scale=0.1))
    E = m * c**2 + pot.offset + rng.uniform(0.1, 2.0)
    start = ray_start(rng.normal(size=3), V._random_unit(rng), pot, m, c, E)
    ray = integrate_ray(start, pot, m, c, E, 1.0, 1e3)
    res = transport_spin(ray, V._random_spinor(rng), pot, m, c, E, 1.0, generator=V._generator(perturb))
    drift = float(np.max(np.linalg.norm(res.bloch - res.bloch[0], axis=1)))
    return [Check("free_bloch_drift_s_1e3", drift, 1e-12)]


def criterion_oscillator(rng, perturb=False) -> list[Check]:
    worst = {}
    for _ in range(10):
        cfg, L = V.random_oscillator(rng)
        from .oscillator import ellipse_states

        for key, v in V.oscillator_metrics(cfg, ellipse_states(cfg, L, 256)).items():
            worst[key] = max(worst.get(key, 0.0), v)
    return [Check("oscillator_hj_relative_residual", worst["residual"], 1e-10),
            Check("oscillator_L_relative_drift", worst["L_drift"], 1e-10),
            Check("oscillator_spin_axis_deviation_rad", worst["spin_deviation"], 1e-10)]


def criterion_properties(rng, perturb=False) -> list[Check]:
    case = V.random_circle_case(rng)
    traj = AnalyticTrajectory.circle(case["r0"])
    res = transport_spin(traj, V._random_spinor(rng), case["pot"], case["m"], case["c"], case["E"],
                         traj.length / 10_000)
    unit = float(np.max(np.abs(np.linalg.norm(res.u, axis=1) - 1.0)))
    rays = {c.name: c for c in V.suite_ray(rng)}
    grads = [c for c in V.suite_potential(rng) if "fd_gradient" in c.name]
    ratio = V.pitch_angle(1.0) / V.pitch_angle(2.0)
    return [
        Check("unitarity_after_1e4_steps", unit, 1e-12),
        Check("ray_energy_drift", rays["ray.energy_drift_per_unit_s"].value, 1e-9),
        Check("ray_eikonal_relative_residual", rays["ray.eikonal_relative_residual"].value, 1e-9),
        Check("circle_fixed_axis_drift", V.fixed_axis_drift(rng, perturb), 1e-10),
        Check("gradient_fd_max_rel_error", max(c.value for c in grads), 1e-5),
        Check("c_doubling_ratio_rel_dev_from_4", abs(ratio / 4 - 1), 0.02),
    ]


CRITERIA = {
    1: criterion_circle,
    2: criterion_helix,
    3: criterion_pitch,
    4: criterion_light,
    5: criterion_free,
    6: criterion_oscillator,
    7: criterion_properties,
}


def run_acceptance(rng=None, perturb: bool = False, only=None) -> list[tuple[int, Check]]:
    if rng is None:
        rng = np.random.default_rng(0)
    out = []
    for num, fn in CRITERIA.items():
        if only is not None and num not in only:
            continue
        out += [(num, Check(f"acceptance.{num}.{c.name}", c.value, c.bound, c.relation))
                for c in fn(rng, perturb)]
    return out
