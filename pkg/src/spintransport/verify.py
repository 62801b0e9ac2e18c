"""Executable invariant suites, one per module.

Every suite is a function ``(rng, perturb) -> list[Check]``. ``perturb``
swaps in a deliberately mis-signed precession generator wherever a suite
transports spin, as a sanity check that the conservation tests can fail.
"""
from __future__ import annotations

import filecmp
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.spatial.transform import Rotation

from . import em
from .oscillator import (OscillatorConfig, discontinuity_operator, eigenvalue, ellipse_states,
                         hj_residual_spacetime, hj_residual_spatial, rotate_solutions)
from .pauli import bloch, eigenspinor, pauli_dot, sigma_product_matrix, su2_exp
from .potential import ScalarPotential, fd_gradient, gradient
from .ray import AnalyticTrajectory, integrate_ray, ray_start
from .report import Check
from .transport import circle_exact, helix_exact, net_rotation, precession_generator, transport_spin


def mis_signed_generator(x, p, pot, m, c, E):
    """Precession generator with its x component sign-flipped (mutation)."""
    G = precession_generator(x, p, pot, m, c, E)
    return np.array([-G[0], G[1], G[2]])


def _generator(perturb: bool):
    return mis_signed_generator if perturb else precession_generator


def _random_unit(rng, n=None):
    v = rng.normal(size=(3,) if n is None else (n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _unit(v):
    return v / np.linalg.norm(v)


def _random_spinor(rng):
    u = rng.normal(size=2) + 1j * rng.normal(size=2)
    return u / np.linalg.norm(u)


# pauli ------------------------------------------------------------------

def suite_pauli(rng, perturb=False) -> list[Check]:
    A, B = rng.normal(size=(1000, 3)), rng.normal(size=(1000, 3))
    prod = max(np.abs(sigma_product_matrix(a, b) - pauli_dot(a) @ pauli_dot(b)).max()
               for a, b in zip(A, B))
    comp = 0.0
    rot = 0.0
    for _ in range(200):
        n = _random_unit(rng)
        a, b = rng.uniform(-np.pi, np.pi, 2)
        comp = max(comp, np.abs(su2_exp(n, a) @ su2_exp(n, b) - su2_exp(n, a + b)).max())
        u = _random_spinor(rng)
        oracle = Rotation.from_rotvec(-2 * a * n).apply(bloch(u))
        rot = max(rot, np.abs(bloch(su2_exp(n, a) @ u) - oracle).max())
    eig = 0.0
    for n in _random_unit(rng, 1000):
        for sgn in (1, -1):
            phi = eigenspinor(n, sgn)
            eig = max(eig, np.abs(pauli_dot(n) @ phi - sgn * phi).max())
    return [
        Check("pauli.sigma_product_reconstruction", prod, 1e-12),
        Check("pauli.same_axis_composition", comp, 1e-12),
        Check("pauli.bloch_rotation_vs_so3", rot, 1e-12),
        Check("pauli.eigenspinor_residual", eig, 1e-12),
    ]


# potential --------------------------------------------------------------

def builtin_potentials(rng) -> list[ScalarPotential]:
    return [
        ScalarPotential.free(rng.normal()),
        ScalarPotential.harmonic3d(rng.uniform(0.1, 2.0), rng.normal()),
        ScalarPotential.harmonic2d(-rng.uniform(0.1, 2.0), rng.normal()),
        ScalarPotential("central_radial", k=rng.uniform(0.1, 2.0), power=3.0),
        ScalarPotential("central_radial", k=-rng.uniform(0.1, 2.0), power=1.5),
        ScalarPotential("linear", slope=tuple(rng.normal(size=3)), offset=rng.normal()),
    ]


def suite_potential(rng, perturb=False) -> list[Check]:
    checks = []
    X = rng.uniform(-10, 10, size=(100, 3))
    for pot in builtin_potentials(rng):
        worst = 0.0
        for x in X:
            g = gradient(pot, x)
            fd = fd_gradient(pot, x, 1e-4 * max(1.0, np.linalg.norm(x)))
            gn = np.linalg.norm(g)
            worst = max(worst, np.linalg.norm(g - fd) / (gn if gn > 0 else 1.0))
        label = pot.kind if pot.kind != "central_radial" else f"central_radial_p{pot.power:g}"
        checks.append(Check(f"potential.fd_gradient_rel_error[{label}]", worst, 1e-5))
    par2 = par3 = 0.0
    p2, p3 = ScalarPotential.harmonic2d(0.7), ScalarPotential.harmonic3d(-1.3)
    for x in X:
        xr = np.array([x[0], x[1], 0.0])
        g = gradient(p2, x)
        par2 = max(par2, np.linalg.norm(np.cross(g, xr)) / (np.linalg.norm(g) * np.linalg.norm(xr)))
        g = gradient(p3, x)
        par3 = max(par3, np.linalg.norm(np.cross(g, x)) / (np.linalg.norm(g) * np.linalg.norm(x)))
    checks += [Check("potential.central_parallel[harmonic2d_xy]", par2, 1e-10),
               Check("potential.central_parallel[harmonic3d]", par3, 1e-10)]
    return checks


# ray --------------------------------------------------------------------

def _stencil_derivative(f, s, h):
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h)


def suite_ray(rng, perturb=False) -> list[Check]:
    m, c = 1.0, 1.0
    pot = ScalarPotential.harmonic3d(rng.uniform(0.2, 1.0))
    E = m * c**2 + rng.uniform(1.0, 2.0)
    x0 = 0.5 * _random_unit(rng)
    # launched across the radius, so the orbit keeps clear of turning points
    start = ray_start(x0, np.cross(x0, _random_unit(rng)), pot, m, c, E)
    length, ds = 20.0, 0.01
    ray = integrate_ray(start, pot, m, c, E, ds, length, rtol=1e-12)
    e_drift = np.max(np.abs(ray.energy() - E)) / abs(E) / length
    L = ray.angular_momentum()
    l_drift = np.max(np.linalg.norm(L - L[0], axis=1)) / np.linalg.norm(L[0]) / length
    par = 0.0
    # differentiate inside single solver steps: the dense interpolant is only
    # piecewise smooth across step boundaries
    ts = ray.dense.ts
    for i in np.linspace(0, len(ts) - 2, 50).astype(int):
        si, h = 0.5 * (ts[i] + ts[i + 1]), min(2e-4, (ts[i + 1] - ts[i]) / 8)
        dx = _stencil_derivative(lambda z: ray.state_at(z)[0], si, h)
        p = ray.state_at(si)[1]
        par = max(par, np.linalg.norm(np.cross(p / np.linalg.norm(p), dx)))
    p2 = np.sum(ray.p**2, axis=1)
    res = float(np.max(np.abs(ray.residual) / p2))

    free = ScalarPotential.free(rng.normal(scale=0.1))
    Ef = m * c**2 + free.offset + rng.uniform(0.5, 2.0)
    fs = ray_start(rng.normal(size=3), _random_unit(rng), free, m, c, Ef)
    fray = integrate_ray(fs, free, m, c, Ef, 0.5, 100.0)
    pn = np.linalg.norm(fs.p)
    action = float(np.max(np.abs(fray.W - pn * (fray.s - fray.s[0]))[1:]
                          / (pn * (fray.s[1:] - fray.s[0]))))
    return [
        Check("ray.energy_drift_per_unit_s", e_drift, 1e-9),
        Check("ray.angular_momentum_drift_per_unit_s", l_drift, 1e-9),
        Check("ray.momentum_parallel_to_tangent", par, 1e-10),
        Check("ray.eikonal_relative_residual", res, 1e-9),
        Check("ray.free_action_relative_error", action, 1e-12),
    ]


# spin transport ---------------------------------------------------------

def random_circle_case(rng, theta_range=(1e-4, 0.5)):
    """Circle parameters with per-revolution rotor angle drawn log-uniformly."""
    m = rng.uniform(0.5, 2.0)
    c = rng.uniform(0.5, 2.0)
    r0 = rng.uniform(0.5, 2.0)
    E = m * c**2 * rng.uniform(1.01, 2.0)
    theta = np.exp(rng.uniform(*np.log(theta_range)))
    D = E + m * c**2  # V(r0) pinned to 0 by the offset
    k_orb = 2 * D * theta / (2 * np.pi * r0 * r0)
    pot = ScalarPotential.harmonic2d(-k_orb, offset=0.5 * k_orb * r0**2)
    return dict(m=m, c=c, r0=r0, E=E, theta=theta, k=k_orb, pot=pot)


def random_helix_case(rng, mu_range=(1e-4, 1e-2)):
    m, c = 1.0, rng.uniform(0.5, 2.0)
    r0, Om = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)
    E = m * c**2 * rng.uniform(1.01, 2.0)
    mu = np.exp(rng.uniform(*np.log(mu_range)))
    D = E + m * c**2
    k_orb = 2 * D * mu * np.sqrt(1 + Om**2 * r0**2)
    pot = ScalarPotential.harmonic2d(-k_orb, offset=0.5 * k_orb * r0**2)
    return dict(m=m, c=c, r0=r0, Omega=Om, E=E, mu=mu, k=k_orb, pot=pot)


def circle_oracle_infidelity(case, u0, steps=1000, revolutions=1.0):
    length = revolutions * 2 * np.pi * case["r0"]
    traj = AnalyticTrajectory.circle(case["r0"], length)
    res = transport_spin(traj, u0, case["pot"], case["m"], case["c"], case["E"], length / steps)
    ref = circle_exact(u0, case["k"], case["r0"], res.s[-1], case["E"], case["m"], case["c"], 0.0)
    return 1.0 - abs(np.vdot(res.u[-1], ref)) ** 2, res


def helix_oracle_infidelity(case, u0, steps=1000, stride=50):
    traj = AnalyticTrajectory.helix(case["r0"], case["Omega"])
    res = transport_spin(traj, u0, case["pot"], case["m"], case["c"], case["E"],
                         traj.length / steps)
    idx = list(range(0, len(res.s), stride)) + [len(res.s) - 1]
    worst = 0.0
    for i in idx:
        ref = helix_exact(u0, case["k"], case["r0"], case["Omega"], res.s[i], case["E"],
                          case["m"], case["c"], 0.0)
        worst = max(worst, 1.0 - abs(np.vdot(res.u[i], ref)) ** 2)
    return worst, res


def fixed_axis_drift(rng, perturb=False, revolutions=10, steps=10_000) -> float:
    """Drift of the spin projection on the orbit normal for a circle in a random plane."""
    R = Rotation.random(random_state=rng).as_matrix()
    r0 = rng.uniform(0.5, 2.0)
    m, c, E = 1.0, 1.0, rng.uniform(1.1, 2.0)
    k = rng.uniform(0.05, 0.2)
    pot = ScalarPotential.harmonic3d(-k, offset=0.5 * k * r0**2)
    length = revolutions * 2 * np.pi * r0
    traj = AnalyticTrajectory.circle(r0, length, rotation=R)
    res = transport_spin(traj, _random_spinor(rng), pot, m, c, E, length / steps,
                         generator=_generator(perturb))
    proj = res.bloch @ R[:, 2]
    return float(np.max(np.abs(proj - proj[0])))


def pitch_angle(c, *, k=0.01, r0=1.0, Omega=1.0, m=1.0, kinetic=0.01, steps=2000) -> float:
    """Net Bloch rotation over one helix pitch at fixed k and kinetic energy."""
    pot = ScalarPotential.harmonic2d(-k, offset=0.5 * k * r0**2)
    E = m * c**2 + kinetic
    traj = AnalyticTrajectory.helix(r0, Omega)
    res = transport_spin(traj, np.array([1.0, 0.0]), pot, m, c, E, traj.length / steps)
    return net_rotation(res.propagator)[1]


def convergence_ratios(mu=1e-2, r0=1.0, Omega=1.0, m=1.0, c=1.0, E=1.5, steps=(50, 100, 200)):
    """Final-state distance to the exact helix solution at successive step halvings."""
    D = E + m * c**2
    k = 2 * D * mu * np.sqrt(1 + Omega**2 * r0**2)
    pot = ScalarPotential.harmonic2d(-k, offset=0.5 * k * r0**2)
    traj = AnalyticTrajectory.helix(r0, Omega)
    u0 = np.array([1.0, 1.0j]) / np.sqrt(2)
    errs = []
    for n in steps:
        res = transport_spin(traj, u0, pot, m, c, E, traj.length / n)
        ref = helix_exact(u0, k, r0, Omega, res.s[-1], E, m, c, 0.0)
        errs.append(float(np.linalg.norm(res.u[-1] - ref)))
    return errs, [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]


def suite_spin_transport(rng, perturb=False) -> list[Check]:
    case = random_circle_case(rng)
    traj = AnalyticTrajectory.circle(case["r0"])
    res = transport_spin(traj, _random_spinor(rng), case["pot"], case["m"], case["c"], case["E"],
                         traj.length / 10_000)
    unit = float(np.max(np.abs(np.linalg.norm(res.u, axis=1) - 1.0)))
    drift = fixed_axis_drift(rng, perturb)
    circ = max(circle_oracle_infidelity(random_circle_case(rng, (1e-4, 1e-2)), _random_spinor(rng))[0]
               for _ in range(20))
    hel = max(helix_oracle_infidelity(random_helix_case(rng), _random_spinor(rng))[0]
              for _ in range(20))
    ratio = pitch_angle(1.0) / pitch_angle(2.0)
    _, conv = convergence_ratios()
    return [
        Check("spin_transport.unitarity_after_1e4_steps", unit, 1e-12),
        Check("spin_transport.fixed_axis_drift_10_revolutions", drift, 1e-10),
        Check("spin_transport.circle_oracle_infidelity_20_draws", circ, 1e-8),
        Check("spin_transport.helix_oracle_infidelity_20_draws", hel, 1e-8),
        Check("spin_transport.c_doubling_ratio_rel_dev_from_4", abs(ratio / 4 - 1), 0.02),
        Check("spin_transport.ds_halving_ratio_rel_dev_from_4", max(abs(r / 4 - 1) for r in conv), 0.1),
    ]


# Dirac oscillator -------------------------------------------------------

def random_oscillator(rng, branch=None):
    m, omega, c = rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.0), 1.0
    E = m * c**2 * rng.uniform(1.2, 3.0)
    b = int(rng.choice([1, -1])) if branch is None else branch
    cfg = OscillatorConfig(m, omega, c, E, b)
    L = rng.uniform(0.1, 0.9) * cfg.shell / (4 * m * omega)
    return cfg, L


def oscillator_metrics(cfg, sols) -> dict:
    L = np.array([np.linalg.norm(d.L) for d in sols])
    dev = ortho = op = 0.0
    for d in sols:
        Lhat = d.L / np.linalg.norm(d.L)
        b = bloch(d.spin)
        dev = max(dev, float(np.arctan2(np.linalg.norm(np.cross(b, cfg.branch * Lhat)),
                                        b @ (cfg.branch * Lhat))))
        ortho = max(ortho, abs(b @ d.x) / np.linalg.norm(d.x), abs(b @ d.gradW) / np.linalg.norm(d.gradW))
        M = discontinuity_operator(cfg, d.x, d.gradW, -cfg.E)
        op = max(op, np.linalg.norm(M @ d.spin) / (cfg.E**2 * cfg.c**2 * cfg.shell))
    return {
        "residual": max(abs(d.residual) for d in sols) / cfg.shell,
        "L_drift": float(np.ptp(L) / L[0]),
        "spin_deviation": dev,
        "orthogonality": ortho,
        "jump_operator": op,
    }


def suite_dirac_oscillator(rng, perturb=False) -> list[Check]:
    flip = agree = 0.0
    for _ in range(200):
        cfg, _ = random_oscillator(rng, 1)
        neg = OscillatorConfig(cfg.m, cfg.omega, cfg.c, cfg.E, -1)
        x, g = rng.normal(size=3), rng.normal(size=3)
        flip = max(flip, abs(eigenvalue(cfg, x, g) + eigenvalue(neg, x, g)),
                   np.abs(bloch(eigenspinor(_unit(np.cross(x, g)), 1))
                          + bloch(eigenspinor(_unit(np.cross(x, g)), -1))).max())
        for c_ in (cfg, neg):
            a = hj_residual_spatial(c_, x, g)
            b = hj_residual_spacetime(c_, x, g, -c_.E)
            agree = max(agree, abs(a - b) / max(abs(a), c_.shell))
    worst = {}
    for _ in range(10):
        cfg, L = random_oscillator(rng)
        sols = ellipse_states(cfg, L, 128)
        sols = rotate_solutions(cfg, sols, Rotation.random(random_state=rng).as_matrix())
        for key, v in oscillator_metrics(cfg, sols).items():
            worst[key] = max(worst.get(key, 0.0), v)
    return [
        Check("dirac_oscillator.branch_flip", flip, 1e-12),
        Check("dirac_oscillator.residual_forms_agree", agree, 1e-10),
        Check("dirac_oscillator.hj_relative_residual", worst["residual"], 1e-10),
        Check("dirac_oscillator.L_relative_drift", worst["L_drift"], 1e-10),
        Check("dirac_oscillator.spin_axis_deviation_rad", worst["spin_deviation"], 1e-10),
        Check("dirac_oscillator.spin_orthogonal_to_x_and_gradW", worst["orthogonality"], 1e-10),
        Check("dirac_oscillator.jump_condition_residual", worst["jump_operator"], 1e-10),
    ]


# EM analog --------------------------------------------------------------

def suite_em_analog(rng, perturb=False) -> list[Check]:
    trans = 0.0
    for _ in range(5):
        eps = ScalarPotential.harmonic2d(-rng.uniform(0.05, 0.2), offset=2.0) if rng.random() < 0.5 \
            else ScalarPotential.harmonic3d(-rng.uniform(0.02, 0.1), offset=2.0)
        mu = ScalarPotential.harmonic3d(rng.uniform(0.0, 0.05), offset=1.0)
        medium = em.Medium(eps, mu)
        d = _random_unit(rng)
        pol = np.cross(d, _random_unit(rng)) + 1j * np.cross(d, _random_unit(rng))
        ray = em.trace_optical_ray(medium, 0.5 * rng.normal(size=3), d, 0.01, 10.0, u0=pol)
        trans = max(trans, float(ray.transversality().max()))

    hom = em.Medium.homogeneous(rng.uniform(1.0, 2.0))
    d = _random_unit(rng)
    pol = np.cross(d, _random_unit(rng))
    ray = em.trace_optical_ray(hom, rng.normal(size=3), d, 1.0, 100.0, u0=pol)
    lab = float(np.max(np.abs(ray.u - ray.u[0])))

    r0, Om = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)
    traj = AnalyticTrajectory.helix(r0, Om)
    s, u = em.parallel_transport(traj, em.frenet(traj, 0.0).N, traj.length / 1000)
    _, tau = em.helix_curvature_torsion(r0, Om)
    torsion = float(np.max(np.abs(em.frame_rotation(traj, s, u) - tau * s)))

    ident = 0.0
    for _ in range(1000):
        q, gm, E0 = rng.normal(size=3), rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3)
        mu_ = rng.uniform(0.5, 2.0)
        a = em.mu_coupling_triple(q, gm, mu_, E0)
        b = em.mu_coupling_expanded(q, gm, mu_, E0)
        scale = np.linalg.norm(gm) * np.linalg.norm(E0) / mu_
        ident = max(ident, np.abs(a - b).max() / scale)
    return [
        Check("em_analog.grin_transversality", trans, 1e-8),
        Check("em_analog.homogeneous_lab_frame_drift", lab, 1e-12),
        Check("em_analog.frenet_rotation_minus_torsion_integral", torsion, 1e-8),
        Check("em_analog.mu_coupling_identity", ident, 1e-12),
    ]


# scenario runner --------------------------------------------------------

def shipped_configs() -> dict[str, Path]:
    root = resources.files("spintransport") / "configs"
    return {p.stem: Path(str(p)) for p in sorted(root.iterdir(), key=lambda q: q.name)
            if p.name.endswith(".json")}


def suite_scenario_cli(rng, perturb=False) -> list[Check]:
    from .scenario import ScenarioConfig, compare_pitch, execute, load_config, write_outputs

    configs = {name: load_config(path) for name, path in shipped_configs().items()}
    bad_trip = sum(ScenarioConfig.from_dict(cfg.to_dict()) != cfg for cfg in configs.values())
    seed = int(rng.integers(2**31))
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [Path(tmp) / "a", Path(tmp) / "b"]
        for d in dirs:
            write_outputs(execute(configs["circle"], seed), configs["circle"], d)
        names = sorted(p.name for p in dirs[0].iterdir())
        _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
    checks = [
        Check("scenario_cli.config_round_trip_mismatches", bad_trip, 0),
        Check("scenario_cli.determinism_mismatched_files", len(mismatch) + len(errors), 0),
    ]
    for name, cfg in configs.items():
        rep = compare_pitch(cfg) if name == "compare_pitch" else execute(cfg, seed).report
        checks += [Check(f"scenario_cli.{name}.{c.name}", c.value, c.bound, c.relation)
                   for c in rep.checks]
    return checks


def suite_acceptance(rng, perturb=False) -> list[Check]:
    from .acceptance import run_acceptance

    return [c for _, c in run_acceptance(rng, perturb=perturb)]


SUITES = {
    "pauli": suite_pauli,
    "potential": suite_potential,
    "ray": suite_ray,
    "spin_transport": suite_spin_transport,
    "dirac_oscillator": suite_dirac_oscillator,
    "em_analog": suite_em_analog,
    "scenario_cli": suite_scenario_cli,
    "acceptance": suite_acceptance,
}


@dataclass
class VerifyResult:
    suite: str
    seed: int
    perturb: bool
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "perturb": self.perturb,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "checks": [c.to_dict() for c in self.checks],
        }


def verify(suite: str = "all", seed: int = 0, perturb: bool = False, echo=None) -> VerifyResult:
    """Run one suite (or ``"all"``) and collect its checks.

    ``echo`` is called with each check's report line as soon as it is known.
    """
    if suite != "all" and suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; expected 'all' or one of {sorted(SUITES)}")
    names = list(SUITES) if suite == "all" else [suite]
    result = VerifyResult(suite, seed, perturb)
    for i, name in enumerate(names):
        # independent stream per suite, so single-suite runs match "all"
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        for c in SUITES[name](rng, perturb):
            result.checks.append(c)
            if echo is not None:
                echo(c.line())
    return result
