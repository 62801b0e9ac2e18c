import numpy as np
import pytest

from spintransport.em import (EMState, Medium, compare_pitch_rotations, em_amplitude_rate,
                              em_eikonal_residual, em_polarization_rate, frame_rotation, frenet,
                              helix_curvature_torsion, mu_coupling_expanded, mu_coupling_triple,
                              parallel_transport, rytov_rotation_per_pitch, trace_guided_helix,
                              trace_optical_ray)
from spintransport.potential import ScalarPotential
from spintransport.ray import AnalyticTrajectory, helix_pitch_length


def slab(a=0.1):
    """n(x) = 1 + a x with mu = 1."""
    eps = ScalarPotential("custom", func=lambda x: (1 + a * x[0]) ** 2,
                          grad=lambda x: [2 * a * (1 + a * x[0]), 0.0, 0.0])
    return Medium(eps, ScalarPotential.free(1.0))


def test_eikonal_residual_examples():
    assert em_eikonal_residual([0, 0, 1.0], [0, 0, 0], Medium.homogeneous(1.0)) == 0.0
    assert em_eikonal_residual([1.5, 0, 0], [3, 1, 2], Medium.homogeneous(1.5)) == pytest.approx(0.0, abs=1e-15)


def test_slab_ray_stays_on_eikonal():
    medium = slab()
    ray = trace_optical_ray(medium, [0, 0, 0], [1, 1, 0], 0.05, 5.0)
    assert np.max(np.abs(ray.residual)) < 1e-9
    # the transverse component n T_y is conserved in a stratified medium
    assert np.allclose(ray.q[:, 1], ray.q[0, 1], atol=1e-12)
    assert np.max(ray.transversality()) < 1e-9


def test_polarization_rate_examples():
    hom = Medium.homogeneous(1.3)
    st = EMState(np.zeros(3), np.array([0, 0, 1.3]), np.array([1, 0, 0], dtype=complex))
    assert np.allclose(em_polarization_rate(st, hom), 0)
    # gradients orthogonal to the polarization give no coupling
    med = Medium(ScalarPotential("linear", slope=(0, 0.2, 0), offset=2.0),
                 ScalarPotential("linear", slope=(0, 0, 0.1), offset=1.0))
    st = EMState(np.zeros(3), np.array([0, 0, 1.0]), np.array([1, 0, 0], dtype=complex))
    assert np.allclose(em_polarization_rate(st, med), 0)


def test_polarization_rate_keeps_transversality_to_first_order():
    med = slab()
    q = np.array([1.0, 2.0, 0.5])
    u = np.cross(q, [0, 0, 1]).astype(complex)
    rate = em_polarization_rate(EMState(np.zeros(3), q, u), med)
    qn = q / np.linalg.norm(q)
    # d(u.T)/ds = u' . T + u . T' = 0
    Tp = (med.grad_n(np.zeros(3)) - (med.grad_n(np.zeros(3)) @ qn) * qn) / med.n(np.zeros(3))
    assert abs(rate @ qn + u @ Tp) < 1e-14


def test_mu_coupling_forms_agree():
    rng = np.random.default_rng(7)
    for _ in range(20):
        q, g, E0 = rng.normal(size=(3, 3))
        assert np.allclose(mu_coupling_triple(q, g, 1.7, E0), mu_coupling_expanded(q, g, 1.7, E0))


def test_amplitude_rate_examples():
    hom = Medium.homogeneous(1.5)
    q = np.array([0.0, 0.9, 1.2])
    st = EMState(np.array([1.0, 2.0, 3.0]), q, np.array([1, 0, 0], dtype=complex))
    assert abs(em_amplitude_rate(st, hom, L_field=lambda x: q @ x)) < 1e-8
    x = np.array([2.0, -1.0, 2.0])
    r = np.linalg.norm(x)
    st = EMState(x, 1.5 * x / r, np.array([1, 2, 0], dtype=complex))
    rate = em_amplitude_rate(st, hom, L_field=lambda y: 1.5 * np.linalg.norm(y))
    assert rate == pytest.approx(-1 / r, rel=1e-6)
    with pytest.raises(ValueError):
        em_amplitude_rate(st, hom)


def test_frenet_examples():
    f = frenet(AnalyticTrajectory.circle(1.0), 0.3)
    assert f.kappa == pytest.approx(1.0) and abs(f.tau) < 1e-12
    f = frenet(AnalyticTrajectory.helix(1.0, 1.0), 0.7)
    assert f.kappa == pytest.approx(0.5) and f.tau == pytest.approx(0.5)
    with pytest.raises(ValueError):
        frenet(lambda s: np.array([s, 2 * s, 0.0]), 0.5)


def test_frenet_finite_difference_oracle():
    hel = AnalyticTrajectory.helix(1.0, 1.0)
    fd = frenet(hel.position, 1.1, h=1e-3)
    exact = frenet(hel, 1.1)
    assert fd.kappa == pytest.approx(exact.kappa, rel=1e-5)
    assert fd.tau == pytest.approx(exact.tau, rel=1e-5)
    assert np.allclose(fd.B, exact.B, atol=1e-5)
    for r0, Om in [(0.5, 2.0), (2.0, 0.3)]:
        f = frenet(AnalyticTrajectory.helix(r0, Om), 0.4)
        assert (f.kappa, f.tau) == pytest.approx(helix_curvature_torsion(r0, Om))


def test_rytov_rotation_examples():
    assert rytov_rotation_per_pitch(1e-9, 1.0) == pytest.approx(2 * np.pi)
    assert rytov_rotation_per_pitch(1.0, 1.0) == pytest.approx(np.pi * np.sqrt(2))
    assert rytov_rotation_per_pitch(1.0, 1.0) == pytest.approx(4.442883, abs=1e-6)
    _, tau = helix_curvature_torsion(1.0, 1.0)
    assert tau * helix_pitch_length(1.0, 1.0) == pytest.approx(rytov_rotation_per_pitch(1.0, 1.0))
    with pytest.raises(ValueError):
        rytov_rotation_per_pitch(0.0, 1.0)


def test_parallel_transport_frame_turns_by_torsion_integral():
    hel = AnalyticTrajectory.helix(1.0, 1.0)
    s, u = parallel_transport(hel, frenet(hel, 0.0).N, hel.length / 2000)
    assert frame_rotation(hel, s, u)[-1] == pytest.approx(np.pi * np.sqrt(2), abs=1e-8)


def test_guided_helix_dynamic_rotation():
    ray = trace_guided_helix(1.0, 1.0)
    hel = AnalyticTrajectory.helix(1.0, 1.0)
    assert np.max(np.linalg.norm(ray.x - np.array([hel.position(s) for s in ray.s]), axis=1)) < 1e-6
    assert ray.frenet_rotation()[-1] == pytest.approx(rytov_rotation_per_pitch(1.0, 1.0), abs=1e-6)
    assert np.max(ray.transversality()) < 1e-8


def test_compare_pitch_examples():
    rep = compare_pitch_rotations(None, 1.0, 1.0, 1.0, 1.0, 0.0)
    assert rep["matter_angle"] == 0.0 and rep["light_angle"] == pytest.approx(np.pi * np.sqrt(2))
    rep = compare_pitch_rotations(None, 1.0, 1.0, 1.0, 1.0, 0.1)
    assert rep["matter_angle"] == pytest.approx(np.pi / 100)
    assert rep["ratio"] == pytest.approx((np.pi / 100) / (np.pi * np.sqrt(2)))
    assert rep["ratio"] == pytest.approx(0.01 / np.sqrt(2))
