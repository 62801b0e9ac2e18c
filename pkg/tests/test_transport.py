import numpy as np
import pytest

from spintransport.pauli import SIGMA_Y, bloch, eigenspinor, fidelity
from spintransport.potential import ScalarPotential
from spintransport.ray import AnalyticTrajectory, RayState, helix_pitch_length, integrate_ray, kinetic_energy
from spintransport.transport import (StepDensityError, TurningPointError, amplitude_rate, axis_tilt,
                                     bloch_rate, circle_angle, circle_exact, helix_angles, helix_exact,
                                     helix_exact_matrix, helix_first_order_matrix, net_rotation,
                                     observable_rate, pitch_rotation_matter, precession_generator,
                                     transport_spin)

M, C = 1.0, 1.0
U0 = np.array([1, 1]) / np.sqrt(2)


def literal_potential(k, r0, V0):
    """grad V = -k (x, y, 0) with V = V0 on the radius r0."""
    return ScalarPotential.harmonic2d(-k, offset=V0 + k * r0**2 / 2)


def test_generator_free_is_zero():
    G = precession_generator([1, 2, 3], [0.3, 0.1, 0], ScalarPotential.free(0.4), M, C, 2.0)
    assert np.array_equal(G, np.zeros(3))


def test_generator_circle():
    k, r0, E, V0 = 0.05, 1.0, 1.2, 0.1
    pot = literal_potential(k, r0, V0)
    D = E + M * C**2 - V0
    for phi in np.linspace(0, 2 * np.pi, 5):
        x = r0 * np.array([np.cos(phi), np.sin(phi), 0])
        t = np.array([-np.sin(phi), np.cos(phi), 0])
        G = precession_generator(x, 0.7 * t, pot, M, C, E)
        assert np.allclose(G, [0, 0, -k * r0 / (2 * D)], atol=1e-15)


def test_generator_helix_direction():
    k, r0, Om, E = 0.01, 0.8, 1.3, 1.5
    pot = literal_potential(k, r0, 0.0)
    traj = AnalyticTrajectory.helix(r0, Om)
    st = np.sqrt(1 + Om**2 * r0**2)
    for s in np.linspace(0, traj.length, 6):
        x, t = traj.state_at(s)
        G = precession_generator(x, t, pot, M, C, E)
        expected = k * np.array([-x[1], x[0], -Om * r0**2]) / st / (2 * (E + M * C**2))
        assert np.allclose(G, expected, atol=1e-14)


def test_generator_turning_point():
    with pytest.raises(TurningPointError):
        precession_generator([1, 0, 0], [0, 0, 0], ScalarPotential.harmonic3d(1.0), M, C, 2.0)


def test_free_transport_is_constant():
    rng = np.random.default_rng(0)
    u = rng.normal(size=2) + 1j * rng.normal(size=2)
    u /= np.linalg.norm(u)
    pot = ScalarPotential.free()
    ray = integrate_ray(RayState(np.zeros(3), np.array([0.6, 0.8, 0])), pot, M, C,
                        kinetic_energy([0.6, 0.8, 0], M, C), 1.0, 50.0)
    res = transport_spin(ray, u, pot, M, C, ray.E, 1.0)
    assert np.allclose(res.u, u, atol=1e-15)


def test_circle_closed_form_example():
    k, r0, E, V0 = 0.05, 1.0, 1.2, 0.1
    s = 2 * np.pi
    assert circle_angle(k, r0, s, E, M, C, V0) == pytest.approx(0.1 * np.pi / 4.2)
    assert circle_angle(k, r0, s, E, M, C, V0) == pytest.approx(0.0747998, abs=1e-7)
    traj = AnalyticTrajectory.circle(r0)
    res = transport_spin(traj, U0, literal_potential(k, r0, V0), M, C, E, s / 1000)
    assert 1 - fidelity(res.u[-1], circle_exact(U0, k, r0, s, E, M, C, V0)) < 1e-10
    # fixed axis: <sigma_z> conserved
    assert np.max(np.abs(res.bloch[:, 2] - res.bloch[0, 2])) < 1e-12


def test_circle_exact_limits():
    assert np.allclose(circle_exact(U0, 0.05, 1.0, 0.0, 1.2, M, C, 0.1), U0)
    for s in (0.5, 3.0, 40.0):
        assert np.allclose(circle_exact(U0, 0.0, 1.0, s, 1.2, M, C, 0.1), U0)


def test_unitarity_many_steps():
    k, r0, E = 0.3, 1.0, 1.5
    traj = AnalyticTrajectory.circle(r0)
    res = transport_spin(traj, U0, literal_potential(k, r0, 0.0), M, C, E, traj.length / 10_000)
    assert np.max(np.abs(np.linalg.norm(res.u, axis=1) - 1)) < 1e-12


def test_step_density_enforced():
    traj = AnalyticTrajectory.circle(1.0)
    with pytest.raises(StepDensityError):
        transport_spin(traj, U0, literal_potential(5.0, 1.0, 0.0), M, C, 1.5, 0.5)


def test_non_normalized_input_rejected():
    traj = AnalyticTrajectory.circle(1.0)
    with pytest.raises(ValueError):
        transport_spin(traj, [1, 1], literal_potential(0.1, 1.0, 0.0), M, C, 1.5, 0.01)


def test_helix_delta_pi_at_pitch():
    r0, Om = 0.9, 1.7
    s0 = helix_pitch_length(r0, Om)
    assert helix_angles(0.01, r0, Om, s0, 1.5, M, C, 0.0).delta == pytest.approx(np.pi)


def test_helix_zero_coupling_leaves_bloch_unchanged():
    r0, Om = 1.0, 1.0
    s0 = helix_pitch_length(r0, Om)
    u = eigenspinor([0.6, 0.0, 0.8])
    assert np.allclose(bloch(helix_exact(u, 0.0, r0, Om, s0, 1.5, M, C, 0.0)), bloch(u), atol=1e-14)


@pytest.mark.parametrize("k,r0,Om,E,V0", [(0.01, 1.0, 1.0, 1.5, 0.0), (0.2, 0.5, 2.5, 1.1, 0.05),
                                           (-0.05, 1.4, 0.6, 2.0, -0.1)])
def test_helix_transport_matches_exact(k, r0, Om, E, V0):
    traj = AnalyticTrajectory.helix(r0, Om)
    u = np.array([0.6, 0.8j])
    res = transport_spin(traj, u, literal_potential(k, r0, V0), M, C, E, traj.length / 1000)
    for i in range(0, len(res.s), 100):
        ref = helix_exact(u, k, r0, Om, res.s[i], E, M, C, V0)
        assert 1 - fidelity(res.u[i], ref) < 1e-8


def test_helix_transport_first_pitch_propagator():
    k, r0, Om, E = 0.02, 1.0, 1.0, 1.5
    traj = AnalyticTrajectory.helix(r0, Om)
    res = transport_spin(traj, U0, literal_potential(k, r0, 0.0), M, C, E, traj.length / 2000)
    U = helix_exact_matrix(k, r0, Om, traj.length, E, M, C, 0.0)
    assert abs(abs(np.trace(U.conj().T @ res.propagator)) / 2 - 1) < 1e-8


def test_first_order_error_is_quadratic():
    r0, Om, E = 1.0, 1.0, 1.5
    s = helix_pitch_length(r0, Om)
    D = E + M * C**2
    errs = []
    for mu in (1e-4, 1e-3, 1e-2):
        k = 2 * D * mu * np.sqrt(1 + Om**2 * r0**2)
        A = helix_first_order_matrix(k, r0, Om, s, E, M, C, 0.0)
        B = helix_exact_matrix(k, r0, Om, s, E, M, C, 0.0)
        errs.append(np.linalg.norm(A - B, 2))
    assert 80 < errs[1] / errs[0] < 120
    assert 80 < errs[2] / errs[1] < 120


def test_pitch_rotation_matter_examples():
    assert pitch_rotation_matter(0.0, 1.0, 1.0, M, C) == 0.0
    assert pitch_rotation_matter(None, 1.0, 1.0, M, C, v_z=0.1) == pytest.approx(0.0314159, abs=1e-7)
    with pytest.raises(ValueError):
        pitch_rotation_matter(None, 1.0, 1.0, M, C)
    with pytest.warns(UserWarning):
        pitch_rotation_matter(1.0, 1.0, 1.0, M, C)


def test_net_rotation_per_pitch_small_angle():
    k, r0, Om, E = 0.001, 1.0, 1.0, 1.01
    traj = AnalyticTrajectory.helix(r0, Om)
    res = transport_spin(traj, U0, literal_potential(k, r0, 0.0), M, C, E, traj.length / 4000)
    axis, angle = net_rotation(res.propagator)
    assert axis_tilt(axis) < 1e-3
    assert angle == pytest.approx(pitch_rotation_matter(k, r0, Om, M, C), rel=0.05)


def test_amplitude_rate_examples():
    free = ScalarPotential.free()
    P = np.array([0.3, -0.4, 1.2])
    plane = lambda x: P @ x  # noqa: E731
    assert abs(amplitude_rate([1, 2, 3], P, free, M, C, 2.0, W_field=plane)) < 1e-8
    Pm = 0.8
    sph = lambda x: Pm * np.linalg.norm(x)  # noqa: E731
    x = np.array([1.0, 2.0, -2.0])
    p = Pm * x / 3.0
    assert amplitude_rate(x, p, free, M, C, 2.0, W_field=sph) == pytest.approx(-1 / 3.0, rel=1e-6)
    assert amplitude_rate(x, p, free, M, C, 2.0,
                          W_laplacian=lambda y: 2 * Pm / np.linalg.norm(y)) == pytest.approx(-1 / 3.0)
    with pytest.raises(ValueError):
        amplitude_rate(x, p, free, M, C, 2.0)


def test_amplitude_rate_circle_drive_vanishes():
    # grad V is orthogonal to the orbit tangent, leaving only the Laplacian term
    pot = literal_potential(0.1, 1.0, 0.0)
    rate = amplitude_rate([1, 0, 0], [0, 0.5, 0], pot, M, C, 1.5, W_laplacian=lambda x: 0.0)
    assert rate == 0.0


def test_bloch_rate_examples():
    k, r0, E, V0 = 0.05, 1.0, 1.2, 0.1
    pot = literal_potential(k, r0, V0)
    x, p = np.array([r0, 0, 0]), np.array([0, 1.0, 0])
    G = precession_generator(x, p, pot, M, C, E)
    aligned = eigenspinor(G / np.linalg.norm(G))
    assert np.allclose(bloch_rate(x, p, pot, M, C, E, aligned), 0, atol=1e-15)
    rate = bloch_rate(x, p, pot, M, C, E, U0)
    assert abs(rate[0]) < 1e-15 and abs(rate[2]) < 1e-15
    assert abs(rate[1]) == pytest.approx(2 * np.linalg.norm(G))
    assert rate[1] == pytest.approx(observable_rate(x, p, pot, M, C, E, U0, SIGMA_Y))


def test_bloch_rate_matches_transport():
    k, r0, Om, E = 0.3, 1.0, 1.2, 1.5
    pot = literal_potential(k, r0, 0.0)
    traj = AnalyticTrajectory.helix(r0, Om)
    u = np.array([0.6, 0.8j])
    errs = {}
    for n in (500, 1000):
        res = transport_spin(traj, u, pot, M, C, E, traj.length / n)
        ds = res.s[1] - res.s[0]
        worst = 0.0
        for i in range(1, n, n // 10):
            fd = (res.bloch[i + 1] - res.bloch[i - 1]) / (2 * ds)
            x, t = traj.state_at(res.s[i])
            worst = max(worst, np.linalg.norm(fd - bloch_rate(x, t, pot, M, C, E, res.u[i])))
        errs[n] = worst
    assert errs[1000] < 1e-4
    assert errs[500] / errs[1000] == pytest.approx(4, rel=0.2)
