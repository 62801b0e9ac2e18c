import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from spintransport.pauli import bloch, pauli_dot
from spintransport.oscillator import (OscillatorConfig, circular_L, discontinuity_operator,
                                      eigenvalue, ellipse_axes, ellipse_states,
                                      hj_residual_spacetime, hj_residual_spatial, rotate_solutions)

CFG = OscillatorConfig(m=1.0, omega=0.5, c=1.0, E=2.0, branch=1)


def test_config_validation():
    with pytest.raises(ValueError):
        OscillatorConfig(1.0, 0.5, 1.0, 2.0, branch=0)
    with pytest.raises(ValueError):
        OscillatorConfig(1.0, 0.5, 1.0, 0.9)
    assert CFG.shell == pytest.approx(3.0)


def test_free_limit_of_spatial_residual():
    cfg = OscillatorConfig(1.0, 0.0, 1.0, 2.0)
    g = np.array([0.3, 1.0, -0.5])
    assert hj_residual_spatial(cfg, [1, 2, 3], g) == pytest.approx(cfg.shell - g @ g)


def test_residual_at_origin():
    g = np.array([0.0, np.sqrt(CFG.shell), 0.0])
    assert abs(hj_residual_spatial(CFG, np.zeros(3), g)) < 1e-15


def test_spacetime_residual_examples():
    E = CFG.E
    assert hj_residual_spacetime(CFG, np.zeros(3), np.zeros(3), -E) == pytest.approx(
        E**2 * (E**2 - 1) / E**2)
    assert hj_residual_spacetime(CFG, np.zeros(3), np.zeros(3), -E) == pytest.approx(
        hj_residual_spatial(CFG, np.zeros(3), np.zeros(3)))
    free = OscillatorConfig(1.0, 0.0, 1.0, E)
    k = np.sqrt(free.shell) * np.array([0.6, 0.0, 0.8])
    assert abs(hj_residual_spacetime(free, [4.0, -1.0, 2.0], k, -E)) < 1e-14


def test_spacetime_matches_spatial_on_separated_solutions():
    for d in ellipse_states(CFG, 0.5, 64):
        st = hj_residual_spacetime(CFG, d.x, d.gradW, -CFG.E)
        assert abs(st - hj_residual_spatial(CFG, d.x, d.gradW)) < 1e-12
        assert abs(st) < 1e-10 * CFG.shell


@pytest.mark.parametrize("branch,L", [(1, 0.5), (1, 2.0), (-1, 0.3), (-1, 1.2)])
def test_ellipse_states_invariants(branch, L):
    cfg = OscillatorConfig(1.0, 0.5, 1.0, 2.0, branch)
    sols = ellipse_states(cfg, L, 256)
    Ls = np.array([np.linalg.norm(d.L) for d in sols])
    assert np.max(np.abs(Ls - L)) < 1e-10 * L
    for d in sols:
        assert abs(d.residual) < 1e-10 * cfg.shell
        assert abs(d.x[2]) == 0.0
        # the forced spinor is the branch eigenstate of L.sigma, i.e. normal to the orbit plane
        assert np.allclose(bloch(d.spin), [0, 0, branch], atol=1e-12)
        lam = eigenvalue(cfg, d.x, d.gradW)
        assert np.allclose(pauli_dot(np.cross(d.x, d.gradW)) @ d.spin, lam * d.spin, atol=1e-12)


def test_jump_operator_on_forced_spinor():
    for d in ellipse_states(CFG, 0.8, 16):
        M = discontinuity_operator(CFG, d.x, d.gradW, -CFG.E)
        scale = CFG.E**2 * CFG.c**2
        assert np.linalg.norm(M @ d.spin) < 1e-10 * scale * CFG.shell


def test_circular_orbit_branch_minus():
    cfg = OscillatorConfig(1.0, 0.5, 1.0, 2.0, branch=-1)
    L = circular_L(cfg)
    a, b, _ = ellipse_axes(cfg, L)
    assert a == pytest.approx(b, rel=1e-7)
    for d in ellipse_states(cfg, L, 64):
        assert abs(d.residual) < 1e-10 * cfg.shell
    with pytest.raises(ValueError):
        circular_L(CFG)


def test_degenerate_and_unbound_orbits():
    with pytest.raises(ValueError, match="undefined"):
        ellipse_states(CFG, 0.0)
    cfg = OscillatorConfig(1.0, 0.5, 1.0, 2.0, branch=-1)
    with pytest.raises(ValueError, match="turning-point"):
        ellipse_states(cfg, 2 * circular_L(cfg))


def test_rotated_ellipses_keep_spin_normal():
    R = Rotation.from_rotvec([0.7, -0.2, 1.4]).as_matrix()
    sols = rotate_solutions(CFG, ellipse_states(CFG, 1.0, 32), R)
    normal = R[:, 2]
    for d in sols:
        assert abs(d.x @ normal) < 1e-12
        assert abs(d.residual) < 1e-10 * CFG.shell
        cosang = np.clip(bloch(d.spin) @ normal, -1, 1)
        assert np.arccos(cosang) < 1e-7
