import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from spintransport.pauli import (SIGMA, SIGMA_X, SIGMA_Y, SIGMA_Z, SpinRotor, bloch, eigenspinor,
                                 fidelity, fix_phase, pauli_dot, rotor_axis_angle, sigma_product,
                                 sigma_product_matrix, so3_to_su2, su2_exp)

vec3 = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3)


def _unit(v):
    v = np.asarray(v)
    return v / np.linalg.norm(v)


def test_pauli_algebra():
    I = np.eye(2)
    for s in SIGMA:
        assert np.allclose(s @ s, I)
        assert np.allclose(s, s.conj().T)
    assert np.allclose(SIGMA_X @ SIGMA_Y, 1j * SIGMA_Z)


def test_sigma_product_orthogonal_axes():
    scal, vec = sigma_product([1, 0, 0], [0, 1, 0])
    assert scal == 0.0
    assert np.allclose(vec, [0, 0, 1])


def test_sigma_product_same_axis():
    scal, vec = sigma_product([1, 0, 0], [1, 0, 0])
    assert scal == 1.0
    assert np.allclose(vec, 0)


@given(vec3, vec3)
def test_sigma_product_matches_matrix_product(a, b):
    direct = pauli_dot(a) @ pauli_dot(b)
    assert np.allclose(sigma_product_matrix(a, b), direct, atol=1e-12)


def test_su2_exp_examples():
    assert np.allclose(su2_exp([0, 0, 1], np.pi), -np.eye(2), atol=1e-15)
    assert np.allclose(su2_exp([0, 0, 1], np.pi / 2), np.diag([1j, -1j]), atol=1e-15)


def test_su2_exp_taylor_oracle():
    A = 1j * 0.3 * SIGMA_Y
    series = np.zeros((2, 2), dtype=complex)
    term = np.eye(2, dtype=complex)
    for n in range(13):
        series += term
        term = term @ A / (n + 1)
    assert np.allclose(su2_exp([0, 1, 0], 0.3), series, atol=1e-15)


def test_su2_exp_rejects_non_unit_axis():
    with pytest.raises(ValueError):
        su2_exp([1, 1, 0], 0.1)


@settings(max_examples=50)
@given(vec3, st.floats(-3, 3))
def test_su2_exp_unitary_and_composes(v, a):
    if np.linalg.norm(v) < 1e-3:
        return
    n = _unit(v)
    U = su2_exp(n, a)
    assert np.allclose(U.conj().T @ U, np.eye(2), atol=1e-13)
    assert abs(np.linalg.det(U) - 1) < 1e-13
    assert np.allclose(su2_exp(n, a) @ su2_exp(n, 0.7), su2_exp(n, a + 0.7), atol=1e-13)


def test_rotor_rotates_bloch_clockwise():
    # exp(i a n.sigma) turns the Bloch vector by -2a about n
    rng = np.random.default_rng(1)
    for _ in range(20):
        n, a = _unit(rng.normal(size=3)), rng.uniform(-2, 2)
        u = _unit(rng.normal(size=2) + 1j * rng.normal(size=2))
        expected = Rotation.from_rotvec(-2 * a * n).apply(bloch(u))
        assert np.allclose(bloch(su2_exp(n, a) @ u), expected, atol=1e-12)


def test_bloch_examples():
    assert np.allclose(bloch([1, 0]), [0, 0, 1])
    assert np.allclose(bloch(np.array([1, 1]) / math.sqrt(2)), [1, 0, 0])
    assert np.allclose(bloch(np.array([1, 1j]) / math.sqrt(2)), [0, 1, 0])


def test_bloch_rejects_zero_spinor():
    with pytest.raises(ValueError):
        bloch([0, 0])


def test_eigenspinor_examples():
    assert np.allclose(eigenspinor([0, 0, 1], 1), [1, 0])
    assert np.allclose(eigenspinor([1, 0, 0], 1), np.array([1, 1]) / math.sqrt(2))
    n = np.array([0.6, 0, 0.8])
    u = eigenspinor(n, -1)
    assert np.linalg.norm(pauli_dot(n) @ u + u) < 1e-12


def test_eigenspinor_phase_and_bloch():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = _unit(rng.normal(size=3))
        for sign in (1, -1):
            u = eigenspinor(n, sign)
            assert abs(np.linalg.norm(u) - 1) < 1e-14
            first = u[np.argmax(np.abs(u) > 1e-14)]
            assert abs(first.imag) < 1e-15 and first.real > 0
            assert np.allclose(bloch(u), sign * n, atol=1e-12)
    assert np.allclose(eigenspinor([0, 0, 1], -1), [0, 1])


def test_rotor_axis_angle_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n, a = _unit(rng.normal(size=3)), rng.uniform(0.01, np.pi - 0.01)
        axis, ang = rotor_axis_angle(su2_exp(n, a))
        assert np.allclose(axis, n, atol=1e-10) and abs(ang - a) < 1e-10


def test_so3_to_su2_consistent_with_bloch():
    R = Rotation.from_rotvec([0.3, -0.5, 1.1]).as_matrix()
    U = so3_to_su2(R)
    u = _unit(np.array([0.2 + 1j, -0.7]))
    assert np.allclose(bloch(U @ u), R @ bloch(u), atol=1e-12)


def test_spin_rotor_wrapper():
    r = SpinRotor((0, 0, 1), 0.2)
    assert np.allclose((r @ r).matrix, su2_exp([0, 0, 1], 0.4))
    back = SpinRotor.from_matrix(r.matrix)
    assert np.allclose(back.axis, r.axis) and abs(back.angle - 0.2) < 1e-14
    with pytest.raises(ValueError):
        SpinRotor((2, 0, 0), 0.1)


def test_fidelity_and_phase():
    u = np.array([1, 1j]) / math.sqrt(2)
    assert abs(fidelity(u, np.exp(0.4j) * u) - 1) < 1e-15
    assert fidelity([1, 0], [0, 1]) == 0.0
    v = fix_phase(np.exp(1.3j) * u)
    assert abs(v[0].imag) < 1e-15 and v[0].real > 0
