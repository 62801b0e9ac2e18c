"""Exact 2x2 spin algebra.

Pauli-vector products, SU(2) exponentials, Bloch vectors and eigenspinors of
spin projections. Rotors follow the convention ``R = exp(+i angle n.sigma)``;
acting on a spinor, such a rotor turns the Bloch vector about ``n`` by
``-2 * angle``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
# raising/lowering combinations sigma_x +/- i sigma_y
SIGMA_PLUS = SIGMA_X + 1j * SIGMA_Y
SIGMA_MINUS = SIGMA_X - 1j * SIGMA_Y

UNIT_TOL = 1e-9
_SOUTH_POLE_TOL = 1e-8


@dataclass(frozen=True)
class Spinor2:
    """Two-component complex spinor (upper, lower)."""

    c_up: complex
    c_down: complex

    @classmethod
    def from_array(cls, u) -> "Spinor2":
        u = np.asarray(u, dtype=complex).reshape(2)
        return cls(complex(u[0]), complex(u[1]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.c_up, self.c_down], dtype=complex)

    def __array__(self, dtype=None, copy=None):
        a = self.array
        return a if dtype is None else a.astype(dtype)

    @property
    def norm(self) -> float:
        return float(np.sqrt(abs(self.c_up) ** 2 + abs(self.c_down) ** 2))

    def normalized(self) -> "Spinor2":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero spinor")
        return Spinor2(self.c_up / n, self.c_down / n)


@dataclass(frozen=True)
class SpinRotor:
    """SU(2) element ``exp(i angle axis.sigma)``."""

    axis: tuple[float, float, float]
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "axis", tuple(float(a) for a in _unit_axis(self.axis)))

    @property
    def matrix(self) -> np.ndarray:
        return su2_exp(self.axis, self.angle)

    def __matmul__(self, other):
        if isinstance(other, SpinRotor):
            return SpinRotor.from_matrix(self.matrix @ other.matrix)
        if isinstance(other, Spinor2):
            return Spinor2.from_array(self.matrix @ other.array)
        return self.matrix @ np.asarray(other)

    @classmethod
    def from_matrix(cls, U, *, modulo_sign: bool = False) -> "SpinRotor":
        axis, angle = rotor_axis_angle(U, modulo_sign=modulo_sign)
        return cls(tuple(axis), angle)


def _unit_axis(axis, tol: float = UNIT_TOL) -> np.ndarray:
    n = np.asarray(axis, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > tol:
        raise ValueError(f"axis must be a unit vector, got |n| = {np.linalg.norm(n):.3e}")
    return n


def pauli_dot(v) -> np.ndarray:
    """Return the 2x2 matrix ``v . sigma`` for a real or complex 3-vector."""
    v = np.asarray(v)
    return np.tensordot(v, SIGMA, axes=1)


def sigma_product(a, b) -> tuple[float, np.ndarray]:
    """Decompose ``(a.sigma)(b.sigma) = (a.b) I + i (a x b).sigma``.

    Returns the scalar part ``a.b`` and the vector part ``a x b``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a @ b), np.cross(a, b)


def sigma_product_matrix(a, b) -> np.ndarray:
    """Rebuild the 2x2 matrix from :func:`sigma_product`."""
    scalar, vector = sigma_product(a, b)
    return scalar * SIGMA_0 + 1j * pauli_dot(vector)


def su2_exp(axis, angle: float) -> np.ndarray:
    """Matrix of ``exp(i angle axis.sigma) = cos(angle) I + i sin(angle) axis.sigma``."""
    n = _unit_axis(axis)
    return np.cos(angle) * SIGMA_0 + 1j * np.sin(angle) * pauli_dot(n)


def rotor_axis_angle(U, *, modulo_sign: bool = False) -> tuple[np.ndarray, float]:
    """Invert :func:`su2_exp` for an SU(2) matrix.

    Returns ``(axis, angle)`` with ``angle`` in ``[0, pi]``. With
    ``modulo_sign`` the overall sign of ``U`` is discarded (``U`` and ``-U``
    give the same spin rotation), so ``angle`` lands in ``[0, pi/2]``.
    For the identity the axis is reported as ``+z``.
    """
    U = np.asarray(U, dtype=complex)
    a0 = 0.5 * (U[0, 0] + U[1, 1]).real
    vec = np.array([
        0.5 * (U[0, 1] + U[1, 0]).imag,
        0.5 * (U[0, 1] - U[1, 0]).real,
        0.5 * (U[0, 0] - U[1, 1]).imag,
    ])
    if modulo_sign and a0 < 0:
        a0, vec = -a0, -vec
    s = np.linalg.norm(vec)
    angle = float(np.arctan2(s, a0))
    if s < 1e-300:
        return np.array([0.0, 0.0, 1.0]), angle
    return vec / s, angle


def _as_spinor(u) -> np.ndarray:
    return np.asarray(u, dtype=complex).reshape(2)


def bloch(u) -> np.ndarray:
    """Bloch vector ``<sigma> = u^dagger sigma u`` of a normalized spinor."""
    u = _as_spinor(u)
    if not np.any(u):
        raise ValueError("Bloch vector of the zero spinor is undefined")
    uu = np.conj(u)
    cross = uu[0] * u[1]
    return np.array([
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(u[0]) ** 2 - abs(u[1]) ** 2,
    ])


def fix_phase(u, tol: float = 1e-14) -> np.ndarray:
    """Make the first component with modulus above ``tol`` real and positive."""
    u = _as_spinor(u)
    for c in u:
        if abs(c) > tol:
            return u * (abs(c) / c)
    return u


def eigenspinor(n, sign: int = 1) -> np.ndarray:
    """Unit spinor with ``(n.sigma) u = sign * u``.

    The global phase is fixed so the first nonzero component is real and
    positive.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    n = _unit_axis(n) * sign
    nx, ny, nz = n
    if abs(1.0 + nz) < _SOUTH_POLE_TOL:
        u = np.array([nx - 1j * ny, 1.0 - nz], dtype=complex)
    else:
        u = np.array([1.0 + nz, nx + 1j * ny], dtype=complex)
    u /= np.linalg.norm(u)
    return fix_phase(u)


def fidelity(u, v) -> float:
    """Squared overlap ``|u^dagger v|^2`` of two normalized spinors."""
    return float(abs(np.vdot(_as_spinor(u), _as_spinor(v))) ** 2)


def so3_to_su2(R) -> np.ndarray:
    """SU(2) rotor whose Bloch action matches the proper rotation ``R``.

    Defined up to the overall sign inherent to the double cover.
    """
    from scipy.spatial.transform import Rotation

    rotvec = Rotation.from_matrix(np.asarray(R, dtype=float)).as_rotvec()
    angle = np.linalg.norm(rotvec)
    if angle < 1e-300:
        return SIGMA_0.copy()
    return su2_exp(rotvec / angle, -0.5 * angle)
