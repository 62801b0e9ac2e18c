"""Transport of the local spin state and amplitude along a classical ray.

At lowest WKB order the upper spinor ``phi_0 = |phi_0| u`` obeys, along the
arc length ``s`` of a ray with ``p = grad W``::

    du/ds = -i (G . sigma) u,      G = (grad V x p) / (2 (E + m c^2 - V) |p|)
    d|phi_0|/ds = -[lap W / (2|p|) + grad V . p / (2 (E + m c^2 - V) |p|)] |phi_0|

``u`` is advanced with exact SU(2) rotors built from the generator at the
step midpoint, so the norm is preserved to rounding at any step size.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .pauli import (SIGMA_0, SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, Spinor2, bloch,
                    pauli_dot, rotor_axis_angle)
from .potential import ScalarPotential, evaluate, gradient

MAX_STEP_ANGLE = 0.1


class TurningPointError(ValueError):
    """``|grad W| = 0``: the transport law is singular there."""


class StepDensityError(ValueError):
    """Trajectory sampling too coarse for the local precession rate."""


def _denominator(x, pot: ScalarPotential, m: float, c: float, E: float) -> float:
    d = E + m * c**2 - evaluate(pot, x)
    if not d > 0:
        raise ValueError(f"E + m c^2 - V must be positive, got {d:.6g}")
    return d


def _cross(a, b) -> np.ndarray:
    # np.cross carries heavy per-call overhead for single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def precession_generator(x, p, pot: ScalarPotential, m: float, c: float, E: float) -> np.ndarray:
    """Generator ``G`` with ``du/ds = -i (G . sigma) u`` (units 1/length)."""
    p = np.asarray(p, dtype=float)
    pn = np.linalg.norm(p)
    if pn == 0.0:
        raise TurningPointError("precession generator undefined where grad W = 0")
    return _cross(gradient(pot, x), p) / (2.0 * _denominator(x, pot, m, c, E) * pn)


def bloch_rate(x, p, pot: ScalarPotential, m: float, c: float, E: float, u) -> np.ndarray:
    """``d<sigma>/ds = 2 G x <sigma>``."""
    return 2.0 * np.cross(precession_generator(x, p, pot, m, c, E), bloch(u))


def observable_rate(x, p, pot: ScalarPotential, m: float, c: float, E: float, u, A) -> float:
    """``d<A>/ds = i <[G.sigma, A]>`` for a Hermitian 2x2 observable ``A``."""
    u = np.asarray(u, dtype=complex)
    H = pauli_dot(precession_generator(x, p, pot, m, c, E))
    A = np.asarray(A, dtype=complex)
    return float((1j * np.vdot(u, (H @ A - A @ H) @ u)).real)


def fd_laplacian(field: Callable, x, h: float) -> float:
    x = np.asarray(x, dtype=float)
    f0 = field(x)
    total = 0.0
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        total += field(x + e) - 2.0 * f0 + field(x - e)
    return total / h**2


def amplitude_rate(x, p, pot: ScalarPotential, m: float, c: float, E: float, *,
                   W_field: Optional[Callable] = None, W_laplacian: Optional[Callable] = None,
                   length_scale: Optional[float] = None) -> float:
    """Logarithmic rate ``d ln|phi_0| / ds``.

    ``lap W`` is a property of the ray family, so it has to be supplied either
    analytically (``W_laplacian(x)``) or through the phase field
    ``W_field(x)``, differentiated with step ``1e-4 * length_scale``.
    """
    p = np.asarray(p, dtype=float)
    pn = np.linalg.norm(p)
    if pn == 0.0:
        raise TurningPointError("amplitude transport undefined where grad W = 0")
    if W_laplacian is not None:
        lap = float(W_laplacian(np.asarray(x, dtype=float)))
    elif W_field is not None:
        L = length_scale if length_scale is not None else max(float(np.linalg.norm(x)), 1.0)
        lap = fd_laplacian(W_field, x, 1e-4 * L)
    else:
        raise ValueError("amplitude transport needs W_field or W_laplacian")
    drive = gradient(pot, x) @ p / (2.0 * _denominator(x, pot, m, c, E) * pn)
    return -(lap / (2.0 * pn) + drive)


def rotor_step(G, ds: float) -> np.ndarray:
    """Exact ``exp(-i ds G.sigma)``."""
    g = np.linalg.norm(G)
    if g == 0.0:
        return SIGMA_0.copy()
    a = ds * g
    return np.cos(a) * SIGMA_0 - 1j * np.sin(a) * pauli_dot(np.asarray(G) / g)


@dataclass(frozen=True)
class TransportState:
    s: float
    u: Spinor2
    amp: float
    bloch: np.ndarray


@dataclass
class TransportResult:
    """Sampled transport; ``amp`` is NaN when no phase field was supplied."""

    s: np.ndarray
    u: np.ndarray        # (N, 2) complex
    bloch: np.ndarray    # (N, 3)
    amp: np.ndarray      # (N,)
    G: np.ndarray        # (N, 3), generator at the samples
    propagator: Optional[np.ndarray] = None  # accumulated 2x2 rotor

    def __len__(self) -> int:
        return len(self.s)

    def __getitem__(self, i) -> TransportState:
        return TransportState(float(self.s[i]), Spinor2.from_array(self.u[i]),
                              float(self.amp[i]), self.bloch[i])

    def states(self) -> list[TransportState]:
        return [self[i] for i in range(len(self))]


def transport_spin(path, u_init, pot: ScalarPotential, m: float, c: float, E: float,
                   ds: float, length: Optional[float] = None, *,
                   generator: Callable = precession_generator,
                   W_field: Optional[Callable] = None, W_laplacian: Optional[Callable] = None,
                   amp0: float = 1.0) -> TransportResult:
    """Carry ``u_init`` along ``path`` with midpoint exact-rotor steps.

    ``path`` is anything exposing ``state_at(s) -> (x, p)`` and ``length``:
    an :class:`~spintransport.ray.AnalyticTrajectory`, a
    :class:`~spintransport.ray.RaySolution` or a :class:`SampledPath`.
    Only the direction of ``p`` enters the spin equation; the amplitude
    equation uses its magnitude, so it is only meaningful for momentum-valued
    paths.

    Raises :class:`StepDensityError` if any step rotates by more than
    ``MAX_STEP_ANGLE`` (``ds |G| >= 0.1``).
    """
    from .ray import arc_grid

    if length is None:
        length = path.length
    u = np.asarray(u_init, dtype=complex).reshape(2)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("initial spinor must be normalized")
    s = arc_grid(length, ds)
    track_amp = W_field is not None or W_laplacian is not None

    def gen_at(si):
        x, p = path.state_at(si)
        return generator(x, p, pot, m, c, E)

    def amp_rate_at(si):
        x, p = path.state_at(si)
        return amplitude_rate(x, p, pot, m, c, E, W_field=W_field, W_laplacian=W_laplacian)

    n = len(s)
    us = np.empty((n, 2), dtype=complex)
    amps = np.full(n, np.nan)
    Gs = np.empty((n, 3))
    us[0] = u
    Gs[0] = gen_at(s[0])
    U = SIGMA_0.copy()
    amp = float(amp0)
    if track_amp:
        amps[0] = amp
    for i in range(n - 1):
        h = s[i + 1] - s[i]
        mid = 0.5 * (s[i] + s[i + 1])
        G = gen_at(mid)
        if h * np.linalg.norm(G) >= MAX_STEP_ANGLE:
            raise StepDensityError(
                f"step at s={s[i]:.6g} rotates by {h * np.linalg.norm(G):.3g} rad "
                f"(limit {MAX_STEP_ANGLE}); reduce ds below {MAX_STEP_ANGLE / np.linalg.norm(G):.3g}")
        R = rotor_step(G, h)
        u = R @ u
        U = R @ U
        us[i + 1] = u
        Gs[i + 1] = gen_at(s[i + 1])
        if track_amp:
            amp *= np.exp(h * amp_rate_at(mid))
            amps[i + 1] = amp
    blochs = np.array([bloch(v) for v in us])
    return TransportResult(s=s, u=us, bloch=blochs, amp=amps, G=Gs, propagator=U)


class SampledPath:
    """Cubic-spline interpolant through sampled ``(s, x, p)`` trajectory data."""

    def __init__(self, s, x, p):
        from scipy.interpolate import CubicSpline

        self.s = np.asarray(s, dtype=float)
        self._x = CubicSpline(self.s, np.asarray(x, dtype=float), axis=0)
        self._p = CubicSpline(self.s, np.asarray(p, dtype=float), axis=0)
        self.length = float(self.s[-1] - self.s[0])

    def state_at(self, s: float):
        return self._x(s), self._p(s)


# closed forms for the planar circle and the circular helix. ``k`` is the
# orbit constant in grad V = -k (x, y, 0) on the trajectory.

def circle_angle(k: float, r0: float, s, E: float, m: float, c: float, V0: float):
    d = E + m * c**2 - V0
    if not d > 0:
        raise ValueError("E + m c^2 - V0 must be positive")
    return k * r0 * np.asarray(s) / (2.0 * d)


def circle_exact(u0, k: float, r0: float, s: float, E: float, m: float, c: float,
                 V0: float) -> np.ndarray:
    """``exp(i theta sigma_z) u0`` with ``theta = k r0 s / (2 (E + m c^2 - V0))``."""
    th = circle_angle(k, r0, s, E, m, c, V0)
    return (np.cos(th) * SIGMA_0 + 1j * np.sin(th) * SIGMA_Z) @ np.asarray(u0, dtype=complex)


@dataclass(frozen=True)
class HelixAngles:
    mu: float
    delta: float
    theta: float
    phi: float


def helix_angles(k: float, r0: float, Omega: float, s: float, E: float, m: float, c: float,
                 V0: float) -> HelixAngles:
    """``mu``, ``delta = Omega s / (2 sqrt(1+Omega^2 r0^2))``, ``theta = mu r0^2 Omega s``,
    ``phi = mu r0 s / 2``."""
    d = E + m * c**2 - V0
    if not d > 0:
        raise ValueError("E + m c^2 - V0 must be positive")
    stretch = np.sqrt(1.0 + Omega**2 * r0**2)
    mu = (k / stretch) / (2.0 * d)
    return HelixAngles(mu=mu, delta=Omega * s / (2.0 * stretch),
                       theta=mu * r0**2 * Omega * s, phi=mu * r0 * s / 2.0)


def _expi(vec) -> np.ndarray:
    """``exp(i v.sigma)`` for an arbitrary real 3-vector ``v``."""
    v = np.asarray(vec, dtype=float)
    a = np.linalg.norm(v)
    if a == 0.0:
        return SIGMA_0.copy()
    return np.cos(a) * SIGMA_0 + 1j * np.sin(a) * pauli_dot(v / a)


def helix_exact_matrix(k: float, r0: float, Omega: float, s: float, E: float, m: float,
                       c: float, V0: float) -> np.ndarray:
    """Propagator ``exp(-i delta sz) exp(i[(delta + theta) sz - 2 phi sy])``.

    Moving to the frame co-rotating with the in-plane radius turns the
    generator into the constant ``(delta + theta) sz - 2 phi sy`` per unit
    length fraction, which fixes the ``sigma_y`` weight at ``mu r0 s``.
    """
    a = helix_angles(k, r0, Omega, s, E, m, c, V0)
    return _expi([0.0, 0.0, -a.delta]) @ _expi([0.0, -2.0 * a.phi, a.delta + a.theta])


def helix_exact(u0, k: float, r0: float, Omega: float, s: float, E: float, m: float,
                c: float, V0: float) -> np.ndarray:
    return helix_exact_matrix(k, r0, Omega, s, E, m, c, V0) @ np.asarray(u0, dtype=complex)


def helix_first_order_matrix(k: float, r0: float, Omega: float, s: float, E: float,
                             m: float, c: float, V0: float) -> np.ndarray:
    """First order in ``mu`` of :func:`helix_exact_matrix`:
    ``sigma_0 + i theta sz - phi (sin delta / delta)(s+ e^{-i delta} - s- e^{i delta})``."""
    a = helix_angles(k, r0, Omega, s, E, m, c, V0)
    sinc = np.sinc(a.delta / np.pi)
    return (SIGMA_0 + 1j * a.theta * SIGMA_Z
            - a.phi * sinc * (SIGMA_PLUS * np.exp(-1j * a.delta) - SIGMA_MINUS * np.exp(1j * a.delta)))


def pitch_rotation_matter(k: Optional[float], r0: float, Omega: float, m: float, c: float, *,
                          v_z: Optional[float] = None) -> float:
    """Small-angle spin rotation per helix pitch, ``pi k r0^2 / (m c^2)``.

    With ``k=None`` and ``v_z`` given, uses the oscillator force constant
    ``k = m Omega^2 v_z^2``, i.e. ``pi Omega^2 r0^2 v_z^2 / c^2``.

    The value is the angle turned by the Bloch vector, equal to twice the
    rotor angle of the net ``exp(i theta sz)``.
    """
    if k is None:
        if v_z is None:
            raise ValueError("need k or v_z")
        angle = np.pi * Omega**2 * r0**2 * v_z**2 / c**2
    else:
        angle = np.pi * k * r0**2 / (m * c**2)
    if abs(angle) > 0.1:
        warnings.warn(f"per-pitch angle {angle:.3g} rad is outside the small-rotation regime",
                      stacklevel=2)
    return float(angle)


def net_rotation(U) -> tuple[np.ndarray, float]:
    """Axis and Bloch-vector rotation angle of a net spin rotor.

    The rotor ``exp(i a n.sigma)`` (sign discarded) is reported as
    ``(n, 2a)`` with ``2a`` in ``[0, pi]``; the Bloch vector turns by ``2a``
    clockwise about ``n``.
    """
    axis, a = rotor_axis_angle(U, modulo_sign=True)
    return axis, 2.0 * a


def axis_tilt(axis, reference=(0.0, 0.0, 1.0)) -> float:
    """Angle between the line spanned by ``axis`` and ``reference``."""
    cosang = abs(float(np.dot(axis, reference))) / (np.linalg.norm(axis) * np.linalg.norm(reference))
    return float(np.arccos(min(1.0, cosang)))
