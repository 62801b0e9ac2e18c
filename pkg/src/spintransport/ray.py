"""Classical rays of the relativistic scalar-potential Hamiltonian.

Rays are integrated with arc length ``s`` as the independent variable::

    dx/ds = p / |p|
    dp/ds = -grad V * E_kin / (c^2 |p|)
    dt/ds = E_kin / (c^2 |p|)
    dW/ds = |p|

with ``E_kin = sqrt(c^2 |p|^2 + m^2 c^4) = E - V`` on the energy shell. This is
Hamilton's flow for ``H = sqrt(c^2 p^2 + m^2 c^4) + V`` reparameterized by
arc length, so the output grid is uniform in ``s`` by construction and the
samples come from the integrator's dense output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import ellipeinc, ellipe

from .potential import ScalarPotential, evaluate, gradient

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


class RayIntegrationError(RuntimeError):
    """The adaptive integrator could not reach the requested tolerance."""


def _check_mass(m: float, c: float) -> None:
    if not m > 0:
        raise ValueError(f"mass must be positive (massless limit unsupported), got m={m}")
    if not c > 0:
        raise ValueError(f"light speed must be positive, got c={c}")


def kinetic_energy(p, m: float, c: float) -> float:
    """``sqrt(c^2 |p|^2 + m^2 c^4)``; includes the rest energy."""
    p = np.asarray(p, dtype=float)
    return float(np.sqrt(c**2 * (p @ p) + m**2 * c**4))


def relativistic_energy(p, x, pot: ScalarPotential, m: float, c: float) -> float:
    _check_mass(m, c)
    return kinetic_energy(p, m, c) + evaluate(pot, x)


def shell_momentum(x, pot: ScalarPotential, m: float, c: float, E: float) -> float:
    """Magnitude of ``grad W`` on the energy shell at ``x``."""
    _check_mass(m, c)
    ekin = E - evaluate(pot, x)
    p2 = (ekin**2 - m**2 * c**4) / c**2
    if ekin <= 0 or p2 < 0:
        raise ValueError(f"classically forbidden point: E - V = {ekin:.6g} < m c^2")
    return float(np.sqrt(p2))


def eikonal_residual(p, x, pot: ScalarPotential, m: float, c: float, E: float) -> float:
    """``(|p|^2 - [(E-V)^2 - m^2 c^4]/c^2) / max(|p|^2, m^2 c^2)``."""
    p = np.asarray(p, dtype=float)
    p2 = float(p @ p)
    target = ((E - evaluate(pot, x)) ** 2 - m**2 * c**4) / c**2
    return (p2 - target) / max(p2, m**2 * c**2)


@dataclass(frozen=True)
class RayState:
    x: np.ndarray
    p: np.ndarray
    W: float = 0.0
    s: float = 0.0
    t: float = 0.0


def ray_start(x, direction, pot: ScalarPotential, m: float, c: float, E: float) -> RayState:
    """Initial state on the energy shell moving along ``direction``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return RayState(x=x, p=shell_momentum(x, pot, m, c, E) * d)


def arc_grid(length: float, ds: float) -> np.ndarray:
    if not ds > 0:
        raise ValueError(f"ds must be positive, got {ds}")
    if not length > 0:
        raise ValueError(f"length must be positive, got {length}")
    n = int(np.floor(length / ds + 1e-9))
    s = ds * np.arange(n + 1)
    if length - s[-1] > 1e-12 * max(1.0, length):
        s = np.append(s, length)
    return s


def integrate_characteristics(rhs: Callable, y0, length: float, ds: float,
                              rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                              label: str = "ray"):
    """Integrate ``dy/ds = rhs(s, y)`` and sample it on a uniform arc-length grid.

    Shared by the matter and optical ray tracers. Returns ``(s, Y, dense)``
    where ``Y`` has one row per sample and ``dense`` is the continuous
    solution.
    """
    s_grid = arc_grid(length, ds)
    try:
        sol = solve_ivp(rhs, (0.0, s_grid[-1]), np.asarray(y0, dtype=float), method="DOP853",
                        t_eval=s_grid, dense_output=True, rtol=rtol, atol=atol)
    except (ValueError, FloatingPointError, ZeroDivisionError) as exc:
        raise RayIntegrationError(f"{label}: integration aborted: {exc}") from exc
    if sol.status != 0:
        last = sol.t[-1] if sol.t.size else 0.0
        raise RayIntegrationError(
            f"{label}: integrator stopped at s={last:.6g} of {s_grid[-1]:.6g} "
            f"(rtol={rtol:g}, atol={atol:g}): {sol.message}")
    return s_grid, sol.y.T, sol.sol


@dataclass
class RaySolution:
    """Sampled ray with continuous interpolant."""

    s: np.ndarray
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    W: np.ndarray
    residual: np.ndarray
    pot: ScalarPotential
    m: float
    c: float
    E: float
    dense: Optional[Callable] = field(default=None, repr=False)

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    def __len__(self) -> int:
        return len(self.s)

    def __getitem__(self, i) -> RayState:
        return RayState(self.x[i], self.p[i], float(self.W[i]), float(self.s[i]), float(self.t[i]))

    def states(self) -> list[RayState]:
        return [self[i] for i in range(len(self))]

    def state_at(self, s: float):
        """Interpolated ``(x, p)`` at arc length ``s`` measured from the ray start."""
        y = self.dense(s)
        return y[0:3], y[3:6]

    def energy(self) -> np.ndarray:
        V = np.array([evaluate(self.pot, xi) for xi in self.x])
        return np.sqrt(self.c**2 * np.sum(self.p**2, axis=1) + self.m**2 * self.c**4) + V

    def angular_momentum(self) -> np.ndarray:
        return np.cross(self.x, self.p)


def integrate_ray(start: RayState, pot: ScalarPotential, m: float, c: float, E: float,
                  ds: float, length: float, rtol: float = DEFAULT_RTOL,
                  atol: float = DEFAULT_ATOL) -> RaySolution:
    """Trace the classical ray from ``start`` over arc length ``length``."""
    _check_mass(m, c)
    if E <= m * c**2 + evaluate(pot, start.x):
        raise ValueError("E must exceed m c^2 + V at the starting point")
    res0 = eikonal_residual(start.p, start.x, pot, m, c, E)
    if abs(res0) > 1e-9:
        raise ValueError(f"start state off the energy shell (residual {res0:.3e}); use ray_start")

    def rhs(_s, y):
        p = y[3:6]
        pn = np.sqrt(p @ p)
        if pn == 0.0:
            raise ZeroDivisionError("turning point |p| = 0 reached")
        ekin = np.sqrt(c**2 * pn**2 + m**2 * c**4)
        dtds = ekin / (c**2 * pn)
        out = np.empty(8)
        out[0:3] = p / pn
        out[3:6] = -gradient(pot, y[0:3]) * dtds
        out[6] = pn
        out[7] = dtds
        return out

    y0 = np.concatenate([start.x, start.p, [start.W, start.t]])
    s, Y, dense = integrate_characteristics(rhs, y0, length, ds, rtol, atol)
    x, p = Y[:, 0:3], Y[:, 3:6]
    residual = np.array([eikonal_residual(pi, xi, pot, m, c, E) for xi, pi in zip(x, p)])
    return RaySolution(s=s + start.s, t=Y[:, 7], x=x, p=p, W=Y[:, 6], residual=residual,
                       pot=pot, m=m, c=c, E=E, dense=dense)


def orbit_momentum(k: float, r0: float, m: float, c: float, p_z: float = 0.0) -> float:
    """In-plane momentum of a circular (helical if ``p_z != 0``) orbit.

    For ``V = k (x^2 + y^2)/2`` with ``k > 0`` the centripetal balance
    ``c^2 p_perp^2 / E_kin = k r0^2`` gives a quadratic in ``p_perp^2``.
    """
    _check_mass(m, c)
    if not k > 0:
        raise ValueError("a bound circular orbit needs an attractive potential (k > 0)")
    a = k**2 * r0**4
    rest2 = c**2 * p_z**2 + m**2 * c**4
    P = (a * c**2 + np.sqrt(a**2 * c**4 + 4 * c**4 * a * rest2)) / (2 * c**4)
    return float(np.sqrt(P))


def harmonic_helix_parameters(Omega: float, r0: float, v_z: float, m: float, c: float) -> dict:
    """Exact relativistic data of the helix ``x = r0 cos(Omega z)`` in ``V = k rho^2/2``.

    The in-plane speed is ``Omega r0 v_z`` and the force constant follows from
    the centripetal balance, ``k = gamma m Omega^2 v_z^2`` (reducing to
    ``m Omega^2 v_z^2`` for slow motion).
    """
    _check_mass(m, c)
    v_perp = Omega * r0 * v_z
    beta2 = (v_perp**2 + v_z**2) / c**2
    if beta2 >= 1:
        raise ValueError("helix speed reaches or exceeds c")
    gamma = 1.0 / np.sqrt(1.0 - beta2)
    return {
        "k": gamma * m * Omega**2 * v_z**2,
        "gamma": gamma,
        "p_perp": gamma * m * v_perp,
        "p_z": gamma * m * v_z,
        "E_kin": gamma * m * c**2,
    }


@dataclass(frozen=True)
class AnalyticTrajectory:
    """Closed-form arc-length parameterized curves.

    ``circle``: radius ``r0`` in the xy plane, starting at ``(r0, 0, 0)``.
    ``helix``: ``x = r0 cos(Omega z)``, ``y = r0 sin(Omega z)``, z increasing.
    ``ellipse``: semi-axes ``r0`` (along x) and ``b`` (along y).

    ``rotation`` (3x3 proper rotation) and ``center`` place the curve in space.
    """

    kind: str
    r0: float
    length: float
    Omega: float = 0.0
    b: float = 0.0
    rotation: Optional[tuple] = None
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.kind not in ("circle", "helix", "ellipse"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if not self.r0 > 0:
            raise ValueError("r0 must be positive")
        if self.kind == "ellipse" and not self.b > 0:
            raise ValueError("ellipse needs a positive minor semi-axis b")
        if self.rotation is not None:
            R = np.asarray(self.rotation, dtype=float)
            if not np.allclose(R @ R.T, np.eye(3), atol=1e-12) or np.linalg.det(R) < 0:
                raise ValueError("rotation must be a proper orthogonal matrix")
            object.__setattr__(self, "rotation", tuple(map(tuple, R)))
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    @classmethod
    def circle(cls, r0: float, length: Optional[float] = None, **kw) -> "AnalyticTrajectory":
        return cls("circle", r0, 2 * np.pi * r0 if length is None else length, **kw)

    @classmethod
    def helix(cls, r0: float, Omega: float, length: Optional[float] = None, **kw) -> "AnalyticTrajectory":
        if length is None:
            length = helix_pitch_length(r0, Omega)
        return cls("helix", r0, length, Omega=Omega, **kw)

    @classmethod
    def ellipse(cls, a: float, b: float, length: Optional[float] = None, **kw) -> "AnalyticTrajectory":
        if length is None:
            length = ellipse_perimeter(a, b)
        return cls("ellipse", a, length, b=b, **kw)

    @property
    def _R(self) -> np.ndarray:
        return np.eye(3) if self.rotation is None else np.asarray(self.rotation)

    @property
    def _stretch(self) -> float:
        return np.sqrt(1.0 + self.Omega**2 * self.r0**2)

    def parameter(self, s):
        """Native parameter: phase ``s/r0`` (circle), ``Omega z`` (helix), ``psi`` (ellipse)."""
        if self.kind == "circle":
            return np.asarray(s, dtype=float) / self.r0
        if self.kind == "helix":
            return self.Omega * np.asarray(s, dtype=float) / self._stretch
        return ellipse_phase(self.r0, self.b, s)

    def _local_derivatives(self, s):
        """Position and first three derivatives w.r.t. the native parameter, local frame."""
        u = float(self.parameter(s))
        cu, su = np.cos(u), np.sin(u)
        if self.kind == "circle":
            r = self.r0
            return (np.array([r * cu, r * su, 0.0]), np.array([-r * su, r * cu, 0.0]),
                    np.array([-r * cu, -r * su, 0.0]), np.array([r * su, -r * cu, 0.0]))
        if self.kind == "helix":
            r, inv = self.r0, 1.0 / self.Omega if self.Omega else 0.0
            if self.Omega == 0.0:
                z = float(s)
                return (np.array([r, 0.0, z]), np.array([0.0, 0.0, 1.0]), np.zeros(3), np.zeros(3))
            return (np.array([r * cu, r * su, u * inv]), np.array([-r * su, r * cu, inv]),
                    np.array([-r * cu, -r * su, 0.0]), np.array([r * su, -r * cu, 0.0]))
        a, b = self.r0, self.b
        return (np.array([a * cu, b * su, 0.0]), np.array([-a * su, b * cu, 0.0]),
                np.array([-a * cu, -b * su, 0.0]), np.array([a * su, -b * cu, 0.0]))

    def derivatives(self, s):
        """``(r, r', r'', r''')`` in world coordinates, derivatives w.r.t. the native parameter."""
        r, d1, d2, d3 = self._local_derivatives(s)
        if self.rotation is None:
            return r + np.asarray(self.center), d1, d2, d3
        R = self._R
        return R @ r + np.asarray(self.center), R @ d1, R @ d2, R @ d3

    def position(self, s) -> np.ndarray:
        return self.derivatives(s)[0]

    def tangent(self, s) -> np.ndarray:
        _, d1, _, _ = self.derivatives(s)
        if self.kind == "circle":
            return d1 / self.r0
        if self.kind == "helix" and self.Omega != 0.0:
            return d1 * self.Omega / self._stretch
        return d1 / np.linalg.norm(d1)

    def state_at(self, s: float):
        """``(x, direction)``; the direction stands in for ``grad W`` up to magnitude."""
        return self.position(s), self.tangent(s)


def analytic_tangent(traj: AnalyticTrajectory, s: float) -> np.ndarray:
    if s < -1e-12 or s > traj.length * (1 + 1e-12) + 1e-12:
        raise ValueError(f"s={s} outside trajectory span [0, {traj.length}]")
    return traj.tangent(s)


def helix_pitch_length(r0: float, Omega: float) -> float:
    """Arc length of one helix turn, ``2 pi sqrt(1 + Omega^2 r0^2) / Omega``."""
    if not Omega > 0:
        raise ValueError("helix winding Omega must be positive")
    return 2 * np.pi * np.sqrt(1.0 + Omega**2 * r0**2) / Omega


def _ellipse_m(a: float, b: float) -> float:
    return 1.0 - (a / b) ** 2


def ellipse_arclength(a: float, b: float, psi):
    """Arc length from ``psi = 0`` of ``(a cos psi, b sin psi)``."""
    return b * ellipeinc(psi, _ellipse_m(a, b))


def ellipse_perimeter(a: float, b: float) -> float:
    return float(4 * b * ellipe(_ellipse_m(a, b)))


def ellipse_phase(a: float, b: float, s, iters: int = 30):
    """Invert :func:`ellipse_arclength` by Newton iteration (vectorized)."""
    s = np.asarray(s, dtype=float)
    P = ellipse_perimeter(a, b)
    turns = np.floor(s / P)
    rem = s - turns * P
    psi = 2 * np.pi * rem / P
    for _ in range(iters):
        f = ellipse_arclength(a, b, psi) - rem
        speed = np.sqrt(a**2 * np.sin(psi) ** 2 + b**2 * np.cos(psi) ** 2)
        step = f / speed
        psi = psi - step
        if np.all(np.abs(step) < 1e-15):
            break
    return psi + 2 * np.pi * turns
