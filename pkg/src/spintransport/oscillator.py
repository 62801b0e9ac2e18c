"""Exact discontinuity propagation for the Dirac oscillator.

A discontinuity ``[phi]`` of the upper spinor on the surface ``S = W - E t``
must be an eigenstate of ``(x x grad S) . sigma`` with eigenvalue
``lambda = branch * |x x grad S|``; the surface then obeys the modified
Hamilton-Jacobi equation ::

    (E^2 - m^2 c^4)/c^2 - |grad W|^2 - m^2 omega^2 |x|^2 + 2 m omega lambda = 0

Orbits are generated by absorbing the constant ``2 m omega lambda`` into the
energy: the remainder is the Hamilton-Jacobi equation of an isotropic
oscillator, whose rays are centred ellipses with ``grad W`` as tangent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pauli import SIGMA_0, eigenspinor, pauli_dot, so3_to_su2
from .ray import AnalyticTrajectory


@dataclass(frozen=True)
class OscillatorConfig:
    m: float
    omega: float
    c: float
    E: float
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        if not (self.m > 0 and self.c > 0):
            raise ValueError("m and c must be positive")
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        if not self.E**2 - self.m**2 * self.c**4 > 0:
            raise ValueError("need E^2 > m^2 c^4")

    @property
    def shell(self) -> float:
        """``(E^2 - m^2 c^4) / c^2``."""
        return (self.E**2 - self.m**2 * self.c**4) / self.c**2


@dataclass(frozen=True)
class DiscontinuitySolution:
    s: float
    x: np.ndarray
    gradW: np.ndarray
    L: np.ndarray
    spin: np.ndarray
    lam: float
    residual: float


def eigenvalue(cfg: OscillatorConfig, x, grad) -> float:
    """``lambda = branch * |x x grad S|``."""
    return cfg.branch * float(np.linalg.norm(np.cross(x, grad)))


def hj_residual_spatial(cfg: OscillatorConfig, x, gradW) -> float:
    x = np.asarray(x, dtype=float)
    g = np.asarray(gradW, dtype=float)
    return (cfg.shell - g @ g - cfg.m**2 * cfg.omega**2 * (x @ x)
            + 2.0 * cfg.m * cfg.omega * eigenvalue(cfg, x, g))


def hj_residual_spacetime(cfg: OscillatorConfig, x, gradS, dS_dt: float) -> float:
    """Time-dependent form; reduces to :func:`hj_residual_spatial` for ``dS/dt = -E``."""
    x = np.asarray(x, dtype=float)
    g = np.asarray(gradS, dtype=float)
    E, m, c, w = cfg.E, cfg.m, cfg.c, cfg.omega
    return (dS_dt**2 * (E**2 - m**2 * c**4) / (E**2 * c**2)
            - g @ g
            - dS_dt**2 * m**2 * w**2 * (x @ x) / E**2
            - 2.0 * m * w / E * dS_dt * eigenvalue(cfg, x, g))


def discontinuity_operator(cfg: OscillatorConfig, x, gradS, dS_dt: float) -> np.ndarray:
    """2x2 operator ``M`` of the jump condition ``M [phi] = 0``.

    ``M = c^2 [E^2 |grad S|^2 + (dS/dt)^2 m^2 omega^2 x^2
    + 2 m E omega (dS/dt) (x x grad S).sigma] - (dS/dt)^2 (E^2 - m^2 c^4)``.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(gradS, dtype=float)
    E, m, c, w = cfg.E, cfg.m, cfg.c, cfg.omega
    scalar = c**2 * (E**2 * (g @ g) + dS_dt**2 * m**2 * w**2 * (x @ x)) \
        - dS_dt**2 * (E**2 - m**2 * c**4)
    return scalar * SIGMA_0 + 2.0 * c**2 * m * E * w * dS_dt * pauli_dot(np.cross(x, g))


def ellipse_axes(cfg: OscillatorConfig, L_mag: float) -> tuple[float, float, float]:
    """Semi-axes ``(a, b)`` with ``a >= b`` and the effective constant ``K``.

    The orbit satisfies ``|grad W|^2 + m^2 omega^2 |x|^2 = K`` with
    ``K = shell + 2 m omega branch L_mag``; on it ``a^2 + b^2 = K/(m omega)^2``
    and ``a b = L_mag / (m omega)``.
    """
    if not L_mag > 0:
        raise ValueError("L_mag must be positive: for |x x grad W| = 0 the spin "
                         "eigenstate is undefined (linear oscillation through the origin)")
    if not cfg.omega > 0:
        raise ValueError("elliptical orbits need omega > 0")
    mw = cfg.m * cfg.omega
    K = cfg.shell + 2.0 * mw * cfg.branch * L_mag
    if K < 2.0 * mw * L_mag * (1 - 1e-14):
        raise ValueError(
            f"no real orbit: turning-point condition K >= 2 m omega L violated "
            f"(K = {K:.6g}, 2 m omega L = {2 * mw * L_mag:.6g}); lower L_mag or raise E")
    S = K / mw**2
    P = L_mag / mw
    disc = max(S**2 - 4 * P**2, 0.0)
    a2 = 0.5 * (S + np.sqrt(disc))
    b2 = P**2 / a2
    return float(np.sqrt(a2)), float(np.sqrt(b2)), float(K)


def circular_L(cfg: OscillatorConfig) -> float:
    """Angular momentum of the circular orbit (``K = 2 m omega L``).

    ``shell + 2 m omega branch L = 2 m omega L`` has a positive solution only
    on the ``branch = -1`` side: ``L = shell / (4 m omega)``; for
    ``branch = +1`` any ``L`` leaves ``K > 2 m omega L`` and no circle exists.
    """
    if cfg.branch == 1:
        raise ValueError("branch +1 admits no circular orbit at positive energy shell")
    return cfg.shell / (4.0 * cfg.m * cfg.omega)


def ellipse_states(cfg: OscillatorConfig, L_mag: float, samples: int = 256,
                   rotation: Optional[np.ndarray] = None) -> list[DiscontinuitySolution]:
    """Sample the discontinuity along one revolution of the orbit.

    The orbit lies in ``z = 0`` with ``L`` along ``+z``; ``rotation`` rigidly
    moves the whole solution (positions, gradients, ``L`` and spinor).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a, b, _ = ellipse_axes(cfg, L_mag)
    traj = AnalyticTrajectory.ellipse(a, b)
    mw = cfg.m * cfg.omega
    out = []
    for s in traj.length * np.arange(samples) / samples:
        psi = float(traj.parameter(s))
        x = np.array([a * np.cos(psi), b * np.sin(psi), 0.0])
        g = mw * np.array([-a * np.sin(psi), b * np.cos(psi), 0.0])
        L = np.cross(x, g)
        lam = eigenvalue(cfg, x, g)
        spin = eigenspinor(L / np.linalg.norm(L), cfg.branch)
        out.append(DiscontinuitySolution(float(s), x, g, L, spin, lam,
                                         hj_residual_spatial(cfg, x, g)))
    if rotation is not None:
        out = rotate_solutions(cfg, out, rotation)
    return out


def rotate_solutions(cfg: OscillatorConfig, sols, R) -> list[DiscontinuitySolution]:
    """Apply a proper rotation to a whole family of solutions."""
    R = np.asarray(R, dtype=float)
    U = so3_to_su2(R)
    out = []
    for d in sols:
        x, g = R @ d.x, R @ d.gradW
        out.append(DiscontinuitySolution(d.s, x, g, R @ d.L, U @ d.spin, d.lam,
                                         hj_residual_spatial(cfg, x, g)))
    return out
