"""Optical counterpart: eikonal rays and polarization transport in isotropic media.

With ``q = grad L`` the rays obey ``d(n T)/ds = grad n`` (``T`` the unit
tangent) and the lowest-order field ``E_0 = |E_0| u`` is transported by ::

    du/ds = -(u . grad eps) q / (2 eps |q|) - (u . grad mu) q / (2 mu |q|)

The rate is parallel to the ray, so ``u . q`` and ``|u|`` are conserved and
``u`` is parallel-transported: relative to the Frenet frame it turns by the
accumulated torsion. Polarization is always stored in the lab frame; Frenet
components are derived measurements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .potential import ScalarPotential, evaluate, gradient
from .ray import AnalyticTrajectory, DEFAULT_ATOL, integrate_characteristics, helix_pitch_length
from .transport import fd_laplacian, pitch_rotation_matter


@dataclass(frozen=True)
class Medium:
    """Isotropic medium ``eps(x)``, ``mu(x)``; refraction index ``n = c sqrt(eps mu)``."""

    eps: ScalarPotential
    mu: ScalarPotential
    c: float = 1.0

    @classmethod
    def homogeneous(cls, n: float = 1.0, c: float = 1.0) -> "Medium":
        return cls(ScalarPotential.free(n / c), ScalarPotential.free(n / c), c)

    def _em(self, x) -> tuple[float, float]:
        e, m = evaluate(self.eps, x), evaluate(self.mu, x)
        if not (e > 0 and m > 0):
            raise ValueError(f"non-physical medium at x={np.asarray(x)}: eps={e:.6g}, mu={m:.6g}")
        return e, m

    def n(self, x) -> float:
        e, m = self._em(x)
        return self.c * np.sqrt(e * m)

    def grad_n(self, x) -> np.ndarray:
        e, m = self._em(x)
        n = self.c * np.sqrt(e * m)
        return 0.5 * n * (gradient(self.eps, x) / e + gradient(self.mu, x) / m)


@dataclass(frozen=True)
class EMState:
    x: np.ndarray
    gradL: np.ndarray
    u_pol: np.ndarray
    amp: float = 1.0


@dataclass(frozen=True)
class FrenetFrame:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float


def em_eikonal_residual(gradL, x, medium: Medium) -> float:
    g = np.asarray(gradL, dtype=float)
    return float(g @ g - medium.n(x) ** 2)


def em_polarization_rate(state: EMState, medium: Medium) -> np.ndarray:
    x, q = state.x, np.asarray(state.gradL, dtype=float)
    u = np.asarray(state.u_pol, dtype=complex)
    e, m = medium._em(x)
    qn = np.linalg.norm(q)
    return -(u @ gradient(medium.eps, x)) * q / (2 * e * qn) \
        - (u @ gradient(medium.mu, x)) * q / (2 * m * qn)


def em_amplitude_rate(state: EMState, medium: Medium, *, L_field: Optional[Callable] = None,
                      L_laplacian: Optional[Callable] = None,
                      length_scale: Optional[float] = None) -> float:
    """``d ln|E_0| / ds = -[lap L / (2|q|) - q . grad mu / (2 mu |q|)]``."""
    x, q = np.asarray(state.x, dtype=float), np.asarray(state.gradL, dtype=float)
    if L_laplacian is not None:
        lap = float(L_laplacian(x))
    elif L_field is not None:
        h = 1e-4 * (length_scale if length_scale is not None else max(np.linalg.norm(x), 1.0))
        lap = fd_laplacian(L_field, x, h)
    else:
        raise ValueError("amplitude transport needs L_field or L_laplacian")
    _, m = medium._em(x)
    qn = np.linalg.norm(q)
    return -(lap / (2 * qn) - q @ gradient(medium.mu, x) / (2 * m * qn))


def mu_coupling_triple(gradL, grad_mu, mu: float, E0) -> np.ndarray:
    """``grad mu x (grad L x E0) / (2 mu |grad L|)``."""
    q = np.asarray(gradL, dtype=float)
    return np.cross(grad_mu, np.cross(q, E0)) / (2 * mu * np.linalg.norm(q))


def mu_coupling_expanded(gradL, grad_mu, mu: float, E0) -> np.ndarray:
    """Same term as :func:`mu_coupling_triple`, written as two projections."""
    q = np.asarray(gradL, dtype=float)
    E0 = np.asarray(E0)
    qn = np.linalg.norm(q)
    return ((E0 @ grad_mu) * q - (q @ grad_mu) * E0) / (2 * mu * qn)


# Frenet machinery -----------------------------------------------------------

def _fd_derivatives(f: Callable, s: float, h: float):
    r = np.asarray(f(s), dtype=float)
    rp, rm = np.asarray(f(s + h)), np.asarray(f(s - h))
    rpp, rmm = np.asarray(f(s + 2 * h)), np.asarray(f(s - 2 * h))
    d1 = (rp - rm) / (2 * h)
    d2 = (rp - 2 * r + rm) / h**2
    d3 = (rpp - 2 * rp + 2 * rm - rmm) / (2 * h**3)
    return r, d1, d2, d3


def frame_from_derivatives(d1, d2, d3) -> FrenetFrame:
    cr = np.cross(d1, d2)
    crn = np.linalg.norm(cr)
    speed = np.linalg.norm(d1)
    kappa = crn / speed**3
    if kappa < 1e-12:
        raise ValueError("curvature vanishes: Frenet frame undefined on a straight segment")
    T = d1 / speed
    normal = d2 - (d2 @ T) * T
    N = normal / np.linalg.norm(normal)
    B = np.cross(T, N)
    tau = float(cr @ d3) / crn**2
    return FrenetFrame(T, N, B, float(kappa), tau)


def frenet(curve, s: float, h: float = 1e-3) -> FrenetFrame:
    """Frenet-Serret frame, curvature and torsion of ``curve`` at ``s``.

    Analytic trajectories use closed-form derivatives; anything else
    (a position callable, or an object with ``position``/``state_at``) is
    differentiated by central differences with step ``h``.
    """
    if isinstance(curve, AnalyticTrajectory):
        _, d1, d2, d3 = curve.derivatives(s)
        return frame_from_derivatives(d1, d2, d3)
    if hasattr(curve, "position"):
        f = curve.position
    elif hasattr(curve, "state_at"):
        f = lambda si: curve.state_at(si)[0]  # noqa: E731
    else:
        f = curve
    _, d1, d2, d3 = _fd_derivatives(f, s, h)
    return frame_from_derivatives(d1, d2, d3)


def helix_curvature_torsion(r0: float, Omega: float) -> tuple[float, float]:
    d = 1.0 + Omega**2 * r0**2
    return r0 * Omega**2 / d, Omega / d


def rytov_rotation_per_pitch(Omega: float, r0: float) -> float:
    """Torsion integral over one helix turn, ``2 pi / sqrt(1 + Omega^2 r0^2)``."""
    if not Omega > 0:
        raise ValueError("Omega must be positive")
    return float(2 * np.pi / np.sqrt(1.0 + Omega**2 * r0**2))


# optical rays ---------------------------------------------------------------

@dataclass
class OpticalRay:
    s: np.ndarray
    x: np.ndarray
    q: np.ndarray          # grad L along the ray
    u: np.ndarray          # (N, 3) complex polarization, lab frame
    residual: np.ndarray   # eikonal residual
    medium: Medium
    dense: Optional[Callable] = field(default=None, repr=False)

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    def state_at(self, s: float):
        y = self.dense(s)
        return y[0:3], y[3:6]

    def position(self, s: float) -> np.ndarray:
        return self.dense(s)[0:3]

    def transversality(self) -> np.ndarray:
        """``|u . q| / |q|`` per sample."""
        return np.abs(np.einsum("ij,ij->i", self.u, self.q)) / np.linalg.norm(self.q, axis=1)

    def frames(self) -> list[FrenetFrame]:
        """Frenet frames from the ray equation (``T' = (grad n - (T.grad n) T)/n``)."""
        out = []
        for xi, qi in zip(self.x, self.q):
            T = qi / np.linalg.norm(qi)
            gn = self.medium.grad_n(xi)
            Tp = (gn - (gn @ T) * T) / self.medium.n(xi)
            kappa = np.linalg.norm(Tp)
            if kappa < 1e-12:
                raise ValueError("straight ray: Frenet frame undefined")
            N = Tp / kappa
            out.append(FrenetFrame(T, N, np.cross(T, N), float(kappa), float("nan")))
        return out

    def frenet_rotation(self) -> np.ndarray:
        """Cumulative angle by which the Frenet frame turns relative to ``Re u``."""
        ang = []
        for f, ui in zip(self.frames(), self.u.real):
            ang.append(np.arctan2(ui @ f.B, ui @ f.N))
        ang = np.unwrap(np.array(ang))
        return -(ang - ang[0])


def trace_optical_ray(medium: Medium, x0, direction, ds: float, length: float,
                      u0=None, rtol: float = 1e-12, atol: float = DEFAULT_ATOL) -> OpticalRay:
    """Trace ``d(nT)/ds = grad n`` and transport the polarization ``u0`` along it."""
    x0 = np.asarray(x0, dtype=float)
    d = np.asarray(direction, dtype=float)
    q0 = medium.n(x0) * d / np.linalg.norm(d)
    if u0 is None:
        seed = np.array([1.0, 0.0, 0.0]) if abs(q0[0]) < 0.9 * np.linalg.norm(q0) else np.array([0.0, 1.0, 0.0])
        u0 = np.cross(q0, seed)
    u0 = np.asarray(u0, dtype=complex)
    u0 = u0 / np.linalg.norm(u0)
    if abs(u0 @ q0) > 1e-10 * np.linalg.norm(q0):
        raise ValueError("initial polarization must be transverse to the ray")

    def rhs(_s, y):
        x, q = y[0:3], y[3:6]
        u = y[6:9] + 1j * y[9:12]
        du = em_polarization_rate(EMState(x, q, u), medium)
        return np.concatenate([q / np.linalg.norm(q), medium.grad_n(x), du.real, du.imag])

    y0 = np.concatenate([x0, q0, u0.real, u0.imag])
    s, Y, dense = integrate_characteristics(rhs, y0, length, ds, rtol, atol, label="optical ray")
    x, q = Y[:, 0:3], Y[:, 3:6]
    u = Y[:, 6:9] + 1j * Y[:, 9:12]
    res = np.array([em_eikonal_residual(qi, xi, medium) for xi, qi in zip(x, q)])
    return OpticalRay(s, x, q, u, res, medium, dense)


def helical_guide(r0: float, Omega: float, n0: float = 1.5, c: float = 1.0,
                  mu0: float = 1.0) -> Medium:
    """Graded-index fibre ``eps = eps0 + k_e rho^2/2`` guiding the helix ``(r0, Omega)``.

    ``k_e < 0`` is fixed by the centripetal balance ``n(r0) kappa = -dn/drho``
    and ``eps0`` by ``n(r0) = n0``.
    """
    kappa, _ = helix_curvature_torsion(r0, Omega)
    k_e = -2.0 * n0**2 * kappa / (c**2 * mu0 * r0)
    eps0 = n0**2 / (c**2 * mu0) - 0.5 * k_e * r0**2
    return Medium(ScalarPotential.harmonic2d(k_e, offset=eps0), ScalarPotential.free(mu0), c)


def trace_guided_helix(r0: float, Omega: float, n0: float = 1.5, ds: Optional[float] = None,
                       pitches: float = 1.0, c: float = 1.0) -> OpticalRay:
    """Optical ray launched along the helix tangent in :func:`helical_guide`,
    starting with polarization along the principal normal."""
    medium = helical_guide(r0, Omega, n0=n0, c=c)
    traj = AnalyticTrajectory.helix(r0, Omega)
    length = pitches * helix_pitch_length(r0, Omega)
    if ds is None:
        ds = length / 2000
    u0 = frenet(traj, 0.0).N
    return trace_optical_ray(medium, traj.position(0.0), traj.tangent(0.0), ds, length, u0=u0)


def parallel_transport(traj: AnalyticTrajectory, u0, ds: float, length: Optional[float] = None,
                       rtol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Transverse transport ``du/ds = -(u . T') T`` along a prescribed curve.

    This is the polarization law with the medium gradients eliminated through
    the ray equation (constant ``mu``), so it needs only the geometry.
    Returns ``(s, u)`` with ``u`` real.
    """
    if length is None:
        length = traj.length

    def rhs(s, y):
        fr = frenet(traj, s)
        return -(y @ (fr.kappa * fr.N)) * fr.T

    s, Y, _ = integrate_characteristics(rhs, np.asarray(u0, dtype=float), length, ds, rtol,
                                        DEFAULT_ATOL, label="parallel transport")
    return s, Y


def frame_rotation(traj: AnalyticTrajectory, s, u) -> np.ndarray:
    """Cumulative turn of the Frenet frame of ``traj`` relative to vectors ``u``."""
    ang = []
    for si, ui in zip(s, u):
        fr = frenet(traj, si)
        ang.append(np.arctan2(ui @ fr.B, ui @ fr.N))
    ang = np.unwrap(np.array(ang))
    return -(ang - ang[0])


def compare_pitch_rotations(k: Optional[float], r0: float, Omega: float, m: float, c: float,
                            v_z: float) -> dict:
    """Spin versus polarization rotation per helix turn.

    ``matter_angle`` uses the oscillator force constant ``k = m Omega^2 v_z^2``;
    if ``k`` is given, ``matter_angle_from_k`` evaluates the general
    ``pi k r0^2 / (m c^2)`` as well.
    """
    matter = pitch_rotation_matter(None, r0, Omega, m, c, v_z=v_z)
    light = rytov_rotation_per_pitch(Omega, r0)
    report = {
        "matter_angle": matter,
        "light_angle": light,
        "ratio": matter / light,
        "v_z_over_c": v_z / c,
    }
    if k is not None:
        report["matter_angle_from_k"] = pitch_rotation_matter(k, r0, Omega, m, c)
    return report
