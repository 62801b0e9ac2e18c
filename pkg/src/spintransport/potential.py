"""Scalar potentials with analytic gradients.

All potentials are static scalar fields ``V(x)`` on R^3. The same machinery
backs the permittivity/permeability fields of the optical analog, which is
why ``linear`` and ``custom`` kinds exist alongside the physical ones.

Sign convention: :func:`gradient` is the mathematical gradient. A planar
central configuration with ``grad V = -k_orbit (x, y, 0)`` is therefore
built as ``harmonic2d_xy`` with ``k = -k_orbit``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

KINDS = ("free", "harmonic3d", "central_radial", "harmonic2d_xy", "linear", "custom")


@dataclass(frozen=True)
class ScalarPotential:
    """Immutable description of ``V(x)``.

    kind
        ``free``: V = offset.
        ``harmonic3d``: V = offset + k |x|^2 / 2.
        ``harmonic2d_xy``: V = offset + k (x^2 + y^2) / 2.
        ``central_radial``: V = offset + k r^power.
        ``linear``: V = offset + slope . x.
        ``custom``: user callables ``func``/``grad`` (not serializable).
    """

    kind: str = "free"
    k: float = 0.0
    offset: float = 0.0
    power: float = 2.0
    slope: tuple[float, float, float] = (0.0, 0.0, 0.0)
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    grad: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "custom" and (self.func is None or self.grad is None):
            raise ValueError("custom potential needs both func and grad")
        object.__setattr__(self, "slope", tuple(float(v) for v in self.slope))

    # constructors mirroring the physical parameterizations
    @classmethod
    def free(cls, offset: float = 0.0) -> "ScalarPotential":
        return cls("free", offset=offset)

    @classmethod
    def harmonic2d(cls, k: float, offset: float = 0.0) -> "ScalarPotential":
        return cls("harmonic2d_xy", k=k, offset=offset)

    @classmethod
    def harmonic3d(cls, k: float, offset: float = 0.0) -> "ScalarPotential":
        return cls("harmonic3d", k=k, offset=offset)

    @classmethod
    def from_frequency(cls, m: float, omega: float, planar: bool = True) -> "ScalarPotential":
        """Oscillator with force constant ``k = m omega^2``."""
        kind = "harmonic2d_xy" if planar else "harmonic3d"
        return cls(kind, k=m * omega**2)

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def to_dict(self) -> dict:
        if self.kind == "custom":
            raise ValueError("custom potentials cannot be serialized")
        d = {"kind": self.kind, "offset": self.offset}
        if self.kind in ("harmonic3d", "harmonic2d_xy", "central_radial"):
            d["k"] = self.k
        if self.kind == "central_radial":
            d["power"] = self.power
        if self.kind == "linear":
            d["slope"] = list(self.slope)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScalarPotential":
        allowed = {"kind", "k", "offset", "power", "slope"}
        unknown = set(d) - allowed
        if unknown:
            raise ValueError(f"unknown potential keys: {sorted(unknown)}")
        if d.get("kind") == "custom":
            raise ValueError("custom potentials cannot be loaded from config")
        kw = dict(d)
        if "slope" in kw:
            kw["slope"] = tuple(kw["slope"])
        return cls(**kw)


def evaluate(p: ScalarPotential, x) -> float:
    x = np.asarray(x, dtype=float)
    if p.kind == "free":
        return p.offset
    if p.kind == "harmonic3d":
        return p.offset + 0.5 * p.k * float(x @ x)
    if p.kind == "harmonic2d_xy":
        return p.offset + 0.5 * p.k * float(x[0] ** 2 + x[1] ** 2)
    if p.kind == "central_radial":
        return p.offset + p.k * float(np.linalg.norm(x)) ** p.power
    if p.kind == "linear":
        return p.offset + float(np.dot(p.slope, x))
    return float(p.func(x))


def gradient(p: ScalarPotential, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if p.kind == "free":
        return np.zeros(3)
    if p.kind == "harmonic3d":
        return p.k * x
    if p.kind == "harmonic2d_xy":
        return p.k * np.array([x[0], x[1], 0.0])
    if p.kind == "central_radial":
        r = float(np.linalg.norm(x))
        if r == 0.0:
            # limit exists only for power > 1
            if p.power > 1:
                return np.zeros(3)
            raise ValueError("gradient of k r^power undefined at the origin for power <= 1")
        return p.k * p.power * r ** (p.power - 2) * x
    if p.kind == "linear":
        return np.array(p.slope, dtype=float)
    return np.asarray(p.grad(x), dtype=float)


def fd_gradient(p: ScalarPotential, x, h: float) -> np.ndarray:
    """Central-difference gradient with step ``h``."""
    if not h > 0:
        raise ValueError(f"finite-difference step must be positive, got {h}")
    x = np.asarray(x, dtype=float)
    g = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        g[i] = (evaluate(p, x + e) - evaluate(p, x - e)) / (2 * h)
    return g


def orbit_constant(p: ScalarPotential, r0: float) -> float:
    """Local constant ``k_orbit`` with ``grad V = -k_orbit (x, y, 0)`` at radius ``r0``.

    Evaluated on the x axis; for the planar harmonic kind it equals ``-p.k``.
    """
    g = gradient(p, np.array([r0, 0.0, 0.0]))
    return -g[0] / r0
