"""Two giant atoms coupled to a waveguide at several points.

Markovian amplitude-sum model. With ξ = φ/L the phase per unit length, and
L the shortest distance between two points of the same atom (the
consecutive spacing when neither atom is giant):

    Γ_a    = Γ_pt |Σ_{j∈a} e^{iξx_j}|²
    Γ_coll = Γ_pt Σ_{j∈a, k∈b} cos(ξ|x_j − x_k|)
    g      = (Γ_pt/2) Σ_{j∈a, k∈b} sin(ξ|x_j − x_k|)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import UnsupportedConfigurationError, ValidationError

VARIANTS = {"small": "ab", "separate": "aabb", "braided": "abab", "nested": "abba"}
DEFAULT_POSITIONS = {
    "small": ((0.0,), (1.0,)),
    "separate": ((0.0, 1.0), (2.0, 3.0)),
    "braided": ((0.0, 1.0), (0.5, 1.5)),
    "nested": ((0.0, 3.0), (1.0, 2.0)),
}
SPACING_TOL = 1e-9
DF_RATE_TOL = 1e-10
DF_EXCHANGE_TOL = 1e-6


def propagation_phase(omega_a: float, v: float, x_j: float, x_k: float) -> float:
    """φ = (ω_a/v)|x_j − x_k|."""
    if not v > 0:
        raise ValidationError("propagation velocity must be > 0")
    return omega_a / v * abs(x_j - x_k)


@dataclass(frozen=True)
class Topology:
    """Coupling points of atoms a and b along the waveguide."""

    variant: str = "braided"
    positions_a: Tuple[float, ...] = field(default=None)
    positions_b: Tuple[float, ...] = field(default=None)
    gamma_pt: float = 1.0
    omega_a: float = np.pi
    v: float = 1.0

    def __post_init__(self):
        key = str(self.variant).lower()
        if key not in VARIANTS:
            raise ValidationError(f"unknown topology {self.variant!r}")
        object.__setattr__(self, "variant", key)
        da, db = DEFAULT_POSITIONS[key]
        pa = da if self.positions_a is None else self.positions_a
        pb = db if self.positions_b is None else self.positions_b
        object.__setattr__(self, "positions_a", tuple(float(x) for x in pa))
        object.__setattr__(self, "positions_b", tuple(float(x) for x in pb))
        if self.gamma_pt < 0:
            raise ValidationError("per-point rate must be >= 0")
        if not self.v > 0:
            raise ValidationError("propagation velocity must be > 0")
        pts = self.points()
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValidationError("coupling points must be strictly increasing")
        order = "".join(lbl for _, lbl in pts)
        if order != VARIANTS[key]:
            raise ValidationError(f"point ordering {order!r} does not match {key} ({VARIANTS[key]})")

    def points(self) -> List[Tuple[float, str]]:
        return sorted([(x, "a") for x in self.positions_a] + [(x, "b") for x in self.positions_b])

    @property
    def leg(self) -> float:
        """Length unit L carrying the phase φ."""
        legs = [np.min(np.diff(p)) for p in (self.positions_a, self.positions_b) if len(p) > 1]
        if legs:
            return float(min(legs))
        xs = [x for x, _ in self.points()]
        return float(np.min(np.diff(xs)))

    @property
    def phi(self) -> float:
        """Phase across one leg at the physical ω_a/v."""
        return propagation_phase(self.omega_a, self.v, 0.0, self.leg)

    def check_uniform(self) -> None:
        gaps = np.diff([x for x, _ in self.points()])
        if gaps.size and np.max(np.abs(gaps - gaps[0])) > SPACING_TOL * max(1.0, abs(gaps[0])):
            raise UnsupportedConfigurationError("coupling points are not uniformly spaced")


@dataclass(frozen=True)
class Rates:
    gamma_a: float
    gamma_b: float
    gamma_coll: float
    g: float

    def as_dict(self) -> Dict[str, float]:
        return {"gamma_a": self.gamma_a, "gamma_b": self.gamma_b,
                "gamma_coll": self.gamma_coll, "g": self.g}


def collective_rates(t: Topology, phi: Optional[float] = None) -> Rates:
    """Individual, collective and exchange rates at leg phase φ."""
    t.check_uniform()
    ph = t.phi if phi is None else float(phi)
    xi = ph / t.leg
    a = np.asarray(t.positions_a)
    b = np.asarray(t.positions_b)
    ga = t.gamma_pt * abs(np.sum(np.exp(1j * xi * a))) ** 2
    gb = t.gamma_pt * abs(np.sum(np.exp(1j * xi * b))) ** 2
    sep = xi * np.abs(a[:, None] - b[None, :])
    return Rates(float(ga), float(gb), float(t.gamma_pt * np.sum(np.cos(sep))),
                 float(0.5 * t.gamma_pt * np.sum(np.sin(sep))))


def decoherence_free_points(t: Topology, phi_grid: Sequence[float]) -> List[float]:
    """Grid phases where max(Γ_a, Γ_b) < 1e-10 Γ_pt while |g| > 1e-6 Γ_pt."""
    out = []
    for ph in np.asarray(phi_grid, dtype=float):
        r = collective_rates(t, ph)
        if max(r.gamma_a, r.gamma_b) < DF_RATE_TOL * t.gamma_pt and abs(r.g) > DF_EXCHANGE_TOL * t.gamma_pt:
            out.append(float(ph))
    return out


def default_phi_grid(n: int = 1001) -> np.ndarray:
    """Uniform grid over [0, 2π] that contains π exactly for odd n."""
    return np.linspace(0.0, 2 * np.pi, n)
