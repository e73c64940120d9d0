"""Rabi-frequency envelopes and chirp-induced detunings.

Gaussians are clamped to exactly zero outside ±4τ of their centre. Chirped
pulses are evaluated at envelope level only; their carrier chirp enters the
dynamics through :func:`instantaneous_detunings`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
from scipy.integrate import simpson

from .core import ValidationError

GAUSSIAN_CUTOFF = 4.0

TimeLike = Union[float, np.ndarray]


def _out(v, t):
    return complex(v) if np.ndim(t) == 0 else v


class PulseShape:
    """Base class; subclasses are callables returning complex Ω(t)."""

    def __call__(self, t: TimeLike):
        raise NotImplementedError

    def __add__(self, other: "PulseShape") -> "PulseSum":
        return PulseSum((self, other))


def _check_amp(omega0, tau=None):
    if not np.isfinite(omega0) or omega0 < 0:
        raise ValidationError(f"peak Rabi frequency must be >= 0, got {omega0}")
    if tau is not None and not (np.isfinite(tau) and tau > 0):
        raise ValidationError(f"pulse width must be > 0, got {tau}")


@dataclass(frozen=True)
class Constant(PulseShape):
    omega0: float

    def __post_init__(self):
        _check_amp(self.omega0)

    def __call__(self, t):
        return _out(np.full(np.shape(t), self.omega0, dtype=complex), t)


@dataclass(frozen=True)
class Gaussian(PulseShape):
    """Ω₀·exp(−((t−t₀)/τ)²), zero beyond ``cutoff``·τ from t₀."""

    omega0: float
    t0: float
    tau: float
    cutoff: float = GAUSSIAN_CUTOFF

    def __post_init__(self):
        _check_amp(self.omega0, self.tau)

    def envelope(self, t):
        x = (np.asarray(t, dtype=float) - self.t0) / self.tau
        return np.where(np.abs(x) <= self.cutoff, self.omega0 * np.exp(-x * x), 0.0)

    def __call__(self, t):
        return _out(self.envelope(t).astype(complex), t)


@dataclass(frozen=True)
class ChirpedGaussian(Gaussian):
    """Gaussian envelope of a linearly chirped carrier (chirp rate α)."""

    alpha_chirp: float = 0.0


@dataclass(frozen=True)
class DelayedCopy(PulseShape):
    """β·base(t − τ_d)·exp(i·phase); ``phase`` stands for ω_L·τ_d."""

    base: PulseShape
    beta: float
    tau_delay: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValidationError(f"copy ratio must be >= 0, got {self.beta}")

    def __call__(self, t):
        v = self.beta * np.exp(1j * self.phase) * np.asarray(
            self.base(np.asarray(t, dtype=float) - self.tau_delay))
        return _out(v, t)


@dataclass(frozen=True)
class PulseSum(PulseShape):
    """Coherent sum of envelopes, e.g. a two-lobe coupling pulse."""

    terms: Tuple[PulseShape, ...]

    def __call__(self, t):
        total = np.zeros(np.shape(t), dtype=complex)
        for term in self.terms:
            total = total + np.asarray(term(t))
        return _out(total, t)


def eval_envelope(shape: PulseShape, t: TimeLike):
    """Complex Rabi frequency of ``shape`` at time(s) ``t``."""
    if not np.all(np.isfinite(t)):
        raise ValidationError("time must be finite")
    return shape(t)


def _centre(shape: PulseShape) -> float:
    return float(getattr(shape, "t0", 0.0))


@dataclass(frozen=True)
class PulsePair:
    """Probe (P) and coupling (C) envelopes plus static detunings and chirps.

    Centres ``t_P`` and ``t_C`` default to the envelope centres when the
    shapes expose one.
    """

    P: PulseShape
    C: PulseShape
    delta1: float = 0.0
    delta2: float = 0.0
    alpha_P: float = 0.0
    alpha_C: float = 0.0
    t_P: float = field(default=None)
    t_C: float = field(default=None)

    def __post_init__(self):
        if self.t_P is None:
            object.__setattr__(self, "t_P", _centre(self.P))
        if self.t_C is None:
            object.__setattr__(self, "t_C", _centre(self.C))

    def rabi(self, t: TimeLike):
        return eval_envelope(self.P, t), eval_envelope(self.C, t)

    def omega_rms(self, t: TimeLike):
        p, c = self.rabi(t)
        return np.sqrt(np.abs(p) ** 2 + np.abs(c) ** 2)

    def static_detunings(self, scheme: str = "lambda") -> Tuple[float, float]:
        """(Δ, δ) with δ = Δ₁ − Δ₂ (Λ), Δ₁ + Δ₂ (ladder) or Δ₂ (V)."""
        s = scheme.lower()
        if s == "lambda":
            return self.delta1, self.delta1 - self.delta2
        if s == "ladder":
            return self.delta1, self.delta1 + self.delta2
        if s == "vee":
            return self.delta1, self.delta2
        raise ValidationError(f"unknown scheme {scheme!r}")


def instantaneous_detunings(pair: PulsePair, t: TimeLike, scheme: str = "lambda"):
    """Chirped detunings Δ(t) = Δ − α_P(t−t_P), δ(t) = −δ + α_C(t−t_C) − α_P(t−t_P)."""
    big, small = pair.static_detunings(scheme)
    t = np.asarray(t, dtype=float)
    dp = pair.alpha_P * (t - pair.t_P)
    dc = pair.alpha_C * (t - pair.t_C)
    d1 = big - dp
    d2 = -small + dc - dp
    if d1.ndim == 0:
        return float(d1), float(d2)
    return d1, d2


def validate_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float).reshape(-1)
    if g.size < 2:
        raise ValidationError("time grid needs at least two points")
    if not np.all(np.isfinite(g)):
        raise ValidationError("time grid has non-finite points")
    if np.any(np.diff(g) <= 0):
        raise ValidationError("time grid must be strictly increasing")
    return g


def pulse_area(pair: PulsePair, grid) -> float:
    """A = ∫ √(|Ω_P|² + |Ω_C|²) dt by composite Simpson on ``grid``."""
    g = validate_grid(grid)
    return float(simpson(pair.omega_rms(g), x=g))
