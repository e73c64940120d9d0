"""Coherence, visibility and atom-interferometer pulse algebra.

Two-level pulse matrices act on (c_g, c_s). A pulse of area θ and laser
phase φ is

    R(θ, φ) = [[cos θ/2, −e^{iφ} sin θ/2], [e^{−iφ} sin θ/2, cos θ/2]],

so the amplitude transferred into |s⟩ picks up e^{−iφ}. Free evolution
between pulses is diag(e^{−iφ_g}, e^{−iφ_e}). ħ = 1 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .core import PoleError, QInterfError, ValidationError

G2_TOL = 1e-9


class UndefinedVisibilityError(QInterfError, ZeroDivisionError):
    """Raised when I_max + I_min (or I₁ + I₂) vanishes."""


@dataclass(frozen=True)
class FringeInputs:
    I1: float
    I2: float
    g1: complex = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.I1 < 0 or self.I2 < 0:
            raise ValidationError("intensities must be >= 0")
        if abs(self.g1) > 1 + 1e-12:
            raise ValidationError("|g1| must not exceed 1")


def fringe_intensity(f: FringeInputs) -> float:
    """I = I₁ + I₂ + 2√(I₁I₂)|g1| cos(phase)."""
    return float(f.I1 + f.I2 + 2 * np.sqrt(f.I1 * f.I2) * abs(f.g1) * np.cos(f.phase))


def visibility(i_max: float, i_min: float) -> float:
    """(I_max − I_min)/(I_max + I_min)."""
    if i_min < 0 or i_max < i_min:
        raise ValidationError("need I_max >= I_min >= 0")
    if i_max + i_min == 0:
        raise UndefinedVisibilityError("I_max + I_min = 0")
    return (i_max - i_min) / (i_max + i_min)


def visibility_from_g1(i1: float, i2: float, g1_abs: float) -> float:
    """|g1|·2√(I₁I₂)/(I₁ + I₂)."""
    if i1 < 0 or i2 < 0:
        raise ValidationError("intensities must be >= 0")
    if i1 + i2 == 0:
        raise UndefinedVisibilityError("I₁ + I₂ = 0")
    return float(abs(g1_abs) * 2 * np.sqrt(i1 * i2) / (i1 + i2))


def g2_classify(g2_zero: float, tol: float = G2_TOL) -> str:
    """Photon statistics class from g⁽²⁾(0)."""
    if g2_zero < 0:
        raise ValidationError("g2(0) must be >= 0")
    if abs(g2_zero - 1.0) <= tol:
        return "coherent"
    return "bunched" if g2_zero > 1 else "nonclassical (antibunched)"


def rotation_pulse(theta: float, phi_laser: float = 0.0) -> np.ndarray:
    """2×2 pulse matrix R(θ, φ) on (c_g, c_s)."""
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    return np.array([[c, -np.exp(1j * phi_laser) * s],
                     [np.exp(-1j * phi_laser) * s, c]], dtype=complex)


def free_evolution(phi_g: float, phi_e: float) -> np.ndarray:
    """diag(e^{−iφ_g}, e^{−iφ_e}) with φ_i = T·E_i."""
    return np.diag([np.exp(-1j * phi_g), np.exp(-1j * phi_e)])


@dataclass(frozen=True)
class PulseSequence:
    """Ordered (θ, φ_laser) pulses; ``free[k]`` = (φ_g, φ_e) after pulse k."""

    pulses: Tuple[Tuple[float, float], ...]
    free: Tuple[Tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(tuple(map(float, p)) for p in self.pulses))
        object.__setattr__(self, "free", tuple(tuple(map(float, f)) for f in self.free))
        if not self.pulses:
            raise ValidationError("pulse sequence is empty")
        for theta, _ in self.pulses:
            if not 0 <= theta < 2 * np.pi:
                raise ValidationError(f"pulse angle {theta} outside [0, 2π)")
        if len(self.free) > len(self.pulses) - 1:
            raise ValidationError("more free-evolution steps than pulse gaps")

    def unitary(self) -> np.ndarray:
        u = np.eye(2, dtype=complex)
        for k, (theta, phi) in enumerate(self.pulses):
            u = rotation_pulse(theta, phi) @ u
            if k < len(self.free):
                u = free_evolution(*self.free[k]) @ u
        return u

    def apply(self, psi=(1.0, 0.0)) -> np.ndarray:
        return self.unitary() @ np.asarray(psi, dtype=complex)

    def excited_probability(self, psi=(1.0, 0.0)) -> float:
        return float(abs(self.apply(psi)[1]) ** 2)


def mz_probability(phi1: float, phi2: float, phi3: float) -> float:
    """Mach-Zehnder P_s = ½[1 − cos(φ₁ − 2φ₂ + φ₃)]."""
    return 0.5 * (1 - np.cos(phi1 - 2 * phi2 + phi3))


def mz_probability_matrix(phi1: float, phi2: float, phi3: float) -> float:
    """P_s from the π/2 – π – π/2 matrix product applied to |g⟩."""
    seq = PulseSequence(((np.pi / 2, phi1), (np.pi, phi2), (np.pi / 2, phi3)))
    return seq.excited_probability()


def ramsey_probability(phi_e: float, phi_g: float, phi1: float, phi2: float) -> float:
    """Ramsey P_s = ½[1 + cos(φ_e − φ_g + φ₁ − φ₂)]."""
    return 0.5 * (1 + np.cos(phi_e - phi_g + phi1 - phi2))


def ramsey_probability_matrix(phi_e: float, phi_g: float, phi1: float, phi2: float) -> float:
    """P_s from π/2 – free – π/2 applied to |g⟩."""
    seq = PulseSequence(((np.pi / 2, phi1), (np.pi / 2, phi2)), ((phi_g, phi_e),))
    return seq.excited_probability()


def gravity_phase(k_eff: float, a: float, T: float) -> float:
    """Δφ = k_eff·a·T²."""
    if T < 0:
        raise ValidationError("interrogation time must be >= 0")
    return k_eff * a * T * T


def bragg_angles(lambda_l: float, lambda_db: float, n_max: int) -> Dict[int, Optional[float]]:
    """θ_n = arcsin(n λ_dB/λ_L) for n = 1..n_max; None where no order exists."""
    if lambda_l <= 0 or lambda_db <= 0:
        raise ValidationError("wavelengths must be > 0")
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    out: Dict[int, Optional[float]] = {}
    for n in range(1, int(n_max) + 1):
        x = n * lambda_db / lambda_l
        out[n] = float(np.arcsin(x)) if x <= 1 else None
    return out


def raman_kick(p: float, k1: float, k2: float, hbar: float = 1.0) -> float:
    """p + ħ(k₁ − k₂)."""
    return p + hbar * (k1 - k2)


def lattice_potential_depth(omega0: float, delta: float) -> Tuple[float, float]:
    """(Ω₀²/4Δ, Ω₀²/8Δ): light-shift amplitude and lattice depth V₀."""
    if delta == 0:
        raise PoleError("Δ = 0: resonant light shift diverges", where=delta)
    w = abs(omega0) ** 2
    return w / (4 * delta), w / (8 * delta)
