"""RWA Hamiltonians for Λ, ladder and V atoms and their analytic eigensystems.

Two coupling conventions are supported. ``full`` puts Ω on the coupling
terms; ``half`` puts Ω/2 there. Detunings sit on the diagonal with a minus
sign in both. A given physical coupling therefore reads
Ω_full = Ω_half / 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

from .core import (
    DegenerateDriveError,
    E,
    G,
    NORM_TOL,
    PoleError,
    QuantumState,
    S,
    ValidationError,
)

SCHEMES = ("lambda", "ladder", "vee")
_ALIASES = {
    "lambda": "lambda", "Λ": "lambda", "l": "lambda",
    "ladder": "ladder", "xi": "ladder", "Ξ": "ladder", "cascade": "ladder",
    "vee": "vee", "v": "vee",
}
CONVENTIONS = ("full", "half")


def normalize_scheme(scheme: str) -> str:
    key = scheme if scheme in _ALIASES else str(scheme).lower()
    if key not in _ALIASES:
        raise ValidationError(f"unknown scheme {scheme!r}")
    return _ALIASES[key]


def _convention(convention: str) -> str:
    c = str(convention).lower()
    if c not in CONVENTIONS:
        raise ValidationError(f"unknown coupling convention {convention!r}")
    return c


def half_to_full(omega_half: complex) -> complex:
    """Full-convention coupling equal to a half-convention Ω."""
    return omega_half / 2


def full_to_half(omega_full: complex) -> complex:
    return 2 * omega_full


@dataclass(frozen=True)
class SchemeConfig:
    """Instantaneous scheme parameters.

    ``delta`` is the two-photon detuning: Δ₁ − Δ₂ for Λ, Δ₁ + Δ₂ for the
    ladder. For V the second detuning Δ₂ is placed on |s⟩ directly.
    """

    scheme: str = "lambda"
    delta1: float = 0.0
    delta2: float = 0.0
    omega_p: complex = 0.0
    omega_c: complex = 0.0
    convention: str = "full"

    def __post_init__(self):
        object.__setattr__(self, "scheme", normalize_scheme(self.scheme))
        object.__setattr__(self, "convention", _convention(self.convention))
        for name in ("delta1", "delta2", "omega_p", "omega_c"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")

    @property
    def delta(self) -> float:
        if self.scheme == "lambda":
            return self.delta1 - self.delta2
        if self.scheme == "ladder":
            return self.delta1 + self.delta2
        return self.delta2


def assemble_hamiltonian(scheme: str, d_e: float, d_s: float,
                         omega_p: complex, omega_c: complex,
                         convention: str = "full") -> np.ndarray:
    """H = −[d_e σ_ee + d_s σ_ss] − k[Ω_P σ_P + Ω_C σ_C + h.c.], k ∈ {1, 1/2}."""
    scheme = normalize_scheme(scheme)
    k = 1.0 if _convention(convention) == "full" else 0.5
    h = np.zeros((3, 3), dtype=complex)
    h[E, E] = -d_e
    h[S, S] = -d_s
    p = -k * omega_p
    c = -k * omega_c
    h[E, G] = p
    h[G, E] = np.conj(p)
    if scheme == "lambda":      # σ_es = |e⟩⟨s|
        h[E, S] = c
        h[S, E] = np.conj(c)
    elif scheme == "ladder":    # σ_se = |s⟩⟨e|
        h[S, E] = c
        h[E, S] = np.conj(c)
    else:                       # σ_sg = |s⟩⟨g|
        h[S, G] = c
        h[G, S] = np.conj(c)
    return h


def build_hamiltonian(config: SchemeConfig) -> np.ndarray:
    """Hermitian 3×3 interaction-picture Hamiltonian (ħ = 1)."""
    return assemble_hamiltonian(config.scheme, config.delta1, config.delta,
                                config.omega_p, config.omega_c, config.convention)


@dataclass(frozen=True)
class MixingAngles:
    """θ and φ; iterates as (θ, φ). ``degenerate`` marks Ω_P = Ω_C = 0."""

    theta: Union[float, np.ndarray]
    phi: Union[float, np.ndarray]
    degenerate: Union[bool, np.ndarray] = False

    def __iter__(self) -> Iterator:
        yield self.theta
        yield self.phi


def mixing_angles(omega_p, omega_c, delta, convention: str = "half") -> MixingAngles:
    """θ = atan2(Ω_P, Ω_C); φ = ½·atan2(Ω_rms, Δ) with 0 ≤ φ ≤ π/2.

    With ``convention="full"`` the Ω_rms in φ is doubled, which makes the
    angle form of the bright states coincide with the eigenvectors of the
    full-convention Hamiltonian.
    """
    p = np.abs(np.asarray(omega_p, dtype=complex))
    c = np.abs(np.asarray(omega_c, dtype=complex))
    d = np.asarray(delta, dtype=float)
    rms = np.hypot(p, c)
    scale = 2.0 if _convention(convention) == "full" else 1.0
    theta = np.arctan2(p, c)
    phi = 0.5 * np.arctan2(scale * rms, d)
    degenerate = rms == 0
    if theta.ndim == 0:
        return MixingAngles(float(theta), float(phi), bool(degenerate))
    return MixingAngles(theta, phi, degenerate)


def states_from_angles(theta: float, phi: float) -> Tuple[QuantumState, QuantumState, QuantumState]:
    """(B₊, D, B₋) in the (g, e, s) basis from the mixing angles."""
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    b_plus = QuantumState(np.array([st * sp, cp, ct * sp]))
    dark = QuantumState(np.array([ct, 0.0, -st]))
    b_minus = QuantumState(np.array([st * cp, -sp, ct * cp]))
    return b_plus, dark, b_minus


@dataclass(frozen=True)
class Eigensystem:
    """CPT eigensystem of −[[0, Ω_P, 0], [Ω_P, Δ, Ω_C], [0, Ω_C, 0]].

    ``bright_plus``/``bright_minus`` belong to λ₊/λ₋. Because of the overall
    minus sign, the angle form (:func:`states_from_angles`) labels them the
    other way round: angle-B₋ equals ``bright_plus`` and angle-B₊ equals
    ``bright_minus``. ``phi`` is the full-convention angle.
    """

    lambda0: float
    lambda_plus: float
    lambda_minus: float
    dark: QuantumState
    bright_plus: QuantumState
    bright_minus: QuantumState
    theta: float
    phi: float
    omega_rms: float
    omega_bar: float
    delta: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.lambda_minus, self.lambda0, self.lambda_plus])

    def matrix(self) -> np.ndarray:
        """Columns (B₋, D, B₊) of the eigenvector form."""
        return np.column_stack([self.bright_minus.amplitudes, self.dark.amplitudes,
                                self.bright_plus.amplitudes])


def cpt_hamiltonian(omega_p: float, omega_c: float, delta: float) -> np.ndarray:
    return assemble_hamiltonian("lambda", delta, 0.0, omega_p, omega_c, "full")


def eigensystem_cpt(omega_p: float, omega_c: float, delta: float = 0.0) -> Eigensystem:
    """Closed-form dark/bright eigensystem at two-photon resonance."""
    op, oc, d = float(omega_p), float(omega_c), float(delta)
    rms = float(np.hypot(op, oc))
    if rms == 0.0:
        raise DegenerateDriveError("Ω_P = Ω_C = 0: dark state undefined")
    obar = float(np.sqrt(rms * rms + 0.25 * d * d))
    # λ₊λ₋ = −Ω_rms²; take the root without cancellation first
    if d >= 0:
        lm = -0.5 * d - obar
        lp = -rms * rms / lm
    else:
        lp = -0.5 * d + obar
        lm = -rms * rms / lp
    dark = QuantumState(np.array([oc, 0.0, -op]) / rms)

    def bright(lam):
        v = np.array([op, -lam, oc])
        return QuantumState(v / np.sqrt(rms * rms + lam * lam))

    eig = Eigensystem(
        lambda0=0.0, lambda_plus=lp, lambda_minus=lm, dark=dark,
        bright_plus=bright(lp), bright_minus=bright(lm),
        theta=float(np.arctan2(op, oc)), phi=float(0.5 * np.arctan2(2 * rms, d)),
        omega_rms=rms, omega_bar=obar, delta=d,
    )
    h = cpt_hamiltonian(op, oc, d)
    resid = np.linalg.norm(h @ dark.amplitudes)
    if resid > 1e-12 * max(1.0, np.linalg.norm(h)):
        raise ArithmeticError(f"dark-state residual {resid:.3e} exceeds tolerance")
    return eig


def eigensystem_vee(omega_p: float, omega_c: float, delta: float = 0.0) -> Eigensystem:
    """V-type eigensystem for Δ₁ = Δ₂ = Δ by relabelling the Λ result.

    The common level |g⟩ plays the intermediate role, so the dark state is
    (Ω_C|e⟩ − Ω_P|s⟩)/Ω_rms. Eigenvalues are shifted by −Δ.
    """
    lam = eigensystem_cpt(omega_p, omega_c, -delta)
    perm = [1, 0, 2]

    def relabel(st: QuantumState) -> QuantumState:
        return QuantumState(st.amplitudes[perm])

    return Eigensystem(
        lambda0=lam.lambda0 - delta, lambda_plus=lam.lambda_plus - delta,
        lambda_minus=lam.lambda_minus - delta, dark=relabel(lam.dark),
        bright_plus=relabel(lam.bright_plus), bright_minus=relabel(lam.bright_minus),
        theta=lam.theta, phi=lam.phi, omega_rms=lam.omega_rms,
        omega_bar=lam.omega_bar, delta=float(delta),
    )


def autler_townes_levels(omega_g: float, omega_e: float, omega: float) -> list:
    """{ω_g ± Ω/2, ω_e ± Ω/2}, sorted ascending."""
    if omega < 0:
        raise ValidationError("Rabi frequency must be >= 0")
    h = 0.5 * omega
    return sorted([omega_g - h, omega_g + h, omega_e - h, omega_e + h])


def adiabatic_to_diabatic(eig: Union[Eigensystem, Sequence[float]], a) -> QuantumState:
    """c = R·a with R columns (B₋, D, B₊) of the angle form.

    ``eig`` may be an :class:`Eigensystem` or a ``(θ, φ)`` pair. ``a`` holds
    the adiabatic amplitudes (a₋, a₀, a₊).
    """
    theta, phi = (eig.theta, eig.phi) if isinstance(eig, Eigensystem) else eig
    amp = np.asarray(a.amplitudes if isinstance(a, QuantumState) else a, dtype=complex)
    if amp.shape != (3,):
        raise ValidationError("adiabatic amplitudes must have length 3")
    if abs(np.sum(np.abs(amp) ** 2) - 1.0) > NORM_TOL:
        raise ValidationError("adiabatic amplitudes are not normalized")
    b_plus, dark, b_minus = states_from_angles(theta, phi)
    r = np.column_stack([b_minus.amplitudes, dark.amplitudes, b_plus.amplitudes])
    return QuantumState(r @ amp)


def adiabatic_elimination_ce(c_g: complex, c_s: complex, omega_p: float,
                             omega_c: float, delta: float, gamma_e: float) -> complex:
    """c_e ≈ (Ω_P c_g + Ω_C c_s)/(Δ + iΓ_e) in the dispersive regime."""
    den = complex(delta, gamma_e)
    if den == 0:
        raise PoleError("Δ + iΓ_e = 0: adiabatic elimination is singular", where=(delta, gamma_e))
    return (omega_p * c_g + omega_c * c_s) / den
