"""Steady-state probe response of Λ, ladder and V atoms.

Closed forms use the half coupling convention (Ω/2 on the couplings,
detunings −Δ on |e⟩ and −δ on |s⟩). The numerical path builds the same
Hamiltonian, solves the master equation for dρ/dt = 0 and turns ρ_eg into
χ with the same prefactor, so both paths are directly comparable.

Physical constants are set to one internally: χ = −2 N|μ|² ρ_eg / Ω_P,
α = (ω_P n₀) Im χ and β = (ω_P n₀ / 2) Re χ. The Λ and ladder
coefficients keep the printed overall sign, so absorption appears as α ≤ 0;
window metrics use |α|.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .core import (
    DecayRates,
    DensityMatrix,
    E,
    G,
    NonUniqueSteadyStateError,
    PoleError,
    S,
    ValidationError,
)
from .dynamics import liouvillian, resolve_branching
from .hamiltonians import assemble_hamiltonian, normalize_scheme

STEADY_RESIDUAL_TOL = 1e-10
WEAK_PROBE_RATIO = 1e-2


@dataclass(frozen=True)
class EitParams:
    """Drive, detuning and decay parameters of one steady-state evaluation.

    ``delta1`` is the probe detuning (Δ, Δ₁ or Δ_P) and ``delta2`` the
    coupling detuning (Δ₂ or Δ_C). ``gamma_t`` defaults to 0.01·Γ_s and
    ``gamma_sg`` to Γ_s (closed V system).
    """

    scheme: str = "lambda"
    omega_p: float = 1e-3
    omega_c: float = 1.0
    delta1: float = 0.0
    delta2: float = 0.0
    gamma_g: float = 0.0
    gamma_e: float = 1.0
    gamma_s: float = 0.0
    gamma_t: Optional[float] = None
    gamma_sg: Optional[float] = None
    density: float = 1.0
    dipole: float = 1.0
    n0: float = 1.0
    omega_probe: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", normalize_scheme(self.scheme))
        for name in ("gamma_g", "gamma_e", "gamma_s", "density", "n0", "omega_probe"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if self.gamma_t is None:
            object.__setattr__(self, "gamma_t", 0.01 * self.gamma_s)
        if self.gamma_sg is None:
            object.__setattr__(self, "gamma_sg", self.gamma_s)
        if self.gamma_t < 0 or self.gamma_sg < 0:
            raise ValidationError("transit and branching rates must be >= 0")

    # derived quantities
    @property
    def two_photon(self) -> float:
        if self.scheme == "lambda":
            return self.delta1 - self.delta2
        if self.scheme == "ladder":
            return self.delta1 + self.delta2
        return self.delta1 - self.delta2

    @property
    def gamma1(self) -> float:
        return 0.5 * (self.gamma_g + self.gamma_e)

    @property
    def gamma3(self) -> float:
        return 0.5 * (self.gamma_g + self.gamma_s)

    @property
    def chi_scale(self) -> float:
        return self.density * abs(self.dipole) ** 2

    @property
    def optical_scale(self) -> float:
        return self.omega_probe * self.n0

    @property
    def kappa_scale(self) -> float:
        """N|μ|²ω_P n₀ in internal units."""
        return self.chi_scale * self.optical_scale

    @property
    def rates(self) -> DecayRates:
        return DecayRates(self.gamma_g, self.gamma_e, self.gamma_s, self.gamma_t)

    def at_two_photon(self, delta: float) -> "EitParams":
        """Copy with the probe moved so the two-photon detuning equals ``delta``."""
        if self.scheme == "ladder":
            return replace(self, delta1=delta - self.delta2)
        return replace(self, delta1=delta + self.delta2)


def hamiltonian(p: EitParams) -> np.ndarray:
    """Half-convention Hamiltonian matching the closed forms.

    The V coherence is written with the detunings entering as +Δ_P σ_ee and
    +Δ_C σ_ss, so the V Hamiltonian flips their sign.
    """
    if p.scheme == "vee":
        return assemble_hamiltonian("vee", -p.delta1, -p.delta2, p.omega_p, p.omega_c, "half")
    return assemble_hamiltonian(p.scheme, p.delta1, p.two_photon, p.omega_p, p.omega_c, "half")


def default_branching(scheme: str) -> np.ndarray:
    from .dynamics import cascade_branching, to_ground_branching
    return cascade_branching() if normalize_scheme(scheme) == "ladder" else to_ground_branching()


def steady_state(h: np.ndarray, rates: DecayRates, branching="ground") -> DensityMatrix:
    """Unique normalized fixed point of the master equation.

    The trace condition replaces the first row of the flattened 9×9
    generator. The default routes all decay into |g⟩; a purely lossy
    generator has no normalized fixed point and is rejected.
    """
    lv = liouvillian(h, rates, resolve_branching(branching))
    a = lv.copy()
    a[0, :] = 0.0
    a[0, [0, 4, 8]] = 1.0
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= 1e-13 * sv[0]:
        raise NonUniqueSteadyStateError("steady state is not unique")
    rhs = np.zeros(9, dtype=complex)
    rhs[0] = 1.0
    vec = np.linalg.solve(a, rhs)
    resid = float(np.linalg.norm(lv @ vec))
    if resid > STEADY_RESIDUAL_TOL:
        raise ValidationError(f"no normalized fixed point (residual {resid:.3e}); "
                              "is the decay trace preserving?")
    rho = vec.reshape(3, 3)
    asym = float(np.max(np.abs(rho - rho.conj().T)))
    if asym > 1e-10:
        raise ArithmeticError(f"steady state not Hermitian ({asym:.3e})")
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def numeric_rho_probe(p: EitParams, branching=None) -> complex:
    """Probe coherence from the numerical steady state (ρ_eg, or ρ_ge for V)."""
    b = default_branching(p.scheme) if branching is None else branching
    rho = steady_state(hamiltonian(p), p.rates, b).entries
    return complex(rho[G, E] if p.scheme == "vee" else rho[E, G])


# Λ scheme

def _lambda_terms(p: EitParams, literal: bool):
    d, big = p.two_photon, p.delta1
    g1, g3, oc2 = p.gamma1, p.gamma3, abs(p.omega_c) ** 2
    z = (d * big - g1 * g3 - oc2 / 4) ** 2 + (g3 * big + g1 * d) ** 2
    if z == 0:
        raise PoleError("Z = 0 in the Λ coherence", where=d)
    re = d * d * big + g3 * g3 * big - d * oc2 / 4
    im = g1 * d * d + (g1 * g1 * g3 * g3 if literal else g1 * g3 * g3) + g3 * oc2 / 4
    return z, re, im


def rho_eg_lambda(p: EitParams, literal: bool = False) -> complex:
    """Steady-state ρ_eg = (Ω_P/2Z)[−(δ²Δ + γ₃²Δ − δΩ_C²/4) + i(γ₁δ² + γ₁γ₃² + γ₃Ω_C²/4)].

    ``literal=True`` uses the printed γ₁²γ₃² coefficient, which agrees with
    the weak-probe master equation only when γ₃ = 0 or γ₁ = 1.
    """
    z, re, im = _lambda_terms(p, literal)
    return p.omega_p / (2 * z) * complex(-re, im)


def alpha_beta_lambda(p: EitParams, literal: bool = False) -> Tuple[float, float]:
    """Closed-form (α, β); ``literal`` uses the printed γ₁²γ₃³ term."""
    d = p.two_photon
    g1, g3, oc2 = p.gamma1, p.gamma3, abs(p.omega_c) ** 2
    z, re, im = _lambda_terms(p, False)
    if literal:
        im = g1 * d * d + g1 * g1 * g3 ** 3 + g3 * oc2 / 4
    k = p.kappa_scale
    return -k * im / z, k * re / (2 * z)


# ladder scheme

def _ladder_y(p: EitParams, literal: bool) -> float:
    d, d1 = p.two_photon, p.delta1
    ge, gs = p.gamma_e, p.gamma_s
    if literal:
        y = (4 * d * d1 - ge * gs - abs(p.omega_p) ** 2) ** 2 - 4 * (gs * d1 + ge * d) ** 2
    else:
        y = (4 * d * d1 - ge * gs - abs(p.omega_c) ** 2) ** 2 + 4 * (gs * d1 + ge * d) ** 2
    if y == 0:
        raise PoleError("Y = 0 in the ladder response", where=d)
    return y


def rho_eg_ladder(p: EitParams) -> complex:
    """Weak-probe ladder coherence −Ω_P(2δ + iΓ_s)·conj(D)/Y with
    D = (2Δ₁ + iΓ_e)(2δ + iΓ_s) − Ω_C²."""
    d, d1 = p.two_photon, p.delta1
    y = _ladder_y(p, False)
    den = complex(2 * d1, p.gamma_e) * complex(2 * d, p.gamma_s) - abs(p.omega_c) ** 2
    return -p.omega_p * complex(2 * d, p.gamma_s) * den.conjugate() / y


def alpha_beta_ladder(p: EitParams, literal: bool = False) -> Tuple[float, float]:
    """α = −κ[8δ²Γ_e + 2Γ_s(Ω_C² + Γ_eΓ_s)]/Y,
    β = κ[−4δΩ_C² + 16δ²Δ₁ + 4Δ₁Γ_s²]/(2Y).

    ``literal=True`` uses the printed Y (with |Ω_P|² and a minus sign) and
    the printed 16δ²Δ₂ dispersion term.
    """
    d, d1, d2 = p.two_photon, p.delta1, p.delta2
    ge, gs, oc2 = p.gamma_e, p.gamma_s, abs(p.omega_c) ** 2
    y = _ladder_y(p, literal)
    k = p.kappa_scale
    alpha = -k * (8 * d * d * ge + 2 * gs * (oc2 + ge * gs)) / y
    shift = d2 if literal else d1
    beta = k * (-4 * d * (oc2 - 4 * d * shift) + 4 * d1 * gs * gs) / (2 * y)
    return alpha, beta


# V scheme

@dataclass(frozen=True)
class VeeCoefficients:
    k0: complex
    k1: complex
    k2: complex
    k3: float
    s: float
    gamma: float
    rho_ss: float
    rho_gg: float


def vee_coefficients(p: EitParams) -> VeeCoefficients:
    dp, dc = p.delta1, p.delta2
    gs_, gt, gsg = p.gamma_s, p.gamma_t, p.gamma_sg
    g_ge = 0.5 * (p.gamma_g + p.gamma_e)
    g_gs = 0.5 * (p.gamma_g + p.gamma_s)
    g_es = 0.5 * (p.gamma_e + p.gamma_s)
    if gs_ <= 0 or g_gs <= 0:
        raise PoleError("V-type populations need Γ_s > 0", where=gs_)
    k0 = complex(dp - dc, g_es)
    k1 = complex(dp, g_ge)
    k2 = complex(dc, -g_gs)
    s = (abs(p.omega_c) ** 2 / (g_gs * gs_)) / (1 + (dc / g_gs) ** 2)
    if gs_ - gsg == 0:
        gam = 0.0
    elif gt == 0:
        if s != 0:
            raise PoleError("open V system needs Γ_t > 0", where=gt)
        gam = 0.0
    else:
        gam = (gs_ - gsg) / gt
    k3 = 2 * (1 + gt / gs_ + s * (1 + gam / 2))
    return VeeCoefficients(k0, k1, k2, k3, s, gam, s / k3, (2 + s + 2 * gt / gs_) / k3)


def rho_ge_vee(p: EitParams) -> complex:
    """ρ_ge = Ω_P[ρ_ss Ω_C² + ρ_gg(4K₀K₂ − Ω_C²)] / (2K₂(4K₀K₁ − Ω_C²))."""
    c = vee_coefficients(p)
    oc2 = abs(p.omega_c) ** 2
    den = 2 * c.k2 * (4 * c.k0 * c.k1 - oc2)
    if den == 0:
        raise PoleError("pole in the V-type coherence", where=p.two_photon)
    return p.omega_p * (c.rho_ss * oc2 + c.rho_gg * (4 * c.k0 * c.k2 - oc2)) / den


# susceptibility and coefficients

def probe_coherence(p: EitParams, literal: bool = False) -> complex:
    if p.scheme == "lambda":
        return rho_eg_lambda(p, literal)
    if p.scheme == "ladder":
        return rho_eg_ladder(p)
    return rho_ge_vee(p)


def chi_from_rho(p: EitParams, rho: complex) -> complex:
    """χ = −2N|μ|²ρ/Ω_P."""
    if p.omega_p == 0:
        raise PoleError("Ω_P = 0: susceptibility undefined", where=0.0)
    return -2 * p.chi_scale * rho / p.omega_p


def susceptibility(p: EitParams, literal: bool = False) -> complex:
    return chi_from_rho(p, probe_coherence(p, literal))


def susceptibility_lambda(p: EitParams, literal: bool = False) -> complex:
    if p.scheme != "lambda":
        raise ValidationError("Λ scheme required")
    return susceptibility(p, literal)


def alpha_beta_from_chi(p: EitParams, chi: complex) -> Tuple[float, float]:
    """α = ω_P n₀ Im χ, β = ½ ω_P n₀ Re χ."""
    k = p.optical_scale
    return k * chi.imag, 0.5 * k * chi.real


def alpha_beta(p: EitParams, scheme: Optional[str] = None, literal: bool = False) -> Tuple[float, float]:
    """Closed-form absorption and dispersion coefficients."""
    sch = normalize_scheme(scheme) if scheme is not None else p.scheme
    if sch != p.scheme:
        p = replace(p, scheme=sch)
    if sch == "lambda":
        return alpha_beta_lambda(p, literal)
    if sch == "ladder":
        return alpha_beta_ladder(p, literal)
    return alpha_beta_from_chi(p, susceptibility(p))


# scans

@dataclass
class Spectrum:
    """Two-photon detuning grid with χ, α and β per point."""

    delta_grid: np.ndarray
    chi: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    alpha_at_zero: float = float("nan")
    dip_width: Optional[float] = None
    errors: List[Tuple[float, str]] = field(default_factory=list)

    @property
    def absorption(self) -> np.ndarray:
        return np.abs(self.alpha)


def transparency_scan(p: EitParams, delta_grid, method: str = "analytic",
                      literal: bool = False) -> Spectrum:
    """Scan the probe so the two-photon detuning runs over ``delta_grid``.

    ``method="numeric"`` takes ρ from :func:`steady_state`; α and β then
    follow from χ. Points that hit a pole become NaN and are listed in
    ``errors``.
    """
    grid = np.asarray(delta_grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValidationError("detuning grid is empty")
    if method not in ("analytic", "numeric"):
        raise ValidationError(f"unknown method {method!r}")
    chi = np.full(grid.size, np.nan + 0j)
    alpha = np.full(grid.size, np.nan)
    beta = np.full(grid.size, np.nan)
    errors = []
    for i, d in enumerate(grid):
        q = p.at_two_photon(float(d))
        try:
            if method == "numeric":
                chi[i] = chi_from_rho(q, numeric_rho_probe(q))
                alpha[i], beta[i] = alpha_beta_from_chi(q, chi[i])
            else:
                chi[i] = susceptibility(q, literal)
                alpha[i], beta[i] = alpha_beta(q, literal=literal)
        except PoleError as exc:
            errors.append((float(d), str(exc)))
    try:
        a0 = alpha_beta(p.at_two_photon(0.0), literal=literal)[0]
    except PoleError:
        a0 = float("nan")
    spec = Spectrum(grid, chi, alpha, beta, float(a0), None, errors)
    spec.dip_width = dip_width(spec)
    return spec


def _local_maxima(y: np.ndarray) -> np.ndarray:
    idx = np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    return idx


def absorption_peaks(spec: Spectrum) -> np.ndarray:
    """Detunings of local |α| maxima, refined by parabolic interpolation."""
    x, y = spec.delta_grid, spec.absorption
    out = []
    for i in _local_maxima(y):
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        den = (x0 - x1) * (x0 - x2) * (x1 - x2)
        a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
        b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den
        out.append(-b / (2 * a) if a < 0 else x1)
    return np.array(out)


def peak_splitting(spec: Spectrum) -> Optional[float]:
    """Distance between the two strongest absorption peaks."""
    peaks = absorption_peaks(spec)
    if peaks.size < 2:
        return None
    y = np.interp(peaks, spec.delta_grid, spec.absorption)
    top = np.sort(peaks[np.argsort(y)[-2:]])
    return float(top[1] - top[0])


def dip_width(spec: Spectrum) -> Optional[float]:
    """Full width of the transparency dip around δ = 0 at half its depth.

    The depth is measured from the dip minimum to the lower of the two
    flanking |α| maxima. Returns None when no dip straddles δ = 0.
    """
    x, y = spec.delta_grid, spec.absorption
    if np.any(~np.isfinite(y)) or x.size < 5:
        return None
    peaks = _local_maxima(y)
    left = peaks[x[peaks] < 0]
    right = peaks[x[peaks] > 0]
    if left.size == 0 or right.size == 0:
        return None
    il, ir = left[-1], right[0]
    imin = il + int(np.argmin(y[il:ir + 1]))
    level = 0.5 * (y[imin] + min(y[il], y[ir]))

    def crossing(i_from, i_to, step):
        i = i_from
        while i != i_to and y[i] < level:
            i += step
        j = i - step
        return x[j] + (level - y[j]) * (x[i] - x[j]) / (y[i] - y[j])

    return float(crossing(imin, ir, 1) - crossing(imin, il, -1))
