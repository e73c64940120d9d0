"""Named adiabatic-passage experiments built on :mod:`qinterf.dynamics`.

Every run starts in |g⟩ and uses the full coupling convention. Default
pulses are Gaussians with Ω₀τ = 20 whose centres are 1.2τ apart.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .core import DecayRates, DegenerateDriveError, E, G, QuantumState, S, ValidationError
from .dynamics import (
    DEFAULT_TOL,
    Tolerances,
    Trajectory,
    adiabaticity_margin,
    evolve_master,
    evolve_schrodinger,
)
from .hamiltonians import assemble_hamiltonian, normalize_scheme
from .pulses import (
    DelayedCopy,
    Gaussian,
    PulsePair,
    PulseSum,
    instantaneous_detunings,
    pulse_area,
    validate_grid,
)

ORDERINGS = ("counterintuitive", "intuitive")
VARIANTS = ("standard", "fractional", "chirped")
ADIABATIC_THRESHOLD = 10.0


def gaussian_pair(omega0: float = 20.0, tau: float = 1.0, delay: float = 1.2,
                  ordering: str = "counterintuitive", delta1: float = 0.0,
                  delta2: float = 0.0, center: float = 0.0, **chirp) -> PulsePair:
    """Two equal Gaussians whose centres are ``delay`` apart."""
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}")
    first, second = center - 0.5 * delay, center + 0.5 * delay
    t_c, t_p = (first, second) if ordering == "counterintuitive" else (second, first)
    return PulsePair(Gaussian(omega0, t_p, tau), Gaussian(omega0, t_c, tau),
                     delta1=delta1, delta2=delta2, **chirp)


def default_grid(half_width: float = 3.0, n: int = 601, center: float = 0.0) -> np.ndarray:
    return np.linspace(center - half_width, center + half_width, n)


@dataclass(frozen=True)
class StirapScenario:
    """Pulse pair, grid, ordering and variant of one adiabatic-passage run."""

    pair: PulsePair = field(default_factory=gaussian_pair)
    grid: np.ndarray = field(default_factory=default_grid)
    ordering: str = "counterintuitive"
    variant: str = "standard"
    scheme: str = "lambda"
    theta_final: Optional[float] = None
    alpha_phase: float = 0.0
    rates: Optional[DecayRates] = None
    branching: object = None
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "scheme", normalize_scheme(self.scheme))
        object.__setattr__(self, "grid", validate_grid(self.grid))
        if self.ordering not in ORDERINGS:
            raise ValidationError(f"unknown ordering {self.ordering!r}")
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}")
        tp, tc = self.pair.t_P, self.pair.t_C
        if self.ordering == "counterintuitive" and not tc < tp:
            raise ValidationError("counterintuitive ordering needs t_C < t_P")
        if self.ordering == "intuitive" and not tp < tc:
            raise ValidationError("intuitive ordering needs t_P < t_C")
        if self.variant == "fractional" and self.theta_final is None:
            raise ValidationError("fractional variant needs theta_final")

    def detunings(self, t: float) -> Tuple[float, float]:
        """Diagonal detunings placed on |e⟩ and |s⟩ at time t."""
        if self.variant == "chirped":
            return instantaneous_detunings(self.pair, t, self.scheme)
        return self.pair.static_detunings(self.scheme)

    def hamiltonian(self, t: float) -> np.ndarray:
        d_e, d_s = self.detunings(t)
        return assemble_hamiltonian(self.scheme, d_e, d_s, self.pair.P(t), self.pair.C(t), "full")


def dark_state_series(pair: PulsePair, grid) -> np.ndarray:
    """Instantaneous dark state (Ω_C*|g⟩ − Ω_P|s⟩)/Ω_rms per grid point (Λ)."""
    p = np.asarray(pair.P(grid))
    c = np.asarray(pair.C(grid))
    rms = np.sqrt(np.abs(p) ** 2 + np.abs(c) ** 2)
    out = np.zeros((np.size(grid), 3), dtype=complex)
    ok = rms > 0
    out[ok, G] = np.conj(c[ok]) / rms[ok]
    out[ok, S] = -p[ok] / rms[ok]
    out[~ok, G] = 1.0
    return out


def bstirap_excited_population(pair: PulsePair, grid) -> np.ndarray:
    """Adiabatic P_e(t) = ½(1 − |Δ(t)|/√(4Ω_rms² + Δ(t)²)) along the bright path.

    The population is even in Δ, so |Δ| keeps the branch that starts in |g⟩
    for either sign.
    """
    g = validate_grid(grid)
    d, _ = instantaneous_detunings(pair, g)
    d = np.abs(d)
    rms = np.asarray(pair.omega_rms(g))
    root = np.sqrt(4 * rms ** 2 + d ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        pe = 0.5 * (1 - np.where(root > 0, d / np.where(root > 0, root, 1.0), 1.0))
    return pe


def run_stirap(s: StirapScenario) -> Trajectory:
    """Propagate ``s`` from |g⟩ and attach transfer diagnostics."""
    psi0 = QuantumState.basis("g")
    if s.rates is None:
        traj = evolve_schrodinger(s.hamiltonian, psi0, s.grid, s.tol)
        amps = traj.states
    else:
        traj = evolve_master(s.hamiltonian, s.rates, psi0, s.grid, s.tol, s.branching)
        amps = None
    p = traj.populations
    summary = traj.summary
    summary.update({
        "final_P_g": float(p[-1, G]),
        "final_P_e": float(p[-1, E]),
        "final_P_s": float(p[-1, S]),
        "max_P_e": float(p[:, E].max()),
        "adiabaticity_margin": adiabaticity_margin(s.pair, s.grid),
        "pulse_area": pulse_area(s.pair, s.grid),
        "ordering": s.ordering,
        "variant": s.variant,
    })
    if amps is not None and s.scheme == "lambda":
        dark = dark_state_series(s.pair, s.grid)
        proj = np.abs(np.einsum("ni,ni->n", dark.conj(), amps)) ** 2
        summary["dark_projection"] = proj
        summary["min_dark_projection"] = float(proj.min())
    return traj


# intuitive sequence at single-photon resonance

@dataclass
class IntuitiveResult:
    analytic: Tuple[float, float, float]
    numeric: Tuple[float, float, float]
    area: float
    margin: float
    trajectory: Trajectory


def intuitive_prediction(area: float) -> Tuple[float, float, float]:
    """(P_g, P_e, P_s) = (0, sin²A, cos²A)."""
    return 0.0, float(np.sin(area) ** 2), float(np.cos(area) ** 2)


def tuned_intuitive_scenario(target_area: float, omega_min: float = 100.0,
                             tau: float = 1.0, delay: float = 1.2,
                             half_width: Optional[float] = None,
                             n: int = 2001) -> StirapScenario:
    """Intuitive resonant scenario with area A = target + kπ.

    Adiabatic following needs a large area, and cos²A is π-periodic, so
    the smallest k giving Ω₀ ≥ ``omega_min`` is used.
    """
    hw = 3.0 * tau if half_width is None else half_width
    grid = default_grid(hw, n)
    unit = pulse_area(gaussian_pair(1.0, tau, delay, "intuitive"), grid)
    k = max(0, int(np.ceil((omega_min * unit - target_area) / np.pi)))
    omega0 = (target_area + k * np.pi) / unit
    pair = gaussian_pair(omega0, tau, delay, "intuitive")
    return StirapScenario(pair=pair, grid=grid, ordering="intuitive")


def run_intuitive_resonant(s: StirapScenario) -> IntuitiveResult:
    """Closed-form final populations next to the propagated ones."""
    if s.ordering != "intuitive":
        raise ValidationError("intuitive ordering required")
    d_e, d_s = s.pair.static_detunings(s.scheme)
    if d_e != 0 or d_s != 0 or s.variant == "chirped":
        raise ValidationError("single- and two-photon resonance required")
    margin = adiabaticity_margin(s.pair, s.grid)
    if not margin > ADIABATIC_THRESHOLD:
        raise ValidationError(f"adiabaticity margin {margin:.3g} below {ADIABATIC_THRESHOLD}")
    area = pulse_area(s.pair, s.grid)
    traj = run_stirap(s)
    fin = traj.final_populations
    return IntuitiveResult(intuitive_prediction(area), tuple(float(x) for x in fin),
                           area, margin, traj)


# fractional STIRAP

def fstirap_pair(theta: float, alpha: float = 0.0, omega0: float = 50.0,
                 tau: float = 1.0, tau_d: float = 1.0, t0: float = 0.0) -> PulsePair:
    """P = e^{iα}Ω₀ sinΘ·G(t₀+τ_d); C = Ω₀[G(t₀−τ_d) + cosΘ·G(t₀+τ_d)].

    Early on Ω_P/Ω_C → 0; late both decay with the same lobe, so
    Ω_P/Ω_C → e^{iα} tanΘ exactly once the first C lobe is clamped.
    """
    late = Gaussian(omega0, t0 + tau_d, tau)
    early = Gaussian(omega0, t0 - tau_d, tau)
    p = DelayedCopy(late, float(np.sin(theta)), 0.0, alpha)
    c = PulseSum((early, DelayedCopy(late, float(np.cos(theta)), 0.0, 0.0)))
    return PulsePair(p, c, t_P=t0 + tau_d, t_C=t0 - tau_d)


def fstirap_scenario(theta: float, alpha: float = 0.0, omega0: float = 50.0,
                     tau: float = 1.0, tau_d: float = 1.0, t0: float = 0.0,
                     half_width: float = 4.0, n: int = 801) -> StirapScenario:
    if not 0.0 <= theta <= np.pi / 2:
        raise ValidationError("F-STIRAP angle must lie in [0, π/2]")
    return StirapScenario(pair=fstirap_pair(theta, alpha, omega0, tau, tau_d, t0),
                          grid=default_grid(half_width * tau, n, t0),
                          variant="fractional", theta_final=theta, alpha_phase=alpha)


def _check_ratio(s: StirapScenario, theta: float, alpha: float) -> None:
    g = s.grid
    p0, c0 = s.pair.P(g[0]), s.pair.C(g[0])
    p1, c1 = s.pair.P(g[-1]), s.pair.C(g[-1])
    th0 = np.arctan2(abs(p0), abs(c0))
    th1 = np.arctan2(abs(p1), abs(c1))
    if th0 > 1e-2:
        raise ValidationError(f"Ω_P/Ω_C does not vanish early (θ = {th0:.3g})")
    if abs(th1 - theta) > 1e-3:
        raise ValidationError(f"late mixing angle {th1:.6g} differs from Θ = {theta:.6g}")
    if abs(p1) > 0 and abs(c1) > 0:
        ph = np.angle(p1 / c1)
        if abs(np.angle(np.exp(1j * (ph - alpha)))) > 1e-9:
            raise ValidationError("late Ω_P/Ω_C phase differs from α")


def fstirap_target(theta: float, alpha: float = 0.0) -> np.ndarray:
    """cosΘ|g⟩ − e^{iα} sinΘ|s⟩."""
    return np.array([np.cos(theta), 0.0, -np.exp(1j * alpha) * np.sin(theta)])


def run_fstirap(theta: float, alpha: float = 0.0,
                s: Optional[StirapScenario] = None) -> Trajectory:
    """Fractional transfer into cosΘ|g⟩ − e^{iα} sinΘ|s⟩."""
    if s is None:
        s = fstirap_scenario(theta, alpha)
    elif s.variant != "fractional":
        s = replace(s, variant="fractional", theta_final=theta, alpha_phase=alpha)
    _check_ratio(s, theta, alpha)
    traj = run_stirap(s)
    target = fstirap_target(theta, alpha)
    if traj.states.ndim == 2:
        fid = abs(np.vdot(target, traj.final_state)) ** 2
    else:
        fid = float(np.real(target.conj() @ traj.final_state @ target))
    traj.summary["fidelity"] = float(fid)
    traj.summary["target_state"] = [[z.real, z.imag] for z in target]
    return traj


# chirped STIRAP

def chirped_scenario(two_photon: float, omega0: float = 20.0, tau: float = 1.0,
                     delay: float = 1.2, chirp: Optional[float] = None,
                     half_width: float = 3.0, n: int = 601) -> StirapScenario:
    """Counterintuitive pair with equal chirps cancelling δ(t).

    With α_P = α_C = α, δ(t) = −δ + α(t_P − t_C), so α = δ/(t_P − t_C)
    keeps two-photon resonance for all t. Pass ``chirp=0`` for the
    unchirped reference.
    """
    base = gaussian_pair(omega0, tau, delay, "counterintuitive", 0.0, -two_photon)
    rate = two_photon / (base.t_P - base.t_C) if chirp is None else chirp
    pair = replace(base, alpha_P=rate, alpha_C=rate)
    return StirapScenario(pair=pair, grid=default_grid(half_width * tau, n), variant="chirped")


def cpt_populations(omega_p: float, omega_c: float) -> Tuple[float, float, float]:
    """(Ω_C², 0, Ω_P²)/Ω_rms² for the dark state."""
    r2 = abs(omega_p) ** 2 + abs(omega_c) ** 2
    if r2 == 0:
        raise DegenerateDriveError("Ω_rms = 0: no dark state")
    return abs(omega_c) ** 2 / r2, 0.0, abs(omega_p) ** 2 / r2
