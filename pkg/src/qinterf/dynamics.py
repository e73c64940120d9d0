"""Time propagation of pure states and density matrices, plus the two-level
Rabi solution and the adiabaticity monitor.

The master equation is dρ/dt = −i[H, ρ] − ½{Γ̂, ρ} with Γ̂ = diag(Γ_g, Γ_e, Γ_s).
By default decayed population is lost, so the trace falls. Passing a
``branching`` matrix b adds jump terms √(Γ_m b_mk)|k⟩⟨m|; b[m, k] is the
fraction of Γ_m that lands in |k⟩, and b[g, g] = 1 turns Γ_g into pure
dephasing of the ground level.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    DecayRates,
    DensityMatrix,
    E,
    G,
    IntegrationError,
    QuantumState,
    S,
    ValidationError,
    density_from_pure,
)
from .pulses import PulsePair, validate_grid

HamiltonianFn = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class Tolerances:
    """Adaptive embedded Runge-Kutta settings."""

    rtol: float = 1e-9
    atol: float = 1e-12
    method: str = "DOP853"
    max_step: float = np.inf

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, rtol=self.rtol * factor, atol=self.atol * factor)

    def as_dict(self) -> dict:
        return {"rtol": self.rtol, "atol": self.atol, "method": self.method,
                "max_step": None if not np.isfinite(self.max_step) else self.max_step}


DEFAULT_TOL = Tolerances()


@dataclass
class Trajectory:
    """Grid, per-time states and populations, and summary scalars."""

    times: np.ndarray
    states: np.ndarray
    populations: np.ndarray
    summary: dict = field(default_factory=dict)

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def max_excited(self) -> float:
        return float(np.max(self.populations[:, E]))


def _as_hfun(h) -> HamiltonianFn:
    if callable(h):
        return h
    m = np.asarray(h, dtype=complex)
    return lambda t: m


def _integrate(rhs, y0, grid, tol: Tolerances):
    sol = solve_ivp(rhs, (grid[0], grid[-1]), y0, method=tol.method, t_eval=grid,
                    rtol=tol.rtol, atol=tol.atol, max_step=tol.max_step)
    if sol.status != 0 or sol.y.shape[1] != grid.size:
        last = float(sol.t[-1]) if sol.t.size else float(grid[0])
        raise IntegrationError(f"integration failed: {sol.message}", last)
    return sol


def evolve_schrodinger(h_of_t, psi0, grid, tol: Tolerances = DEFAULT_TOL,
                       estimate_error: bool = False) -> Trajectory:
    """Solve i dψ/dt = H(t)ψ and sample ψ on ``grid``.

    With ``estimate_error`` the run is repeated at ten times looser
    tolerances and the largest final-population change is reported as
    ``error_estimate``.
    """
    g = validate_grid(grid)
    psi = psi0 if isinstance(psi0, QuantumState) else QuantumState(np.asarray(psi0))
    if not psi.is_normalized():
        raise ValidationError("initial state is not normalized")
    hf = _as_hfun(h_of_t)

    def rhs(t, y):
        return -1j * (hf(t) @ y)

    sol = _integrate(rhs, psi.amplitudes.copy(), g, tol)
    states = sol.y.T
    pops = np.abs(states) ** 2
    norms = pops.sum(axis=1)
    summary = {
        "final_populations": pops[-1].tolist(),
        "max_P_e": float(pops[:, E].max()) if pops.shape[1] == 3 else None,
        "norm_drift": float(np.max(np.abs(norms - 1.0))),
        "tolerances": tol.as_dict(),
        "n_rhs_evaluations": int(sol.nfev),
    }
    if estimate_error:
        loose = _integrate(rhs, psi.amplitudes.copy(), g, tol.scaled(10.0))
        diff = np.abs(np.abs(loose.y[:, -1]) ** 2 - pops[-1])
        summary["error_estimate"] = float(max(diff.max(), 1e-12))
    return Trajectory(g, states, pops, summary)


def to_ground_branching() -> np.ndarray:
    """All excited-level decay into |g⟩; Γ_g acts as ground dephasing."""
    b = np.zeros((3, 3))
    b[G, G] = b[E, G] = b[S, G] = 1.0
    return b


def cascade_branching() -> np.ndarray:
    """Ladder routing s → e → g; Γ_g acts as ground dephasing."""
    b = np.zeros((3, 3))
    b[G, G] = b[E, G] = b[S, E] = 1.0
    return b


def resolve_branching(branching) -> Optional[np.ndarray]:
    if branching is None:
        return None
    if isinstance(branching, str):
        key = branching.lower()
        if key in ("ground", "to_ground"):
            return to_ground_branching()
        if key == "cascade":
            return cascade_branching()
        if key in ("none", "loss"):
            return None
        raise ValidationError(f"unknown branching {branching!r}")
    b = np.asarray(branching, dtype=float)
    if b.shape != (3, 3) or np.any(b < 0) or np.any(b.sum(axis=1) > 1 + 1e-12):
        raise ValidationError("branching must be 3x3, nonnegative, rows summing to <= 1")
    return b


def liouvillian(h: np.ndarray, rates: DecayRates, branching=None) -> np.ndarray:
    """9×9 generator acting on row-major vec(ρ)."""
    eye = np.eye(3)
    h = np.asarray(h, dtype=complex)
    gam = np.diag(rates.levels).astype(complex)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    lv -= 0.5 * (np.kron(gam, eye) + np.kron(eye, gam))
    b = resolve_branching(branching)
    if b is not None:
        for m in range(3):
            for k in range(3):
                w = rates.levels[m] * b[m, k]
                if w > 0:
                    jump = np.zeros((3, 3))
                    jump[k, m] = np.sqrt(w)
                    lv += np.kron(jump, jump)
    return lv


def evolve_master(h_of_t, rates: DecayRates, rho0, grid, tol: Tolerances = DEFAULT_TOL,
                  branching=None) -> Trajectory:
    """Integrate the master equation and sample ρ on ``grid``."""
    g = validate_grid(grid)
    if isinstance(rho0, QuantumState):
        rho0 = density_from_pure(rho0)
    r0 = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(np.asarray(rho0))
    hf = _as_hfun(h_of_t)
    b = resolve_branching(branching)
    static = liouvillian(np.zeros((3, 3)), rates, b)
    eye = np.eye(3)

    def rhs(t, y):
        h = hf(t)
        return (static - 1j * (np.kron(h, eye) - np.kron(eye, h.T))) @ y

    sol = _integrate(rhs, r0.entries.reshape(-1).copy(), g, tol)
    rhos = sol.y.T.reshape(-1, 3, 3)
    pops = np.real(np.einsum("nii->ni", rhos))
    herm = float(np.max(np.abs(rhos - np.conj(np.transpose(rhos, (0, 2, 1))))))
    summary = {
        "final_populations": pops[-1].tolist(),
        "max_P_e": float(pops[:, E].max()),
        "final_trace": float(pops[-1].sum()),
        "hermiticity_error": herm,
        "tolerances": tol.as_dict(),
        "repopulation": b is not None,
    }
    return Trajectory(g, rhos, pops, summary)


def two_level_hamiltonian(omega: float, delta: float) -> np.ndarray:
    """−(Δ/2)σ_z − (Ω/2)σ_x in the (c₁, c₂) basis."""
    return np.array([[-0.5 * delta, -0.5 * omega], [-0.5 * omega, 0.5 * delta]], dtype=complex)


def rabi_frame_phase(delta: float, t) -> np.ndarray:
    """diag(e^{iΔt/2}, e^{−iΔt/2}) taking :func:`two_level_hamiltonian` amplitudes
    to the frame of the closed-form solution."""
    ph = np.exp(0.5j * delta * np.asarray(t, dtype=float))
    return np.stack([ph, np.conj(ph)], axis=-1)


def rabi_analytic(omega: float, delta: float, t, c0=(1.0, 0.0)):
    """Closed-form two-level amplitudes (c₁(t), c₂(t)), Ω_eff = √(Ω² + Δ²)."""
    t = np.asarray(t, dtype=float)
    c10, c20 = complex(c0[0]), complex(c0[1])
    oeff = np.hypot(omega, delta)
    half = 0.5 * oeff * t
    cos, sin = np.cos(half), np.sin(half)
    if oeff == 0:
        rd = ro = 0.0
    else:
        rd, ro = delta / oeff, omega / oeff
    c2 = (c20 * (cos - 1j * rd * sin) + 1j * c10 * ro * sin) * np.exp(-0.5j * delta * t)
    c1 = (c10 * (cos + 1j * rd * sin) + 1j * c20 * ro * sin) * np.exp(0.5j * delta * t)
    if t.ndim == 0:
        return complex(c1), complex(c2)
    return c1, c2


def theta_rate(pair: PulsePair, grid) -> np.ndarray:
    """dθ/dt = |Ω_C Ω̇_P − Ω_P Ω̇_C|/(Ω_P² + Ω_C²) by finite differences."""
    g = validate_grid(grid)
    p = np.abs(np.asarray(pair.P(g)))
    c = np.abs(np.asarray(pair.C(g)))
    dp = np.gradient(p, g)
    dc = np.gradient(c, g)
    num = np.abs(c * dp - p * dc)
    den = p * p + c * c
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def adiabaticity_margin(pair: PulsePair, grid) -> float:
    """min over the grid of Ω_rms/|dθ/dt| (+∞ if θ never moves)."""
    g = validate_grid(grid)
    rate = theta_rate(pair, g)
    rms = np.asarray(pair.omega_rms(g))
    margin = np.inf
    moving = rate > 0
    if np.any(moving):
        margin = float(np.min(rms[moving] / rate[moving]))
    dead = rms == 0
    if np.any(dead[1:-1]):
        theta = np.arctan2(np.abs(np.asarray(pair.P(g))), np.abs(np.asarray(pair.C(g))))
        jump = np.abs(np.gradient(theta, g)) > 0
        if np.any((dead & jump)[1:-1]):
            return 0.0
    return margin
