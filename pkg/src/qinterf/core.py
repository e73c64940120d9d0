"""Shared numeric types for three-level atoms and small statevectors.

Level ordering is fixed as (g, e, s) with indices 0, 1, 2. All rates and
frequencies are dimensionless multiples of a reference rate (by default the
excited-state decay rate, Γ_e = 1) and ħ = 1 throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

LEVELS = ("g", "e", "s")
G, E, S = 0, 1, 2

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


class QInterfError(Exception):
    """Base class for all library errors."""


class ValidationError(QInterfError, ValueError):
    """Input violates a documented precondition or type invariant."""


class DegenerateDriveError(ValidationError):
    """Both drive amplitudes vanish, so the dark state is undefined."""


class UnsupportedConfigurationError(ValidationError):
    """Configuration outside the supported model family."""


class PoleError(QInterfError, ArithmeticError):
    """A closed-form expression hit a zero denominator."""

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class IntegrationError(QInterfError, RuntimeError):
    """The ODE integrator could not reach the requested time."""

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time {last_time:.6g})")
        self.last_time = last_time


class NonUniqueSteadyStateError(QInterfError, ArithmeticError):
    """The Liouvillian has more than one normalized fixed point."""


ArrayLike = Union[Iterable[complex], np.ndarray]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what} contains non-finite entries")


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Complex amplitudes, length 3 for atoms or 2**n for algorithm demos.

    The constructor does not force normalization so that norms can be
    inspected; use :meth:`normalized` or ``QuantumState.of(..., normalize=True)``.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _check_finite(a, "amplitudes")
        n = a.size
        if n < 2 or (n != 3 and n & (n - 1)):
            raise ValidationError(f"unsupported state dimension {n}")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @classmethod
    def of(cls, amplitudes: ArrayLike, normalize: bool = False) -> "QuantumState":
        st = cls(np.asarray(list(amplitudes), dtype=complex))
        return st.normalized() if normalize else st

    @classmethod
    def basis(cls, label: Union[str, int], dim: int = 3) -> "QuantumState":
        idx = LEVELS.index(label) if isinstance(label, str) else int(label)
        a = np.zeros(dim, dtype=complex)
        a[idx] = 1.0
        return cls(a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return state_norm(self)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "QuantumState":
        n = np.sqrt(self.norm())
        if n == 0.0:
            raise ValidationError("cannot normalize the zero vector")
        return QuantumState(self.amplitudes / n)

    def overlap(self, other: "QuantumState") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """3×3 Hermitian, unit-trace, positive semidefinite matrix."""

    entries: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.entries, dtype=complex)
        if r.shape != (3, 3):
            raise ValidationError(f"density matrix must be 3x3, got {r.shape}")
        _check_finite(r, "density matrix")
        if np.max(np.abs(r - r.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(r) - 1.0) > NORM_TOL:
            raise ValidationError(f"trace {np.trace(r).real:.3e} differs from 1")
        if np.min(np.linalg.eigvalsh(0.5 * (r + r.conj().T))) < -PSD_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(r))

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def element(self, i: Union[str, int], j: Union[str, int]) -> complex:
        ii = LEVELS.index(i) if isinstance(i, str) else i
        jj = LEVELS.index(j) if isinstance(j, str) else j
        return complex(self.entries[ii, jj])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class DecayRates:
    """Level decay rates Γ_g, Γ_e, Γ_s and transit rate Γ_t (all ≥ 0)."""

    gamma_g: float = 0.0
    gamma_e: float = 1.0
    gamma_s: float = 0.0
    gamma_t: float = 0.0

    def __post_init__(self):
        for name in ("gamma_g", "gamma_e", "gamma_s", "gamma_t"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ValidationError(f"{name} must be finite and >= 0, got {v}")
            object.__setattr__(self, name, v)

    @property
    def levels(self) -> np.ndarray:
        return np.array([self.gamma_g, self.gamma_e, self.gamma_s])

    def gamma(self, i: Union[str, int], j: Union[str, int]) -> float:
        """Coherence decay γ_ij = (Γ_i + Γ_j)/2."""
        ii = LEVELS.index(i) if isinstance(i, str) else i
        jj = LEVELS.index(j) if isinstance(j, str) else j
        lv = self.levels
        return 0.5 * (lv[ii] + lv[jj])


def _amplitudes(psi) -> np.ndarray:
    if isinstance(psi, QuantumState):
        return psi.amplitudes
    a = np.asarray(psi, dtype=complex).reshape(-1)
    _check_finite(a, "amplitudes")
    return a


def state_norm(psi) -> float:
    """Σ|c_i|² for a state or raw amplitude vector."""
    a = _amplitudes(psi)
    return float(np.sum(np.abs(a) ** 2))


def density_from_pure(psi) -> DensityMatrix:
    """|ψ⟩⟨ψ| for a normalized three-level state."""
    a = _amplitudes(psi)
    if a.size != 3:
        raise ValidationError("density matrices are three-level only")
    if abs(state_norm(a) - 1.0) > NORM_TOL:
        raise ValidationError("state is not normalized")
    return DensityMatrix(np.outer(a, a.conj()))
