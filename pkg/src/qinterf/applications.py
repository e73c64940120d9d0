"""Statevector demos: Deutsch, Grover, BB84 phase sifting, SQUID response.

Qubit 0 is the most significant bit of the basis index. BB84 draws come
from numpy's PCG64 generator seeded per call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .core import ValidationError

MAX_QUBITS = 12
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
BB84_PHASES = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)


# Deutsch

@dataclass(frozen=True)
class DeutschResult:
    bit: int
    state: np.ndarray
    sign: int


def deutsch_oracle(f: Tuple[int, int]) -> np.ndarray:
    """U_f|x, y⟩ = |x, y ⊕ f(x)⟩ on the two-qubit basis |x y⟩."""
    f0, f1 = _truth_table(f)
    u = np.zeros((4, 4), dtype=complex)
    for x, fx in ((0, f0), (1, f1)):
        for y in (0, 1):
            u[2 * x + (y ^ fx), 2 * x + y] = 1.0
    return u


def _truth_table(f) -> Tuple[int, int]:
    if len(f) != 2 or any(v not in (0, 1) for v in f):
        raise ValidationError("truth table must be (f(0), f(1)) with bits")
    return int(f[0]), int(f[1])


def deutsch(f: Tuple[int, int]) -> DeutschResult:
    """Prepare |0⟩|1⟩, apply H⊗H, U_f, then H on the data qubit."""
    f0, f1 = _truth_table(f)
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    hh = np.kron(HADAMARD, HADAMARD)
    psi = np.kron(HADAMARD, np.eye(2)) @ (deutsch_oracle((f0, f1)) @ (hh @ psi))
    p_one = abs(psi[2]) ** 2 + abs(psi[3]) ** 2
    bit = int(p_one > 0.5)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    ref = np.kron(np.eye(2)[bit], minus)
    overlap = np.vdot(ref, psi)
    return DeutschResult(bit, psi, int(np.sign(overlap.real)))


# Grover

def _grover_size(n_items: int) -> int:
    n = int(n_items)
    q = n.bit_length() - 1
    if n < 4 or (1 << q) != n or q > MAX_QUBITS:
        raise ValidationError(f"N must be a power of two with 2..{MAX_QUBITS} qubits")
    return n


def grover_state(n_items: int, target: int, iters: int) -> np.ndarray:
    """Uniform superposition followed by ``iters`` oracle + diffusion steps."""
    n = _grover_size(n_items)
    if not 0 <= target < n:
        raise ValidationError(f"target {target} out of range [0, {n})")
    if iters < 0:
        raise ValidationError("iteration count must be >= 0")
    uniform = np.full(n, 1 / np.sqrt(n), dtype=complex)
    oracle = np.ones(n)
    oracle[target] = -1.0
    diffusion = 2 * np.outer(uniform, uniform.conj()) - np.eye(n)
    psi = uniform.copy()
    for _ in range(int(iters)):
        psi = diffusion @ (oracle * psi)
    return psi


def grover(n_items: int, target: int, iters: int) -> float:
    """|⟨w|ψ_k⟩|² after k Grover iterations."""
    return float(abs(grover_state(n_items, target, iters)[target]) ** 2)


def grover_closed_form(n_items: int, iters: int) -> float:
    """sin²((2k+1)·arcsin(1/√N))."""
    return float(np.sin((2 * iters + 1) * np.arcsin(1 / np.sqrt(n_items))) ** 2)


def grover_optimal_iters(n_items: int) -> int:
    """floor(π√N/4), at least 1."""
    if n_items < 2:
        raise ValidationError("N must be >= 2")
    return max(1, int(np.floor(np.pi * np.sqrt(n_items) / 4)))


# BB84

@dataclass(frozen=True)
class SiftResult:
    sifted_fraction: float
    key_bits: np.ndarray
    qber: float
    n_pulses: int
    alice_phase: np.ndarray
    bob_basis: np.ndarray
    kept: np.ndarray
    bob_bits: np.ndarray

    def as_dict(self) -> Dict:
        return {"sifted_fraction": self.sifted_fraction, "n_sifted": int(self.key_bits.size),
                "qber": self.qber, "n_pulses": self.n_pulses}


def phase_to_bit(phase: float) -> int:
    """0, π/2 → 0 and π, 3π/2 → 1."""
    k = int(round((phase % (2 * np.pi)) / (np.pi / 2))) % 4
    return 0 if k in (0, 1) else 1


def phase_basis(phase: float) -> int:
    """0 for the {0, π} basis, 1 for {π/2, 3π/2}."""
    return int(round((phase % (2 * np.pi)) / (np.pi / 2))) % 2


def bb84_phase_sift(n_pulses: int, seed: int) -> SiftResult:
    """Noiseless phase-encoded BB84 with basis sifting.

    In a matched basis Bob's interferometer clicks the constructive port for
    phase difference 0 and the destructive port for π, which decodes the
    phase-bit mapping deterministically. ``bob_bits`` is −1 for discarded
    rounds.
    """
    if n_pulses < 1:
        raise ValidationError("need at least one pulse")
    rng = np.random.default_rng(seed)
    k = rng.integers(0, 4, size=n_pulses)
    bob_basis = rng.integers(0, 2, size=n_pulses)
    alice_phase = np.asarray(BB84_PHASES)[k]
    alice_bits = np.where(k < 2, 0, 1)
    keep = (k % 2) == bob_basis
    bob_ref = np.where(bob_basis == 0, 0.0, np.pi / 2)
    diff = np.mod(alice_phase - bob_ref, 2 * np.pi)
    bob_bits = np.where(keep, np.where(np.cos(diff) > 0, 0, 1), -1)
    key = alice_bits[keep]
    n_sift = int(keep.sum())
    qber = float(np.mean(bob_bits[keep] != key)) if n_sift else 0.0
    return SiftResult(n_sift / n_pulses, key.astype(np.int8), qber, int(n_pulses),
                      alice_phase, bob_basis, keep, bob_bits)


# SQUID

@dataclass(frozen=True)
class SquidParams:
    I_c: float = 1.0
    V0: float = 1.0
    flux: float = 0.0
    flux_quantum: float = 1.0

    def __post_init__(self):
        if not (self.I_c > 0 and self.V0 > 0 and self.flux_quantum > 0):
            raise ValidationError("I_c, V₀ and Φ₀ must be > 0")


def squid_response(p: SquidParams, delta_j: float = 0.0) -> Dict[str, float]:
    """I = I_c sin δ_j, δ = 2πΦ/Φ₀ and V = V₀ sin(πΦ/Φ₀).

    V is evaluated on Φ reduced modulo 2Φ₀, its period, so shifts by 2Φ₀
    reproduce it exactly.
    """
    ratio = p.flux / p.flux_quantum
    return {
        "I": float(p.I_c * np.sin(delta_j)),
        "delta_from_flux": float(2 * np.pi * ratio),
        "V": float(p.V0 * np.sin(np.pi * np.mod(ratio, 2.0))),
    }
