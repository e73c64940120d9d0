import numpy as np
import pytest

from oracles import grover_brute
from qinterf.applications import (
    SquidParams,
    bb84_phase_sift,
    deutsch,
    grover,
    grover_closed_form,
    grover_optimal_iters,
    phase_basis,
    phase_to_bit,
    squid_response,
)
from qinterf.core import ValidationError

MINUS = np.array([1, -1]) / np.sqrt(2)


@pytest.mark.parametrize("f,bit", [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)])
def test_deutsch(f, bit):
    r = deutsch(f)
    assert r.bit == bit
    expected = r.sign * np.kron(np.eye(2)[bit], MINUS)
    assert np.max(np.abs(r.state - expected)) < 1e-12


def test_grover_examples():
    assert abs(grover(4, 1, 1) - 1.0) < 1e-12
    assert grover(16, 7, 3) == pytest.approx(0.9613, abs=1e-4)
    assert grover(16, 7, 0) == pytest.approx(1 / 16)
    with pytest.raises(ValidationError):
        grover(16, 16, 1)
    with pytest.raises(ValidationError):
        grover(12, 0, 1)


@pytest.mark.parametrize("n", [4, 16, 64])
def test_grover_monotone_and_closed_form(n):
    k_opt = grover_optimal_iters(n)
    probs = [grover(n, n - 1, k) for k in range(k_opt + 1)]
    assert all(a < b for a, b in zip(probs, probs[1:]))
    for k, p in enumerate(probs):
        assert abs(p - grover_closed_form(n, k)) < 1e-12
        assert abs(p - grover_brute(n, n - 1, k)) < 1e-12


def test_grover_optimal_iters():
    assert grover_optimal_iters(16) == 3
    assert grover_optimal_iters(4) == 1
    assert grover_optimal_iters(1024) == 25
    assert grover_optimal_iters(2) == 1


def test_bb84_statistics_and_reproducibility():
    r = bb84_phase_sift(100000, seed=12345)
    assert abs(r.sifted_fraction - 0.5) < 0.01
    assert r.qber == 0
    again = bb84_phase_sift(100000, seed=12345)
    assert np.array_equal(r.key_bits, again.key_bits)


def test_bb84_phase_mapping():
    assert [phase_to_bit(p) for p in (0, np.pi / 2, np.pi, 3 * np.pi / 2)] == [0, 0, 1, 1]
    assert [phase_basis(p) for p in (0, np.pi, np.pi / 2, 3 * np.pi / 2)] == [0, 0, 1, 1]
    r = bb84_phase_sift(1000, seed=1)
    zero = r.kept & (r.alice_phase == 0)
    assert np.all(r.bob_bits[zero] == 0)


def test_squid():
    r = squid_response(SquidParams(flux=0.0), 0.0)
    assert r == {"I": 0.0, "delta_from_flux": 0.0, "V": 0.0}
    assert squid_response(SquidParams(V0=2.0, flux=0.5))["V"] == 2.0
    r = squid_response(SquidParams(flux=1.0))
    assert r["delta_from_flux"] == pytest.approx(2 * np.pi)
    assert abs(r["V"]) < 1e-15
    assert squid_response(SquidParams(I_c=3.0), np.pi / 2)["I"] == 3.0
    with pytest.raises(ValidationError):
        SquidParams(I_c=0.0)


def test_squid_period_exact():
    for phi in (0.125, 0.3125, -0.75, 1.375):
        a = squid_response(SquidParams(flux=phi))["V"]
        b = squid_response(SquidParams(flux=phi + 2.0))["V"]
        assert a == b
