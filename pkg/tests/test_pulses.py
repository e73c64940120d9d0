import numpy as np
import pytest

from qinterf.core import ValidationError
from qinterf.pulses import (
    ChirpedGaussian,
    Constant,
    DelayedCopy,
    Gaussian,
    PulsePair,
    eval_envelope,
    instantaneous_detunings,
    pulse_area,
    validate_grid,
)


def test_gaussian_values_and_cutoff():
    g = Gaussian(2.0, 1.0, 0.5)
    assert eval_envelope(g, 1.0) == 2.0
    assert abs(eval_envelope(g, 1.5) - 2 * np.exp(-1)) < 1e-15
    assert eval_envelope(g, 1.0 + 4.01 * 0.5) == 0
    assert eval_envelope(g, 1.0 + 3.99 * 0.5) != 0


def test_constant_and_validation():
    assert np.all(eval_envelope(Constant(3.0), np.linspace(0, 1, 5)) == 3.0)
    with pytest.raises(ValidationError):
        Gaussian(1.0, 0.0, 0.0)
    with pytest.raises(ValidationError):
        Constant(-1.0)
    with pytest.raises(ValidationError):
        eval_envelope(Constant(1.0), np.nan)


def test_delayed_copy_and_sum():
    g = Gaussian(1.0, 0.0, 1.0)
    d = DelayedCopy(g, 0.5, 2.0, np.pi / 2)
    assert abs(d(2.0) - 0.5j) < 1e-15
    s = g + d
    t = np.linspace(-3, 5, 9)
    assert np.allclose(s(t), g(t) + d(t))


def test_pulse_area_matches_gaussian_integral():
    pair = PulsePair(Gaussian(1.0, 0.0, 1.0), Constant(0.0))
    grid = np.linspace(-4, 4, 2001)
    assert abs(pulse_area(pair, grid) - np.sqrt(np.pi) * 0.9999999846) < 1e-6


def test_pair_centres_and_detunings():
    pair = PulsePair(Gaussian(1, 0.6, 1), Gaussian(1, -0.6, 1), delta1=2.0, delta2=0.5)
    assert pair.t_P == 0.6 and pair.t_C == -0.6
    assert pair.static_detunings("lambda") == (2.0, 1.5)
    assert pair.static_detunings("ladder") == (2.0, 2.5)
    assert pair.static_detunings("vee") == (2.0, 0.5)


def test_instantaneous_detunings():
    pair = PulsePair(ChirpedGaussian(1, 1.0, 1, alpha_chirp=2.0), Gaussian(1, -1.0, 1),
                     delta1=1.0, delta2=0.0, alpha_P=2.0, alpha_C=3.0)
    d1, d2 = instantaneous_detunings(pair, 1.0)
    assert d1 == 1.0
    assert d2 == pytest.approx(-1.0 + 3.0 * 2.0)


def test_validate_grid():
    with pytest.raises(ValidationError):
        validate_grid([0.0])
    with pytest.raises(ValidationError):
        validate_grid([0.0, 1.0, 1.0])
