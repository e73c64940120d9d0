import numpy as np
import pytest

from oracles import giant_rates
from qinterf.core import UnsupportedConfigurationError, ValidationError
from qinterf.giant_atoms import (
    VARIANTS,
    Topology,
    collective_rates,
    decoherence_free_points,
    default_phi_grid,
    propagation_phase,
)


def test_propagation_phase():
    assert propagation_phase(1.0, 1.0, 2.0, 2.0) == 0
    assert propagation_phase(np.pi, 1.0, 0.0, 1.0) == pytest.approx(np.pi)
    assert propagation_phase(2, 1, 0, 3) == propagation_phase(2, 1, 0, 1) + propagation_phase(2, 1, 1, 3)
    with pytest.raises(ValidationError):
        propagation_phase(1, 0, 0, 1)


@pytest.mark.parametrize("variant", ["separate", "braided", "nested"])
def test_superradiant_at_zero(variant):
    r = collective_rates(Topology(variant), 0.0)
    assert r.gamma_a == pytest.approx(4) and r.gamma_b == pytest.approx(4)


@pytest.mark.parametrize("variant", list(VARIANTS))
def test_rates_match_brute_force(variant):
    t = Topology(variant)
    for phi in np.linspace(0, 2 * np.pi, 37):
        r = collective_rates(t, phi)
        ga, gb, g = giant_rates(t.positions_a, t.positions_b, phi / t.leg)
        assert abs(r.gamma_a - ga) < 1e-12 and abs(r.gamma_b - gb) < 1e-12 and abs(r.g - g) < 1e-12
        assert r.gamma_a >= 0 and r.gamma_b >= 0


def test_braided_decoherence_free():
    t = Topology("braided")
    for phi in (np.pi, 3 * np.pi):
        r = collective_rates(t, phi)
        assert max(r.gamma_a, r.gamma_b) < 1e-12
        assert abs(r.g) > 0.5
    assert np.pi in decoherence_free_points(t, default_phi_grid())


def test_single_giant_atom_is_dark_at_pi():
    t = Topology("separate")
    assert collective_rates(t, np.pi).gamma_a < 1e-12


def test_no_decoherence_free_points():
    grid = default_phi_grid()
    assert decoherence_free_points(Topology("small"), grid) == []
    assert decoherence_free_points(Topology("separate"), grid) == []


def test_periodicity():
    t = Topology("nested")
    for phi in (0.3, 1.7):
        a, b = collective_rates(t, phi), collective_rates(t, phi + 2 * np.pi)
        assert abs(a.gamma_a - b.gamma_a) < 1e-12 and abs(a.gamma_b - b.gamma_b) < 1e-12


def test_topology_validation():
    with pytest.raises(ValidationError):
        Topology("braided", (0.0, 1.0), (2.0, 3.0))
    with pytest.raises(ValidationError):
        Topology("star")
    with pytest.raises(UnsupportedConfigurationError):
        collective_rates(Topology("separate", (0.0, 1.0), (2.0, 3.5)), 1.0)
