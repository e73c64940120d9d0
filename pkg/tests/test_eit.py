import numpy as np
import pytest
from dataclasses import replace

from oracles import jump, lindblad_steady_state
from qinterf.core import DecayRates, NonUniqueSteadyStateError, PoleError, ValidationError
from qinterf.eit import (
    EitParams,
    absorption_peaks,
    alpha_beta,
    alpha_beta_from_chi,
    hamiltonian,
    numeric_rho_probe,
    peak_splitting,
    rho_eg_lambda,
    rho_ge_vee,
    steady_state,
    susceptibility,
    susceptibility_lambda,
    transparency_scan,
    vee_coefficients,
)
from qinterf.hamiltonians import assemble_hamiltonian

WEAK = 1e-5


def lam(**kw):
    base = dict(scheme="lambda", omega_p=WEAK, omega_c=2.0)
    base.update(kw)
    return EitParams(**base)


def oracle_rho(p, cascade=False):
    jumps = [jump(1, 0, p.gamma_e), jump(2, 1 if cascade else 0, p.gamma_s), jump(0, 0, p.gamma_g)]
    return lindblad_steady_state(hamiltonian(p), [j for j in jumps if np.any(j)])


# steady_state

def test_empty_drive_fixed_point():
    rho = steady_state(np.zeros((3, 3)), DecayRates(0, 1.0, 0.5))
    assert np.max(np.abs(rho.entries - np.diag([1, 0, 0]))) < 1e-14


def test_steady_state_matches_lindblad_oracle():
    p = lam(omega_p=0.7, delta1=0.4, delta2=-0.2, gamma_g=0.05, gamma_s=0.1)
    rho = steady_state(hamiltonian(p), p.rates)
    assert np.max(np.abs(rho.entries - oracle_rho(p))) < 1e-12
    assert np.max(np.abs(rho.entries - rho.entries.conj().T)) < 1e-10


def test_steady_state_weak_probe_matches_closed_form():
    for d in (-3.0, -0.4, 0.7, 5.0):
        p = lam(gamma_s=0.02).at_two_photon(d)
        assert abs(numeric_rho_probe(p) - rho_eg_lambda(p)) < 1e-8 * WEAK


def test_nonunique_and_lossy():
    with pytest.raises(NonUniqueSteadyStateError):
        steady_state(np.zeros((3, 3)), DecayRates(0, 0, 0))
    with pytest.raises(ValidationError):
        steady_state(assemble_hamiltonian("lambda", 0, 0.5, 1, 1), DecayRates(0, 1, 0), "none")


# Λ closed forms

def test_lambda_transparency_at_resonance():
    p = lam(gamma_s=0.0, gamma_g=0.0)
    assert rho_eg_lambda(p) == 0
    assert susceptibility_lambda(p) == 0
    assert alpha_beta(p) == (0.0, 0.0)


def test_lambda_two_level_limit():
    for big in (-2.0, 0.3, 1.5):
        p = lam(omega_c=0.0, delta1=big, gamma_e=1.2, gamma_s=0.3)
        g1 = p.gamma1
        expected = 0.5 * WEAK * complex(-big, g1) / (big ** 2 + g1 ** 2)
        assert abs(rho_eg_lambda(p) - expected) < 1e-14
        assert alpha_beta(p)[0] == pytest.approx(-g1 / (big ** 2 + g1 ** 2), rel=1e-12)


def test_lambda_continuity_across_resonance():
    p = lam(gamma_s=0.1)
    vals = [rho_eg_lambda(p.at_two_photon(d)) for d in (-1e-9, 0.0, 1e-9)]
    assert abs(vals[0] - vals[1]) < 1e-12 and abs(vals[2] - vals[1]) < 1e-12


def test_lambda_pole():
    p = EitParams("lambda", WEAK, 0.0, 0.0, 0.0, gamma_e=0.0)
    with pytest.raises(PoleError):
        rho_eg_lambda(p)


def test_susceptibility_scaling_and_sign():
    p = lam(gamma_s=0.05, delta1=0.3)
    assert susceptibility(replace(p, density=2.0)) == pytest.approx(2 * susceptibility(p), rel=1e-14)
    chis = [susceptibility(p.at_two_photon(d)) for d in np.linspace(-10, 10, 101)]
    assert all(c.imag <= 0 for c in chis)
    with pytest.raises(PoleError):
        susceptibility(replace(p, omega_p=0.0))


@pytest.mark.parametrize("scheme", ["lambda", "ladder", "vee"])
def test_alpha_beta_consistent_with_chi(scheme):
    p = EitParams(scheme, WEAK, 1.5, 0.4, 0.2, gamma_e=1.0, gamma_s=0.3, gamma_g=0.05,
                  density=1.7, omega_probe=2.3)
    for d in np.linspace(-5, 5, 21):
        q = p.at_two_photon(d)
        a, b = alpha_beta(q)
        a2, b2 = alpha_beta_from_chi(q, susceptibility(q))
        assert abs(a - a2) < 1e-12 and abs(b - b2) < 1e-12


def test_literal_lambda_forms():
    # identical when γ₃ = 0, different once γ₁ ≠ 1 and γ₃ > 0
    p0 = lam(gamma_e=0.6, delta1=0.5)
    assert rho_eg_lambda(p0, literal=True) == rho_eg_lambda(p0)
    assert alpha_beta(p0, literal=True) == alpha_beta(p0)
    p = lam(gamma_e=0.6, gamma_s=0.3, delta1=0.5)
    assert abs(rho_eg_lambda(p, literal=True) - rho_eg_lambda(p)) > 1e-3 * abs(rho_eg_lambda(p))
    num = numeric_rho_probe(p)
    assert abs(num - rho_eg_lambda(p)) < 1e-7 * abs(num)


# ladder

def ladder(**kw):
    base = dict(scheme="ladder", omega_p=WEAK, omega_c=2.0, gamma_e=1.0, gamma_s=0.1)
    base.update(kw)
    return EitParams(**base)


def test_ladder_zero_absorption():
    assert alpha_beta(ladder(gamma_s=0.0))[0] == 0


def test_ladder_numeric_agreement():
    p = ladder(delta2=0.3)
    for d in np.linspace(-4, 4, 17):
        q = p.at_two_photon(d)
        rho = oracle_rho(q, cascade=True)[1, 0]
        assert abs(numeric_rho_probe(q) - rho) < 1e-12
        a, _ = alpha_beta_from_chi(q, -2 * rho / q.omega_p)
        assert abs(alpha_beta(q)[0] - a) < 1e-6 * abs(a)


def test_ladder_literal_differs():
    q = ladder().at_two_photon(0.7)
    assert alpha_beta(q, literal=True) != alpha_beta(q)


def test_ladder_peaks_at_half_coupling():
    p = ladder(omega_c=3.0, gamma_s=0.01)
    peaks = absorption_peaks(transparency_scan(p, np.linspace(-4, 4, 4001)))
    assert np.allclose(sorted(peaks), [-1.5, 1.5], atol=0.01)


# V

def vee(**kw):
    base = dict(scheme="vee", omega_p=WEAK, omega_c=2.0, gamma_e=1.0, gamma_s=0.5)
    base.update(kw)
    return EitParams(**base)


def test_vee_two_level_limit():
    for gt in (0.0, 0.005):
        p = vee(omega_c=0.0, delta1=0.4, gamma_t=gt)
        c = vee_coefficients(p)
        assert c.rho_ss == 0 and c.rho_gg == pytest.approx(1.0, abs=1e-15)
        assert abs(rho_ge_vee(p) - p.omega_p / (2 * c.k1)) < 1e-10 * WEAK


def test_vee_numeric_closed_system():
    p = vee(gamma_t=0.0, gamma_g=0.1, delta2=0.3)
    for d in np.linspace(-3, 3, 13):
        q = p.at_two_photon(d)
        rho = oracle_rho(q)[0, 1]
        assert abs(rho_ge_vee(q) - rho) < 1e-6 * abs(rho)


def test_vee_coupling_suppresses_coherence():
    weak = abs(rho_ge_vee(vee(omega_c=0.0)))
    strong = abs(rho_ge_vee(vee(omega_c=20.0)))
    assert strong < 0.1 * weak


def test_vee_defaults_and_poles():
    p = vee()
    assert p.gamma_t == pytest.approx(0.005) and p.gamma_sg == 0.5
    with pytest.raises(PoleError):
        rho_ge_vee(vee(gamma_s=0.0))


# scans

def test_scan_without_coupling_has_no_dip():
    spec = transparency_scan(lam(omega_c=0.0, gamma_s=0.01), np.linspace(-10, 10, 201))
    assert spec.dip_width is None
    assert len(absorption_peaks(spec)) == 1


def test_scan_transparency_and_dual_path():
    grid = np.linspace(-10, 10, 200)
    p = lam(gamma_s=0.0, gamma_g=0.0)
    a = transparency_scan(p, grid)
    n = transparency_scan(p, grid, method="numeric")
    assert a.alpha_at_zero == 0
    assert np.max(np.abs(n.alpha - a.alpha) / np.abs(a.alpha)) < 1e-6
    assert a.dip_width is not None and a.dip_width > 0


def test_transparency_improves_as_ground_decay_vanishes():
    vals = [abs(transparency_scan(lam(gamma_s=2 * g3), [0.0]).alpha_at_zero)
            for g3 in (1e-2, 1e-3, 1e-4)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_autler_townes_splitting():
    for oc in (5.0, 10.0, 20.0):
        spec = transparency_scan(lam(omega_c=oc, gamma_s=0.0), np.linspace(-15, 15, 3001))
        assert abs(peak_splitting(spec) - oc) < 0.1 * oc


def test_dip_width_grows_with_coupling():
    widths = [transparency_scan(lam(omega_c=oc), np.linspace(-10, 10, 401)).dip_width
              for oc in (1.0, 2.0, 4.0)]
    assert widths[0] < widths[1] < widths[2]


def test_scan_annotates_poles():
    p = EitParams("lambda", WEAK, 0.0, gamma_e=0.0)
    spec = transparency_scan(p, [-1.0, 0.0, 1.0])
    assert [d for d, _ in spec.errors] == [0.0]
    assert np.isnan(spec.alpha[1]) and np.isfinite(spec.alpha[0])
    with pytest.raises(ValidationError):
        transparency_scan(p, [])
