"""Command-line front end: JSON scenario in, CSV table and JSON summary out.

Usage::

    qinterf <kind> --config run.json [--out-dir d] [--seed n] [--threads k]
    qinterf sweep --config run.json --param omega_c --values 1,2,4
    qinterf schema [kind]

A scenario file is a JSON object with the keys ``kind`` (optional when it
matches the subcommand), ``parameters``, ``grid`` (``start``, ``stop``,
``n``), ``output`` (``prefix``) and ``seed``. Unknown keys are rejected.
All frequencies are in units of the reference rate Γ_e = 1 and times in
units of 1/Γ_e (pulse durations in units of τ for the STIRAP kinds).

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .core import QInterfError, ValidationError
from .dynamics import Tolerances

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
THREADS_ENV = "QINTERF_THREADS"
TOP_KEYS = ("kind", "parameters", "grid", "output", "seed")
GRID_KEYS = ("start", "stop", "n")
TWO_PI = 2 * math.pi


class ConfigError(Exception):
    """Invalid scenario file (exit 2)."""


# schema

@dataclass(frozen=True)
class Param:
    default: object
    kind: str  # float, int, str, bool, float?, int?, list?
    doc: str


@dataclass(frozen=True)
class Kind:
    params: Dict[str, Param]
    grid: Optional[Tuple[float, float, int, str]]
    run: Callable
    doc: str


def _p(default, kind, doc):
    return Param(default, kind, doc)


def _check_type(name: str, value, kind: str):
    optional = kind.endswith("?")
    base = kind.rstrip("?")
    if value is None:
        if optional:
            return None
        raise ConfigError(f"parameter {name!r} must not be null")
    if base == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"parameter {name!r} must be a number")
        return float(value)
    if base == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"parameter {name!r} must be an integer")
        return value
    if base == "str":
        if not isinstance(value, str):
            raise ConfigError(f"parameter {name!r} must be a string")
        return value
    if base == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"parameter {name!r} must be true or false")
        return value
    if base == "list":
        if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, (int, float))
                                              for v in value):
            raise ConfigError(f"parameter {name!r} must be a list of numbers")
        return [float(v) for v in value]
    raise AssertionError(kind)


def _grid(cfg_grid: dict, spec) -> np.ndarray:
    start, stop, n, _ = spec
    start = _check_type("grid.start", cfg_grid.get("start", start), "float")
    stop = _check_type("grid.stop", cfg_grid.get("stop", stop), "float")
    n = _check_type("grid.n", cfg_grid.get("n", n), "int")
    if n < 2 or not stop > start:
        raise ConfigError("grid needs n >= 2 and stop > start")
    return np.linspace(start, stop, n)


# runners: each returns (columns, table, results, tolerances)

Col = Tuple[str, str]


def _run_stirap(p, grid, seed):
    from dataclasses import replace
    from .core import DecayRates
    from .hamiltonians import normalize_scheme
    from .protocols import StirapScenario, gaussian_pair, run_stirap
    scheme = normalize_scheme(p["scheme"])
    d1, dd = p["delta"], p["two_photon"]
    d2 = {"lambda": d1 - dd, "ladder": dd - d1, "vee": dd}[scheme]
    pair = gaussian_pair(p["omega0"], p["tau"], p["delay"], p["ordering"], d1, d2)
    variant = "standard"
    if p["chirp"] != 0:
        pair = replace(pair, alpha_P=p["chirp"], alpha_C=p["chirp"])
        variant = "chirped"
    rates = None
    if any(p[k] > 0 for k in ("gamma_g", "gamma_e", "gamma_s")):
        rates = DecayRates(p["gamma_g"], p["gamma_e"], p["gamma_s"])
    tol = Tolerances(p["rtol"], p["atol"])
    s = StirapScenario(pair=pair, grid=grid * p["tau"], ordering=p["ordering"], variant=variant,
                       scheme=p["scheme"], rates=rates, branching=p["branching"], tol=tol)
    traj = run_stirap(s)
    return _trajectory_output(traj, s, tol)


def _trajectory_output(traj, s, tol):
    pops = traj.populations
    omp, omc = s.pair.rabi(traj.times)
    cols = [("t", "time [1/Γ_e]"), ("P_g", "population of |g⟩"), ("P_e", "population of |e⟩"),
            ("P_s", "population of |s⟩"), ("Omega_P", "|Ω_P(t)|"), ("Omega_C", "|Ω_C(t)|")]
    table = np.column_stack([traj.times, pops, np.abs(omp), np.abs(omc)])
    res = {k: v for k, v in traj.summary.items()
           if k not in ("tolerances", "dark_projection")}
    return cols, table, res, tol.as_dict()


def _run_fstirap(p, grid, seed):
    from .protocols import StirapScenario, fstirap_pair, run_fstirap
    tol = Tolerances(p["rtol"], p["atol"])
    pair = fstirap_pair(p["theta"], p["alpha"], p["omega0"], p["tau"], p["tau_d"])
    s = StirapScenario(pair=pair, grid=grid * p["tau"], variant="fractional",
                       theta_final=p["theta"], alpha_phase=p["alpha"], tol=tol)
    traj = run_fstirap(p["theta"], p["alpha"], s)
    return _trajectory_output(traj, s, tol)


def _run_cpt(p, grid, seed):
    from .hamiltonians import cpt_hamiltonian, eigensystem_cpt
    from .protocols import cpt_populations
    rows, err, resid = [], 0.0, 0.0
    for d in grid:
        e = eigensystem_cpt(p["omega_p"], p["omega_c"], d)
        h = cpt_hamiltonian(p["omega_p"], p["omega_c"], d)
        num = np.linalg.eigvalsh(h)
        err = max(err, float(np.max(np.abs(num - np.sort(e.eigenvalues)))))
        resid = max(resid, float(np.linalg.norm(h @ e.dark.amplitudes)))
        rows.append([d, e.lambda_minus, e.lambda0, e.lambda_plus, e.phi])
    pg, pe, ps = cpt_populations(p["omega_p"], p["omega_c"])
    cols = [("delta", "single-photon detuning Δ [Γ_e]"), ("lambda_minus", "λ₋ = −Δ/2 − Ω̄"),
            ("lambda_0", "dark-state eigenvalue"), ("lambda_plus", "λ₊ = −Δ/2 + Ω̄"),
            ("phi", "mixing angle φ [rad]")]
    res = {"dark_P_g": pg, "dark_P_e": pe, "dark_P_s": ps, "max_eigenvalue_error": err,
           "max_dark_residual": resid}
    return cols, np.array(rows), res, {"eigenvalue": 1e-10, "dark_residual": 1e-12}


def _run_eit(p, grid, seed):
    from .eit import EitParams, STEADY_RESIDUAL_TOL, peak_splitting, transparency_scan
    keys = ("scheme", "omega_p", "omega_c", "delta2", "gamma_g", "gamma_e", "gamma_s",
            "gamma_t", "gamma_sg", "density", "dipole", "n0", "omega_probe")
    ep = EitParams(**{k: p[k] for k in keys})
    spec = transparency_scan(ep, grid, method=p["method"], literal=p["literal"])
    d1 = np.array([ep.at_two_photon(d).delta1 for d in grid])
    cols = [("delta", "two-photon detuning δ [Γ_e]"), ("delta1", "probe detuning [Γ_e]"),
            ("chi_re", "Re χ"), ("chi_im", "Im χ"), ("alpha", "absorption α"),
            ("beta", "dispersion β")]
    table = np.column_stack([grid, d1, spec.chi.real, spec.chi.imag, spec.alpha, spec.beta])
    res = {"alpha_at_zero": spec.alpha_at_zero, "dip_width": spec.dip_width,
           "peak_splitting": peak_splitting(spec), "n_pole_errors": len(spec.errors),
           "pole_points": [d for d, _ in spec.errors], "kappa_scale": ep.kappa_scale}
    return cols, table, res, {"steady_residual": STEADY_RESIDUAL_TOL}


def _scan(p, grid, names, key):
    if p["scan"] not in names:
        raise ConfigError(f"scan must be one of {', '.join(names)}")
    out = []
    for x in grid:
        q = dict(p)
        q[p["scan"]] = float(x)
        out.append(key(q))
    return np.array(out)


def _run_interferometer(p, grid, seed):
    from .interferometry import gravity_phase, mz_probability, mz_probability_matrix
    names = ("phi1", "phi2", "phi3")
    vals = _scan(p, grid, names, lambda q: [mz_probability(*(q[n] for n in names)),
                                             mz_probability_matrix(*(q[n] for n in names))])
    cols = [("phase", f"scanned {p['scan']} [rad]"), ("P_s", "closed-form P_s"),
            ("P_s_matrix", "P_s from the π/2–π–π/2 product")]
    res = {"P_s": mz_probability(*(p[n] for n in names)),
           "max_abs_deviation": float(np.max(np.abs(vals[:, 0] - vals[:, 1]))),
           "gravity_phase": gravity_phase(p["k_eff"], p["accel"], p["T"])}
    return cols, np.column_stack([grid, vals]), res, {"closed_vs_matrix": 1e-12}


def _run_ramsey(p, grid, seed):
    from .interferometry import ramsey_probability, ramsey_probability_matrix
    names = ("phi_e", "phi_g", "phi1", "phi2")
    vals = _scan(p, grid, names, lambda q: [ramsey_probability(*(q[n] for n in names)),
                                             ramsey_probability_matrix(*(q[n] for n in names))])
    cols = [("phase", f"scanned {p['scan']} [rad]"), ("P_s", "closed-form P_s"),
            ("P_s_matrix", "P_s from the π/2–free–π/2 product")]
    res = {"P_s": ramsey_probability(*(p[n] for n in names)),
           "max_abs_deviation": float(np.max(np.abs(vals[:, 0] - vals[:, 1])))}
    return cols, np.column_stack([grid, vals]), res, {"closed_vs_matrix": 1e-12}


def _run_giant(p, grid, seed):
    from .giant_atoms import Topology, collective_rates, decoherence_free_points
    t = Topology(p["variant"], p["positions_a"], p["positions_b"], p["gamma_pt"])
    rows = [[x, *collective_rates(t, x).as_dict().values()] for x in grid]
    cols = [("phi", "phase across one leg [rad]"), ("gamma_a", "Γ_a"), ("gamma_b", "Γ_b"),
            ("gamma_coll", "collective rate"), ("g", "exchange rate g")]
    res = {"decoherence_free_points": decoherence_free_points(t, grid),
           "rates_at_pi": collective_rates(t, math.pi).as_dict(), "leg": t.leg}
    return cols, np.array(rows), res, {"rate_zero": 1e-10, "exchange_nonzero": 1e-6}


def _run_grover(p, grid, seed):
    from .applications import grover, grover_closed_form, grover_optimal_iters
    n = p["N"]
    k = grover_optimal_iters(n) if p["iters"] is None else p["iters"]
    rows = [[i, grover(n, p["target"], i), grover_closed_form(n, i)] for i in range(k + 1)]
    table = np.array(rows)
    cols = [("iteration", "Grover iterations applied"), ("success_probability", "|⟨w|ψ⟩|²"),
            ("closed_form", "sin²((2k+1) arcsin(1/√N))")]
    res = {"success_probability": float(table[-1, 1]), "iters": k,
           "optimal_iters": grover_optimal_iters(n),
           "max_closed_form_error": float(np.max(np.abs(table[:, 1] - table[:, 2])))}
    return cols, table, res, {"closed_form": 1e-12}


def _run_deutsch(p, grid, seed):
    from .applications import deutsch
    r = deutsch((p["f0"], p["f1"]))
    cols = [("index", "basis index |x y⟩ = 2x + y"), ("amplitude_re", "Re amplitude"),
            ("amplitude_im", "Im amplitude")]
    table = np.column_stack([np.arange(4), r.state.real, r.state.imag])
    return cols, table, {"bit": r.bit, "sign": r.sign}, {"state": 1e-12}


def _run_bb84(p, grid, seed):
    from .applications import bb84_phase_sift
    r = bb84_phase_sift(p["n_pulses"], 0 if seed is None else seed)
    cols = [("round", "pulse index"), ("alice_phase", "Alice's phase [rad]"),
            ("bob_basis", "0: {0, π}, 1: {π/2, 3π/2}"), ("kept", "1 if bases match"),
            ("bob_bit", "decoded bit, −1 when discarded")]
    table = np.column_stack([np.arange(r.n_pulses), r.alice_phase, r.bob_basis,
                             r.kept.astype(int), r.bob_bits])
    res = dict(r.as_dict(), rng="numpy PCG64")
    return cols, table, res, {}


def _run_squid(p, grid, seed):
    from .applications import SquidParams, squid_response
    rows = []
    for f in grid:
        r = squid_response(SquidParams(p["I_c"], p["V0"], float(f), p["flux_quantum"]),
                           p["delta_j"])
        rows.append([f, r["delta_from_flux"], r["V"]])
    junction = squid_response(SquidParams(p["I_c"], p["V0"], 0.0, p["flux_quantum"]), p["delta_j"])
    cols = [("flux", "applied flux Φ"), ("delta_from_flux", "δ = 2πΦ/Φ₀"),
            ("V", "V = V₀ sin(πΦ/Φ₀)")]
    table = np.array(rows)
    return cols, table, {"I": junction["I"], "V_max": float(table[:, 2].max())}, {}


def _run_coherence(p, grid, seed):
    from .interferometry import (FringeInputs, fringe_intensity, g2_classify, visibility,
                                 visibility_from_g1)
    vals = [fringe_intensity(FringeInputs(p["I1"], p["I2"], p["g1_abs"], x)) for x in grid]
    cols = [("phase", "interference phase [rad]"), ("intensity", "I₁ + I₂ + 2√(I₁I₂)|g1|cos φ")]
    res = {"visibility_scan": visibility(max(vals), min(vals)),
           "visibility_from_g1": visibility_from_g1(p["I1"], p["I2"], p["g1_abs"]),
           "g2_class": None if p["g2_zero"] is None else g2_classify(p["g2_zero"])}
    return cols, np.column_stack([grid, vals]), res, {"g2_boundary": 1e-9}


_DYN = {"rtol": _p(1e-9, "float", "relative ODE tolerance"),
        "atol": _p(1e-12, "float", "absolute ODE tolerance")}

KINDS: Dict[str, Kind] = {
    "stirap": Kind({
        "omega0": _p(20.0, "float", "peak Rabi frequency [1/τ]"),
        "tau": _p(1.0, "float", "Gaussian width τ"),
        "delay": _p(1.2, "float", "centre separation [τ]"),
        "ordering": _p("counterintuitive", "str", "counterintuitive or intuitive"),
        "scheme": _p("lambda", "str", "lambda, ladder or vee"),
        "delta": _p(0.0, "float", "single-photon (probe) detuning Δ₁"),
        "two_photon": _p(0.0, "float", "two-photon detuning δ (Δ₂ for vee)"),
        "chirp": _p(0.0, "float", "common chirp rate α_P = α_C"),
        "gamma_g": _p(0.0, "float", "decay of |g⟩"),
        "gamma_e": _p(0.0, "float", "decay of |e⟩ (>0 switches to the master equation)"),
        "gamma_s": _p(0.0, "float", "decay of |s⟩"),
        "branching": _p("none", "str", "none, ground or cascade"),
        **_DYN}, (-3.0, 3.0, 601, "time [τ]"), _run_stirap, "Gaussian STIRAP pulse pair"),
    "fstirap": Kind({
        "theta": _p(math.pi / 4, "float", "final mixing angle Θ [rad]"),
        "alpha": _p(0.0, "float", "relative phase α [rad]"),
        "omega0": _p(50.0, "float", "peak Rabi frequency [1/τ]"),
        "tau": _p(1.0, "float", "Gaussian width τ"),
        "tau_d": _p(1.0, "float", "lobe offset [τ]"),
        **_DYN}, (-4.0, 4.0, 801, "time [τ]"), _run_fstirap, "fractional STIRAP"),
    "cpt": Kind({
        "omega_p": _p(1.0, "float", "probe Rabi frequency"),
        "omega_c": _p(1.0, "float", "coupling Rabi frequency")},
        (-5.0, 5.0, 101, "single-photon detuning Δ"), _run_cpt, "dark/bright eigensystem scan"),
    "eit-scan": Kind({
        "scheme": _p("lambda", "str", "lambda, ladder or vee"),
        "omega_p": _p(1e-5, "float", "probe Rabi frequency (weak)"),
        "omega_c": _p(1.0, "float", "coupling Rabi frequency"),
        "delta2": _p(0.0, "float", "coupling detuning"),
        "gamma_g": _p(0.0, "float", "Γ_g (ground dephasing)"),
        "gamma_e": _p(1.0, "float", "Γ_e"),
        "gamma_s": _p(0.0, "float", "Γ_s"),
        "gamma_t": _p(None, "float?", "V-type transit rate (default 0.01 Γ_s)"),
        "gamma_sg": _p(None, "float?", "V-type s→g rate (default Γ_s)"),
        "density": _p(1.0, "float", "atom density N"),
        "dipole": _p(1.0, "float", "dipole moment μ"),
        "n0": _p(1.0, "float", "background index n₀"),
        "omega_probe": _p(1.0, "float", "probe carrier frequency ω_P"),
        "method": _p("analytic", "str", "analytic or numeric"),
        "literal": _p(False, "bool", "use the coefficients exactly as printed")},
        (-10.0, 10.0, 201, "two-photon detuning δ"), _run_eit, "probe susceptibility scan"),
    "interferometer": Kind({
        "phi1": _p(0.0, "float", "first pulse phase"),
        "phi2": _p(0.0, "float", "mirror pulse phase"),
        "phi3": _p(0.0, "float", "last pulse phase"),
        "scan": _p("phi1", "str", "phase varied along the grid"),
        "k_eff": _p(0.0, "float", "effective wavevector"),
        "accel": _p(0.0, "float", "acceleration"),
        "T": _p(0.0, "float", "interrogation time")},
        (0.0, TWO_PI, 101, "scanned phase"), _run_interferometer, "Mach-Zehnder fringe"),
    "ramsey": Kind({
        "phi_e": _p(0.0, "float", "T·E_e"),
        "phi_g": _p(0.0, "float", "T·E_g"),
        "phi1": _p(0.0, "float", "first pulse phase"),
        "phi2": _p(0.0, "float", "second pulse phase"),
        "scan": _p("phi_e", "str", "phase varied along the grid")},
        (0.0, TWO_PI, 101, "scanned phase"), _run_ramsey, "Ramsey fringe"),
    "giant": Kind({
        "variant": _p("braided", "str", "small, separate, braided or nested"),
        "positions_a": _p(None, "list?", "coupling points of atom a"),
        "positions_b": _p(None, "list?", "coupling points of atom b"),
        "gamma_pt": _p(1.0, "float", "per-point rate Γ_pt")},
        (0.0, TWO_PI, 1001, "leg phase φ"), _run_giant, "giant-atom rates"),
    "grover": Kind({
        "N": _p(16, "int", "search space size (power of two)"),
        "target": _p(0, "int", "marked index"),
        "iters": _p(None, "int?", "iterations (default: optimal)")},
        None, _run_grover, "Grover search"),
    "deutsch": Kind({
        "f0": _p(0, "int", "f(0)"),
        "f1": _p(1, "int", "f(1)")},
        None, _run_deutsch, "Deutsch algorithm"),
    "bb84": Kind({
        "n_pulses": _p(100000, "int", "number of pulses")},
        None, _run_bb84, "BB84 phase sifting"),
    "squid": Kind({
        "I_c": _p(1.0, "float", "critical current"),
        "V0": _p(1.0, "float", "maximum voltage"),
        "flux_quantum": _p(1.0, "float", "Φ₀"),
        "delta_j": _p(0.0, "float", "junction phase for I")},
        (-2.0, 2.0, 401, "applied flux Φ"), _run_squid, "SQUID response"),
    "coherence": Kind({
        "I1": _p(1.0, "float", "intensity of beam 1"),
        "I2": _p(1.0, "float", "intensity of beam 2"),
        "g1_abs": _p(1.0, "float", "|g⁽¹⁾|"),
        "g2_zero": _p(None, "float?", "g⁽²⁾(0) to classify")},
        (0.0, TWO_PI, 201, "interference phase"), _run_coherence, "two-beam fringe"),
}


def schema(kind: str) -> dict:
    """Machine-readable description of a scenario kind."""
    k = KINDS[kind]
    out = {"kind": kind, "description": k.doc,
           "parameters": {n: {"type": p.kind, "default": p.default, "doc": p.doc}
                          for n, p in k.params.items()}}
    if k.grid is not None:
        out["grid"] = {"start": k.grid[0], "stop": k.grid[1], "n": k.grid[2], "axis": k.grid[3]}
    return out


# config handling

def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg


@dataclass
class Resolved:
    kind: str
    params: dict
    grid: Optional[np.ndarray]
    grid_spec: Optional[dict]
    prefix: str
    seed: Optional[int]


def resolve(cfg: dict, kind: Optional[str] = None, seed: Optional[int] = None) -> Resolved:
    unknown = sorted(set(cfg) - set(TOP_KEYS))
    if unknown:
        raise ConfigError(f"unknown top-level keys: {', '.join(unknown)}")
    ck = cfg.get("kind")
    if kind is None:
        kind = ck
    if kind is None:
        raise ConfigError("scenario kind missing")
    if ck is not None and ck != kind:
        raise ConfigError(f"config kind {ck!r} does not match subcommand {kind!r}")
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}")
    spec = KINDS[kind]
    given = cfg.get("parameters", {})
    if not isinstance(given, dict):
        raise ConfigError("parameters must be an object")
    bad = sorted(set(given) - set(spec.params))
    if bad:
        raise ConfigError(f"unknown parameters for {kind}: {', '.join(bad)}")
    params = {n: _check_type(n, given.get(n, p.default), p.kind) for n, p in spec.params.items()}
    gcfg = cfg.get("grid", {})
    if not isinstance(gcfg, dict):
        raise ConfigError("grid must be an object")
    if sorted(set(gcfg) - set(GRID_KEYS)):
        raise ConfigError(f"unknown grid keys: {', '.join(sorted(set(gcfg) - set(GRID_KEYS)))}")
    grid = grid_spec = None
    if spec.grid is not None:
        grid = _grid(gcfg, spec.grid)
        grid_spec = {"start": float(grid[0]), "stop": float(grid[-1]), "n": int(grid.size)}
    elif gcfg:
        raise ConfigError(f"{kind} takes no grid")
    out = cfg.get("output", {})
    if not isinstance(out, dict) or sorted(set(out) - {"prefix"}):
        raise ConfigError("output accepts only 'prefix'")
    prefix = _check_type("output.prefix", out.get("prefix", kind.replace("-", "_")), "str")
    if not prefix or os.sep in prefix:
        raise ConfigError("output prefix must be a plain file name")
    cseed = cfg.get("seed")
    if cseed is not None:
        cseed = _check_type("seed", cseed, "int")
    return Resolved(kind, params, grid, grid_spec, prefix, seed if seed is not None else cseed)


# output

def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else None
    return x


def write_csv(path: str, columns: Sequence[Col], table: np.ndarray) -> None:
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or table.shape[1] != len(columns):
        raise AssertionError("table does not match its columns")
    lines = [",".join(name for name, _ in columns)]
    lines += [",".join("%.17e" % v for v in row) for row in table]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_clean(obj), fh, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
        fh.write("\n")


def execute(r: Resolved, out_dir: str) -> dict:
    """Run a resolved scenario and write its CSV and summary; returns the summary."""
    spec = KINDS[r.kind]
    try:
        cols, table, results, tol = spec.run(r.params, r.grid, r.seed)
    except ConfigError:
        raise
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, r.prefix + ".csv")
    json_path = os.path.join(out_dir, r.prefix + "_summary.json")
    summary = {
        "kind": r.kind, "version": __version__, "parameters": r.params, "grid": r.grid_spec,
        "seed": r.seed, "tolerances": tol, "results": results,
        "schema": {"csv": os.path.basename(csv_path),
                   "columns": [{"name": n, "description": d} for n, d in cols]},
    }
    write_csv(csv_path, cols, table)
    write_json(json_path, summary)
    return summary


def _classify(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_INPUT
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, ValidationError) and not isinstance(exc, ArithmeticError):
        return EXIT_INPUT
    if isinstance(exc, (QInterfError, ArithmeticError, FloatingPointError, np.linalg.LinAlgError)):
        return EXIT_NUMERIC
    if isinstance(exc, (ValueError, TypeError)):
        return EXIT_INPUT
    return EXIT_NUMERIC


def _run_one(cfg: dict, kind: str, seed, out_dir: str) -> Tuple[int, str, Optional[dict]]:
    try:
        summary = execute(resolve(cfg, kind, seed), out_dir)
        return EXIT_OK, "", summary
    except Exception as exc:  # mapped to an exit status
        return _classify(exc), f"{type(exc).__name__}: {exc}", None


# sweep

def parse_values(text: str) -> List[float]:
    text = text.strip()
    if not text:
        raise ConfigError("empty value list")
    try:
        vals = json.loads(text) if text.startswith("[") else [float(v) for v in text.split(",")]
    except (ValueError, json.JSONDecodeError):
        raise ConfigError(f"cannot parse values {text!r}") from None
    if not isinstance(vals, list) or not vals:
        raise ConfigError("empty value list")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in vals):
        raise ConfigError("values must be numbers")
    return [float(v) for v in vals]


def sweep(cfg: dict, param: str, values: Sequence[float], out_dir: str, seed=None,
          threads: int = 1) -> Tuple[int, dict]:
    """Run one scenario per value; returns (exit status, manifest)."""
    base = resolve(cfg, None, seed)
    spec = KINDS[base.kind]
    if param not in spec.params or spec.params[param].kind.rstrip("?") not in ("float", "int"):
        raise ConfigError(f"{param!r} is not a scalar parameter of {base.kind}")
    if not values:
        raise ConfigError("empty value list")
    width = max(3, len(str(len(values) - 1)))
    jobs = []
    for i, v in enumerate(values):
        c = json.loads(json.dumps(cfg))
        c["kind"] = base.kind
        c.setdefault("parameters", {})[param] = int(v) if spec.params[param].kind.startswith("int") else v
        c["output"] = {"prefix": f"{base.prefix}_{param}_{i:0{width}d}"}
        jobs.append(c)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as ex:
            outs = list(ex.map(_run_one, jobs, [base.kind] * len(jobs),
                               [seed] * len(jobs), [out_dir] * len(jobs)))
    else:
        outs = [_run_one(c, base.kind, seed, out_dir) for c in jobs]
    runs = []
    for i, (v, c, (code, err, summary)) in enumerate(zip(values, jobs, outs)):
        pre = c["output"]["prefix"]
        runs.append({"index": i, "value": v, "status": "ok" if code == 0 else "failed",
                     "exit_code": code, "error": err or None, "csv": pre + ".csv",
                     "summary": pre + "_summary.json",
                     "results": summary["results"] if summary else None})
    manifest = {"kind": base.kind, "parameter": param, "values": list(values),
                "version": __version__, "runs": runs}
    write_json(os.path.join(out_dir, f"{base.prefix}_sweep_manifest.json"), manifest)
    codes = [r["exit_code"] for r in runs if r["exit_code"]]
    return (codes[0] if codes else EXIT_OK), manifest


# entry point

def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qinterf", description="Quantum-interference scenarios.")
    ap.add_argument("--version", action="version", version=f"qinterf {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def shared(p):
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="random seed (bb84)")
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help=f"parallel workers (default ${THREADS_ENV} or 1)")

    for name, k in KINDS.items():
        shared(sub.add_parser(name, help=k.doc))
    sw = sub.add_parser("sweep", help="run a scenario once per parameter value")
    shared(sw)
    sw.add_argument("--param", required=True, help="scalar parameter to vary")
    sw.add_argument("--values", required=True, help="comma list or JSON array")
    sc = sub.add_parser("schema", help="print the scenario schema")
    sc.add_argument("kind", nargs="?", choices=sorted(KINDS))
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        kinds = [args.kind] if args.kind else sorted(KINDS)
        print(json.dumps({k: schema(k) for k in kinds}, indent=2, ensure_ascii=False))
        return EXIT_OK
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg = load_config(args.config)
        if args.command == "sweep":
            code, manifest = sweep(cfg, args.param, parse_values(args.values), args.out_dir,
                                   args.seed, args.threads)
            for r in manifest["runs"]:
                if r["error"]:
                    print(f"run {r['index']}: {r['error']}", file=sys.stderr)
            return code
        summary = execute(resolve(cfg, args.command, args.seed), args.out_dir)
        print(json.dumps(_clean(summary["results"]), sort_keys=True))
        return EXIT_OK
    except Exception as exc:
        code = _classify(exc)
        print(f"qinterf: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
