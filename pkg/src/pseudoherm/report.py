"""Validation runs and machine-readable reports.

Report schema (JSON)::

    {
      "tool": "pseudoherm", "version": str, "config_hash": sha256 hex,
      "config": {key: value, ...},              # echo of the input keys
      "model": str,
      "resolved": {...},                        # parameters actually used
      "checks": [{"name", "verdict", "residual", "tolerance"[, "wall_time"]}],
      "passed": bool,                           # all pass/fail checks passed
      "observations": {...},                    # report-only quantities
      "spectra": [{"index", "re_H", "im_H", "E_h", "abs_diff"}]   # optional
    }

``verdict`` is ``pass`` iff ``residual <= tolerance``; ``report-only``
records never fail a run. Wall times are only written when requested,
so that identical configurations give byte-identical reports.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, calogero, evolution, linop, metric, spin_chain
from .config import RunConfig
from .errors import UsageError

#: Default tolerances; multiplied by ``RunConfig.tolerance_scale``.
TOLERANCES = {
    "pseudo_hermiticity": 1e-11,
    "pseudo_hermiticity:intertwining": 1e-9,
    "isospectrality": 1e-8,
    "reality": 1e-8,
    "pt_symmetry": 1e-10,
    "evolution": 1e-8,
    "evolution:propagator": 1e-8,
    "oracle_xx": 1e-9,
    "oracle_xx:H": 1e-8,
    # grid and Fock representations
    "grid:isospectrality": 1e-2,
    "grid:reality": 1e-3,
    "grid:pt_symmetry": 1e-12,
    "exact_calogero": 1e-2,
    "conjugation": 1e-8,
    "conjugation:commutators": 1e-12,
    "conjugation:L12_identity": 1e-12,
    "conjugation:integer_spectrum": 1e-10,
    "fock:pseudo_hermiticity": 1e-9,
}


@dataclass
class CheckRecord:
    name: str
    verdict: str
    residual: float
    tolerance: float
    wall_time: float | None = None

    def as_dict(self, timing=False):
        out = {"name": self.name, "verdict": self.verdict, "residual": self.residual, "tolerance": self.tolerance}
        if timing and self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out


@dataclass
class ValidationReport:
    config: RunConfig
    checks: list = field(default_factory=list)
    observations: dict = field(default_factory=dict)
    resolved: dict = field(default_factory=dict)
    spectra: list | None = None

    @property
    def passed(self) -> bool:
        return all(c.verdict != "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def as_dict(self, timing=False) -> dict:
        out = {
            "tool": "pseudoherm",
            "version": __version__,
            "config_hash": self.config.config_hash(),
            "config": self.config.echo(),
            "model": self.config.model,
            "resolved": self.resolved,
            "checks": [c.as_dict(timing) for c in self.checks],
            "passed": self.passed,
            "observations": self.observations,
        }
        if self.spectra is not None:
            out["spectra"] = self.spectra
        return out

    def to_json(self, timing=False) -> str:
        return json.dumps(_clean(self.as_dict(timing)), indent=2, sort_keys=False) + "\n"


def _clean(obj):
    """Make numpy scalars/arrays JSON-native and replace non-finite floats by None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


class _Recorder:
    def __init__(self, scale):
        self.scale = scale
        self.records = []

    def add(self, name, residual, key=None, report_only=False, started=None):
        tol = TOLERANCES[key or name] * self.scale
        residual = float(residual)
        if report_only:
            verdict = "report-only"
        else:
            verdict = "pass" if residual <= tol else "fail"
        wall = None if started is None else time.perf_counter() - started
        self.records.append(CheckRecord(name, verdict, residual, tol, wall))


def default_state(dim: int) -> np.ndarray:
    """Deterministic generic initial state (no symmetry, all components nonzero)."""
    k = np.arange(dim)
    return (1.0 + k / dim) * np.exp(1j * (0.7 * k + 0.3 * k**2))


def _initial_state(cfg: RunConfig, dim: int) -> np.ndarray:
    if cfg.seed is None:
        return default_state(dim)
    rng = np.random.default_rng([cfg.seed, 1])
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def matched_table(values_H, values_h) -> list:
    """Rows ``index, re_H, im_H, E_h, abs_diff`` after ``(Re, Im)`` sorting of both."""
    a = linop.Spectrum(values_H).sorted().values
    b = None if values_h is None else linop.Spectrum(values_h).sorted().values
    rows = []
    for i, e in enumerate(a):
        row = {"index": i, "re_H": float(e.real), "im_H": float(e.imag), "E_h": None, "abs_diff": None}
        if b is not None and i < b.size:
            row["E_h"] = float(b[i].real)
            row["abs_diff"] = float(abs(e - b[i]))
        rows.append(row)
    return rows


# ----------------------------------------------------------------- models


def _chain_ops(cfg):
    p = cfg.params
    if cfg.model == "haldane_shastry":
        sign = cfg.settings["sign"]
        H = spin_chain.build_haldane_shastry(p.N, sign, True, p.w)
        h = spin_chain.build_haldane_shastry(p.N, sign, False)
    else:
        build = spin_chain.build_symmetric_xxz if cfg.model == "symmetric_xxz" else spin_chain.build_asymmetric_xxz
        H = build(p)
        h = spin_chain.build_hermitian_xxz(p)
    return H, h, p.metric()


def _chain_resolved(cfg):
    p = cfg.params
    out = {"N": p.N, "w": p.w, "gamma": p.gamma}
    if cfg.model != "haldane_shastry":
        out.update(Gamma=p.Gamma, Delta=p.Delta, A=p.A, B=p.B, C=p.C, offset=p.offset)
    out.update({k: v for k, v in cfg.settings.items()})
    return out


def _run_chain(cfg, rec, report, want_spectra):
    p = cfg.params
    H, h, m = _chain_ops(cfg)
    report.resolved = _chain_resolved(cfg)
    spec_H = spec_h = None

    def spectra():
        nonlocal spec_H, spec_h
        if spec_H is None:
            spec_H = linop.eig_general(H)
            spec_h = linop.eig_hermitian(h)[0]
        return spec_H, spec_h

    for check in cfg.checks:
        t0 = time.perf_counter()
        if check == "pseudo_hermiticity":
            rec.add(check, metric.pseudo_hermiticity_residual(H, m), started=t0)
            rec.add("pseudo_hermiticity:intertwining", evolution.intertwine_residual(H, h, m), started=t0)
        elif check == "isospectrality":
            sH, sh = spectra()
            rec.add(check, linop.match_spectra(sH, sh, 0.0)[1], started=t0)
        elif check == "reality":
            sH, _ = spectra()
            rec.add(check, sH.max_imag / linop.max_norm(H), started=t0)
        elif check == "pt_symmetry":
            theta = cfg.settings["theta"]
            rec.add(check, spin_chain.pt_residual(H, theta), report_only=check in cfg.report_only, started=t0)
            report.observations["pt_field_condition"] = spin_chain.pt_condition(p.A, p.B, theta)
        elif check == "evolution":
            times = np.linspace(0.0, cfg.settings["t_max"], cfg.settings["steps"])
            trace = evolution.norm_trace(H, m, _initial_state(cfg, H.shape[0]), times)
            rec.add(check, trace.eta_drift, started=t0)
            rec.add("evolution:propagator", evolution.propagator_intertwine_residual(H, h, m, 1.0), started=t0)
            report.observations["dirac_norm_variation"] = trace.dirac_variation
            report.observations["dirac_hermiticity_residual"] = linop.hermiticity_residual(H)
        elif check == "oracle_xx":
            oracle = spin_chain.jw_xx_oracle(p.N, p.Gamma, p.C)
            _, sh = spectra()
            rec.add(check, linop.match_spectra(oracle, sh, 0.0)[1], started=t0)
            sH, _ = spectra()
            rec.add("oracle_xx:H", linop.match_spectra(oracle, sH, 0.0)[1], started=t0)
    if cfg.settings.get("preset") == "su_q2":
        _, sh = spectra()
        shifted = sh.real - p.offset
        report.observations["shifted_partner_ground_energy"] = float(shifted.min())
        report.observations["partner_multiplets"] = spin_chain.multiplet_structure(shifted, 1e-8)
    if want_spectra:
        sH, sh = spectra()
        report.spectra = matched_table(sH.values, sh.values)


def _run_general(cfg, rec, report, want_spectra):
    tp = cfg.params
    H = spin_chain.build_general_pt(tp)
    report.resolved = {k: v for k, v in vars(tp).items()}
    spec = None
    for check in cfg.checks:
        t0 = time.perf_counter()
        if check == "pt_symmetry":
            rec.add(check, spin_chain.pt_residual(H, tp.theta), report_only=check in cfg.report_only, started=t0)
            args = (tp.alphaR, tp.alphaI, tp.betaR, tp.betaI, tp.theta)
            report.observations["field_condition"] = spin_chain.pt_condition_general(*args)
            report.observations["field_condition_as_printed"] = spin_chain.pt_condition_general_printed(*args)
        elif check == "reality":
            spec = spec or linop.eig_general(H)
            rec.add(check, spec.max_imag / linop.max_norm(H), report_only=True, started=t0)
    if want_spectra:
        spec = spec or linop.eig_general(H)
        report.spectra = matched_table(spec.values, None)


def _run_grid(cfg, rec, report, want_spectra):
    g = cfg.params
    levels = cfg.settings["levels"]
    report.resolved = {"L": g.L, "n": g.n, "lambda": g.lam, "phi": g.phi, "levels": levels, "dim": g.dim}
    t0 = time.perf_counter()
    e_H, e_h, e_odd, pt = calogero.grid_spectra(g)
    low_H, low_h = e_H[:levels], e_h[:levels]
    scale = float(np.max(np.abs(low_h)))
    for check in cfg.checks:
        if check == "isospectrality":
            rec.add(check, float(np.max(np.abs(low_H.real - low_h) / np.abs(low_h))), key="grid:isospectrality", started=t0)
        elif check == "reality":
            rec.add(check, float(np.max(np.abs(low_H.imag))) / scale, key="grid:reality", started=t0)
        elif check == "pt_symmetry":
            rec.add(check, pt, key="grid:pt_symmetry", started=t0)
        elif check == "exact_calogero":
            exact = calogero.calogero_exact_spectrum(g.lam, 4)
            rec.add(check, float(np.max(np.abs(e_odd[:4] - exact) / exact)), started=t0)
            report.observations["exchange_odd_levels"] = e_odd[:4]
            report.observations["exact_levels"] = exact
    if want_spectra:
        report.spectra = matched_table(low_H, low_h)


def _run_fock(cfg, rec, report, want_spectra):
    d, gamma = cfg.params["d"], cfg.params["gamma"]
    report.resolved = {"d": d, "gamma": gamma, "phi": gamma}
    rep = calogero.build_fock_rep(d)
    for check in cfg.checks:
        t0 = time.perf_counter()
        if check == "conjugation":
            rec.add(check, calogero.conjugation_check(rep, gamma), started=t0)
            rec.add("conjugation:commutators", calogero.interior_commutator_deviation(rep, gamma), started=t0)
            rec.add("conjugation:L12_identity", calogero.l12_identity_deviation(rep, gamma), started=t0)
            rec.add("conjugation:integer_spectrum", calogero.integer_spectrum_deviation(rep), started=t0)
        elif check == "pseudo_hermiticity":
            m = calogero.rotation_metric(rep, gamma)
            mask = rep.interior(d - 6)
            worst = 0.0
            for X in calogero.deformed_pairs(rep, gamma):
                diff = (m.eta @ X - linop.adjoint(X) @ m.eta)[np.ix_(mask, mask)]
                worst = max(worst, linop.max_norm(diff) / (linop.max_norm(m.eta) * linop.max_norm(X)))
            rec.add(check, worst, key="fock:pseudo_hermiticity", started=t0)
    if want_spectra:
        raise UsageError("calogero_fock has no spectrum to report")


_RUNNERS = {
    "asymmetric_xxz": _run_chain,
    "symmetric_xxz": _run_chain,
    "haldane_shastry": _run_chain,
    "general_pt": _run_general,
    "calogero_grid": _run_grid,
    "calogero_fock": _run_fock,
}


def run_validation(cfg: RunConfig, spectra: bool = False) -> ValidationReport:
    """Run every requested check of ``cfg``; deterministic for a fixed configuration."""
    report = ValidationReport(cfg)
    rec = _Recorder(cfg.tolerance_scale)
    _RUNNERS[cfg.model](cfg, rec, report, spectra)
    report.checks = rec.records
    return report


def evolution_trace(cfg: RunConfig) -> evolution.EvolutionTrace:
    """Norm trace for the chain models with the configured time grid."""
    if cfg.model not in ("asymmetric_xxz", "symmetric_xxz", "haldane_shastry"):
        raise UsageError(f"evolution is not available for model {cfg.model}")
    H, _, m = _chain_ops(cfg)
    times = np.linspace(0.0, cfg.settings["t_max"], cfg.settings["steps"])
    return evolution.norm_trace(H, m, _initial_state(cfg, H.shape[0]), times)


# ----------------------------------------------------------------- writers


def spectra_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "Re(E_H)", "Im(E_H)", "E_h", "|dE|"])
    for r in rows:
        writer.writerow(["" if r[k] is None else repr(r[k]) for k in ("index", "re_H", "im_H", "E_h", "abs_diff")])
    return buf.getvalue()


def trace_json(cfg: RunConfig, trace: evolution.EvolutionTrace) -> str:
    out = {
        "tool": "pseudoherm",
        "version": __version__,
        "config_hash": cfg.config_hash(),
        "config": cfg.echo(),
        "state_dim": trace.state_dim,
        "eta_drift": trace.eta_drift,
        "dirac_variation": trace.dirac_variation,
        "times": trace.times,
        "dirac_norms": trace.dirac_norms,
        "eta_norms": trace.eta_norms,
    }
    return json.dumps(_clean(out), indent=2) + "\n"


def trace_csv(trace: evolution.EvolutionTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "dirac_norm", "eta_norm"])
    for row in zip(trace.times, trace.dirac_norms, trace.eta_norms):
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()
