"""Classification pipeline and the catalog audit.

The audit instantiates every catalog row, checks Maxwell's equations at
sample points, tests each claimed generator with the field-form residual
and the prolongation oracle, and for Noether rows integrates trajectories
to confirm that the first integrals are conserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dynamics as dyn
from .fields.catalog import ROWS, CatalogRow, catalog_instance
from .fields.spec import FieldSpec
from .matching import match_basis
from .optimal import verify_optimal_tables
from .verify import (
    DEFAULT_TOL,
    ClassReport,
    _phi_constant,
    detect_symmetries,
    generator_residual,
    maxwell_check,
    oracle_check,
    oracle_residual,
    random_states,
)

MAXWELL_TOL = 1e-9
DRIFT_TOL = 1e-7

# Rows whose printed potentials are known not to admit the printed algebra.
# "pair" marks the two rows whose printed gauge terms contradict each other,
# "typo" marks rows where a corrected variant passes.
KNOWN_ISSUES = {
    "sym3:5": ("pair", "printed y*z gauge term breaks v3; the Noether row noe3:2 prints x*z, which works"),
    "noe3:2": ("pair", "prints x*z while sym3:5 prints y*z; only the x*z form admits v3"),
    "sym4:6": ("typo", "helix phase ln(z/k) breaks the screw generator; ln(z)/k admits it"),
    "sym4:7": ("typo", "helix phase ln(z/k) breaks the screw generator; ln(z)/k admits it"),
    "sym4:8": ("typo", "helix phase ln(z/k) breaks the screw generator; ln(z)/k admits it"),
    "noe4:3": ("typo", "helix phase ln(z/k) breaks the screw generator; ln(z)/k admits it"),
}


def classify(fs: FieldSpec, tol: float = DEFAULT_TOL, seed: int = 0, n_points: int = 40,
             match: bool = True) -> ClassReport:
    """Detect, cross-check and (best effort) identify the symmetry algebra."""
    det = detect_symmetries(fs, n_points=n_points, tol=tol, seed=seed)
    agree, res = oracle_check(fs, det, tol=tol, seed=seed)
    mx = maxwell_check(fs, det.points)
    rep = ClassReport(fs.describe(), det, agree, res, mx)
    if match and det.dimension:
        m = match_basis(det.basis, "sym", seed=seed)
        rep.match = m.to_json() if m.matches else None
        if det.noether_dimension:
            n = match_basis(det.noether, "noe", seed=seed)
            rep.noether_match = n.to_json() if n.matches else None
        if rep.match is None:
            rep.warnings.append("no catalog row matches the detected algebra; raw basis reported")
    return rep


@dataclass
class GeneratorCheck:
    generator: str
    field_residual: float
    oracle_residual: float
    drift: float | None = None

    def ok(self, tol: float) -> bool:
        good = self.field_residual < tol and self.oracle_residual < tol
        return good and (self.drift is None or self.drift < DRIFT_TOL)

    def to_json(self) -> dict:
        return {"generator": self.generator, "fieldResidual": self.field_residual,
                "oracleResidual": self.oracle_residual, "drift": self.drift}


@dataclass
class VariantAudit:
    variant: str
    maxwell: tuple
    checks: list
    hamiltonian_drift: float | None
    passed: bool
    error: str = ""

    def to_json(self) -> dict:
        return {"variant": self.variant, "passed": self.passed,
                "maxwell": {"divB": self.maxwell[0], "curlE": self.maxwell[1]},
                "generators": [c.to_json() for c in self.checks],
                "hamiltonianDrift": self.hamiltonian_drift, "error": self.error}


@dataclass
class RowAudit:
    key: str
    status: str  # PASS, WARN or FAIL
    variants: list = field(default_factory=list)
    note: str = ""

    @property
    def maxwell_ok(self) -> bool:
        return all(max(v.maxwell) < MAXWELL_TOL for v in self.variants)

    def to_json(self) -> dict:
        return {"key": self.key, "status": self.status, "note": self.note,
                "variants": [v.to_json() for v in self.variants]}


def _gen_label(g) -> str:
    terms = [f"{v}*v{i}" for i, v in enumerate(g.c, 1) if v != 0]
    return " + ".join(terms) if terms else "0"


def _trajectory(fs: FieldSpec, seed: int, t_end: float) -> dyn.Trajectory:
    """A trajectory that stays in the domain (and off the cut) up to t_end."""
    last = None
    for span in (t_end, t_end / 4):
        for k in range(12):
            s0 = dyn.sample_states(fs, 1, seed=seed + k, speed=0.5)[0]
            try:
                return dyn.integrate(fs, s0, span, atol=1e-11, rtol=1e-11, stop_at_cut=True)
            except dyn.DomainExitError as exc:
                last = exc
    raise last


def _drifts(fs: FieldSpec, gens, c9s, seed: int, t_end: float) -> tuple[float, list]:
    """Drift of H and of each Noether integral along one trajectory."""
    traj = _trajectory(fs, seed, t_end)
    idx = np.unique(np.linspace(0, len(traj) - 1, min(len(traj), 120)).astype(int))
    sub = dyn.Trajectory(traj.t[idx], traj.y[idx])
    H = dyn.hamiltonian_fn(fs).values(sub)
    out = []
    for g, c9 in zip(gens, c9s):
        coeffs = [0.0] + [float(v) for v in g.c] + [c9]
        inv = dyn.noether_integral_fn(fs, coeffs, "auto")
        vals = inv.values(sub)
        out.append(float(np.max(np.abs(vals - vals[0]))))
    return float(np.max(np.abs(H - H[0]))), out


def audit_variant(row: CatalogRow, variant: str, tol: float = DEFAULT_TOL, seed: int = 0,
                  drift: bool = True, t_end: float = 10.0) -> VariantAudit:
    key = row.key if variant == "printed" else f"{row.key}:{variant}"
    fs = catalog_instance(key)
    pts = fs.sample_points(40, seed=seed)
    mx = maxwell_check(fs, pts)
    states = random_states(fs, 20, seed)
    gens = row.claimed()
    checks = [GeneratorCheck(_gen_label(g), generator_residual(fs, g, pts), oracle_residual(fs, g, states))
              for g in gens]
    h_drift = None
    err = ""
    if drift and row.noether:
        c9s = _phi_constant(fs, np.array([g.as_array() for g in gens]), pts)
        try:
            h_drift, ds = _drifts(fs, gens, c9s, seed, t_end)
            for c, d in zip(checks, ds):
                c.drift = d
        except (dyn.DomainExitError, dyn.MissingGaugeError, dyn.StepSizeUnderflow) as exc:
            err = f"{type(exc).__name__}: {exc}"
    passed = (max(mx) < MAXWELL_TOL and all(c.ok(tol) for c in checks) and not err
              and (h_drift is None or h_drift < DRIFT_TOL))
    return VariantAudit(variant, (float(mx[0]), float(mx[1])), checks, h_drift, passed, err)


def audit_row(key: str, tol: float = DEFAULT_TOL, seed: int = 0, drift: bool = True) -> RowAudit:
    row = ROWS[key]
    variants = [audit_variant(row, v, tol, seed, drift) for v in ["printed", *row.variants]]
    printed = variants[0]
    issue = KNOWN_ISSUES.get(key)
    if issue is None:
        status = "PASS" if printed.passed else "FAIL"
        return RowAudit(key, status, variants, row.note)
    kind, text = issue
    if kind == "pair":
        # the discrepancy must actually show up: exactly one form admits the algebra
        split = sorted(v.passed for v in variants) == [False, True]
        return RowAudit(key, "WARN" if split else "FAIL", variants,
                        text if split else f"expected discrepancy not reproduced: {text}")
    corrected = [v for v in variants[1:] if v.variant == "corrected"]
    if not printed.passed and corrected and corrected[0].passed:
        return RowAudit(key, "WARN", variants, text)
    return RowAudit(key, "PASS" if printed.passed else "FAIL", variants, row.note)


@dataclass
class AuditReport:
    scope: str
    rows: list = field(default_factory=list)
    optimal: dict | None = None

    @property
    def counts(self) -> dict:
        out = {"PASS": 0, "WARN": 0, "FAIL": 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        rows_ok = all(r.status != "FAIL" for r in self.rows)
        return rows_ok and (self.optimal is None or bool(self.optimal["ok"]))

    def to_json(self) -> dict:
        d = {"scope": self.scope, "ok": self.ok, "counts": self.counts,
             "rows": [r.to_json() for r in self.rows]}
        if self.optimal is not None:
            d["optimal"] = self.optimal
        return d

    def text(self) -> str:
        lines = []
        if self.optimal is not None:
            for name in ("table2", "table3", "table4"):
                t = self.optimal[name]
                bad = [k for k, r in t["rows"].items() if not r["ok"]]
                lines.append(f"{name}: {t['count']} rows, {'all closed' if not bad else 'FAIL rows ' + ','.join(bad)}")
        for r in self.rows:
            worst = max((max(c.field_residual, c.oracle_residual) for c in r.variants[0].checks), default=0.0)
            lines.append(f"{r.status:4s} {r.key:8s} residual={worst:.2e}" + (f"  {r.note}" if r.note else ""))
        c = self.counts
        lines.append(f"summary: {c['PASS']} pass, {c['WARN']} warn, {c['FAIL']} fail")
        return "\n".join(lines)


def audit_catalog(scope: str = "all", tol: float = DEFAULT_TOL, seed: int = 0, drift: bool = True,
                  optimal_draws: int = 3) -> AuditReport:
    """scope is one of optimal, symmetry, noether, all."""
    if scope not in ("optimal", "symmetry", "noether", "all"):
        raise ValueError(f"unknown scope {scope!r}")
    rep = AuditReport(scope)
    if scope in ("optimal", "all"):
        rep.optimal = verify_optimal_tables(optimal_draws, seed)
    keys = [k for k, r in ROWS.items()
            if (scope == "all") or (scope == "symmetry" and not r.noether) or (scope == "noether" and r.noether)]
    rep.rows = [audit_row(k, tol, seed, drift) for k in keys]
    return rep


__all__ = ["AuditReport", "KNOWN_ISSUES", "RowAudit", "audit_catalog", "audit_row", "audit_variant", "classify"]
