"""Optimal systems of one-, two- and three-dimensional equivalence subalgebras.

One-dimensional generators are reduced constructively to a table row by
:func:`canonicalize1D`; two- and three-dimensional rows are only verified
(closure, side conditions, adjoint-invariant signatures).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm
from numpy.polynomial.legendre import leggauss

from . import expr as ex
from .liealg import (
    AdjointStep,
    EquivGenerator,
    RelatedOperator,
    adjoint_apply,
    apply_steps,
    bracket,
    invariants,
)

F = Fraction

# gauge functions used by the tables
GAUGE_FUNCS = {
    "phi": "atan2(y, x)",
    "lnz": "ln(z)",
    "lny": "ln(y)",
    "z": "z",
    "x": "x",
    "y": "y",
    "quad": "(x^2 - y^2)/2",
    "yr": "y*sqrt(x^2 + y^2 + z^2)/(x^2 + y^2)",
    "xr": "x*sqrt(x^2 + y^2 + z^2)/(x^2 + y^2)",
}
_GAUGE = {k: ex.parse(v) for k, v in GAUGE_FUNCS.items()}


def gauge(name: str, coeff=1) -> EquivGenerator:
    return EquivGenerator.pure_gauge(ex.Const(F(coeff)) * _GAUGE[name])


def V(**kw) -> EquivGenerator:
    """Finite generator from keyword coefficients, e.g. ``V(c4=1, c7=k)``."""
    return EquivGenerator.of(**kw)


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class TableRow:
    table: int  # 2, 3 or 4 (dimension + 1)
    row: int
    params: tuple
    condition: Callable[[dict], bool]
    build: Callable[[dict], list]
    condition_text: str = ""
    note: str = ""

    @property
    def dim(self) -> int:
        return self.table - 1

    @property
    def key(self) -> str:
        return f"T{self.table}.{self.row}"

    def basis(self, p: dict | None = None) -> list[EquivGenerator]:
        p = dict(p or {})
        missing = [n for n in self.params if n not in p]
        if missing:
            raise ValueError(f"{self.key}: missing parameters {missing}")
        return self.build(p)

    def admissible(self, p: dict) -> bool:
        return bool(self.condition(p))


def _always(p):
    return True


def _row(table, row, params, build, cond=_always, text="", note=""):
    return TableRow(table, row, tuple(params), cond, build, text, note)


TABLE2 = [
    _row(2, 1, ("k1", "k2"), lambda p: [V(c4=1, c7=p["k1"], c8=p["k2"])],
         lambda p: p["k2"] != p["k1"] and p["k1"] != 0, "k2 != k1 != 0"),
    _row(2, 2, ("k", "lam"), lambda p: [V(c4=1, c7=p["k"], c8=p["k"], c9=p["k"] * p["lam"])],
         lambda p: p["k"] != 0, "k != 0"),
    _row(2, 3, ("k1", "k2"), lambda p: [V(c4=1, c3=p["k1"], c8=p["k2"])],
         lambda p: p["k2"] != 0, "k2 != 0"),
    _row(2, 4, ("k", "lam"), lambda p: [V(c4=1, c3=p["k"], c9=p["lam"])]),
    _row(2, 5, ("k",), lambda p: [V(c7=1, c8=p["k"])], lambda p: p["k"] != 1, "k != 1"),
    _row(2, 6, ("lam",), lambda p: [V(c7=1, c8=1, c9=p["lam"])]),
    _row(2, 7, ("k",), lambda p: [V(c3=1, c8=p["k"])], lambda p: p["k"] != 0, "k != 0"),
    _row(2, 8, ("lam",), lambda p: [V(c3=1, c9=p["lam"])]),
]

TABLE3 = [
    _row(3, 1, ("k1", "k2"), lambda p: [V(c3=1), V(c4=1, c7=p["k1"], c8=p["k2"])],
         lambda p: 2 * p["k2"] != p["k1"] and p["k2"] != p["k1"] and p["k1"] != 0,
         "2k2, k2 != k1 != 0"),
    _row(3, 2, ("k", "lam"), lambda p: [V(c3=1, c9=p["lam"]), V(c4=1, c7=2 * p["k"], c8=p["k"])],
         lambda p: p["k"] != 0, "k != 0"),
    _row(3, 3, ("k", "lam1", "lam2"),
         lambda p: [V(c3=1) + gauge("phi", p["lam1"]),
                    V(c4=1, c7=p["k"], c8=p["k"], c9=p["k"] * p["lam2"])],
         lambda p: p["k"] != 0, "k != 0"),
    _row(3, 4, ("k1", "k2"), lambda p: [V(c3=1, c8=p["k1"]), V(c4=1, c8=p["k2"])],
         lambda p: p["k1"] != 0 or p["k2"] != 0, "k1 != 0 or k2 != 0"),
    _row(3, 5, ("lam1", "lam2", "lam3"),
         lambda p: [V(c3=1, c9=p["lam1"]) + gauge("phi", p["lam3"]), V(c4=1, c9=p["lam2"])]),
    _row(3, 6, ("k1", "k2"), lambda p: [V(c4=1, c8=p["k1"]), V(c7=1, c8=p["k2"])],
         lambda p: p["k1"] != 0 or p["k2"] not in (1, 2), "k1 != 0 or k2 != 1, 2"),
    _row(3, 7, ("lam1", "lam2"), lambda p: [V(c4=1, c9=p["lam1"]), V(c7=1, c8=1, c9=p["lam2"])]),
    _row(3, 8, ("lam",), lambda p: [V(c4=1), V(c7=1, c8=2) + gauge("phi", p["lam"])]),
    _row(3, 9, ("k",), lambda p: [V(c3=1), V(c7=1, c8=p["k"])],
         lambda p: p["k"] not in (F(1, 2), 1), "k != 1/2, 1"),
    _row(3, 10, ("lam1", "lam2"),
         lambda p: [V(c3=1) + gauge("lnz", -p["lam1"]), V(c7=1, c8=1, c9=p["lam2"])]),
    _row(3, 11, ("lam",), lambda p: [V(c3=1, c9=p["lam"]), V(c7=2, c8=1)]),
    _row(3, 12, ("k1", "k2"), lambda p: [V(c2=1, c8=p["k1"]), V(c3=1, c8=p["k2"])],
         lambda p: p["k2"] != 0, "k2 != 0"),
    _row(3, 13, ("lam1", "lam2", "lam3"),
         lambda p: [V(c2=1, c9=p["lam1"]) + gauge("z", p["lam3"]), V(c3=1, c9=p["lam2"])]),
]

TABLE4 = [
    _row(4, 1, ("k1", "k2"), lambda p: [V(c3=1), V(c4=1, c8=p["k1"]), V(c7=1, c8=p["k2"])],
         lambda p: p["k1"] != 0 or p["k2"] not in (F(1, 2), 1, 2), "k1 != 0 or k2 != 1/2, 1, 2"),
    _row(4, 2, ("lam",), lambda p: [V(c3=1, c9=p["lam"]), V(c4=1), V(c7=2, c8=1)]),
    _row(4, 3, ("lam1", "lam2", "lam3", "lam4"),
         lambda p: [V(c3=1) + gauge("phi", p["lam1"]) + gauge("lnz", -p["lam2"]),
                    V(c4=1, c9=p["lam3"]), V(c7=1, c8=1, c9=p["lam4"])]),
    _row(4, 4, ("lam",), lambda p: [V(c3=1), V(c4=1), V(c7=1, c8=2) + gauge("phi", p["lam"])]),
    _row(4, 5, ("lam",), lambda p: [V(c4=1), V(c5=1) + gauge("yr", p["lam"]),
                                    V(c6=1) + gauge("xr", p["lam"])]),
    _row(4, 6, ("k1", "k2"), lambda p: [V(c1=1), V(c2=1), V(c4=1, c7=p["k1"], c8=p["k2"])],
         lambda p: p["k1"] * p["k2"] != 0 and p["k1"] != p["k2"], "k1 k2 != 0, k1 != k2"),
    _row(4, 7, ("k", "lam"), lambda p: [V(c1=1), V(c2=1) + gauge("x", p["lam"]),
                                        V(c4=1, c7=p["k"]) + gauge("quad", p["lam"])],
         lambda p: p["k"] != 0, "k != 0"),
    _row(4, 8, ("k", "lam"), lambda p: [V(c1=1), V(c2=1),
                                        V(c4=1, c7=p["k"], c8=p["k"], c9=p["k"] * p["lam"])],
         lambda p: p["k"] != 0, "k != 0"),
    _row(4, 9, ("k1", "k2"), lambda p: [V(c1=1), V(c2=1), V(c4=1, c3=p["k1"], c8=p["k2"])],
         lambda p: p["k1"] * p["k2"] != 0, "k1 k2 != 0",
         note="k1 = 0 excluded because it yields a zero vector potential; flagged, not re-derived"),
    _row(4, 10, ("k", "lam1", "lam2"),
         lambda p: [V(c1=1), V(c2=1) + gauge("x", p["lam1"]),
                    V(c4=1, c3=p["k"], c9=p["lam2"]) + gauge("quad", p["lam1"])],
         lambda p: p["k"] != 0, "k != 0",
         note="k = 0 excluded because it yields a zero vector potential; flagged, not re-derived"),
    _row(4, 11, ("k",), lambda p: [V(c2=1), V(c3=1), V(c7=1, c8=p["k"])],
         lambda p: p["k"] not in (0, F(1, 2), 1), "k != 0, 1/2, 1"),
    _row(4, 12, ("lam",), lambda p: [V(c2=1) + gauge("z", p["lam"]), V(c3=1), V(c7=1)]),
    _row(4, 13, ("lam1", "lam2"), lambda p: [V(c2=1, c9=p["lam1"]), V(c3=1, c9=p["lam2"]),
                                             V(c7=2, c8=1)]),
    _row(4, 14, ("lam1", "lam2", "lam3"),
         lambda p: [V(c2=1) + gauge("lny", -p["lam2"]), V(c3=1) + gauge("lnz", -p["lam3"]),
                    V(c7=1, c8=1, c9=p["lam1"])]),
    _row(4, 15, ("k1", "k2", "k3"),
         lambda p: [V(c1=1, c8=p["k1"]), V(c2=1, c8=p["k2"]), V(c3=1, c8=p["k3"])],
         lambda p: p["k3"] != 0, "k3 != 0"),
    _row(4, 16, ("lam1", "lam2", "lam3", "lam4", "lam5", "lam6"),
         lambda p: [V(c1=1, c9=p["lam1"]) + gauge("y", p["lam4"]) + gauge("z", p["lam5"]),
                    V(c2=1, c9=p["lam2"]) + gauge("z", p["lam6"]),
                    V(c3=1, c9=p["lam3"])]),
]

TABLES = {2: TABLE2, 3: TABLE3, 4: TABLE4}


def table_row(table: int, row: int) -> TableRow:
    return TABLES[table][row - 1]


def draw_params(row: TableRow, rng: random.Random, tries: int = 1000) -> dict:
    """Random small rationals satisfying the row's side conditions."""
    for _ in range(tries):
        p = {}
        for name in row.params:
            num = rng.randint(-6, 6)
            den = rng.choice((1, 1, 2, 3))
            p[name] = F(num, den)
        if row.admissible(p):
            return p
    raise RuntimeError(f"could not draw admissible parameters for {row.key}")


# ---------------------------------------------------------------------------
# exact linear algebra over rationals


def _solve_in_span(vectors: Sequence[Sequence], target: Sequence):
    """Coefficients a with sum a_k vectors[k] = target, plus the residual.

    Exact (Fraction) elimination when every entry is rational, float least
    squares otherwise.
    """
    exact = all(isinstance(v, Fraction) for vec in vectors for v in vec) and all(
        isinstance(v, Fraction) for v in target
    )
    n = len(vectors)
    if not exact:
        a = np.array([[float(v) for v in vec] for vec in vectors]).T
        b = np.array([float(v) for v in target])
        coef, *_ = np.linalg.lstsq(a, b, rcond=None)
        res = b - a @ coef
        return [float(c) for c in coef], float(np.max(np.abs(res))) if len(res) else 0.0
    m = len(target)
    rows = [[vectors[k][i] for k in range(n)] + [target[i]] for i in range(m)]
    piv_cols, r = [], 0
    for col in range(n):
        pr = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                fac = rows[i][col]
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    coef = [F(0)] * n
    for i, col in enumerate(piv_cols):
        coef[col] = rows[i][n]
    res = max((abs(rows[i][n]) for i in range(r, m)), default=F(0))
    return coef, res


def finite_rank(gens: Sequence[EquivGenerator]) -> int:
    if all(g.exact for g in gens):
        # exact rank by elimination
        rows = [list(g.c) for g in gens]
        rank, cols = 0, 9
        for col in range(cols):
            pr = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
            if pr is None:
                continue
            rows[rank], rows[pr] = rows[pr], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i][col] != 0:
                    fac = rows[i][col] / rows[rank][col]
                    rows[i] = [a - fac * b for a, b in zip(rows[i], rows[rank])]
            rank += 1
        return rank
    return int(np.linalg.matrix_rank(np.array([g.finite for g in gens]), tol=1e-10))


# sample points in the positive octant, off every excluded set used by gauges
def _gauge_points(n: int = 24, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(0.4, 1.6, size=(n, 3))


_GAUGE_PTS = _gauge_points()


def gauge_gradient_norm(f: ex.Expr, points: np.ndarray = _GAUGE_PTS) -> float:
    """Max over points of |grad f|; zero iff f is constant there."""
    if not (f.free_symbols() & set(ex.VARIABLES)):
        return 0.0
    fn = ex.compile_exprs(ex.grad(f), ex.VARIABLES, vectorized=True)
    g = np.array(np.broadcast_arrays(*fn(points[:, 0], points[:, 1], points[:, 2])), dtype=float)
    return float(np.max(np.linalg.norm(g, axis=0)))


def _gauge_scale(fs: Sequence[ex.Expr]) -> float:
    return max([1.0] + [gauge_gradient_norm(f) for f in fs])


# ---------------------------------------------------------------------------
# subalgebra checks


@dataclass
class SubalgebraReport:
    dimension: int
    structure: dict  # (i, j) -> coefficient list over the basis
    closure_residual: object
    gauge_residual: float
    closed: bool
    derived_dimension: int
    killing: list | None = None
    signature: tuple = ()
    matched_row: str | None = None
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "structure": {f"{i + 1},{j + 1}": [str(v) for v in c] for (i, j), c in self.structure.items()},
            "closure_residual": str(self.closure_residual),
            "gauge_residual": self.gauge_residual,
            "closed": self.closed,
            "derived_dimension": self.derived_dimension,
            "killing": self.killing,
            "signature": list(self.signature),
            "matched_row": self.matched_row,
            "violations": self.violations,
        }


class LinearlyDependentBasis(ValueError):
    pass


def check_subalgebra(basis: Sequence[EquivGenerator], gauge_tol: float = 1e-8) -> SubalgebraReport:
    """Close the span under the bracket and report structure constants."""
    n = len(basis)
    if not 1 <= n <= 3:
        raise ValueError("basis must have 1 to 3 elements")
    if finite_rank(basis) < n:
        raise LinearlyDependentBasis("basis is linearly dependent on the finite part")
    structure, worst, gworst = {}, F(0), 0.0
    violations = []
    scale = _gauge_scale([b.gauge for b in basis])
    for i in range(n):
        for j in range(i + 1, n):
            br = bracket(basis[i], basis[j])
            coef, res = _solve_in_span([b.c for b in basis], br.c)
            structure[(i, j)] = coef
            worst = max(worst, res) if isinstance(res, Fraction) and isinstance(worst, Fraction) else max(float(worst), float(res))
            gdiff = br.gauge
            for k, b in enumerate(basis):
                if coef[k] != 0:
                    gdiff = gdiff - ex.Const(coef[k]) * b.gauge
            gres = gauge_gradient_norm(gdiff) / scale
            gworst = max(gworst, gres)
            if res != 0 and float(res) > 1e-12:
                violations.append(f"[Y{i + 1},Y{j + 1}] leaves the span (residual {float(res):.3g})")
            elif gres > gauge_tol:
                violations.append(f"[Y{i + 1},Y{j + 1}] gauge part mismatch ({gres:.3g})")
    closed = not violations
    derived = 0
    if structure:
        derived = int(np.linalg.matrix_rank(np.array([[float(v) for v in c] for c in structure.values()]), tol=1e-10))
    killing = killing_form(n, structure) if n == 3 else None
    return SubalgebraReport(
        dimension=n,
        structure=structure,
        closure_residual=worst,
        gauge_residual=gworst,
        closed=closed,
        derived_dimension=derived,
        killing=killing,
        signature=signature(basis, derived),
        violations=violations,
    )


checkSubalgebra = check_subalgebra


def _structure_tensor(n: int, structure: dict) -> np.ndarray:
    C = np.zeros((n, n, n))
    for (i, j), coef in structure.items():
        C[i, j] = [float(v) for v in coef]
        C[j, i] = -C[i, j]
    return C


def killing_form(n: int, structure: dict) -> list:
    C = _structure_tensor(n, structure)
    # K_ab = C_a^c_d C_b^d_c
    K = np.einsum("acd,bdc->ab", C, C)
    return K.tolist()


def is_compact_simple(report: SubalgebraReport) -> bool:
    """Negative-definite Killing form: so(3)-like, hence no 2D subalgebra."""
    if report.killing is None:
        return False
    ev = np.linalg.eigvalsh(np.array(report.killing))
    return bool(np.all(ev < -1e-12))


def has_2d_subalgebra(report: SubalgebraReport, grid: int = 60) -> bool:
    """Brute-force search for a closed 2D subspace of a 3D algebra.

    A plane with unit normal n is a subalgebra iff n . [a, b] = 0 for a
    basis a, b of the plane; we scan normals on a sphere grid and refine.
    """
    if report.dimension != 3:
        return False
    C = _structure_tensor(3, report.structure)

    def defect(nv):
        nv = nv / np.linalg.norm(nv)
        a = np.cross(nv, [1.0, 0.0, 0.0])
        if np.linalg.norm(a) < 0.5:
            a = np.cross(nv, [0.0, 1.0, 0.0])
        a /= np.linalg.norm(a)
        b = np.cross(nv, a)
        br = np.einsum("i,j,ijk->k", a, b, C)
        return abs(float(nv @ br))

    best = math.inf
    for th in np.linspace(0, math.pi, grid):
        for ph in np.linspace(0, 2 * math.pi, 2 * grid, endpoint=False):
            nv = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
            best = min(best, defect(nv))
    return best < 1e-9


def signature(basis: Sequence[EquivGenerator], derived_dim: int | None = None) -> tuple:
    """Basis-independent adjoint invariants of a span.

    (dimension, derived dimension, rank of c7, rank of c8, rank of c8-c7,
    rank of c8-2c7, rank of 2c8-c7, rank of the form c4^2+c5^2+c6^2, projected dimension,
    whether a gauge part is present).
    """
    m = np.array([b.finite for b in basis])
    n = len(basis)

    def frank(vec):
        return int(np.linalg.norm(m @ vec) > 1e-12)

    e = np.eye(9)
    q = m[:, 3:6] @ m[:, 3:6].T
    qrank = int(np.linalg.matrix_rank(q, tol=1e-10)) if n else 0
    proj = int(np.linalg.matrix_rank(m[:, :8], tol=1e-10))
    has_gauge = any(not b.gauge.is_zero() for b in basis)
    if derived_dim is None:
        derived_dim = -1
    return (
        n,
        derived_dim,
        frank(e[6]),
        frank(e[7]),
        frank(e[7] - e[6]),
        frank(e[7] - 2 * e[6]),
        frank(2 * e[7] - e[6]),
        qrank,
        proj,
        int(has_gauge),
    )


# ---------------------------------------------------------------------------
# one-dimensional canonicalization


@dataclass
class CanonicalClass1D:
    class_id: int | None  # row of the one-dimensional optimal system, None when degenerate
    params: dict
    witness: list
    scale: Fraction | float
    representative: EquivGenerator
    degenerate: bool = False
    reason: str = ""
    gauge_removed: bool = False

    def replay(self, V: EquivGenerator) -> EquivGenerator:
        return apply_steps(self.witness, V) * self.scale

    def to_json(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else repr(float(v))

        return {
            "class": None if self.degenerate else f"Table 2 row {self.class_id}",
            "row": self.class_id,
            "params": {k: num(v) for k, v in self.params.items()},
            "witness": [s.to_json() for s in self.witness],
            "scale": num(self.scale),
            "representative": self.representative.to_json(),
            "degenerate": self.degenerate,
            "reason": self.reason,
        }


class DegenerateGenerator(ValueError):
    pass


def _is_zero(v, tol):
    return v == 0 if isinstance(v, Fraction) else abs(v) <= tol


def _snap(v, tol):
    return F(0) if _is_zero(v, tol) else v


def _inv(v):
    return 1 / v if isinstance(v, Fraction) else 1.0 / float(v)


def canonicalize1D(
    V: EquivGenerator, tol: float = 1e-12, remove_gauge: bool = False
) -> CanonicalClass1D:
    """Reduce a generator to its representative in the one-dimensional optimal system.

    Returns the row, its parameters, the adjoint steps (applied to ``V`` in
    order) and the final overall scale so that
    ``scale * apply_steps(witness, V)`` is the representative.
    """
    steps: list[AdjointStep] = []
    W = V

    def push(step):
        nonlocal W
        steps.append(step)
        W = adjoint_apply(step, W)

    def snapped():
        return [_snap(v, tol) for v in W.c]

    c1, c2, c3, c4, c5, c6, c7, c8, c9 = snapped()
    cinv = c4 * c4 + c5 * c5 + c6 * c6

    if not _is_zero(cinv, tol * tol):
        # rotate omega onto the c4 axis
        if not _is_zero(c5, tol):
            push(AdjointStep(6, -math.atan2(float(c5), float(c4))))
        c = snapped()
        if not _is_zero(c[5], tol):
            push(AdjointStep(5, math.atan2(float(c[5]), float(c[3]))))
        c1, c2, c3, c4, c5, c6, c7, c8, c9 = snapped()
        # kill c1, c2: [[c7, -c4], [c4, c7]] (e1, e2) = (-c1, -c2)
        if not (_is_zero(c1, tol) and _is_zero(c2, tol)):
            det = c7 * c7 + c4 * c4
            e1 = (-c1 * c7 - c2 * c4) * _inv(det)
            e2 = (c1 * c4 - c2 * c7) * _inv(det)
            if not _is_zero(e1, 0):
                push(AdjointStep(1, e1))
            if not _is_zero(e2, 0):
                push(AdjointStep(2, e2))
        c1, c2, c3, c4, c5, c6, c7, c8, c9 = snapped()
        if not _is_zero(c7, tol) and not _is_zero(c3, tol):
            push(AdjointStep(3, -c3 * _inv(c7)))
        scale, norm_idx = _inv(snapped()[3]), 3
    elif not _is_zero(c7, tol):
        for k, ci in ((1, c1), (2, c2), (3, c3)):
            if not _is_zero(ci, tol):
                push(AdjointStep(k, -ci * _inv(c7)))
        scale, norm_idx = _inv(c7), 6
    elif not (_is_zero(c1, tol) and _is_zero(c2, tol) and _is_zero(c3, tol)):
        if not _is_zero(c2, tol):
            push(AdjointStep(6, math.atan2(-float(c2), float(c3))))
        c = snapped()
        if not _is_zero(c[0], tol):
            push(AdjointStep(5, math.atan2(float(c[0]), float(c[2]))))
        scale, norm_idx = _inv(snapped()[2]), 2
    else:
        why = "projects to the zero symmetry" if _is_zero(c8, tol) else (
            "only V8 and V9 parts: admitted solely by vanishing fields, no optimal-system row")
        return CanonicalClass1D(None, {}, [], F(1), V, degenerate=True, reason=why)

    c = snapped()
    c7, c8, c9 = c[6], c[7], c[8]
    if not _is_zero(c7 - c8, tol) and not _is_zero(c9, tol):
        push(AdjointStep(9, -c9 * _inv(c7 - c8)))

    if remove_gauge and not W.gauge.is_zero():
        g = solve_related(W, W.gauge)
        if g is not None:
            push(AdjointStep("gauge", g=g))

    rep = W * scale
    rc = [_snap(v, 1e-9) for v in rep.c]
    rc[norm_idx] = F(1)  # exact by construction; removes rounding noise
    rep = EquivGenerator(tuple(rc), rep.gauge)
    r1, r2, r3, r4, r5, r6, r7, r8, r9 = rc
    if r4 != 0:
        if r7 != 0:
            if r7 != r8 and not _is_zero(r7 - r8, 1e-9):
                cid, params = 1, {"k1": r7, "k2": r8}
            else:
                cid, params = 2, {"k": r7, "lam": r9 * _inv(r7)}
        elif r8 != 0:
            cid, params = 3, {"k1": r3, "k2": r8}
        else:
            cid, params = 4, {"k": r3, "lam": r9}
    elif r7 != 0:
        if not _is_zero(r7 - r8, 1e-9):
            cid, params = 5, {"k": r8}
        else:
            cid, params = 6, {"lam": r9}
    else:
        if r8 != 0:
            cid, params = 7, {"k": r8}
        else:
            cid, params = 8, {"lam": r9}
    return CanonicalClass1D(cid, params, steps, scale, rep,
                            gauge_removed=remove_gauge and bool(steps) and steps[-1].kind == "gauge")


canonicalize_1d = canonicalize1D


# gauge removal: solve U g = f along the characteristics of U


_GL_NODES, _GL_WEIGHTS = leggauss(64)


def _flow_matrix(W: EquivGenerator) -> np.ndarray:
    c = W.finite
    op = RelatedOperator.of(W)
    A = np.zeros((4, 4))
    A[:3, :3] = np.array(op.matrix, dtype=float)
    A[:3, 3] = c[:3]
    return A


def solve_related(W: EquivGenerator, f: ex.Expr):
    """A function g with ``U_W g = f`` as an opaque quadrature-backed Expr.

    ``g(x) = int_0^T e^{s(u - T)} f(Phi_{u-T}(x)) du`` where ``Phi`` is the
    flow of the spatial part, ``s = c8 - 2c7`` and ``T(x)`` is a time
    function (``U T = 1`` up to the scalar term) chosen from the shape of
    the canonical generator. Returns None when no time function is known.
    """
    c = W.finite
    c3, c4, c7 = c[2], c[3], c[6]
    s = c[7] - 2 * c[6]
    if abs(c7) > 1e-14:
        def T(x, y, z):
            return math.log(math.sqrt(x * x + y * y + z * z)) / c7
    elif abs(c3) > 1e-14:
        def T(x, y, z):
            return z / c3
    elif abs(c4) > 1e-14:
        def T(x, y, z):
            return math.atan2(y, x) / c4
    else:
        return None
    A = _flow_matrix(W)
    fval = ex.lambdify(f, ex.VARIABLES)

    def g(x, y, z):
        tau = T(x, y, z)
        if tau == 0:
            return 0.0
        u = 0.5 * tau * (_GL_NODES + 1.0)
        total = 0.0
        p = np.array([x, y, z, 1.0])
        for ui, wi in zip(u, _GL_WEIGHTS):
            q = expm(A * (ui - tau)) @ p
            total += wi * math.exp(s * (ui - tau)) * fval(q[0], q[1], q[2])
        return 0.5 * tau * total

    return ex.Opaque("g", g)


# ---------------------------------------------------------------------------
# table audit


def _row_report(row: TableRow, draws: int, rng: random.Random) -> dict:
    out = {"row": row.row, "conditions": row.condition_text, "draws": [], "ok": True}
    if row.note:
        out["flag"] = row.note
    for _ in range(draws):
        p = draw_params(row, rng)
        basis = row.basis(p)
        entry = {"params": {k: str(v) for k, v in p.items()},
                 "side_conditions_hold": row.admissible(p)}
        if row.dim == 1:
            canon = canonicalize1D(basis[0])
            entry["canonical_row"] = canon.class_id
            entry["idempotent"] = canon.class_id == row.row and not canon.witness
            ok = entry["idempotent"]
            entry["invariants"] = [str(v) for v in invariants(basis[0])]
            entry["signature"] = list(signature(basis, 0))
        else:
            rep = check_subalgebra(basis)
            entry.update(closed=rep.closed, closure_residual=str(rep.closure_residual),
                         gauge_residual=rep.gauge_residual,
                         derived_dimension=rep.derived_dimension,
                         signature=list(rep.signature), violations=rep.violations)
            ok = rep.closed
            if row.table == 4 and row.row == 5:
                entry["compact_simple"] = is_compact_simple(rep)
                entry["has_2d_subalgebra"] = has_2d_subalgebra(rep)
                ok = ok and entry["compact_simple"] and not entry["has_2d_subalgebra"]
        entry["ok"] = bool(ok and entry["side_conditions_hold"])
        out["ok"] = out["ok"] and entry["ok"]
        out["draws"].append(entry)
    return out


def _signature_overlaps(rows_out: list) -> list:
    """Pairs of rows whose generic signatures coincide."""
    sigs = {}
    for r in rows_out:
        key = tuple(r["draws"][0]["signature"])
        sigs.setdefault(key, []).append(r["row"])
    return [v for v in sigs.values() if len(v) > 1]


def verify_optimal_tables(draws: int = 3, seed: int = 0) -> dict:
    """Sweep every row of the three optimal-system tables."""
    rng = random.Random(seed)
    report = {"ok": True}
    for t, rows in TABLES.items():
        rows_out = [_row_report(row, draws, rng) for row in rows]
        name = f"table{t}"
        overlaps = _signature_overlaps(rows_out)
        report[name] = {
            "rows": {str(r["row"]): r for r in rows_out},
            "count": len(rows_out),
            "all_ok": all(r["ok"] for r in rows_out),
            "same_signature_groups": overlaps,
            "note": "rows in the same signature group are separated only by deeper analysis"
            if overlaps else "",
        }
        report["ok"] = report["ok"] and report[name]["all_ok"]
    return report


verifyOptimalTables = verify_optimal_tables


def random_generator(rng: random.Random, nondegenerate: bool = True, span: int = 4) -> EquivGenerator:
    """Random rational generator; with ``nondegenerate`` it projects to a
    nonzero symmetry other than a pure v8."""
    while True:
        c = []
        for _ in range(9):
            if rng.random() < 0.3:
                c.append(F(0))
            else:
                c.append(F(rng.randint(-span, span), rng.choice((1, 2, 3))))
        # bias towards invariant coincidences so every row is hit
        u = rng.random()
        if u < 0.15:
            c[7] = c[6]
        elif u < 0.25:
            c[3] = c[4] = c[5] = F(0)
        elif u < 0.35:
            c[3] = c[4] = c[5] = c[6] = F(0)
        g = EquivGenerator(tuple(c))
        if not nondegenerate or any(v != 0 for v in c[:7]):
            return g


__all__ = [
    "TABLE2",
    "TABLE3",
    "TABLE4",
    "TABLES",
    "TableRow",
    "table_row",
    "draw_params",
    "check_subalgebra",
    "checkSubalgebra",
    "SubalgebraReport",
    "canonicalize1D",
    "canonicalize_1d",
    "CanonicalClass1D",
    "verify_optimal_tables",
    "verifyOptimalTables",
    "signature",
    "killing_form",
    "is_compact_simple",
    "has_2d_subalgebra",
    "solve_related",
    "random_generator",
    "gauge",
]
