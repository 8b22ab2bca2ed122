"""Identify a detected symmetry algebra with a catalog row.

A detected span S (rows c1..c8) matches a row with generators T(p) when some
equivalence-group element h and admissible constants p give
Ad_h T(p) inside S. Generators depend affinely on p, so for fixed h the
constants follow from linear least squares; h (rotation, scale,
translation) is searched over a rotation grid and then refined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from . import expr as ex
from .fields.catalog import CatalogRow, catalog_rows
from .fields.transforms import GroupElement

MATCH_TOL = 1e-6
_GRID_RANDOM = 200
# Scale and shift stay bounded. A vanishing scale shrinks translations away
# and a huge shift drowns every other component, both faking small residuals.
_SHIFT_MAX = 50.0
_BOUNDS = (np.r_[[-np.inf] * 3, -5.0, [-_SHIFT_MAX] * 3], np.r_[[np.inf] * 3, 5.0, [_SHIFT_MAX] * 3])
_STARTS = 4


def action_matrix(R: np.ndarray, eps7: float = 1.0, shift=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Linear map of c1..c8 under x -> eps7 R x + shift (time part ignored)."""
    R = np.asarray(R, float)
    e = np.asarray(shift, float)
    ex_ = np.array([[0, -e[2], e[1]], [e[2], 0, -e[0]], [-e[1], e[0], 0]])
    M = np.zeros((8, 8))
    # omega = (c6, c5, c4) -> R omega
    Pw = np.zeros((3, 8))
    Pw[0, 5], Pw[1, 4], Pw[2, 3] = 1, 1, 1
    M[:3, :3] = eps7 * R
    M[:3, :] += ex_ @ R @ Pw
    M[:3, 6] -= e
    Rw = R @ Pw
    M[5, :], M[4, :], M[3, :] = Rw[0], Rw[1], Rw[2]
    M[6, 6] = M[7, 7] = 1.0
    return M


def _row_templates(row: CatalogRow) -> tuple[list[str], np.ndarray]:
    """Generator constants and templates T0, T1.. with T(p) = T0 + sum p_k T_k."""
    names = sorted(set().union(*(ex.parse(g).free_symbols() for g in row.generators))
                   - {f"v{i}" for i in range(1, 9)})

    def at(vals):
        return np.array([[float(v) for v in g.c] for g in row.claimed(dict(zip(names, vals)))])

    zero = at([0] * len(names))
    T = [zero]
    for k in range(len(names)):
        unit = [0] * len(names)
        unit[k] = 1
        T.append(at(unit) - zero)
    return names, np.array(T)


def _snap(v: float, tol: float = 1e-6):
    fr = Fraction(v).limit_denominator(24)
    return fr if abs(float(fr) - v) < tol else v


def _omega_rank(rows: np.ndarray) -> int:
    if len(rows) == 0:
        return 0
    return int(np.linalg.matrix_rank(rows[:, 3:6], tol=1e-6))


def _scale_rank(rows: np.ndarray) -> int:
    if len(rows) == 0:
        return 0
    return int(np.linalg.matrix_rank(rows[:, 6:8], tol=1e-6))


@dataclass
class RowMatch:
    key: str
    title: str
    params: dict
    residual: float
    element: GroupElement
    contained: bool = False
    note: str = ""

    @property
    def label(self) -> str:
        if not self.params:
            return self.key
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.key} ({inner})"

    @property
    def table_label(self) -> str:
        """Label in the numbering of the published tables."""
        if not self.params:
            return self.title
        return f"{self.title} (" + ",".join(f"{k}={v}" for k, v in self.params.items()) + ")"

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "label": self.label,
            "tableLabel": self.table_label,
            "params": {k: (str(v) if isinstance(v, Fraction) else float(v)) for k, v in self.params.items()},
            "residual": float(self.residual),
            "contained": self.contained,
            "element": self.element.to_json(),
        }


@dataclass
class MatchResult:
    matches: list = field(default_factory=list)
    candidates: int = 0

    @property
    def best(self) -> RowMatch | None:
        return self.matches[0] if self.matches else None

    def to_json(self) -> dict:
        return {"best": self.best.label if self.best else None,
                "bestTable": self.best.table_label if self.best else None,
                "matches": [m.to_json() for m in self.matches], "candidates": self.candidates}


class _Problem:
    def __init__(self, S: np.ndarray, T: np.ndarray):
        q, _ = np.linalg.qr(S.T)
        self.Pperp = np.eye(8) - q @ q.T
        self.T = T

    def solve(self, M: np.ndarray):
        """Best constants and the normalized residual vector for action M."""
        Y = np.einsum("ij,kdj->kdi", M, self.T)  # (k+1, d, 8)
        R = np.einsum("ij,kdj->kdi", self.Pperp, Y)
        if len(self.T) > 1:
            A = R[1:].reshape(len(self.T) - 1, -1).T
            p, *_ = np.linalg.lstsq(A, -R[0].ravel(), rcond=None)
        else:
            p = np.zeros(0)
        res = R[0] + np.tensordot(p, R[1:], axes=1)
        img = Y[0] + np.tensordot(p, Y[1:], axes=1)
        norms = np.maximum(np.linalg.norm(img, axis=1), 1e-12)
        return p, (res / norms[:, None]).ravel()


def _unpack(x):
    R = Rotation.from_rotvec(x[:3]).as_matrix()
    return R, math.exp(x[3]), x[4:7]


def match_row(S: np.ndarray, row: CatalogRow, tol: float = MATCH_TOL, seed: int = 0) -> RowMatch | None:
    """Try to carry the row's generators into span S; None when impossible."""
    S = np.atleast_2d(np.asarray(S, float))
    names, T = _row_templates(row)
    if row.dim > len(S):
        return None
    prob = _Problem(S, T)
    rng = np.random.default_rng(seed)
    # identity first so that ties keep the row's own orientation and signs
    rots = np.concatenate([np.zeros((1, 3)), Rotation.create_group("O").as_rotvec(),
                           Rotation.random(_GRID_RANDOM, random_state=rng.integers(2**31)).as_rotvec()])
    scored = []
    for rv in rots:
        M = action_matrix(Rotation.from_rotvec(rv).as_matrix())
        _, r = prob.solve(M)
        scored.append((max(float(np.linalg.norm(r)), 1e-10), rv))
    scored.sort(key=lambda t: t[0])

    def fit(x):
        R, s, e = _unpack(x)
        return prob.solve(action_matrix(R, s, e))[1]

    def fun(x):
        # faint pull towards unit scale and no shift, so that constants which
        # the scale can absorb come out as in the row when possible
        return np.concatenate([fit(x), 1e-8 * x[3:]])

    def refine(x0, nfev):
        sol = least_squares(fun, x0, bounds=_BOUNDS, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=nfev)
        r = fit(sol.x)
        return (float(np.max(np.abs(r))) if r.size else 0.0), sol.x

    # short runs from the best grid rotations, then polish the winner
    best = None
    for _, rv in scored[:_STARTS]:
        cand = refine(np.concatenate([rv, [0.0], np.zeros(3)]), 60)
        if best is None or cand[0] < best[0]:
            best = cand
        if best[0] < tol * 1e-3:
            break
    if tol * 1e-3 <= best[0] < 1e-2:
        best = min(best, refine(best[1], 600), key=lambda c: c[0])
    val, x = best
    if val > tol:
        return None
    R, s, e = _unpack(x)
    p, _ = prob.solve(action_matrix(R, s, e))
    params = {n: _snap(float(v)) for n, v in zip(names, p)}
    if not _admissible(row, params):
        return None
    h = GroupElement(s, tuple(map(tuple, R)), tuple(e))
    return RowMatch(row.key, row.title, params, val, h, contained=row.dim < len(S), note=row.note)


def _admissible(row: CatalogRow, params: dict) -> bool:
    exact = {k: (v if isinstance(v, Fraction) else v) for k, v in params.items()}
    try:
        return row.admissible(row.params(exact))
    except (ZeroDivisionError, TypeError):
        return False


def match_basis(S: np.ndarray, family: str = "sym", tol: float = MATCH_TOL, seed: int = 0) -> MatchResult:
    """All rows of the ``family`` ("sym" or "noe") tables matching span S.

    Rows whose dimension equals dim S must span it; when dim S exceeds the
    largest tabulated dimension (3), rows of dimension 3 contained in S are
    reported instead.
    """
    S = np.atleast_2d(np.asarray(S, float))
    d = len(S) if S.size else 0
    out = MatchResult()
    if d == 0:
        return out
    target = min(d, 3)
    rows = catalog_rows(f"{family}{target + 1}")
    s_omega, s_scale = _omega_rank(S), _scale_rank(S)
    for row in rows:
        _, T = _row_templates(row)
        generic = T[0] + 0.37 * T[1:].sum(axis=0) if len(T) > 1 else T[0]
        # constants can only lower the (c7, c8) rank; the omega rank is fixed
        if d == target and (_omega_rank(generic) != s_omega or _scale_rank(generic) < s_scale):
            continue
        if d > target and _omega_rank(generic) > s_omega:
            continue
        out.candidates += 1
        m = match_row(S, row, tol, seed)
        if m is not None:
            out.matches.append(m)
    out.matches.sort(key=lambda m: (m.residual > tol * 1e-2, len(m.params), m.residual))
    return out


matchBasis = match_basis

__all__ = ["MATCH_TOL", "MatchResult", "RowMatch", "action_matrix", "match_basis", "matchBasis", "match_row"]
