"""Symmetry detection for a given field and the checks around it.

The admitted generators c1 v1 + ... + c8 v8 of a field are the solutions of
a linear system. At a point p, with eta = c7 p + omega x p + (c1, c2, c3) and
omega = (c6, c5, c4), the field-form conditions read::

    R_B = (eta . grad) B + c8 B - omega x B = 0
    R_E = (eta . grad) E + (2 c8 - c7) E - omega x E = 0

Stacking the 6 x 8 coefficient matrices over sample points gives a tall
matrix whose numerical nullspace is the symmetry algebra. An independent
check applies the second prolongation of the generator to the equations of
motion, built symbolically from total derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from . import expr as ex
from .fields.spec import FieldSpec
from .liealg import SymGenerator

DEFAULT_TOL = 1e-8
GAP_WARN = 10.0
BASE_POINT = (0.6, 0.5, 0.7)

_EZ, _EY, _EX = np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])


class SingularPointError(ValueError):
    """A requested evaluation point is outside the field's regular domain."""


class GaugeObstructionError(ValueError):
    """The gauge gradient is not curl-free: the generator is not admitted."""


def _as_c(c) -> np.ndarray:
    if isinstance(c, SymGenerator):
        return c.as_array()
    arr = np.asarray([float(v) for v in c], dtype=float)
    if arr.shape == (9,):
        arr = arr[:8]
    if arr.shape != (8,):
        raise ValueError("expected 8 coefficients c1..c8")
    return arr


def eta_at(c, pts: np.ndarray) -> np.ndarray:
    """eta = c7 x + omega x x + a at each point."""
    c = _as_c(c)
    omega = np.array([c[5], c[4], c[3]])
    pts = np.atleast_2d(pts)
    return c[6] * pts + np.cross(omega, pts) + c[:3]


def residual_matrix(fs: FieldSpec, pts: np.ndarray) -> np.ndarray:
    """Coefficient blocks, shape (n, 6, 8): residual(p) = M[p] @ c."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    try:
        j = fs.jets(pts)
    except ex.DomainError as exc:
        raise SingularPointError(str(exc)) from None
    B, E, dB, dE = j["B"], j["E"], j["dB"], j["dE"]
    n = len(pts)
    M = np.empty((n, 6, 8))
    M[:, 0:3, 0:3] = dB
    M[:, 3:6, 0:3] = dE
    for col, e in ((3, _EZ), (4, _EY), (5, _EX)):
        rot = np.cross(e, pts)
        M[:, 0:3, col] = np.einsum("nij,nj->ni", dB, rot) - np.cross(e, B)
        M[:, 3:6, col] = np.einsum("nij,nj->ni", dE, rot) - np.cross(e, E)
    M[:, 0:3, 6] = np.einsum("nij,nj->ni", dB, pts)
    M[:, 3:6, 6] = np.einsum("nij,nj->ni", dE, pts) - E
    M[:, 0:3, 7] = B
    M[:, 3:6, 7] = 2.0 * E
    if not np.all(np.isfinite(M)):
        raise SingularPointError("non-finite field values at sample points")
    return M


def field_residual(fs: FieldSpec, c, p: Sequence[float]) -> np.ndarray:
    """(R_B, R_E) at one point for generator coefficients c1..c8."""
    return residual_matrix(fs, np.asarray(p, dtype=float)[None, :])[0] @ _as_c(c)


fieldResidual = field_residual


def _scale(M: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(M))))


def generator_residual(fs: FieldSpec, c, pts: np.ndarray) -> float:
    """max over points of |M(p) c| / max(1, max |M|), with c of unit norm."""
    v = _as_c(c)
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    M = residual_matrix(fs, pts)
    r = np.linalg.norm(M @ (v / nv), axis=1)
    return float(r.max()) / _scale(M)


# --- detection ------------------------------------------------------------

@dataclass
class SymmetryBasisResult:
    """Numerical symmetry algebra of a field.

    ``basis`` holds orthonormal coefficient vectors (c1..c8) spanning the
    nullspace; ``echelon`` is the same span in reduced row echelon form,
    which is easier to read. ``noether`` spans the subspace with c8 = 2 c7.
    """

    dimension: int
    basis: np.ndarray
    echelon: np.ndarray
    singular_values: np.ndarray
    gap_ratio: float
    residuals: list
    noether: np.ndarray
    c9: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    points: np.ndarray | None = None

    @property
    def noether_dimension(self) -> int:
        return len(self.noether)

    def generators(self) -> list[SymGenerator]:
        return [SymGenerator(0, tuple(float(v) for v in row)) for row in self.echelon]

    def contains(self, c, tol: float = 1e-6) -> float:
        """Distance of the unit vector along c from the detected span."""
        v = _as_c(c)
        v = v / np.linalg.norm(v)
        if self.dimension == 0:
            return float(np.linalg.norm(v))
        proj = self.basis.T @ (self.basis @ v)
        return float(np.linalg.norm(v - proj))

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "basis": _rows(self.echelon),
            "singularValues": [float(s) for s in self.singular_values],
            "gapRatio": _finite(self.gap_ratio),
            "residuals": [float(r) for r in self.residuals],
            "noetherBasis": _rows(echelon(self.noether)),
            "c9": [float(v) for v in self.c9],
            "warnings": list(self.warnings),
        }


def _finite(v: float):
    return float(v) if math.isfinite(v) else None


def _rows(a: np.ndarray) -> list:
    return [[_clean(v) for v in row] for row in np.atleast_2d(a)] if len(a) else []


def _clean(v: float, digits: int = 12) -> float:
    v = round(float(v), digits)
    return 0.0 if v == 0 else v


def echelon(basis: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Reduced row echelon form of a row basis (pivots normalized to 1)."""
    A = np.array(basis, dtype=float, copy=True)
    if A.size == 0:
        return A.reshape(0, 8)
    rows, cols = A.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(A[r:, col])))
        if abs(A[piv, col]) < tol:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] /= A[r, col]
        for i in range(rows):
            if i != r:
                A[i] -= A[i, col] * A[r]
        r += 1
    A[np.abs(A) < tol] = 0.0
    return A[:r]


def noether_subspace(basis: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of {c in span : c8 = 2 c7}, with the constraint imposed exactly."""
    if len(basis) == 0:
        return np.zeros((0, 8))
    w = np.zeros(8)
    w[7], w[6] = 1.0, -2.0
    coef = basis @ w  # constraint on combination weights
    if np.linalg.norm(coef) < tol:
        sub = basis.copy()
    else:
        null = scipy.linalg.null_space(coef[None, :])
        sub = null.T @ basis
    sub = sub.copy()
    sub[:, 7] = 2.0 * sub[:, 6]
    if len(sub):
        q, _ = np.linalg.qr(sub.T)
        sub = q.T
        sub[:, 7] = 2.0 * sub[:, 6]
    return sub


def _phi_constant(fs: FieldSpec, basis: np.ndarray, pts: np.ndarray) -> list:
    """c9 = eta.grad Phi - 2 (c7 - c8) Phi (constant on the domain)."""
    if len(basis) == 0:
        return []
    pj = fs.potential_jets(pts)
    out = []
    for c in basis:
        eta = eta_at(c, pts)
        vals = np.einsum("ni,ni->n", eta, pj["dPhi"]) - 2.0 * (c[6] - c[7]) * pj["Phi"]
        out.append(float(np.mean(vals)))
    return out


def field_character(fs: FieldSpec, pts: np.ndarray, tol: float = 1e-9) -> dict:
    """Flags for straight magnetic fields and linear equations of motion."""
    j = fs.jets(pts)
    B = j["B"]
    bn = np.linalg.norm(B, axis=1)
    scale = max(1.0, float(bn.max()))
    nz = B[bn > tol * scale]
    straight = len(nz) == 0 or np.linalg.matrix_rank(nz, tol=tol * scale * 10) <= 1
    dB_zero = float(np.max(np.abs(j["dB"]))) <= tol * scale
    dE = j["dE"].reshape(len(pts), -1)
    dE_const = float(np.max(np.abs(dE - dE[0]))) <= tol * max(1.0, float(np.max(np.abs(dE))))
    return {"straight": bool(straight), "linear": bool(dB_zero and dE_const)}


def detect_symmetries(
    fs: FieldSpec,
    n_points: int = 40,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    points: np.ndarray | None = None,
    r_min: float = 0.5,
    r_max: float = 2.0,
) -> SymmetryBasisResult:
    """Numerical nullspace of the stacked residual matrix.

    Each point block is scaled by its largest entry before the SVD so that
    points near singularities do not dominate; this leaves the nullspace
    unchanged.
    """
    pts = fs.sample_points(n_points, r_min, r_max, seed) if points is None else np.atleast_2d(points)
    if len(pts) < 8:
        raise ValueError("need at least 8 sample points")
    M = residual_matrix(fs, pts)
    blk = np.max(np.abs(M), axis=(1, 2))
    blk[blk == 0] = 1.0
    stacked = (M / blk[:, None, None]).reshape(-1, 8)
    _, s, vt = np.linalg.svd(stacked, full_matrices=True)
    smax = s[0] if s[0] > 0 else 1.0
    null_mask = s < tol * smax if s[0] > 0 else np.ones(8, bool)
    d = int(np.count_nonzero(null_mask))
    basis = vt[8 - d:] if d else np.zeros((0, 8))
    if d == 0:
        gap = math.inf
    elif d == 8:
        gap = math.inf
    else:
        gap = float(s[7 - d] / max(s[8 - d], 1e-300))
    warnings = []
    if math.isfinite(gap) and gap < GAP_WARN:
        warnings.append(f"ill-conditioned sampling: gap ratio {gap:.3g} < {GAP_WARN:g}")
    raw_scale = _scale(M)
    residuals = [float(np.linalg.norm(M @ c, axis=1).max()) / raw_scale for c in basis]
    char = field_character(fs, pts)
    if char["straight"]:
        warnings.append("straight magnetic field: symmetries outside the equivalence group may exist")
    if char["linear"]:
        warnings.append("linear equations of motion: symmetries outside the equivalence group may exist")
    try:
        c9 = _phi_constant(fs, basis, pts)
    except ex.DomainError:
        c9 = []
    return SymmetryBasisResult(
        dimension=d,
        basis=basis,
        echelon=echelon(basis),
        singular_values=s,
        gap_ratio=gap,
        residuals=residuals,
        noether=noether_subspace(basis),
        c9=c9,
        warnings=warnings,
        points=pts,
    )


detectSymmetries = detect_symmetries


# --- prolongation oracle ---------------------------------------------------

_STATE = ("x", "y", "z", "vx", "vy", "vz", "t")
_ACC = ("ax", "ay", "az")
_CS = tuple(f"c{i}" for i in range(9))


def _total_derivative(e: ex.Expr) -> ex.Expr:
    """D_t = d_t + v . grad_x + a . grad_v on expressions in (t, x, v)."""
    out = ex.differentiate(e, "t")
    for q, dq in zip(("x", "y", "z", "vx", "vy", "vz"), ("vx", "vy", "vz", "ax", "ay", "az")):
        out = ex.add(out, ex.mul(ex.symbol(dq), ex.differentiate(e, q)))
    return out


def _prolongation_exprs(fs: FieldSpec):
    fn = fs.__dict__.get("_prolongation_fn")
    if fn is None:
        fn = fs.__dict__["_prolongation_fn"] = _build_prolongation(fs)
    return fn


def _build_prolongation(fs: FieldSpec):
    sym = {n: ex.symbol(n) for n in _STATE + _ACC + _CS}
    X = (sym["x"], sym["y"], sym["z"])
    V = (sym["vx"], sym["vy"], sym["vz"])
    Acc = (sym["ax"], sym["ay"], sym["az"])
    c = [sym[f"c{i}"] for i in range(9)]
    xi = ex.add(c[0], ex.mul(c[8], sym["t"]))
    # eta^i = c7 x^i - eps_ijk c_{7-k} x^j + c_i
    omega = (c[6], c[5], c[4])
    eta = []
    for i in range(3):
        e = ex.add(ex.mul(c[7], X[i]), c[i + 1])
        j, k = (i + 1) % 3, (i + 2) % 3
        e = ex.add(e, ex.sub(ex.mul(omega[j], X[k]), ex.mul(omega[k], X[j])))
        eta.append(e)
    Dxi = _total_derivative(xi)
    eta1 = [ex.sub(_total_derivative(e), ex.mul(V[i], Dxi)) for i, e in enumerate(eta)]
    eta2 = [ex.sub(_total_derivative(e), ex.mul(Acc[i], Dxi)) for i, e in enumerate(eta1)]
    B, E = fs.B, fs.E
    # Delta^i = a^i - (v x B)^i - E^i, B and E functions of x only
    out = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        vxB = ex.sub(ex.mul(V[j], B[k]), ex.mul(V[k], B[j]))
        delta = ex.sub(ex.sub(Acc[i], vxB), E[i])
        total = ex.mul(xi, ex.differentiate(delta, "t"))
        for q, gen in zip(("x", "y", "z"), eta):
            total = ex.add(total, ex.mul(gen, ex.differentiate(delta, q)))
        for q, gen in zip(("vx", "vy", "vz"), eta1):
            total = ex.add(total, ex.mul(gen, ex.differentiate(delta, q)))
        for q, gen in zip(_ACC, eta2):
            total = ex.add(total, ex.mul(gen, ex.differentiate(delta, q)))
        out.append(total)
    # restrict to solutions: a = v x B + E
    on_shell = {}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        on_shell[_ACC[i]] = ex.add(ex.sub(ex.mul(V[j], B[k]), ex.mul(V[k], B[j])), E[i])
    out = [ex.substitute(e, on_shell) for e in out]
    return ex.compile_exprs(out, _STATE + _CS, vectorized=True)


def prolongation_residual(fs: FieldSpec, s, state) -> np.ndarray:
    """Prolonged generator applied to the equations of motion on solutions.

    ``s`` is a :class:`SymGenerator` (or (c0, c1..c8)); ``state`` is
    (t, x, v) or an object with those attributes. Accepts arrays of states
    of shape (n, 7) laid out as (x, y, z, vx, vy, vz, t).
    """
    if isinstance(s, SymGenerator):
        cs = [float(s.c0)] + [float(v) for v in s.c]
    else:
        cs = [float(v) for v in s]
        if len(cs) == 8:
            cs = [0.0] + cs
    fn = _prolongation_exprs(fs)
    if hasattr(state, "x"):
        arr = np.concatenate([state.x, state.v, [state.t]])[None, :]
    elif isinstance(state, tuple) and len(state) == 3:
        t, x, v = state
        arr = np.concatenate([np.asarray(x, float), np.asarray(v, float), [float(t)]])[None, :]
    else:
        arr = np.atleast_2d(np.asarray(state, dtype=float))
    cols = [arr[:, i] for i in range(7)] + [np.full(len(arr), v) for v in cs]
    try:
        out = fn(*cols)
    except ex.DomainError as exc:
        raise SingularPointError(str(exc)) from None
    res = np.array(np.broadcast_arrays(*out, np.empty(len(arr)))[:-1], dtype=float).T
    return res[0] if len(res) == 1 else res


prolongationResidual = prolongation_residual


def random_states(fs: FieldSpec, n: int = 20, seed: int = 0, speed: float = 1.0) -> np.ndarray:
    """(n, 7) states: regular positions, Gaussian velocities, t in [0, 1]."""
    rng = np.random.default_rng(seed)
    pts = fs.sample_points(n, seed=seed + 1)
    v = rng.normal(size=(n, 3)) * speed
    t = rng.uniform(0, 1, n)
    return np.column_stack([pts, v, t])


def oracle_residual(fs: FieldSpec, s, states: np.ndarray) -> float:
    """Max prolongation residual (unit-norm generator) relative to state scale."""
    c = np.array([float(s.c0)] + [float(v) for v in s.c]) if isinstance(s, SymGenerator) else np.asarray(s, float)
    if c.shape == (8,):
        c = np.concatenate([[0.0], c])
    nc = np.linalg.norm(c)
    if nc == 0:
        return 0.0
    res = np.atleast_2d(prolongation_residual(fs, c / nc, states))
    M = residual_matrix(fs, states[:, :3])
    vmax = max(1.0, float(np.max(np.abs(states[:, 3:6]))))
    return float(np.max(np.linalg.norm(res, axis=1))) / (_scale(M) * vmax)


# --- gauge reconstruction -------------------------------------------------

def gauge_gradient(fs: FieldSpec, c) -> tuple:
    """G with grad f = G for the generator: eta.grad A - (c7 - c8) A - omega x A."""
    cc = [ex.as_expr(_exact(v)) for v in (c.c if isinstance(c, SymGenerator) else list(c)[:8])]
    A = fs.A_bound
    omega = (cc[5], cc[4], cc[3])
    eta = []
    for i in range(3):
        e = ex.add(ex.mul(cc[6], (ex.X, ex.Y, ex.Z)[i]), cc[i])
        j, k = (i + 1) % 3, (i + 2) % 3
        e = ex.add(e, ex.sub(ex.mul(omega[j], (ex.X, ex.Y, ex.Z)[k]), ex.mul(omega[k], (ex.X, ex.Y, ex.Z)[j])))
        eta.append(e)
    G = []
    for i in range(3):
        g = ex.ZERO
        for q, e in zip("xyz", eta):
            g = ex.add(g, ex.mul(e, ex.differentiate(A[i], q)))
        g = ex.sub(g, ex.mul(ex.sub(cc[6], cc[7]), A[i]))
        j, k = (i + 1) % 3, (i + 2) % 3
        g = ex.sub(g, ex.sub(ex.mul(omega[j], A[k]), ex.mul(omega[k], A[j])))
        G.append(g)
    return tuple(G)


def _exact(v):
    from fractions import Fraction

    if isinstance(v, Fraction):
        return v
    f = float(v)
    fr = Fraction(f).limit_denominator(10**6)
    return fr if abs(float(fr) - f) < 1e-13 else f


_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)


@dataclass
class GaugeResult:
    f: ex.Expr
    G: tuple
    curl_residual: float
    closed_form: bool
    base: tuple

    def __call__(self, p) -> float:
        return ex.evaluate(self.f, dict(zip("xyz", map(float, p))))


def _segment_ok(fs: FieldSpec, path, n: int = 65) -> bool:
    d = fs.domain
    pts = path(np.linspace(0, 1, n))
    if not np.all(d.mask(pts, margin=1e-9)):
        return False
    if d.phi_cut:
        # the cut half-plane has no volume, so test for crossings explicitly
        if d.affine is not None:
            M, b = (np.asarray(a, dtype=float) for a in d.affine)
            pts = pts @ M.T + b
        return not np.any(cut_crossings(pts))
    return True


def cut_crossings(pts: np.ndarray) -> np.ndarray:
    """Flags for consecutive points whose chord crosses the half-plane y = 0, x < 0."""
    x, y = pts[:, 0], pts[:, 1]
    flips = np.sign(y[:-1]) * np.sign(y[1:]) < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(flips, y[:-1] / (y[:-1] - y[1:]), 0.0)
    xc = x[:-1] + s * (x[1:] - x[:-1])
    return flips & (xc < 0)


def _paths(p0: np.ndarray, p1: np.ndarray):
    """Straight and cylindrical paths, vectorized over the parameter."""

    def straight(s):
        return p0 + np.multiply.outer(s, p1 - p0)

    def dstraight(s):
        return np.broadcast_to(p1 - p0, np.shape(s) + (3,))

    r0, r1 = np.hypot(p0[0], p0[1]), np.hypot(p1[0], p1[1])
    f0, f1 = math.atan2(p0[1], p0[0]), math.atan2(p1[1], p1[0])
    dr, df, dz = r1 - r0, f1 - f0, p1[2] - p0[2]

    def cyl(s):
        r, f = r0 + s * dr, f0 + s * df
        return np.stack([r * np.cos(f), r * np.sin(f), p0[2] + s * dz], axis=-1)

    def dcyl(s):
        r, f = r0 + s * dr, f0 + s * df
        return np.stack([dr * np.cos(f) - r * np.sin(f) * df, dr * np.sin(f) + r * np.cos(f) * df,
                         np.full(np.shape(s), dz)], axis=-1)

    return [(straight, dstraight), (cyl, dcyl)]


def _line_integral(fG, path, dpath, a=0.0, b=1.0, whole=None, depth=0) -> float:
    """Adaptive composite Gauss-Legendre: bisect until the halves agree."""

    def panel(lo, hi):
        s = lo + (hi - lo) * 0.5 * (_GL_X + 1.0)
        q = path(s)
        g = np.array(np.broadcast_arrays(*fG(q[:, 0], q[:, 1], q[:, 2]), s)[:-1]).T
        return 0.5 * (hi - lo) * float(np.dot(_GL_W, np.sum(g * dpath(s), axis=1)))

    if whole is None:
        whole = panel(a, b)
    m = 0.5 * (a + b)
    left, right = panel(a, m), panel(m, b)
    if abs(left + right - whole) <= 1e-13 * (1.0 + abs(whole)) or depth >= 14:
        return left + right
    return (_line_integral(fG, path, dpath, a, m, left, depth + 1)
            + _line_integral(fG, path, dpath, m, b, right, depth + 1))


def gauge_reconstruct(fs: FieldSpec, c, tol: float = 1e-7, n_check: int = 20, seed: int = 0) -> GaugeResult:
    """Gauge function f of an admitted generator, up to an additive constant.

    Raises :class:`GaugeObstructionError` when grad f would not be
    curl-free. When G vanishes identically f = 0 is returned in closed
    form; otherwise f is an opaque node evaluated by adaptive 64-point
    Gauss-Legendre quadrature of G along a straight (or cylindrical) path from a base point.
    """
    G = gauge_gradient(fs, c)
    pts = fs.sample_points(n_check, seed=seed)
    fnG = ex.compile_exprs(G, ex.VARIABLES, vectorized=True)
    Gv = np.array(np.broadcast_arrays(*fnG(pts[:, 0], pts[:, 1], pts[:, 2]), np.empty(len(pts)))[:-1]).T
    curlG = ex.curl(G)
    fnC = ex.compile_exprs(curlG, ex.VARIABLES, vectorized=True)
    Cv = np.array(np.broadcast_arrays(*fnC(pts[:, 0], pts[:, 1], pts[:, 2]), np.empty(len(pts)))[:-1]).T
    jac_scale = max(1.0, float(np.max(np.abs(fs.potential_jets(pts)["dA"]))))
    curl_res = float(np.max(np.abs(Cv))) / jac_scale
    if curl_res > tol:
        raise GaugeObstructionError(f"curl of the gauge gradient is {curl_res:.3g}; generator not admitted")
    base = np.array(BASE_POINT)
    if not fs.domain.contains(base, margin=0.05):
        base = pts[0]
    if float(np.max(np.abs(Gv))) <= 1e-13 * jac_scale:
        return GaugeResult(ex.ZERO, G, curl_res, True, tuple(base))

    fG = ex.compile_exprs(G, ex.VARIABLES, vectorized=True)

    waypoints = fs.sample_points(12, seed=seed + 11)

    def leg(p0, p1):
        for path, dpath in _paths(p0, p1):
            if _segment_ok(fs, path):
                return _line_integral(fG, path, dpath)
        return None

    def f_value(x, y, z):
        p1 = np.array([x, y, z], dtype=float)
        direct = leg(base, p1)
        if direct is not None:
            return direct
        # two legs through a regular waypoint
        for w in waypoints:
            first = leg(base, w)
            second = leg(w, p1) if first is not None else None
            if second is not None:
                return first + second
        raise ex.DomainError("no regular integration path to the point")

    f = ex.Opaque("f_gauge", f_value, partials=G)
    return GaugeResult(f, G, curl_res, False, tuple(base))


gaugeReconstruct = gauge_reconstruct


# --- reports --------------------------------------------------------------

@dataclass
class ClassReport:
    """Result of classifying a field."""

    field: dict
    detection: SymmetryBasisResult
    oracle_agreement: bool
    oracle_residuals: list
    maxwell: tuple
    match: dict | None = None
    noether_match: dict | None = None
    warnings: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.detection.dimension

    def to_json(self) -> dict:
        det = self.detection.to_json()
        return {
            "field": self.field,
            "dimension": det["dimension"],
            "basis": det["basis"],
            "singularValues": det["singularValues"],
            "gapRatio": det["gapRatio"],
            "residuals": det["residuals"],
            "noetherDimension": self.detection.noether_dimension,
            "noetherBasis": det["noetherBasis"],
            "c9": det["c9"],
            "oracleAgreement": self.oracle_agreement,
            "oracleResiduals": [float(v) for v in self.oracle_residuals],
            "maxwell": {"divB": float(self.maxwell[0]), "curlE": float(self.maxwell[1])},
            "match": self.match,
            "noetherMatch": self.noether_match,
            "warnings": list(self.warnings) + [w for w in det["warnings"] if w not in self.warnings],
        }


def oracle_check(fs: FieldSpec, det: SymmetryBasisResult, tol: float = 1e-8, seed: int = 0,
                 n_states: int = 20) -> tuple[bool, list]:
    """Cross-check each detected generator and a non-admitted probe with the prolongation oracle."""
    states = random_states(fs, n_states, seed)
    res = [oracle_residual(fs, c, states) for c in det.basis]
    agree = all(r < 100 * tol for r in res)
    # complementary directions must be rejected by the oracle too
    if det.dimension < 8:
        comp = scipy.linalg.null_space(det.basis) if det.dimension else np.eye(8)
        for v in comp.T[:2]:
            if oracle_residual(fs, v, states) < tol:
                agree = False
    return agree, res


def maxwell_check(fs: FieldSpec, pts: np.ndarray) -> tuple[float, float]:
    return fs.maxwell_residual(pts)


__all__ = [
    "ClassReport",
    "GaugeObstructionError",
    "GaugeResult",
    "SingularPointError",
    "SymmetryBasisResult",
    "detect_symmetries",
    "detectSymmetries",
    "echelon",
    "eta_at",
    "field_character",
    "field_residual",
    "fieldResidual",
    "gauge_gradient",
    "gauge_reconstruct",
    "gaugeReconstruct",
    "generator_residual",
    "maxwell_check",
    "noether_subspace",
    "oracle_check",
    "oracle_residual",
    "prolongation_residual",
    "prolongationResidual",
    "random_states",
    "residual_matrix",
]
