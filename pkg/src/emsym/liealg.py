"""The equivalence algebra span{V1..V9} plus the gauge generators V_f.

A generator is stored as nine coefficients ``c`` (exact :class:`Fraction`
where possible, floats after generic rotations) and a gauge function ``f``
(an :class:`~emsym.expr.Expr`). Generators act on (t, x, A, Phi):

* V1, V2, V3: translations in x, y, z
* V4 = x d_y - y d_x (and the same rotation on A), V5, V6 likewise about y, x
* V7 = x.d_x + A.d_A + 2 Phi d_Phi, V8 = t d_t - A.d_A - 2 Phi d_Phi, V9 = d_Phi
* V_f = grad(f).d_A

The spatial part of a generator is ``eta(x) = c7 x + omega x x + a`` with
``omega = (c6, c5, c4)`` and ``a = (c1, c2, c3)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import expr as ex
from .expr import Expr

Scalar = Fraction | float

# Nonzero brackets [V_i, V_j] = sum_k coeff V_k, read row by row from the
# table of the finite part; the other half follows by antisymmetry.
_UPPER = {
    (1, 4): {2: 1},
    (1, 5): {3: -1},
    (1, 7): {1: 1},
    (2, 4): {1: -1},
    (2, 6): {3: 1},
    (2, 7): {2: 1},
    (3, 5): {1: 1},
    (3, 6): {2: -1},
    (3, 7): {3: 1},
    (4, 5): {6: 1},
    (4, 6): {5: -1},
    (5, 6): {4: 1},
    (7, 9): {9: -2},
    (8, 9): {9: 2},
}


def _build_tensor() -> np.ndarray:
    t = np.zeros((9, 9, 9), dtype=object)
    t[...] = Fraction(0)
    for (i, j), out in _UPPER.items():
        for k, v in out.items():
            t[i - 1, j - 1, k - 1] = Fraction(v)
            t[j - 1, i - 1, k - 1] = Fraction(-v)
    return t


#: ``STRUCTURE[i, j, k]`` is the coefficient of V_{k+1} in [V_{i+1}, V_{j+1}].
STRUCTURE = _build_tensor()


def _frac(v) -> Scalar:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    v = float(v)
    if not math.isfinite(v):
        raise ValueError("coefficients must be finite")
    return v


def _clean(v: Scalar) -> Scalar:
    # collapse float noise that is exactly integral back to exact zero
    if isinstance(v, float) and v == 0.0:
        return Fraction(0)
    return v


@dataclass(frozen=True)
class EquivGenerator:
    """Element ``sum c_i V_i + V_f`` of the equivalence algebra."""

    c: tuple = field(default_factory=lambda: (Fraction(0),) * 9)
    gauge: Expr = ex.ZERO

    def __post_init__(self):
        c = tuple(_clean(_frac(v)) for v in self.c)
        if len(c) != 9:
            raise ValueError(f"expected 9 coefficients, got {len(c)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "gauge", ex.as_expr(self.gauge))

    # construction helpers
    @classmethod
    def basis(cls, i: int) -> "EquivGenerator":
        if not 1 <= i <= 9:
            raise ValueError("basis index must be in 1..9")
        c = [0] * 9
        c[i - 1] = 1
        return cls(tuple(c))

    @classmethod
    def of(cls, *terms, gauge=ex.ZERO, **coeffs) -> "EquivGenerator":
        """``EquivGenerator.of(4, c7=2)`` style constructor; bare indices count once."""
        c = [Fraction(0)] * 9
        for i in terms:
            if not 1 <= int(i) <= 9:
                raise ValueError("basis index must be in 1..9")
            c[int(i) - 1] += 1
        for name, v in coeffs.items():
            c[int(name[1:]) - 1] = v
        return cls(tuple(c), gauge)

    @classmethod
    def pure_gauge(cls, f) -> "EquivGenerator":
        return cls((0,) * 9, f)

    # linear structure
    def __add__(self, other: "EquivGenerator") -> "EquivGenerator":
        return EquivGenerator(
            tuple(a + b for a, b in zip(self.c, other.c)), self.gauge + other.gauge
        )

    def __sub__(self, other: "EquivGenerator") -> "EquivGenerator":
        return EquivGenerator(
            tuple(a - b for a, b in zip(self.c, other.c)), self.gauge - other.gauge
        )

    def __mul__(self, k) -> "EquivGenerator":
        k = _frac(k)
        return EquivGenerator(tuple(k * a for a in self.c), ex.Const(k) * self.gauge)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.c)

    @property
    def finite(self) -> np.ndarray:
        return np.array([float(v) for v in self.c])

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.c) and self.gauge.is_zero()

    # coordinates
    @property
    def omega(self) -> tuple:
        return (self.c[5], self.c[4], self.c[3])

    @property
    def translation(self) -> tuple:
        return self.c[0:3]

    def eta(self) -> tuple[Expr, Expr, Expr]:
        """Spatial components of the generator as Exprs in x, y, z."""
        return RelatedOperator.of(self).eta()

    def to_json(self) -> dict:
        return {"c": [str(v) if isinstance(v, Fraction) else repr(v) for v in self.c],
                "f": ex.to_string(self.gauge)}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "EquivGenerator":
        if isinstance(data, str):
            data = json.loads(data)
        c = data.get("c")
        if not isinstance(c, list) or len(c) != 9:
            raise ValueError("generator JSON needs 'c' with 9 entries")
        coeffs = []
        for v in c:
            coeffs.append(Fraction(v) if isinstance(v, str) else _frac(v))
        f = data.get("f", "0") or "0"
        return cls(tuple(coeffs), ex.parse(f) if isinstance(f, str) else f)

    def __str__(self):
        parts = []
        for i, v in enumerate(self.c, 1):
            if v != 0:
                parts.append(f"{v}*V{i}")
        if not self.gauge.is_zero():
            parts.append(f"V[{self.gauge}]")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SymGenerator:
    """``c0 v0 + sum c_i v_i`` with v0 = d_t and v1..v8 the point symmetries."""

    c0: Scalar = Fraction(0)
    c: tuple = field(default_factory=lambda: (Fraction(0),) * 8)

    def __post_init__(self):
        c = tuple(_frac(v) for v in self.c)
        if len(c) != 8:
            raise ValueError("expected 8 coefficients")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c0", _frac(self.c0))

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.c])

    def is_zero(self) -> bool:
        return self.c0 == 0 and all(v == 0 for v in self.c)

    def is_noether(self) -> bool:
        return self.c[7] == 2 * self.c[6]

    def to_equiv(self, c9=0, gauge=ex.ZERO) -> EquivGenerator:
        return EquivGenerator(tuple(self.c) + (c9,), gauge)


def project_to_symmetry(V: EquivGenerator) -> SymGenerator:
    """Drop c9 and the gauge part; the time translation coefficient is 0."""
    return SymGenerator(Fraction(0), V.c[:8])


projectToSymmetry = project_to_symmetry


@dataclass(frozen=True)
class RelatedOperator:
    """``U g = (M x + a).grad g + s g`` attached to a generator."""

    matrix: tuple  # 3x3, rows
    translation: tuple
    scalar: Scalar

    @classmethod
    def of(cls, V: EquivGenerator) -> "RelatedOperator":
        c = V.c
        c4, c5, c6, c7, c8 = c[3], c[4], c[5], c[6], c[7]
        # eta = c7 x + omega x x + a with omega = (c6, c5, c4)
        m = (
            (c7, -c4, c5),
            (c4, c7, -c6),
            (-c5, c6, c7),
        )
        return cls(m, tuple(c[0:3]), c8 - 2 * c7)

    def eta(self) -> tuple[Expr, Expr, Expr]:
        xs = (ex.X, ex.Y, ex.Z)
        out = []
        for row, a in zip(self.matrix, self.translation):
            e = ex.Const(a)
            for m, v in zip(row, xs):
                e = e + ex.Const(m) * v
            out.append(e)
        return tuple(out)

    def apply(self, g: Expr) -> Expr:
        g = ex.as_expr(g)
        if g.is_zero():
            return ex.ZERO
        out = ex.Const(self.scalar) * g
        for e, d in zip(self.eta(), ex.grad(g)):
            out = out + e * d
        return out

    def __call__(self, g):
        return self.apply(g)


def related_operator(V: EquivGenerator) -> RelatedOperator:
    return RelatedOperator.of(V)


relatedOperator = related_operator


def finite_bracket(a: Sequence, b: Sequence) -> tuple:
    out = [Fraction(0)] * 9
    for (i, j), res in _UPPER.items():
        w = a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1]
        if w != 0:
            for k, v in res.items():
                out[k - 1] += v * w
    return tuple(out)


def bracket(V: EquivGenerator, W: EquivGenerator) -> EquivGenerator:
    """Lie bracket; the gauge part is ``U_V(f_W) - U_W(f_V)``."""
    gauge = RelatedOperator.of(V).apply(W.gauge) - RelatedOperator.of(W).apply(V.gauge)
    return EquivGenerator(finite_bracket(V.c, W.c), gauge)


def ad_matrix(V: EquivGenerator | Sequence) -> np.ndarray:
    """Float matrix of ``ad V`` on the finite part (columns = basis inputs)."""
    c = V.c if isinstance(V, EquivGenerator) else tuple(V)
    m = np.zeros((9, 9))
    for j in range(9):
        e = [0] * 9
        e[j] = 1
        m[:, j] = [float(v) for v in finite_bracket(c, e)]
    return m


def jacobi_residual(U, V, W) -> EquivGenerator:
    return (
        bracket(bracket(U, V), W)
        + bracket(bracket(V, W), U)
        + bracket(bracket(W, U), V)
    )


def basis_triples() -> Iterable[tuple[int, int, int]]:
    return combinations(range(1, 10), 3)


def invariants(V: EquivGenerator) -> tuple:
    c = V.c
    return (c[6], c[7], c[3] ** 2 + c[4] ** 2 + c[5] ** 2)


# ---------------------------------------------------------------------------
# adjoint action


_HALF_PI = math.pi / 2


def exact_cos_sin(angle) -> tuple[Scalar, Scalar]:
    """cos/sin with exact values at multiples of pi/2."""
    if isinstance(angle, Fraction) and angle == 0:
        return Fraction(1), Fraction(0)
    q = float(angle) / _HALF_PI
    n = round(q)
    if abs(q - n) < 1e-14:
        return [
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)),
            (Fraction(0), Fraction(-1)),
        ][n % 4]
    a = float(angle)
    return math.cos(a), math.sin(a)


@dataclass(frozen=True)
class AdjointStep:
    """One inner automorphism.

    ``kind`` is 1..9 for the finite maps generated by V1..V6, V7+V8, V8, V9
    and ``"gauge"`` for the map generated by V_g. ``eps`` is the parameter as
    it appears in the coefficient formulas: a shift for kinds 1-3, an angle
    for 4-6, the nonzero factors for kinds 7 and 8, the shift of c9 per unit
    c7 - c8 for kind 9.
    """

    kind: int | str
    eps: Scalar = Fraction(0)
    g: Expr | None = None

    def __post_init__(self):
        if self.kind == "gauge":
            if self.g is None:
                raise ValueError("gauge step needs g")
            object.__setattr__(self, "g", ex.as_expr(self.g))
            return
        if self.kind not in range(1, 10):
            raise ValueError(f"unknown adjoint step kind {self.kind!r}")
        eps = _frac(self.eps)
        if self.kind in (7, 8) and eps == 0:
            raise ValueError("scaling factor must be nonzero")
        object.__setattr__(self, "eps", eps)

    @property
    def is_rotation(self) -> bool:
        return self.kind in (4, 5, 6)

    def to_json(self) -> dict:
        if self.kind == "gauge":
            return {"kind": "gauge", "g": ex.to_string(self.g)}
        e = self.eps
        return {"kind": self.kind, "eps": str(e) if isinstance(e, Fraction) else repr(e)}

    @classmethod
    def from_json(cls, d: Mapping) -> "AdjointStep":
        if d["kind"] == "gauge":
            return cls("gauge", g=ex.parse(d["g"]))
        e = d.get("eps", "0")
        return cls(int(d["kind"]), Fraction(e) if isinstance(e, str) and "." not in e and "e" not in e.lower() else float(e))

    def __call__(self, V: EquivGenerator) -> EquivGenerator:
        return adjoint_apply(self, V)


def _rot(cs, p, q):
    """Return (p cos + q sin, q cos - p sin)."""
    c, s = cs
    return p * c + q * s, q * c - p * s


def _C(v) -> Expr:
    return ex.Const(v)


def adjoint_apply(step: AdjointStep, V: EquivGenerator) -> EquivGenerator:
    """Apply one adjoint map to the coefficients and the gauge function."""
    c = list(V.c)
    f = V.gauge
    k, e = step.kind, step.eps
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = c
    X, Y, Z = ex.X, ex.Y, ex.Z
    if k == "gauge":
        return EquivGenerator(tuple(c), f - RelatedOperator.of(V).apply(step.g))
    if k == 1:
        c[0], c[1], c[2] = c1 + e * c7, c2 + e * c4, c3 - e * c5
        f = ex.substitute(f, {"x": X + _C(e)})
    elif k == 2:
        c[0], c[1], c[2] = c1 - e * c4, c2 + e * c7, c3 + e * c6
        f = ex.substitute(f, {"y": Y + _C(e)})
    elif k == 3:
        c[0], c[1], c[2] = c1 + e * c5, c2 - e * c6, c3 + e * c7
        f = ex.substitute(f, {"z": Z + _C(e)})
    elif k == 4:
        cs = exact_cos_sin(e)
        c[0], c[1] = _rot(cs, c1, c2)
        c[5], c[4] = _rot(cs, c6, c5)
        co, si = _C(cs[0]), _C(cs[1])
        f = ex.substitute(f, {"x": co * X - si * Y, "y": si * X + co * Y})
    elif k == 5:
        cs = exact_cos_sin(e)
        c[2], c[0] = _rot(cs, c3, c1)
        c[3], c[5] = _rot(cs, c4, c6)
        co, si = _C(cs[0]), _C(cs[1])
        f = ex.substitute(f, {"x": co * X + si * Z, "z": co * Z - si * X})
    elif k == 6:
        cs = exact_cos_sin(e)
        c[1], c[2] = _rot(cs, c2, c3)
        c[4], c[3] = _rot(cs, c5, c4)
        co, si = _C(cs[0]), _C(cs[1])
        f = ex.substitute(f, {"y": co * Y - si * Z, "z": co * Z + si * Y})
    elif k == 7:
        c[0], c[1], c[2] = e * c1, e * c2, e * c3
        inv = _C(1 / e) if isinstance(e, Fraction) else _C(1.0 / e)
        f = _C(e) * ex.substitute(f, {"x": inv * X, "y": inv * Y, "z": inv * Z})
    elif k == 8:
        c[8] = e * c9
        scale = abs(e)
        if isinstance(scale, Fraction):
            root = ex.sqrt(_C(scale))
            f = root * f if isinstance(root, ex.Const) else _C(math.sqrt(scale)) * f
        else:
            f = _C(math.sqrt(scale)) * f
    elif k == 9:
        c[8] = (c7 - c8) * e + c9
    return EquivGenerator(tuple(c), f)


adjointApply = adjoint_apply


def step_generator(step: AdjointStep) -> EquivGenerator:
    """Generator G with ``step(eps) = exp(s ad G)`` and the s that gives eps."""
    return {
        1: EquivGenerator.basis(1),
        2: EquivGenerator.basis(2),
        3: EquivGenerator.basis(3),
        4: EquivGenerator.basis(4),
        5: EquivGenerator.basis(5),
        6: EquivGenerator.basis(6),
        7: EquivGenerator.basis(7) + EquivGenerator.basis(8),
        8: EquivGenerator.basis(8),
        9: EquivGenerator.basis(9),
    }[step.kind]


def step_for_flow(kind: int, s: float) -> AdjointStep:
    """Adjoint step equal to ``exp(s ad G_kind)``."""
    if kind == 7:
        return AdjointStep(7, math.exp(-s))
    if kind == 8:
        return AdjointStep(8, math.exp(2 * s))
    if kind == 9:
        return AdjointStep(9, 2 * s)
    return AdjointStep(kind, s)


def apply_steps(steps: Iterable[AdjointStep], V: EquivGenerator) -> EquivGenerator:
    for st in steps:
        V = adjoint_apply(st, V)
    return V


def span_rank(gens: Sequence[EquivGenerator], tol: float = 1e-12) -> int:
    if not gens:
        return 0
    m = np.array([g.finite for g in gens])
    return int(np.linalg.matrix_rank(m, tol=tol))


__all__ = [
    "STRUCTURE",
    "EquivGenerator",
    "SymGenerator",
    "RelatedOperator",
    "AdjointStep",
    "bracket",
    "finite_bracket",
    "ad_matrix",
    "jacobi_residual",
    "invariants",
    "adjoint_apply",
    "adjointApply",
    "apply_steps",
    "project_to_symmetry",
    "projectToSymmetry",
    "related_operator",
    "relatedOperator",
    "step_generator",
    "step_for_flow",
    "exact_cos_sin",
]
