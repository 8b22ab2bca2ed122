"""Equivalence, gauge and discrete transformations of fields and generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import expr as ex
from ..liealg import SymGenerator, exact_cos_sin
from .spec import FieldSpec


def _rx(a):
    c, s = exact_cos_sin(a)
    return ((1, 0, 0), (0, c, -s), (0, s, c))


def _ry(a):
    c, s = exact_cos_sin(a)
    return ((c, 0, s), (0, 1, 0), (-s, 0, c))


def _rz(a):
    c, s = exact_cos_sin(a)
    return ((c, -s, 0), (s, c, 0), (0, 0, 1))


def _matmul(P, Q):
    return tuple(tuple(sum(P[i][k] * Q[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def _matvec(P, v):
    return tuple(sum(P[i][k] * v[k] for k in range(3)) for i in range(3))


def _transpose(P):
    return tuple(tuple(P[j][i] for j in range(3)) for i in range(3))


def rotation(eps4=0, eps5=0, eps6=0) -> tuple:
    """R1(eps6) R2(eps5) R3(eps4): right-handed rotations about x, y, z."""
    return _matmul(_rx(eps6), _matmul(_ry(eps5), _rz(eps4)))


def _num(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class GroupElement:
    """Element of the equivalence group.

    Acts by t' = eps8 t + eps0, x' = eps7 R x + shift,
    A' = (eps7/eps8) R A + grad g and Phi' = (eps7/eps8)^2 Phi + eps9.
    ``R`` is any rotation matrix; :meth:`from_eps` builds it from angles.
    """

    eps7: object = 1
    R: tuple = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    shift: tuple = (0, 0, 0)
    eps8: object = 1
    eps0: object = 0
    eps9: object = 0
    g: ex.Expr = field(default=ex.ZERO)

    def __post_init__(self):
        if self.eps7 == 0 or self.eps8 == 0:
            raise ValueError("eps7 and eps8 must be nonzero")
        object.__setattr__(self, "eps7", _num(self.eps7))
        object.__setattr__(self, "eps8", _num(self.eps8))
        object.__setattr__(self, "eps0", _num(self.eps0))
        object.__setattr__(self, "eps9", _num(self.eps9))
        object.__setattr__(self, "R", tuple(tuple(_num(v) for v in row) for row in self.R))
        object.__setattr__(self, "shift", tuple(_num(v) for v in self.shift))
        object.__setattr__(self, "g", ex.as_expr(self.g))

    @classmethod
    def from_eps(cls, eps: Sequence, g=ex.ZERO) -> "GroupElement":
        """From the ten constants (eps0, ..., eps9) and a gauge function."""
        e = list(eps)
        if len(e) != 10:
            raise ValueError("expected ten constants eps0..eps9")
        return cls(e[7], rotation(e[4], e[5], e[6]), tuple(e[1:4]), e[8], e[0], e[9], g)

    @classmethod
    def random(cls, rng: np.random.Generator, gauge: bool = True) -> "GroupElement":
        ang = rng.uniform(-np.pi, np.pi, 3)
        g = ex.ZERO
        if gauge:
            a, b = rng.uniform(-1, 1, 2)
            g = ex.parse(f"{a:.6f}*x*y + {b:.6f}*sin(z)")
        return cls.from_eps([rng.uniform(-1, 1), *rng.uniform(-0.5, 0.5, 3), *ang,
                             rng.choice([-1, 1]) * rng.uniform(0.6, 1.6),
                             rng.choice([-1, 1]) * rng.uniform(0.6, 1.6), rng.uniform(-1, 1)], g)

    @property
    def is_identity(self) -> bool:
        return (self.eps7 == 1 and self.eps8 == 1 and self.eps0 == 0 and self.eps9 == 0
                and self.R == rotation() and all(v == 0 for v in self.shift) and self.g == ex.ZERO)

    def point(self, x) -> np.ndarray:
        return float(self.eps7) * np.asarray(self.R, dtype=float) @ np.asarray(x, dtype=float) + np.asarray(
            self.shift, dtype=float)

    def inverse_point_map(self) -> tuple:
        """(M, b) with x = M x' + b."""
        Rt = _transpose(self.R)
        M = tuple(tuple(v / self.eps7 for v in row) for row in Rt)
        b = tuple(-v for v in _matvec(M, self.shift))
        return M, b

    def inverse(self) -> "GroupElement":
        M, b = self.inverse_point_map()
        # g' = -(eps8/eps7^2) g(T x), constant shift -(eps8/eps7)^2 eps9
        Tx = [ex.add(ex.add(ex.add(ex.mul(ex.as_expr(self.eps7 * self.R[i][0]), ex.X),
                                   ex.mul(ex.as_expr(self.eps7 * self.R[i][1]), ex.Y)),
                            ex.mul(ex.as_expr(self.eps7 * self.R[i][2]), ex.Z)),
                     ex.as_expr(self.shift[i])) for i in range(3)]
        g = ex.mul(ex.as_expr(-self.eps8 / self.eps7**2), ex.substitute(self.g, dict(zip("xyz", Tx))))
        return GroupElement(1 / self.eps7, _transpose(self.R), b, 1 / self.eps8,
                            -self.eps0 / self.eps8, -((self.eps8 / self.eps7) ** 2) * self.eps9, g)

    def to_json(self) -> dict:
        return {"eps7": str(self.eps7), "R": [[str(v) for v in row] for row in self.R],
                "shift": [str(v) for v in self.shift], "eps8": str(self.eps8),
                "eps0": str(self.eps0), "eps9": str(self.eps9), "g": ex.to_string(self.g)}


def _affine_subs(M, b) -> dict:
    """Mapping x_i -> (M x + b)_i as expressions."""
    out = {}
    for i, name in enumerate("xyz"):
        e = ex.as_expr(b[i])
        for j, v in enumerate((ex.X, ex.Y, ex.Z)):
            e = ex.add(e, ex.mul(ex.as_expr(M[i][j]), v))
        out[name] = e
    return out


def apply_equivalence(fs: FieldSpec, h: GroupElement | Sequence, g=None) -> FieldSpec:
    """Transform a field by a group element (or the ten constants plus ``g``)."""
    if not isinstance(h, GroupElement):
        h = GroupElement.from_eps(h, g if g is not None else ex.ZERO)
    elif g is not None:
        raise TypeError("pass g inside the GroupElement")
    M, b = h.inverse_point_map()
    subs = _affine_subs(M, b)
    A0 = [ex.substitute(a, subs) for a in fs.A_bound]
    scale = ex.as_expr(h.eps7 / h.eps8)
    A = []
    grad_g = ex.grad(h.g)
    for i in range(3):
        comp = ex.ZERO
        for j in range(3):
            comp = ex.add(comp, ex.mul(ex.as_expr(h.R[i][j]), ex.mul(scale, A0[j])))
        A.append(ex.add(comp, grad_g[i]))
    Phi = ex.add(ex.mul(ex.as_expr((h.eps7 / h.eps8) ** 2), ex.substitute(fs.Phi_bound, subs)),
                 ex.as_expr(h.eps9))
    return FieldSpec(tuple(A), Phi, {}, fs.domain.pulled_back(M, b), fs.name + "'")


applyEquivalence = apply_equivalence


def pushforward(s: SymGenerator, h: GroupElement) -> SymGenerator:
    """Image of a symmetry generator of ``fs`` as a symmetry of ``h(fs)``."""
    c = list(s.c)
    a = c[0:3]
    omega = (c[5], c[4], c[3])
    Rw = _matvec(h.R, omega)
    Ra = _matvec(h.R, a)
    e = h.shift
    cross = (Rw[1] * e[2] - Rw[2] * e[1], Rw[2] * e[0] - Rw[0] * e[2], Rw[0] * e[1] - Rw[1] * e[0])
    new_a = [h.eps7 * Ra[i] - c[6] * e[i] - cross[i] for i in range(3)]
    new = new_a + [Rw[2], Rw[1], Rw[0], c[6], c[7]]
    c0 = h.eps8 * s.c0 - c[7] * h.eps0
    return SymGenerator(c0, tuple(new))


# --- discrete maps --------------------------------------------------------

def _axes(axes) -> tuple[int, int]:
    if axes is None:
        return 0, 1
    i, j = (int(a) for a in axes)
    if {i, j} <= {1, 2, 3} and i != j:
        return i - 1, j - 1
    raise ValueError(f"invalid axis pair {axes!r}; use two distinct values from 1, 2, 3")


def discrete_matrices(which: int, axes=None) -> tuple[np.ndarray, np.ndarray, int]:
    """(P, Q, s): x' = P x, A'(x') = Q A(P^-1 x'), t' = s t.

    All four maps are involutions, so P^-1 = P.
    """
    I3 = np.eye(3)
    if which == 1:
        return -I3, I3, -1
    if which == 2:
        return I3, -I3, -1
    if which == 3:
        i, j = _axes(axes)
        P = I3.copy()
        P[i, i] = P[j, j] = -1
        return P, -P, -1
    if which == 4:
        i, j = _axes(axes)
        P = I3[[{i: j, j: i}.get(k, k) for k in range(3)]]
        return P, P, 1
    raise ValueError(f"unknown discrete map {which!r}; expected 1, 2, 3 or 4")


def apply_discrete(fs: FieldSpec, which: int, axes=None) -> FieldSpec:
    """Apply one of the four discrete equivalence maps.

    Map 1 reverses time and space together and leaves the values of A and
    Phi untouched (they are evaluated at the reflected point). Map 2
    reverses time and flips A. Map 3 reverses time, reflects the axes
    ``(i, j)`` and flips the remaining component of A. Map 4 swaps two axes
    and the matching components of A.
    """
    P, Q, _ = discrete_matrices(which, axes)
    Pi = [[Fraction(int(v)) for v in row] for row in P]
    subs = _affine_subs(Pi, (0, 0, 0))
    A0 = [ex.substitute(a, subs) for a in fs.A_bound]
    A = []
    for i in range(3):
        comp = ex.ZERO
        for j in range(3):
            if Q[i, j]:
                comp = ex.add(comp, ex.mul(ex.as_expr(int(Q[i, j])), A0[j]))
        A.append(comp)
    Phi = ex.substitute(fs.Phi_bound, subs)
    return FieldSpec(tuple(A), Phi, {}, fs.domain.pulled_back(P, np.zeros(3)), f"{fs.name}~{which}")


applyDiscrete = apply_discrete


def map_state(which: int, t: float, x, v, axes=None) -> tuple[float, np.ndarray, np.ndarray]:
    """Image of a phase point under a discrete map."""
    P, _, s = discrete_matrices(which, axes)
    return s * t, P @ np.asarray(x, dtype=float), s * (P @ np.asarray(v, dtype=float))


__all__ = [
    "GroupElement",
    "apply_discrete",
    "applyDiscrete",
    "apply_equivalence",
    "applyEquivalence",
    "discrete_matrices",
    "map_state",
    "pushforward",
    "rotation",
]
