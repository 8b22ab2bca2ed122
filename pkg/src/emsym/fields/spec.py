"""Field specifications: potentials, derived fields, regular domains."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from .. import expr as ex
from ..expr import Expr

XYZ = ex.VARIABLES

# shorthand symbols accepted in potentials
MACROS = {
    "rho": ex.parse("sqrt(x^2 + y^2)"),
    "r": ex.parse("sqrt(x^2 + y^2 + z^2)"),
    "phi": ex.parse("atan2(y, x)"),
}


@dataclass(frozen=True)
class DomainHint:
    """Excluded sets of a field's regular domain.

    ``axis`` excludes the z-axis, ``origin`` the origin, ``phi_cut`` the
    branch half-plane y = 0, x < 0 of atan2. ``positive`` lists coordinates
    required to be positive. ``tube`` is the safety margin used when
    sampling; ``r_abort`` the radius below which trajectories are stopped.
    """

    axis: bool = False
    origin: bool = False
    phi_cut: bool = False
    positive: tuple = ()
    tube: float = 0.1
    r_abort: float = 0.05
    affine: tuple | None = None  # (M, b): original coordinates are M @ p + b

    def merge(self, other: "DomainHint") -> "DomainHint":
        return DomainHint(
            self.axis or other.axis,
            self.origin or other.origin,
            self.phi_cut or other.phi_cut,
            tuple(sorted(set(self.positive) | set(other.positive))),
            max(self.tube, other.tube),
            max(self.r_abort, other.r_abort),
            self.affine,
        )

    def pulled_back(self, M, b) -> "DomainHint":
        """Domain of a field evaluated at ``M @ p + b``."""
        M = np.asarray(M, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.affine is not None:
            M0, b0 = (np.asarray(a, dtype=float) for a in self.affine)
            M, b = M0 @ M, M0 @ b + b0
        return replace(self, affine=(tuple(map(tuple, M)), tuple(b)))

    def mask(self, pts: np.ndarray, margin: float | None = None) -> np.ndarray:
        """Boolean mask of points lying in the regular domain with margin."""
        m = self.tube if margin is None else margin
        pts = np.atleast_2d(pts)
        if self.affine is not None:
            M, b = (np.asarray(a, dtype=float) for a in self.affine)
            pts = pts @ M.T + b
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        ok = np.all(np.isfinite(pts), axis=1)
        rho = np.hypot(x, y)
        r = np.sqrt(rho**2 + z**2)
        if self.axis:
            ok &= rho > m
        if self.origin:
            ok &= r > max(m, self.r_abort)
        if self.phi_cut:
            ok &= ~((x < 0) & (np.abs(y) <= m))
        for name in self.positive:
            ok &= pts[:, "xyz".index(name)] > m
        return ok

    def contains(self, p: Sequence[float], margin: float = 0.0) -> bool:
        return bool(self.mask(np.asarray(p, dtype=float)[None, :], margin)[0])

    def to_dict(self) -> dict:
        d = {"axis": self.axis, "origin": self.origin, "phi_cut": self.phi_cut,
             "positive": list(self.positive)}
        if self.affine is not None:
            d["affine"] = [list(map(float, row)) for row in self.affine[0]] + [list(map(float, self.affine[1]))]
        return d

    @classmethod
    def infer(cls, exprs: Sequence[Expr]) -> "DomainHint":
        """Conservative guess from the functions used in the expressions."""
        axis = origin = cut = False
        for e in exprs:
            for n in ex._walk(e):
                if isinstance(n, ex.Binary) and n.op == "atan2":
                    cut = True
                    axis = True
                if isinstance(n, ex.Binary) and n.op in ("div", "pow"):
                    origin = True
        return cls(axis=axis, origin=origin, phi_cut=cut)


def _bind(e: Expr, params: Mapping[str, object]) -> Expr:
    e = ex.substitute(e, MACROS)
    return ex.substitute(e, params) if params else e


@dataclass(frozen=True)
class FieldSpec:
    """Vector potential A, scalar potential Phi and their derived fields.

    ``A`` and ``Phi`` may reference the macros rho, r, phi and named
    parameters; :attr:`A_bound` and :attr:`Phi_bound` are the closed
    expressions in x, y, z.
    """

    A: tuple
    Phi: Expr = ex.ZERO
    params: dict = field(default_factory=dict)
    domain: DomainHint = field(default_factory=DomainHint)
    name: str = ""

    def __post_init__(self):
        A = tuple(ex.as_expr(a) for a in self.A)
        if len(A) != 3:
            raise ValueError("A needs three components")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Phi", ex.as_expr(self.Phi))
        object.__setattr__(self, "params", dict(self.params))
        free = set()
        for e in self.A_bound + (self.Phi_bound,):
            free |= e.free_symbols()
        unbound = sorted(free - set(XYZ))
        if unbound:
            raise ex.UnboundSymbolError(unbound)

    # closed forms
    @cached_property
    def A_bound(self) -> tuple:
        return tuple(_bind(a, self.params) for a in self.A)

    @cached_property
    def Phi_bound(self) -> Expr:
        return _bind(self.Phi, self.params)

    @cached_property
    def B(self) -> tuple:
        return ex.curl(self.A_bound)

    @cached_property
    def E(self) -> tuple:
        return tuple(ex.neg(d) for d in ex.grad(self.Phi_bound))

    @cached_property
    def jac_B(self) -> tuple:
        """dB_i/dx_j, row-major."""
        return tuple(ex.differentiate(b, v) for b in self.B for v in XYZ)

    @cached_property
    def jac_E(self) -> tuple:
        return tuple(ex.differentiate(e, v) for e in self.E for v in XYZ)

    @cached_property
    def jac_A(self) -> tuple:
        return tuple(ex.differentiate(a, v) for a in self.A_bound for v in XYZ)

    # compiled evaluators (vectorized over point arrays)
    @cached_property
    def _fields_fn(self):
        return ex.compile_exprs(self.B + self.E, XYZ, vectorized=True)

    @cached_property
    def _fields_scalar(self):
        return ex.compile_exprs(self.B + self.E, XYZ)

    @cached_property
    def _jets_fn(self):
        return ex.compile_exprs(self.B + self.E + self.jac_B + self.jac_E, XYZ, vectorized=True)

    @cached_property
    def _pot_fn(self):
        return ex.compile_exprs(self.A_bound + (self.Phi_bound,), XYZ, vectorized=True)

    @cached_property
    def _pot_scalar(self):
        return ex.compile_exprs(self.A_bound + (self.Phi_bound,), XYZ)

    @cached_property
    def _potjet_fn(self):
        return ex.compile_exprs(self.A_bound + (self.Phi_bound,) + self.jac_A + ex.grad(self.Phi_bound),
                                XYZ, vectorized=True)

    @staticmethod
    def _stack(vals, n):
        return np.array(np.broadcast_arrays(*vals, np.empty(n))[:-1], dtype=float).T

    def fields(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """B and E at an (n, 3) array of points, each (n, 3)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = self._stack(self._fields_fn(pts[:, 0], pts[:, 1], pts[:, 2]), len(pts))
        return out[:, :3], out[:, 3:]

    def field_at(self, p: Sequence[float]) -> tuple[tuple, tuple]:
        """B and E at one point as tuples (scalar path, raises DomainError)."""
        v = self._fields_scalar(float(p[0]), float(p[1]), float(p[2]))
        return v[:3], v[3:]

    def jets(self, pts: np.ndarray) -> dict:
        """B, E and their Jacobians at points; Jacobians are (n, 3, 3)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = self._stack(self._jets_fn(pts[:, 0], pts[:, 1], pts[:, 2]), len(pts))
        n = len(pts)
        return {
            "B": out[:, 0:3],
            "E": out[:, 3:6],
            "dB": out[:, 6:15].reshape(n, 3, 3),
            "dE": out[:, 15:24].reshape(n, 3, 3),
        }

    def potentials(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = self._stack(self._pot_fn(pts[:, 0], pts[:, 1], pts[:, 2]), len(pts))
        return out[:, :3], out[:, 3]

    def potential_at(self, p) -> tuple[tuple, float]:
        v = self._pot_scalar(float(p[0]), float(p[1]), float(p[2]))
        return v[:3], v[3]

    def potential_jets(self, pts: np.ndarray) -> dict:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = len(pts)
        out = self._stack(self._potjet_fn(pts[:, 0], pts[:, 1], pts[:, 2]), n)
        return {"A": out[:, 0:3], "Phi": out[:, 3], "dA": out[:, 4:13].reshape(n, 3, 3),
                "dPhi": out[:, 13:16]}

    # sampling
    def sample_points(
        self,
        n: int = 40,
        r_min: float = 0.5,
        r_max: float = 2.0,
        seed: int = 0,
        check: bool = True,
    ) -> np.ndarray:
        """Quasi-random points in the shell r_min <= r <= r_max within the domain.

        Points where any field component fails to evaluate are skipped.
        """
        sampler = qmc.Halton(d=3, scramble=True, seed=seed)
        out: list = []
        for _ in range(200):
            u = sampler.random(256)
            r = np.cbrt(r_min**3 + u[:, 0] * (r_max**3 - r_min**3))
            ct = 1.0 - 2.0 * u[:, 1]
            st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
            ph = 2.0 * math.pi * u[:, 2]
            pts = np.column_stack([r * st * np.cos(ph), r * st * np.sin(ph), r * ct])
            pts = pts[self.domain.mask(pts)]
            for p in pts:
                if check and not self._regular(p):
                    continue
                out.append(p)
                if len(out) == n:
                    return np.array(out)
        raise ValueError("could not sample enough regular points in the domain")

    def _regular(self, p) -> bool:
        try:
            self.field_at(p)
            self.potential_at(p)
        except ex.DomainError:
            return False
        return True

    def maxwell_residual(self, pts: np.ndarray) -> tuple[float, float]:
        """Max |div B| and |curl E| at the points (relative to field size)."""
        divB = ex.divergence(self.B)
        curlE = ex.curl(self.E)
        fn = ex.compile_exprs((divB,) + tuple(curlE), XYZ, vectorized=True)
        out = self._stack(fn(pts[:, 0], pts[:, 1], pts[:, 2]), len(pts))
        j = self.jets(pts)
        scale = max(1.0, float(np.max(np.abs(j["dB"]))), float(np.max(np.abs(j["dE"]))))
        return float(np.max(np.abs(out[:, 0]))) / scale, float(np.max(np.abs(out[:, 1:]))) / scale

    def with_potentials(self, A, Phi, name=None) -> "FieldSpec":
        return FieldSpec(tuple(A), Phi, {}, self.domain, name if name is not None else self.name)

    def bound(self) -> "FieldSpec":
        """Same field with parameters and macros substituted."""
        return FieldSpec(self.A_bound, self.Phi_bound, {}, self.domain, self.name)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "A": [ex.to_string(a) for a in self.A],
            "Phi": ex.to_string(self.Phi),
            "params": {k: str(v) for k, v in self.params.items()},
            "domain": self.domain.to_dict(),
        }


def field_from_strings(A: Sequence[str], Phi: str = "0", params: Mapping | None = None,
                       domain: DomainHint | None = None, name: str = "") -> FieldSpec:
    A_e = tuple(ex.parse(a) for a in A)
    P_e = ex.parse(Phi)
    params = {k: (v if isinstance(v, (Fraction, float)) else Fraction(v)) for k, v in (params or {}).items()}
    if domain is None:
        domain = DomainHint.infer(A_e + (P_e,))
    return FieldSpec(A_e, P_e, params, domain, name)


def stormer() -> FieldSpec:
    """Magnetic dipole A = (-y, x, 0)/r^3 with no electric field."""
    return field_from_strings(("-y/r^3", "x/r^3", "0"), "0",
                              domain=DomainHint(origin=True), name="stormer")


def monopole(lam=1, G: str = "0") -> FieldSpec:
    """Monopole potential with B = lam r/r^3 (singular on the z-axis)."""
    return field_from_strings(
        ("lam*y*z/(r*rho^2)", "-lam*x*z/(r*rho^2)", "0"), G.replace("u", "r"),
        params={"lam": lam}, domain=DomainHint(axis=True, origin=True), name="monopole")


def uniform_b(b: float = 2) -> FieldSpec:
    return field_from_strings(("-y*b/2", "x*b/2", "0"), "0", params={"b": b}, name="uniform")


def zero_field() -> FieldSpec:
    return field_from_strings(("0", "0", "0"), "0", name="zero")
