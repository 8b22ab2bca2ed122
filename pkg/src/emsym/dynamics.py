"""Charged-particle dynamics, first integrals and Poisson brackets.

Equations of motion in dimensionless form: x'' = x' x B(x) + E(x).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import expr as ex
from .fields.spec import FieldSpec
from .liealg import SymGenerator

PHASE = ("x", "y", "z", "vx", "vy", "vz")
_ARGS = PHASE + ("t",)


class DomainExitError(RuntimeError):
    """A trajectory left the regular domain; ``trajectory`` holds the valid part."""

    def __init__(self, msg: str, trajectory: "Trajectory"):
        super().__init__(msg)
        self.trajectory = trajectory


class StepSizeUnderflow(RuntimeError):
    def __init__(self, msg: str, trajectory: "Trajectory"):
        super().__init__(msg)
        self.trajectory = trajectory


class MissingGaugeError(ValueError):
    """The generator needs a gauge function f and none was supplied."""


@dataclass(frozen=True)
class PhaseState:
    t: float
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(3)
        v = np.asarray(self.v, dtype=float).reshape(3)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v)) and math.isfinite(self.t)):
            raise ValueError("phase state must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", float(self.t))

    @property
    def y(self) -> np.ndarray:
        return np.concatenate([self.x, self.v])

    @classmethod
    def from_y(cls, t: float, y) -> "PhaseState":
        return cls(t, y[:3], y[3:])


def _fields_fn(fs: FieldSpec):
    return fs._fields_scalar


class SingularPointError(ex.DomainError):
    """The fields are genuinely singular at the requested point."""


# cube corners: symmetric offsets that avoid the coordinate axes
_CORNERS = np.array([[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]) / math.sqrt(3)


def regular_field_at(fs: FieldSpec, x, delta: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """B and E at ``x``, taking the limit where only the gauge is singular.

    Potentials such as the monopole one are undefined on the z axis although
    B is smooth there. When direct evaluation fails, cube-corner neighbour
    averages at distances ``delta`` and ``2 delta`` are combined by one
    Richardson step. A large spread among the neighbours means a true
    singularity. (Smaller offsets lose everything to cancellation.)
    """
    try:
        B, E = fs.field_at(x)
        return np.asarray(B, float), np.asarray(E, float)
    except ex.DomainError:
        pass
    x = np.asarray(x, float)

    def ring(d):
        vals = []
        for corner in _CORNERS:
            try:
                B, E = fs.field_at(x + d * corner)
            except ex.DomainError:
                raise SingularPointError(f"fields are singular at {x.tolist()}") from None
            vals.append(np.concatenate([B, E]))
        return np.array(vals)

    near, far = ring(delta), ring(2 * delta)
    mean = (4 * near.mean(axis=0) - far.mean(axis=0)) / 3
    if np.max(np.ptp(near, axis=0)) > 0.1 * (1.0 + np.max(np.abs(mean))):
        raise SingularPointError(f"fields are singular at {x.tolist()}")
    return mean[:3], mean[3:]


def lorentz_rhs(fs: FieldSpec, s: PhaseState) -> np.ndarray:
    """(v, v x B + E) at the state."""
    B, E = regular_field_at(fs, s.x)
    return np.concatenate([s.v, np.cross(s.v, B) + np.asarray(E)])


lorentzRHS = lorentz_rhs


def _rhs_factory(fs: FieldSpec):
    fn = _fields_fn(fs)

    def rhs(y):
        bx, by, bz, ex_, ey, ez = fn(y[0], y[1], y[2])
        vx, vy, vz = y[3], y[4], y[5]
        return np.array([vx, vy, vz, vy * bz - vz * by + ex_, vz * bx - vx * bz + ey, vx * by - vy * bx + ez])

    return rhs


def _inside_factory(fs: FieldSpec):
    d = fs.domain
    if d.affine is not None:
        return lambda y: d.contains(y[:3], margin=0.0)
    positive = ["xyz".index(n) for n in d.positive]
    r_abort = d.r_abort

    def inside(y):
        x, yy, z = y[0], y[1], y[2]
        rho2 = x * x + yy * yy
        if d.origin and rho2 + z * z < r_abort * r_abort:
            return False
        if d.axis and rho2 < r_abort * r_abort:
            return False
        if d.phi_cut and x < 0 and yy == 0:
            return False
        # half-space boundaries usually carry ln or sqrt singularities
        return all(y[i] > r_abort for i in positive)

    return inside


def _cut_check_factory(fs: FieldSpec, strict: bool | None = None):
    """Detector for steps across the phi cut, or None when the cut is harmless.

    Potentials written with atan2(y, x) jump across the half-plane y = 0,
    x < 0; the fields themselves may or may not. Only a genuine jump in B or
    E makes crossing a domain exit.
    """
    from .verify import cut_crossings

    d = fs.domain
    if not d.phi_cut:
        return None
    M = b = None
    if d.affine is not None:
        M, b = (np.asarray(a, dtype=float) for a in d.affine)
    Minv = np.linalg.inv(M) if M is not None else None

    def to_user(q):
        return q if M is None else (q - b) @ Minv.T

    if strict is False:
        return None
    probes = [(-rho, z) for rho in (0.7, 1.3) for z in (-0.5, 0.4, 1.1)]
    jump = 0.0
    scale = 1.0
    for rho, z in probes:
        try:
            above = np.concatenate(fs.field_at(to_user(np.array([rho, 1e-9, z]))))
            below = np.concatenate(fs.field_at(to_user(np.array([rho, -1e-9, z]))))
        except ex.DomainError:
            continue
        jump = max(jump, float(np.max(np.abs(above - below))))
        scale = max(scale, float(np.max(np.abs(above))))
    if not strict and jump <= 1e-6 * scale:
        return None

    def crosses(y0, y1):
        q = np.array([y0[:3], y1[:3]])
        if M is not None:
            q = q @ M.T + b
        return bool(cut_crossings(q)[0])

    return crosses


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    steps: int = 0
    rejected: int = 0
    method: str = ""

    def states(self) -> list[PhaseState]:
        return [PhaseState.from_y(t, y) for t, y in zip(self.t, self.y)]

    @property
    def final(self) -> PhaseState:
        return PhaseState.from_y(self.t[-1], self.y[-1])

    def __len__(self):
        return len(self.t)


# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_BE = _B5 - _B4


def integrate(
    fs: FieldSpec,
    s0: PhaseState,
    t_end: float,
    method: str = "adaptive",
    h: float = 1e-2,
    atol: float = 1e-10,
    rtol: float = 1e-10,
    max_steps: int = 2_000_000,
    stop_at_cut: bool | None = None,
) -> Trajectory:
    """Integrate the equations of motion from ``s0`` to ``t_end``.

    ``method="adaptive"`` uses the Dormand-Prince 5(4) pair with PI step
    control; ``method="rk4"`` takes fixed steps of size ``h`` (the last one
    shortened to land on ``t_end``). Raises :class:`DomainExitError` when a
    stage leaves the regular domain. Crossing the phi cut counts as leaving
    it when the fields jump there; ``stop_at_cut`` forces (True) or disables
    (False) that check, which matters for invariants built on multivalued
    gauge functions.
    """
    if not t_end > s0.t:
        raise ValueError("t_end must exceed the initial time")
    if h <= 0 or atol <= 0 or rtol <= 0:
        raise ValueError("step size and tolerances must be positive")
    rhs = _rhs_factory(fs)
    inside = _inside_factory(fs)
    if not inside(s0.y):
        raise DomainExitError("initial state outside the regular domain",
                              Trajectory(np.array([s0.t]), s0.y[None, :], method=method))
    crosses = _cut_check_factory(fs, stop_at_cut)
    if method == "rk4":
        return _rk4(rhs, inside, crosses, s0, t_end, h, max_steps)
    if method == "adaptive":
        return _dp54(rhs, inside, crosses, s0, t_end, h, atol, rtol, max_steps)
    raise ValueError(f"unknown method {method!r}; use 'adaptive' or 'rk4'")


def _eval(rhs, inside, y):
    if not inside(y):
        raise ex.DomainError("left the regular domain")
    return rhs(y)


def _partial(ts, ys, steps, rej, method):
    return Trajectory(np.array(ts), np.array(ys), steps, rej, method)


def _rk4(rhs, inside, crosses, s0, t_end, h, max_steps):
    t, y = s0.t, s0.y
    ts, ys = [t], [y]
    n = 0
    while t < t_end - 1e-14 * max(1.0, abs(t_end)):
        hh = min(h, t_end - t)
        try:
            k1 = _eval(rhs, inside, y)
            k2 = _eval(rhs, inside, y + 0.5 * hh * k1)
            k3 = _eval(rhs, inside, y + 0.5 * hh * k2)
            k4 = _eval(rhs, inside, y + hh * k3)
        except ex.DomainError as exc:
            raise DomainExitError(f"domain exit near t={t:.6g}: {exc}", _partial(ts, ys, n, 0, "rk4")) from None
        y_new = y + hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if crosses is not None and crosses(y, y_new):
            raise DomainExitError(f"crossed the branch cut near t={t:.6g}", _partial(ts, ys, n, 0, "rk4"))
        y = y_new
        t += hh
        n += 1
        if n > max_steps:
            raise StepSizeUnderflow("too many steps", _partial(ts, ys, n, 0, "rk4"))
        ts.append(t)
        ys.append(y)
    return _partial(ts, ys, n, 0, "rk4")


def _dp54(rhs, inside, crosses, s0, t_end, h, atol, rtol, max_steps):
    alpha, beta, safety = 0.7 / 5, 0.4 / 5, 0.9
    t, y = s0.t, s0.y
    ts, ys = [t], [y]
    try:
        k = [_eval(rhs, inside, y)] + [None] * 6
    except ex.DomainError as exc:
        raise DomainExitError(str(exc), _partial(ts, ys, 0, 0, "adaptive")) from None
    err_prev = 1e-4
    steps = rej = 0
    h = min(h, t_end - t)
    hmin = 1e-14 * max(1.0, abs(t_end))
    while t < t_end - hmin:
        h = min(h, t_end - t)
        try:
            for i in range(1, 7):
                yi = y + h * sum(a * kk for a, kk in zip(_A[i], k[:i]) if a)
                k[i] = _eval(rhs, inside, yi)
        except ex.DomainError:
            # shrink towards the boundary; fail once the step is negligible
            h *= 0.25
            rej += 1
            if h < hmin:
                raise DomainExitError(f"domain exit near t={t:.6g}", _partial(ts, ys, steps, rej, "adaptive")) from None
            continue
        y_new = yi  # FSAL: stage 7 point equals the 5th-order solution
        err_vec = h * sum(b * kk for b, kk in zip(_BE, k) if b)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / sc) ** 2)))
        if err <= 1.0:
            if crosses is not None and crosses(y, y_new):
                raise DomainExitError(f"crossed the branch cut near t={t:.6g}",
                                      _partial(ts, ys, steps, rej, "adaptive"))
            t += h
            y = y_new
            k[0] = k[6]
            ts.append(t)
            ys.append(y)
            steps += 1
            if steps > max_steps:
                raise StepSizeUnderflow("too many steps", _partial(ts, ys, steps, rej, "adaptive"))
            err = max(err, 1e-10)
            fac = safety * err ** (-alpha) * err_prev**beta
            h *= min(5.0, max(0.2, fac))
            err_prev = err
        else:
            rej += 1
            h *= max(0.2, safety * err ** (-alpha))
            if h < hmin:
                raise StepSizeUnderflow(f"step size underflow at t={t:.6g}",
                                        _partial(ts, ys, steps, rej, "adaptive"))
    return _partial(ts, ys, steps, rej, "adaptive")


# --- invariants -----------------------------------------------------------

def _sym(name):
    return ex.symbol(name)


VX, VY, VZ, T = (_sym(n) for n in ("vx", "vy", "vz", "t"))


@dataclass
class InvariantFn:
    """A phase-space function I(t, x, v).

    Expression-backed invariants (``expr`` over x, y, z, vx, vy, vz, t) get
    symbolic partial derivatives; others use ``func`` and central
    differences with one Richardson level.
    """

    name: str
    expr: ex.Expr | None = None
    func: Callable | None = None
    is_hamiltonian: bool = False
    is_noether: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.expr is None and self.func is None:
            raise ValueError("need an expression or a function")
        if self.expr is not None:
            bad = self.expr.free_symbols() - set(_ARGS)
            if bad:
                raise ex.UnboundSymbolError(sorted(bad))

    # evaluation
    def _compiled(self, vectorized: bool):
        key = ("fn", vectorized)
        if key not in self._cache:
            self._cache[key] = ex.compile_exprs([self.expr], _ARGS, vectorized)
        return self._cache[key]

    def value(self, t: float, x, v) -> float:
        if self.expr is not None:
            return float(self._compiled(False)(float(x[0]), float(x[1]), float(x[2]),
                                               float(v[0]), float(v[1]), float(v[2]), float(t))[0])
        return float(self.func(float(t), np.asarray(x, float), np.asarray(v, float)))

    def __call__(self, s, *rest) -> float:
        if rest:
            return self.value(s, *rest)
        if isinstance(s, PhaseState):
            return self.value(s.t, s.x, s.v)
        t, x, v = s
        return self.value(t, x, v)

    def values(self, traj: Trajectory) -> np.ndarray:
        if self.expr is not None and not any(isinstance(n, ex.Opaque) for n in ex._walk(self.expr)):
            y = traj.y
            out = self._compiled(True)(*(y[:, i] for i in range(6)), traj.t)[0]
            return np.broadcast_to(np.asarray(out, dtype=float), traj.t.shape).copy()
        return np.array([self.value(t, y[:3], y[3:]) for t, y in zip(traj.t, traj.y)])

    # derivatives
    def gradient(self, t: float, x, v, h: float = 1e-5) -> np.ndarray:
        """(dI/dx, dI/dv) as a 6-vector."""
        if self.expr is not None:
            if "grad" not in self._cache:
                parts = [ex.differentiate(self.expr, n) for n in PHASE]
                self._cache["grad"] = ex.compile_exprs(parts, _ARGS)
            return np.array(self._cache["grad"](*map(float, x), *map(float, v), float(t)), dtype=float)
        y0 = np.concatenate([np.asarray(x, float), np.asarray(v, float)])

        def f(y):
            return self.value(t, y[:3], y[3:])

        def central(step):
            g = np.empty(6)
            for i in range(6):
                e = np.zeros(6)
                e[i] = step
                g[i] = (f(y0 + e) - f(y0 - e)) / (2 * step)
            return g

        return (4.0 * central(h / 2) - central(h)) / 3.0

    # algebra on expression-backed invariants
    def _binop(self, other, op, sym):
        if isinstance(other, InvariantFn):
            if self.expr is None or other.expr is None:
                f1, f2 = self, other
                return InvariantFn(f"({self.name}{sym}{other.name})",
                                   func=lambda t, x, v: op_num(op, f1.value(t, x, v), f2.value(t, x, v)))
            return InvariantFn(f"({self.name}{sym}{other.name})", expr=op(self.expr, other.expr))
        c = ex.as_expr(other if isinstance(other, (int, Fraction)) else float(other))
        if self.expr is None:
            f1 = self
            return InvariantFn(f"({self.name}{sym}{other})",
                               func=lambda t, x, v: op_num(op, f1.value(t, x, v), float(other)))
        return InvariantFn(f"({self.name}{sym}{other})", expr=op(self.expr, c))

    def __add__(self, o):
        return self._binop(o, ex.add, "+")

    def __sub__(self, o):
        return self._binop(o, ex.sub, "-")

    def __mul__(self, o):
        return self._binop(o, ex.mul, "*")

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __pow__(self, n: int):
        return self._binop(n, ex.power, "^")


def op_num(op, a: float, b: float) -> float:
    return {ex.add: a + b, ex.sub: a - b, ex.mul: a * b}.get(op, a**b) if op is not ex.power else a**b


def hamiltonian_fn(fs: FieldSpec) -> InvariantFn:
    v2 = ex.add(ex.add(ex.mul(VX, VX), ex.mul(VY, VY)), ex.mul(VZ, VZ))
    return InvariantFn("H", ex.add(ex.div(v2, ex.Const(2)), fs.Phi_bound), is_hamiltonian=True)


def hamiltonian(fs: FieldSpec, s: PhaseState) -> float:
    """H = |v|^2 / 2 + Phi(x)."""
    _, phi = fs.potential_at(s.x)
    return 0.5 * float(np.dot(s.v, s.v)) + phi


def _coeffs(c) -> list:
    """(c0, c1, ..., c9) from a SymGenerator or a 9/10-sequence."""
    if isinstance(c, SymGenerator):
        return [c.c0] + list(c.c) + [0]
    c = list(c)
    if len(c) == 9:  # c1..c9
        return [0] + c
    if len(c) == 10:
        return c
    raise ValueError("expected c0..c9 (10 values) or c1..c9 (9 values)")


def _const(v):
    if isinstance(v, (int, Fraction)):
        return ex.Const(v)
    fv = float(v)
    fr = Fraction(fv).limit_denominator(10**6)
    return ex.Const(fr if abs(float(fr) - fv) < 1e-14 else fv)


def noether_expr(fs: FieldSpec, c, f: ex.Expr | None) -> ex.Expr:
    """eta.(v + A) - (2 c7 t + c0) H + c9 t - f as an expression."""
    cs = [_const(v) for v in _coeffs(c)]
    X = (ex.X, ex.Y, ex.Z)
    V = (VX, VY, VZ)
    omega = (cs[6], cs[5], cs[4])
    total = ex.ZERO
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        eta = ex.add(ex.add(ex.mul(cs[7], X[i]), cs[i + 1]), ex.sub(ex.mul(omega[j], X[k]), ex.mul(omega[k], X[j])))
        total = ex.add(total, ex.mul(eta, ex.add(V[i], fs.A_bound[i])))
    H = hamiltonian_fn(fs).expr
    total = ex.sub(total, ex.mul(ex.add(ex.mul(ex.mul(ex.Const(2), cs[7]), T), cs[0]), H))
    total = ex.add(total, ex.mul(cs[9], T))
    if f is not None:
        total = ex.sub(total, ex.as_expr(f))
    return total


def _centre_gauge(fs: FieldSpec, cs: list, f: ex.Expr) -> ex.Expr:
    """Shift a quadrature gauge so the static part of I is centred.

    Quadrature fixes f only up to a constant. We choose it so that I at
    rest, t = 0, averages to zero over antipodal sample pairs; this returns
    the closed-form rotation integrals of central fields exactly. Without
    antipodal pairs in the domain f is left as it is.
    """
    if not isinstance(f, ex.Opaque):
        return f
    pts = [p for p in fs.sample_points(16, seed=3) if fs.domain.contains(-p, margin=0.05)]
    if not pts:
        return f
    static = ex.compile_exprs([noether_expr(fs, cs, f)], _ARGS)
    total = sum(static(*p, 0.0, 0.0, 0.0, 0.0)[0] + static(*(-p), 0.0, 0.0, 0.0, 0.0)[0] for p in pts)
    offset = float(total) / (2 * len(pts))
    base = f.func
    return ex.Opaque(f.label, lambda x, y, z: base(x, y, z) + offset, partials=f.partials)


def noether_integral_fn(fs: FieldSpec, c, f="auto", name: str = "I") -> InvariantFn:
    """First integral of a Noether generator.

    ``f="auto"`` reconstructs the gauge function when it is needed;
    ``f=None`` requires that none is needed.
    """
    from .verify import GaugeObstructionError, gauge_gradient, gauge_reconstruct

    cs = _coeffs(c)
    if isinstance(f, str):
        if f != "auto":
            f = ex.parse(f)
        else:
            G = gauge_gradient(fs, cs[1:9])
            if all(g.is_zero() for g in G):
                f = ex.ZERO
            else:
                try:
                    f = gauge_reconstruct(fs, cs[1:9]).f
                except GaugeObstructionError as exc:
                    raise MissingGaugeError(str(exc)) from None
                f = _centre_gauge(fs, cs, f)
    elif f is None:
        G = gauge_gradient(fs, cs[1:9])
        pts = fs.sample_points(8)
        fn = ex.compile_exprs(G, ex.VARIABLES, vectorized=True)
        vals = np.array(np.broadcast_arrays(*fn(pts[:, 0], pts[:, 1], pts[:, 2]), np.empty(len(pts)))[:-1])
        if float(np.max(np.abs(vals))) > 1e-10:
            raise MissingGaugeError("this generator needs a gauge function f")
    noe = Fraction(cs[8]) == 2 * Fraction(cs[7]) if all(isinstance(v, (int, Fraction)) for v in cs[7:9]) \
        else abs(float(cs[8]) - 2 * float(cs[7])) < 1e-12
    return InvariantFn(name, noether_expr(fs, cs, f), is_noether=noe)


def noether_integral(fs: FieldSpec, c, f, s: PhaseState) -> float:
    """Value of the Noether integral at a state (``f`` may be None or "auto")."""
    return noether_integral_fn(fs, c, f)(s)


noetherIntegral = noether_integral


def poisson_bracket(I1: InvariantFn, I2: InvariantFn, fs: FieldSpec, s) -> float:
    """{I1, I2} = dI1/dx . dI2/dv - dI1/dv . dI2/dx + B . (dI1/dv x dI2/dv)."""
    if not isinstance(s, PhaseState):
        s = PhaseState(*s)
    g1 = I1.gradient(s.t, s.x, s.v)
    g2 = I2.gradient(s.t, s.x, s.v)
    B, _ = regular_field_at(fs, s.x)
    return float(np.dot(g1[:3], g2[3:]) - np.dot(g1[3:], g2[:3]) + np.dot(B, np.cross(g1[3:], g2[3:])))


poissonBracket = poisson_bracket


def sample_states(fs: FieldSpec, n: int = 20, seed: int = 0, speed: float = 1.0) -> list[PhaseState]:
    rng = np.random.default_rng(seed)
    pts = fs.sample_points(n, seed=seed + 7)
    return [PhaseState(0.0, p, rng.normal(size=3) * speed) for p in pts]


@dataclass
class InvolutionReport:
    names: list
    brackets: np.ndarray
    drift: list
    rank: int
    n_states: int
    t_end: float | None

    def to_json(self) -> dict:
        return {
            "invariants": list(self.names),
            "brackets": [[float(v) for v in row] for row in self.brackets],
            "drift": [None if d is None else float(d) for d in self.drift],
            "jacobianRank": int(self.rank),
            "states": self.n_states,
            "tEnd": self.t_end,
        }


def involution_report(
    fs: FieldSpec,
    invariants: Sequence[InvariantFn],
    n_states: int = 20,
    seed: int = 0,
    s0: PhaseState | None = None,
    t_end: float | None = 20.0,
    tol: float = 1e-10,
    rank_tol: float = 1e-6,
) -> InvolutionReport:
    """Pairwise brackets, drift along one trajectory and functional independence."""
    states = sample_states(fs, n_states, seed)
    m = len(invariants)
    br = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            val = max(abs(poisson_bracket(invariants[i], invariants[j], fs, s)) for s in states)
            br[i, j] = br[j, i] = val
    ranks = []
    for s in states:
        J = np.array([inv.gradient(s.t, s.x, s.v) for inv in invariants])
        sv = np.linalg.svd(J, compute_uv=False)
        ranks.append(int(np.sum(sv > rank_tol * max(sv[0], 1e-300))))
    drift: list = [None] * m
    if t_end is not None:
        start = s0 or states[0]
        traj = integrate(fs, start, start.t + t_end, atol=tol, rtol=tol)
        drift = [float(np.max(np.abs(inv.values(traj) - inv.values(traj)[0]))) for inv in invariants]
    return InvolutionReport([inv.name for inv in invariants], br, drift, min(ranks), n_states, t_end)


involutionReport = involution_report


def trajectory_csv(traj: Trajectory, invariants: Iterable[InvariantFn] = (), fmt: str = ".17g") -> str:
    invs = list(invariants)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *PHASE, *(inv.name for inv in invs)])
    cols = [inv.values(traj) for inv in invs]
    for i, (t, y) in enumerate(zip(traj.t, traj.y)):
        w.writerow([format(t, fmt), *(format(v, fmt) for v in y), *(format(c[i], fmt) for c in cols)])
    return buf.getvalue()


__all__ = [
    "DomainExitError",
    "InvariantFn",
    "InvolutionReport",
    "MissingGaugeError",
    "PhaseState",
    "SingularPointError",
    "StepSizeUnderflow",
    "Trajectory",
    "hamiltonian",
    "hamiltonian_fn",
    "integrate",
    "involution_report",
    "involutionReport",
    "lorentz_rhs",
    "lorentzRHS",
    "noether_expr",
    "noether_integral",
    "noether_integral_fn",
    "noetherIntegral",
    "poisson_bracket",
    "poissonBracket",
    "regular_field_at",
    "sample_states",
    "trajectory_csv",
]
