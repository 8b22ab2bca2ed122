"""Small symbolic expression engine over x, y, z and named parameters.

Expressions are immutable trees. Integer literals and integer ratios stay
exact (:class:`fractions.Fraction`) until evaluation; decimal literals are
floats. Differentiation is exact; simplification is deliberately shallow
(constant folding, 0/1 identities, ``a/a`` and ``a*a^-1`` cancellation).
Equality between different-looking expressions is decided numerically by
the callers, never by canonical forms.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

Number = Union[int, float, Fraction]

VARIABLES = ("x", "y", "z")
UNARY_FUNCS = ("sin", "cos", "exp", "ln", "sqrt")
FUNCTIONS = UNARY_FUNCS + ("atan2",)


class ExprError(Exception):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError, ValueError):
    """Raised by :func:`parse`; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} (at byte {offset})")


class UnboundSymbolError(ExprError, KeyError):
    def __str__(self):
        return f"unbound symbol(s): {', '.join(self.args[0])}"


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the real domain (ln of nonpositive, 0 division, ...)."""


# ---------------------------------------------------------------------------
# nodes


class Expr:
    __slots__ = ("_hash", "_compiled")
    prec = 100

    def _key(self) -> tuple:
        raise NotImplementedError

    def _init_hash(self):
        self._hash = hash(self._key())
        self._compiled = {}

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr) or self._hash != other._hash:
            return False
        return type(self) is type(other) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __setattr__(self, name, value):
        if name in ("_hash", "_compiled") or not hasattr(self, "_hash"):
            object.__setattr__(self, name, value)
        else:
            raise AttributeError("Expr is immutable")

    # arithmetic builds simplified trees
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"Expr({to_string(self)!r})"

    @property
    def children(self) -> tuple:
        return ()

    def free_symbols(self) -> frozenset:
        return frozenset().union(*(c.free_symbols() for c in self.children))

    def diff(self, name: str) -> "Expr":
        return differentiate(self, name)

    def subs(self, mapping: Mapping[str, object]) -> "Expr":
        return substitute(self, mapping)

    def evaluate(self, bindings: Mapping[str, float] | None = None) -> float:
        return evaluate(self, bindings or {})

    def is_zero(self) -> bool:
        return isinstance(self, Const) and self.value == 0


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Number):
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            value = Fraction(value)
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError("non-finite constant")
        elif not isinstance(value, Fraction):
            value = float(value)
        self.value = value
        self._init_hash()

    @property
    def prec(self):
        if isinstance(self.value, Fraction):
            if self.value < 0:
                return 3
            return 2 if self.value.denominator != 1 else 100
        return 3 if self.value < 0 else 100

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def _key(self):
        return ("c", type(self.value).__name__, self.value)

    def free_symbols(self):
        return frozenset()


class Symbol(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._init_hash()

    def _key(self):
        return ("s", self.name)

    def free_symbols(self):
        return frozenset((self.name,))


class Variable(Symbol):
    """One of the Cartesian coordinates x, y, z."""

    __slots__ = ()


class Parameter(Symbol):
    """Any other named symbol (k1, lam, F1, t, vx, ...)."""

    __slots__ = ()


class Unary(Expr):
    __slots__ = ("op", "arg")

    def __init__(self, op: str, arg: Expr):
        if op != "neg" and op not in UNARY_FUNCS:
            raise ValueError(f"unknown unary op {op!r}")
        self.op = op
        self.arg = arg
        self._init_hash()

    @property
    def prec(self):
        return 3 if self.op == "neg" else 100

    @property
    def children(self):
        return (self.arg,)

    def _key(self):
        return ("u", self.op, self.arg._hash, self.arg)


class Binary(Expr):
    __slots__ = ("op", "left", "right")
    _PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 4, "atan2": 100}

    def __init__(self, op: str, left: Expr, right: Expr):
        if op not in self._PREC:
            raise ValueError(f"unknown binary op {op!r}")
        self.op = op
        self.left = left
        self.right = right
        self._init_hash()

    @property
    def prec(self):
        return self._PREC[self.op]

    @property
    def children(self):
        return (self.left, self.right)

    def _key(self):
        return ("b", self.op, self.left._hash, self.right._hash, self.left, self.right)


class Opaque(Expr):
    """A numerically backed function of three argument expressions.

    ``func(x, y, z)`` gives the value; ``partials`` (optional) are Exprs in
    x, y, z for the three first derivatives of ``func``. Without partials,
    derivatives are taken by central differences.
    """

    __slots__ = ("label", "func", "args", "partials", "vfunc")

    def __init__(
        self,
        label: str,
        func: Callable[[float, float, float], float],
        args: Sequence[Expr] | None = None,
        partials: Sequence[Expr] | None = None,
        vfunc: Callable | None = None,
    ):
        self.label = label
        self.func = func
        self.vfunc = vfunc
        self.args = tuple(args) if args is not None else (X, Y, Z)
        self.partials = tuple(partials) if partials is not None else None
        self._init_hash()

    @property
    def children(self):
        return self.args

    def _key(self):
        return ("o", id(self))

    def __eq__(self, other):
        return self is other

    __hash__ = Expr.__hash__


X = Variable("x")
Y = Variable("y")
Z = Variable("z")
ZERO = Const(0)
ONE = Const(1)


def symbol(name: str) -> Symbol:
    if name == "x":
        return X
    if name == "y":
        return Y
    if name == "z":
        return Z
    return Parameter(name)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, (int, float, Fraction)):
        return Const(value)
    if isinstance(value, np.floating):
        return Const(float(value))
    if isinstance(value, np.integer):
        return Const(int(value))
    raise TypeError(f"cannot make an expression from {type(value).__name__}")


# ---------------------------------------------------------------------------
# simplifying constructors


def _c(e: Expr):
    return e.value if isinstance(e, Const) else None


def _fold(a, b, op):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return op(a, b)
    return op(float(a), float(b))


def add(a: Expr, b: Expr) -> Expr:
    ca, cb = _c(a), _c(b)
    if ca is not None and cb is not None:
        return Const(_fold(ca, cb, lambda p, q: p + q))
    if ca == 0:
        return b
    if cb == 0:
        return a
    if isinstance(b, Unary) and b.op == "neg":
        return sub(a, b.arg)
    if cb is not None and cb < 0:
        return sub(a, Const(-cb))
    return Binary("add", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    ca, cb = _c(a), _c(b)
    if ca is not None and cb is not None:
        return Const(_fold(ca, cb, lambda p, q: p - q))
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    if a == b:
        return ZERO
    if isinstance(b, Unary) and b.op == "neg":
        return add(a, b.arg)
    return Binary("sub", a, b)


def _is_inverse_of(p: Expr, a: Expr) -> bool:
    return isinstance(p, Binary) and p.op == "pow" and p.left == a and _c(p.right) == -1


def mul(a: Expr, b: Expr) -> Expr:
    ca, cb = _c(a), _c(b)
    if ca is not None and cb is not None:
        return Const(_fold(ca, cb, lambda p, q: p * q))
    if ca == 0 or cb == 0:
        return ZERO
    if ca == 1:
        return b
    if cb == 1:
        return a
    if ca == -1:
        return neg(b)
    if cb == -1:
        return neg(a)
    if cb is not None:
        a, b, ca, cb = b, a, cb, ca
    if ca is not None and isinstance(b, Binary) and b.op == "mul" and _c(b.left) is not None:
        return mul(Const(_fold(ca, _c(b.left), lambda p, q: p * q)), b.right)
    if _is_inverse_of(b, a) or _is_inverse_of(a, b):
        return ONE
    if isinstance(a, Unary) and a.op == "neg":
        return neg(mul(a.arg, b))
    if isinstance(b, Unary) and b.op == "neg":
        return neg(mul(a, b.arg))
    return Binary("mul", a, b)


def div(a: Expr, b: Expr) -> Expr:
    ca, cb = _c(a), _c(b)
    if ca is not None and cb is not None and cb != 0:
        return Const(_fold(ca, cb, lambda p, q: p / q))
    if ca == 0:
        return ZERO
    if cb == 1:
        return a
    if cb == -1:
        return neg(a)
    if a == b:
        return ONE
    if isinstance(a, Unary) and a.op == "neg":
        return neg(div(a.arg, b))
    return Binary("div", a, b)


def _is_integral(v) -> bool:
    if isinstance(v, Fraction):
        return v.denominator == 1
    return float(v).is_integer()


def power(a: Expr, b: Expr) -> Expr:
    ca, cb = _c(a), _c(b)
    if cb == 0:
        return ONE
    if cb == 1:
        return a
    if ca is not None and cb is not None:
        if isinstance(ca, Fraction) and isinstance(cb, Fraction) and cb.denominator == 1:
            if ca != 0 or cb > 0:
                return Const(ca ** int(cb))
        elif ca > 0 or (ca != 0 and _is_integral(cb)):
            return Const(float(ca) ** float(cb))
    if ca == 1:
        return ONE
    if (
        cb is not None
        and _is_integral(cb)
        and isinstance(a, Binary)
        and a.op == "pow"
        and _c(a.right) is not None
    ):
        return power(a.left, Const(_fold(_c(a.right), cb, lambda p, q: p * q)))
    return Binary("pow", a, b)


def neg(a: Expr) -> Expr:
    ca = _c(a)
    if ca is not None:
        return Const(-ca)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    if isinstance(a, Binary) and a.op == "sub":
        return sub(a.right, a.left)
    return Unary("neg", a)


_EXACT_UNARY = {
    "sin": {Fraction(0): Fraction(0)},
    "cos": {Fraction(0): Fraction(1)},
    "exp": {Fraction(0): Fraction(1)},
    "ln": {Fraction(1): Fraction(0)},
}


def func(name: str, *args: Expr) -> Expr:
    args = tuple(as_expr(a) for a in args)
    if name == "atan2":
        if len(args) != 2:
            raise ValueError("atan2 takes two arguments")
        return Binary("atan2", *args)
    if len(args) != 1:
        raise ValueError(f"{name} takes one argument")
    (a,) = args
    ca = _c(a)
    if ca is not None and isinstance(ca, Fraction):
        table = _EXACT_UNARY.get(name, {})
        if ca in table:
            return Const(table[ca])
        if name == "sqrt" and ca >= 0:
            n, d = math.isqrt(ca.numerator), math.isqrt(ca.denominator)
            if n * n == ca.numerator and d * d == ca.denominator:
                return Const(Fraction(n, d))
    return Unary(name, a)


def sin(a):
    return func("sin", a)


def cos(a):
    return func("cos", a)


def exp(a):
    return func("exp", a)


def ln(a):
    return func("ln", a)


def sqrt(a):
    return func("sqrt", a)


def atan2(a, b):
    return func("atan2", a, b)


def rebuild(e: Expr, children: Sequence[Expr]) -> Expr:
    """Rebuild ``e`` with new children through the simplifying constructors."""
    if isinstance(e, Unary):
        return neg(children[0]) if e.op == "neg" else func(e.op, children[0])
    if isinstance(e, Binary):
        a, b = children
        if e.op == "atan2":
            return Binary("atan2", a, b)
        return {"add": add, "sub": sub, "mul": mul, "div": div, "pow": power}[e.op](a, b)
    if isinstance(e, Opaque):
        return Opaque(e.label, e.func, children, e.partials, e.vfunc)
    return e


def _map_tree(e: Expr, leaf: Callable[[Expr], Expr | None], memo: dict) -> Expr:
    hit = memo.get(id(e))
    if hit is not None:
        return hit[1]
    out = leaf(e)
    if out is None:
        kids = e.children
        if not kids:
            out = e
        else:
            new = [_map_tree(c, leaf, memo) for c in kids]
            if all(n is c for n, c in zip(new, kids)) and not isinstance(e, (Unary, Binary)):
                out = e
            else:
                out = rebuild(e, new)
    memo[id(e)] = (e, out)
    return out


def simplify(e: Expr) -> Expr:
    """Constant folding and 0/1 identities, applied bottom-up."""
    return _map_tree(e, lambda n: None, {})


def substitute(e: Expr, mapping: Mapping[str, object]) -> Expr:
    """Replace symbols by expressions or numbers; the result is simplified."""
    repl = {k: as_expr(v) for k, v in mapping.items()}

    def leaf(n):
        if isinstance(n, Symbol):
            return repl.get(n.name, n)
        return None

    return _map_tree(e, leaf, {})


# ---------------------------------------------------------------------------
# differentiation


def differentiate(e: Expr, v: str) -> Expr:
    """Exact derivative of ``e`` with respect to the symbol named ``v``."""
    if isinstance(v, Symbol):
        v = v.name
    return _diff(simplify(e), v, {})


def _depends(e: Expr, v: str) -> bool:
    return v in e.free_symbols() or (
        v in VARIABLES and any(isinstance(n, Opaque) for n in _walk(e))
    )


def _walk(e: Expr):
    stack, seen = [e], set()
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        yield n
        stack.extend(n.children)


def _diff(e: Expr, v: str, memo: dict) -> Expr:
    hit = memo.get(id(e))
    if hit is not None:
        return hit[1]
    out = _diff_node(e, v, memo)
    memo[id(e)] = (e, out)
    return out


def _diff_node(e: Expr, v: str, memo: dict) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Symbol):
        return ONE if e.name == v else ZERO
    if isinstance(e, Opaque):
        total = ZERO
        for k, arg in enumerate(e.args):
            da = _diff(arg, v, memo)
            if da.is_zero():
                continue
            total = add(total, mul(_opaque_partial(e, k), da))
        return total
    d = lambda n: _diff(n, v, memo)  # noqa: E731
    if isinstance(e, Unary):
        a = e.arg
        da = d(a)
        if e.op == "neg":
            return neg(da)
        if da.is_zero():
            return ZERO
        if e.op == "sin":
            return mul(cos(a), da)
        if e.op == "cos":
            return neg(mul(sin(a), da))
        if e.op == "exp":
            return mul(e, da)
        if e.op == "ln":
            return div(da, a)
        if e.op == "sqrt":
            return div(da, mul(Const(2), e))
    a, b = e.left, e.right
    if e.op == "add":
        return add(d(a), d(b))
    if e.op == "sub":
        return sub(d(a), d(b))
    if e.op == "mul":
        return add(mul(d(a), b), mul(a, d(b)))
    if e.op == "div":
        da, db = d(a), d(b)
        if db.is_zero():
            return div(da, b)
        return sub(div(da, b), div(mul(a, db), power(b, Const(2))))
    if e.op == "atan2":
        # atan2(a, b) = angle of (b, a)
        da, db = d(a), d(b)
        num = sub(mul(b, da), mul(a, db))
        if num.is_zero():
            return ZERO
        return div(num, add(power(b, Const(2)), power(a, Const(2))))
    if e.op == "pow":
        da, db = d(a), d(b)
        if db.is_zero():
            if da.is_zero():
                return ZERO
            return mul(mul(b, power(a, sub(b, ONE))), da)
        # a^b = exp(b ln a)
        inner = add(mul(db, ln(a)), div(mul(b, da), a))
        return mul(e, inner)
    raise ExprError(f"cannot differentiate {e!r}")


def _opaque_partial(e: Opaque, k: int) -> Expr:
    if e.partials is not None:
        p = e.partials[k]
        if e.args == (X, Y, Z):
            return p
        return substitute(p, dict(zip(VARIABLES, e.args)))
    h = 1e-5
    f, name = e.func, "xyz"[k]

    def partial(*p):
        lo, hi = list(p), list(p)
        lo[k] -= h
        hi[k] += h
        return (f(*hi) - f(*lo)) / (2 * h)

    return Opaque(f"d{name}({e.label})", partial, e.args)


def grad(e: Expr) -> tuple[Expr, Expr, Expr]:
    return tuple(differentiate(e, v) for v in VARIABLES)


def curl(v: Sequence[Expr]) -> tuple[Expr, Expr, Expr]:
    a1, a2, a3 = (as_expr(c) for c in v)
    return (
        sub(differentiate(a3, "y"), differentiate(a2, "z")),
        sub(differentiate(a1, "z"), differentiate(a3, "x")),
        sub(differentiate(a2, "x"), differentiate(a1, "y")),
    )


def div_(v: Sequence[Expr]) -> Expr:
    a1, a2, a3 = (as_expr(c) for c in v)
    return add(add(differentiate(a1, "x"), differentiate(a2, "y")), differentiate(a3, "z"))


divergence = div_


# ---------------------------------------------------------------------------
# printing


def _fmt_const(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def to_string(e: Expr) -> str:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, Opaque):
        if e.args == (X, Y, Z):
            return f"<{e.label}>"
        return f"<{e.label}>({', '.join(to_string(a) for a in e.args)})"
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _wrap(e.arg, e.arg.prec < 3)
        return f"{e.op}({to_string(e.arg)})"
    if e.op == "atan2":
        return f"atan2({to_string(e.left)}, {to_string(e.right)})"
    p = e.prec
    if e.op == "pow":
        left = _wrap(e.left, e.left.prec <= p)
        right = _wrap(e.right, e.right.prec < p)
        return f"{left}^{right}"
    left = _wrap(e.left, e.left.prec < p)
    right = _wrap(e.right, e.right.prec <= p)
    sym = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[e.op]
    return left + sym + right


def _wrap(e: Expr, paren: bool) -> str:
    s = to_string(e)
    return f"({s})" if paren else s


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[^\W\d]\w*)|(?P<op>[-+*/^(),]))",
    re.UNICODE,
)


def _tokenize(text: str):
    pos, out = 0, []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", _byte(text, bad), text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _byte(text: str, idx: int) -> int:
    return len(text[:idx].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, _byte(self.text, tok[2]), self.text)

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {op!r}, found {what}")
        return self.take()

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            e = Binary("add" if op == "+" else "sub", e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            e = Binary("mul" if op == "*" else "div", e, self.factor())
        return e

    def factor(self):
        # unary minus binds looser than ^ so that -x^2 = -(x^2)
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Unary("neg", self.factor())
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Binary("pow", base, self.factor())
        return base

    def base(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "num":
            if re.fullmatch(r"\d+", val):
                return Const(Fraction(int(val)))
            return Const(float(val))
        if kind == "id":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    self.error(f"unknown function {val!r}", tok)
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                want = 2 if val == "atan2" else 1
                if len(args) != want:
                    self.error(f"{val} takes {want} argument(s), got {len(args)}", tok)
                if val == "atan2":
                    return Binary("atan2", args[0], args[1])
                return Unary(val, args[0])
            return symbol(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {val!r}", tok)


def parse(text: str) -> Expr:
    """Parse an expression.

    Grammar: ``expr := term (("+"|"-") term)*``, ``term := factor
    (("*"|"/") factor)*``, ``factor := "-" factor | base ("^" factor)?``,
    ``base := number | ident | ident "(" args ")" | "(" expr ")"``.
    Functions: sin, cos, exp, ln, sqrt, atan2. Identifiers other than
    x, y, z are parameters. The tree is returned unsimplified.
    """
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation


def _pow_scalar(a, b):
    if a < 0 and not float(b).is_integer():
        raise DomainError(f"non-integer power {b} of negative base {a}")
    return a ** b


def _np_atan2(a, b):
    return np.arctan2(a, b)


_SCALAR_NS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "atan2": math.atan2,
    "_powf": _pow_scalar,
}
_VECTOR_NS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "atan2": _np_atan2,
    "_powf": np.power,
}
_PYOPS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _codegen(exprs: Sequence[Expr], names: Sequence[str], vectorized: bool):
    counts: dict = {}
    order: list = []

    def visit(n):
        if n in counts:
            counts[n] += 1
            return
        counts[n] = 1
        for c in n.children:
            visit(c)
        order.append(n)

    for e in exprs:
        visit(e)

    ns = dict(_VECTOR_NS if vectorized else _SCALAR_NS)
    argnames = [f"a{i}" for i in range(len(names))]
    symmap = dict(zip(names, argnames))
    lines, ref = [], {}
    opaque_i = 0

    for n in order:
        if isinstance(n, Const):
            code = repr(float(n.value))
            if float(n.value) < 0:
                code = f"({code})"
        elif isinstance(n, Symbol):
            if n.name not in symmap:
                raise UnboundSymbolError([n.name])
            code = symmap[n.name]
        elif isinstance(n, Opaque):
            fname = f"_o{opaque_i}"
            opaque_i += 1
            if vectorized:
                ns[fname] = n.vfunc or np.vectorize(n.func, otypes=[float])
            else:
                ns[fname] = n.func
            code = f"{fname}({', '.join(ref[a] for a in n.args)})"
        elif isinstance(n, Unary):
            a = ref[n.arg]
            code = f"(-{a})" if n.op == "neg" else f"{n.op}({a})"
        else:
            a, b = ref[n.left], ref[n.right]
            if n.op in _PYOPS:
                code = f"({a} {_PYOPS[n.op]} {b})"
            elif n.op == "atan2":
                code = f"atan2({a}, {b})"
            else:
                cb = _c(n.right)
                if cb is not None and _is_integral(cb):
                    code = f"({a} ** {float(cb)!r})"
                else:
                    code = f"_powf({a}, {b})"
        if counts[n] > 1 and not isinstance(n, (Const, Symbol)):
            tmp = f"t{len(lines)}"
            lines.append(f"    {tmp} = {code}")
            ref[n] = tmp
        else:
            ref[n] = code

    outs = ", ".join(ref[e] for e in exprs)
    src = f"def _f({', '.join(argnames)}):\n" + "\n".join(lines)
    src += f"\n    return ({outs},)\n"
    exec(compile(src, "<emsym-expr>", "exec"), ns)
    return ns["_f"]


def compile_exprs(
    exprs: Sequence[Expr], names: Sequence[str], vectorized: bool = False
) -> Callable[..., tuple]:
    """Compile expressions into one function of positional arguments ``names``.

    The function returns a tuple of values and raises :class:`DomainError`
    when evaluation leaves the real domain. With ``vectorized`` the
    arguments may be numpy arrays.
    """
    exprs = [as_expr(e) for e in exprs]
    names = tuple(names)
    key = (names, vectorized, len(exprs))
    holder = exprs[0] if len(exprs) == 1 else None
    if holder is not None and key in holder._compiled:
        return holder._compiled[key]
    raw = _codegen(exprs, names, vectorized)

    if vectorized:

        def fn(*args):
            with np.errstate(divide="raise", invalid="raise", over="raise", under="ignore"):
                try:
                    return raw(*args)
                except (FloatingPointError, ValueError, ZeroDivisionError, OverflowError) as exc:
                    raise DomainError(str(exc)) from None

    else:

        def fn(*args):
            try:
                out = raw(*args)
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise DomainError(str(exc)) from None
            for v in out:
                if not math.isfinite(v):
                    raise DomainError("non-finite value")
            return out

    if holder is not None:
        holder._compiled[key] = fn
    return fn


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate ``e`` with every free symbol bound; returns a float."""
    e = as_expr(e)
    free = sorted(e.free_symbols())
    missing = [s for s in free if s not in bindings]
    if missing:
        raise UnboundSymbolError(missing)
    fn = compile_exprs([e], free)
    return float(fn(*(float(bindings[s]) for s in free))[0])


def lambdify(e: Expr, names: Iterable[str] = VARIABLES, vectorized: bool = False):
    """Return a scalar function of ``names`` for a single expression."""
    fn = compile_exprs([as_expr(e)], tuple(names), vectorized)
    return lambda *args: fn(*args)[0]


__all__ = [
    "Expr",
    "Const",
    "Symbol",
    "Variable",
    "Parameter",
    "Unary",
    "Binary",
    "Opaque",
    "X",
    "Y",
    "Z",
    "ZERO",
    "ONE",
    "parse",
    "to_string",
    "simplify",
    "substitute",
    "differentiate",
    "evaluate",
    "compile_exprs",
    "lambdify",
    "grad",
    "curl",
    "divergence",
    "symbol",
    "as_expr",
    "ExprError",
    "ExprSyntaxError",
    "UnboundSymbolError",
    "DomainError",
]
