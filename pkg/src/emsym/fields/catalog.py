"""Catalog of representative potentials for the symmetry and Noether classes.

Each row stores its potentials as expression text over x, y, z, the
cylindrical/spherical macros ``rho``, ``phi``, ``r``, named constants and
the arbitrary profile functions ``F1``, ``F2``, ``F3``, ``G``. Profiles are
expressions in the row's invariants (``u`` or ``u1``, ``u2``) and default to
smooth test choices so that every row can be instantiated without input.

Table keys: ``sym2``, ``sym3``, ``sym4`` (point symmetry classes with one,
two and three generators besides time translation) and ``noe2``, ``noe3``,
``noe4`` (their Noether counterparts).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Callable, Mapping

from .. import expr as ex
from ..liealg import SymGenerator
from .spec import MACROS, DomainHint, FieldSpec

TABLE_KEYS = ("sym2", "sym3", "sym4", "noe2", "noe3", "noe4")
# numbering of the published tables, used in human-facing labels
TABLE_NUMBERS = dict(zip(TABLE_KEYS, range(5, 11)))

DEFAULT_PARAMS = {
    "k": F(2), "k1": F(2), "k2": F(3), "k3": F(1),
    "lam": F(1, 2), "lam1": F(1, 2), "lam2": F(1, 3), "lam3": F(1, 4),
    "lam4": F(1, 5), "lam5": F(1, 6), "lam6": F(1, 7),
    "a1": F(1), "a2": F(1, 3), "a3": F(1, 2), "a4": F(1, 4),
}

PROFILES2 = {
    "F1": "1/2 + u1/3 + sin(u2)/5",
    "F2": "1 - u1^2/4 + cos(u2)/3",
    "F3": "u1*u2/2 + 1/3",
    "G": "u1/2 + u2^2/5",
}

PROFILES1 = {
    "F1": "1/2 + u/3",
    "F2": "1/(1 + u^2)",
    "F3": "sin(u)",
    "G": "u^2/2 + u/5",
}

PROFILE_NAMES = ("F1", "F2", "F3", "G")


class CatalogError(ValueError):
    """Raised for unknown rows, violated side conditions or bad profiles."""


def _dom(spec: str) -> DomainHint:
    flags = set(filter(None, (s.strip() for s in spec.split(","))))
    pos = tuple(sorted(f[0] for f in flags if f.endswith("+")))
    return DomainHint(axis="axis" in flags or "cut" in flags, origin="origin" in flags,
                      phi_cut="cut" in flags, positive=pos)


@dataclass(frozen=True)
class CatalogRow:
    table: str
    row: int
    A: tuple
    Phi: str
    generators: tuple
    invariants: dict = field(default_factory=dict)
    domain: str = ""
    condition: Callable[[Mapping], bool] | None = None
    condition_text: str = ""
    defaults: dict = field(default_factory=dict)
    variants: dict = field(default_factory=dict)
    default_variant: str = "printed"
    note: str = ""

    @property
    def key(self) -> str:
        return f"{self.table}:{self.row}"

    @property
    def title(self) -> str:
        return f"Table {TABLE_NUMBERS[self.table]} row {self.row}"

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def noether(self) -> bool:
        return self.table.startswith("noe")

    def params(self, overrides: Mapping | None = None) -> dict:
        p = dict(DEFAULT_PARAMS)
        p.update(self.defaults)
        for k, v in (overrides or {}).items():
            p[k] = v if isinstance(v, (F, float)) else F(v)
        return p

    def admissible(self, params: Mapping) -> bool:
        return self.condition is None or bool(self.condition(params))

    def potentials(self, variant: str | None = None) -> tuple:
        variant = variant or self.default_variant
        if variant == "printed":
            return self.A, self.Phi
        if variant not in self.variants:
            raise CatalogError(f"{self.key} has no variant {variant!r}")
        return self.variants[variant]

    def claimed(self, params: Mapping | None = None) -> list[SymGenerator]:
        """Claimed generators (besides time translation) at the parameters."""
        p = self.params(params)
        out = []
        for text in self.generators:
            e = ex.substitute(ex.parse(text), p)
            c = []
            for i in range(1, 9):
                val = ex.substitute(e, {f"v{j}": F(int(i == j)) for j in range(1, 9)})
                if not isinstance(val, ex.Const):
                    raise CatalogError(f"generator {text!r} is not numeric at {p}")
                c.append(val.value)
            out.append(SymGenerator(F(0), tuple(c)))
        return out


def _rot(pref: str, f1="F1", f2="F2", f3="F3", a3pref: str | None = None) -> tuple:
    """Rotationally covariant pattern pref*(x F1 - y F2, y F1 + x F2) and A3."""
    p = f"({pref})*" if pref else ""
    q = f"({a3pref})*" if a3pref else (p if a3pref is None else "")
    return (f"{p}(x*{f1} - y*{f2})", f"{p}(y*{f1} + x*{f2})", f"{q}{f3}")


def _vec(pref: str) -> tuple:
    p = f"({pref})*" if pref else ""
    return (f"{p}F1", f"{p}F2", f"{p}F3")


_ROWS: list[CatalogRow] = []


def _add(*rows: CatalogRow):
    _ROWS.extend(rows)


# --- one extra generator --------------------------------------------------
_add(
    CatalogRow("sym2", 1, _rot("z^(-k2/k1)", a3pref="z^(1 - k2/k1)"), "z^(2*(1 - k2/k1))*G",
               ("v4 + k1*v7 + k2*v8",), {"u1": "rho/z", "u2": "ln(z) - k1*phi"}, "cut,z+",
               lambda p: p["k1"] != 0 and p["k2"] != p["k1"], "k2 != k1 != 0"),
    CatalogRow("sym2", 2, _rot("1/z", a3pref=""), "lam*ln(z) + G",
               ("v4 + k*v7 + k*v8",), {"u1": "rho/z", "u2": "ln(z) - k*phi"}, "cut,z+",
               lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("sym2", 3, _rot("exp(-k2*phi)"), "exp(-2*k2*phi)*G",
               ("v4 + k1*v3 + k2*v8",), {"u1": "rho", "u2": "z - k1*phi"}, "cut",
               lambda p: p["k2"] != 0, "k2 != 0"),
    CatalogRow("sym2", 4, _rot(""), "lam*phi + G",
               ("v4 + k*v3",), {"u1": "rho", "u2": "z - k*phi"}, "cut"),
    CatalogRow("sym2", 5, _vec("x^(1 - k)"), "x^(2*(1 - k))*G",
               ("v7 + k*v8",), {"u1": "y/x", "u2": "z/y"}, "x+,y+",
               lambda p: p["k"] != 1, "k != 1"),
    CatalogRow("sym2", 6, _vec(""), "lam*ln(z) + G",
               ("v7 + v8",), {"u1": "y/x", "u2": "z/y"}, "x+,y+,z+"),
    CatalogRow("sym2", 7, _vec("exp(-k*z)"), "exp(-2*k*z)*G",
               ("v3 + k*v8",), {"u1": "x", "u2": "y"}, "",
               lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("sym2", 8, _vec(""), "lam*z + G", ("v3",), {"u1": "x", "u2": "y"}, ""),
)

# --- two extra generators -------------------------------------------------
_XZ = ("x*F1 - y*F2 - lam3*y*z/rho^2", "y*F1 + x*F2 + lam3*x*z/rho^2", "F3")
_YZ = ("x*F1 - y*F2 - lam3*y*z/rho^2", "y*F1 + x*F2 + lam3*y*z/rho^2", "F3")
_ROW8 = ("(x*F1 - y*(F2 + lam*ln(rho)))/rho^2", "(y*F1 + x*(F2 + lam*ln(rho)))/rho^2", "F3/z")

_add(
    CatalogRow("sym3", 1, ("exp(-k2*phi)*(x*F1 - y*F2)", "exp(-k2*phi)*(y*F1 + x*F2)",
                           "exp((k1 - k2)*phi)*F3"), "exp(2*(k1 - k2)*phi)*G",
               ("v3", "v4 + k1*v7 + k2*v8"), {"u": "ln(rho) - k1*phi"}, "cut",
               lambda p: p["k1"] != 0 and p["k2"] != p["k1"] and 2 * p["k2"] != p["k1"],
               "2k2, k2 != k1 != 0"),
    CatalogRow("sym3", 2, ("exp(-k*phi)*(x*F1 - y*F2)", "exp(-k*phi)*(y*F1 + x*F2)",
                           "exp(k*phi)*F3"), "lam*z + exp(2*k*phi)*G",
               ("v3", "v4 + 2*k*v7 + k*v8"), {"u": "ln(rho) - 2*k*phi"}, "cut",
               lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("sym3", 3, ("(x*F1 - y*(F2 + lam1*z/rho))/rho", "(y*F1 + x*(F2 + lam1*z/rho))/rho",
                           "F3"), "lam2*ln(rho) + G",
               ("v3", "v4 + k*v7 + k*v8"), {"u": "ln(rho) - k*phi"}, "cut",
               lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("sym3", 4, _rot("exp(-(k1*z + k2*phi))"), "exp(-2*(k1*z + k2*phi))*G",
               ("v3 + k1*v8", "v4 + k2*v8"), {"u": "rho"}, "cut",
               lambda p: p["k1"] != 0 or p["k2"] != 0, "k1 != 0 or k2 != 0"),
    CatalogRow("sym3", 5, _YZ, "lam1*z + lam2*phi + G", ("v3", "v4"), {"u": "rho"}, "cut",
               variants={"corrected": (_XZ, "lam1*z + lam2*phi + G")},
               note="A2 extra term printed with y*z; the Noether counterpart prints x*z"),
    CatalogRow("sym3", 6, ("z^(-k2)*exp(-k1*phi)*(x*F1 - y*F2)", "z^(-k2)*exp(-k1*phi)*(y*F1 + x*F2)",
                           "z^(1 - k2)*exp(-k1*phi)*F3"), "z^(2*(1 - k2))*exp(-2*k1*phi)*G",
               ("v4 + k1*v8", "v7 + k2*v8"), {"u": "rho/z"}, "cut,z+",
               lambda p: p["k1"] != 0 or p["k2"] not in (1, 2), "k1 != 0 or k2 != 1, 2",
               defaults={"k1": F(1, 2), "k2": F(3)}),
    CatalogRow("sym3", 7, _rot("1/z", a3pref=""), "lam1*phi + lam2*ln(z) + G",
               ("v4", "v7 + v8"), {"u": "rho/z"}, "cut,z+"),
    CatalogRow("sym3", 8, _ROW8, "G/z^2", ("v4", "v7 + 2*v8"), {"u": "rho/z"}, "axis,z+"),
    CatalogRow("sym3", 9, _vec("x^(1 - k)"), "x^(2*(1 - k))*G", ("v3", "v7 + k*v8"),
               {"u": "y/x"}, "x+", lambda p: p["k"] not in (1, F(1, 2)), "k != 1, 1/2",
               defaults={"k": F(3)}),
    CatalogRow("sym3", 10, ("F1", "F2", "lam1*ln(y) + F3"), "lam2*ln(y) + G",
               ("v3", "v7 + v8"), {"u": "y/x"}, "x+,y+"),
    CatalogRow("sym3", 11, _vec("sqrt(x)"), "lam*z + x*G", ("v3", "2*v7 + v8"), {"u": "y/x"}, "x+"),
    CatalogRow("sym3", 12, _vec("exp(-(k1*y + k2*z))"), "exp(-2*(k1*y + k2*z))*G",
               ("v2 + k1*v8", "v3 + k2*v8"), {"u": "x"}, "",
               lambda p: p["k2"] != 0, "k2 != 0"),
    CatalogRow("sym3", 13, ("0", "F2", "lam3*y + F3"), "lam1*y + lam2*z + G",
               ("v2", "v3"), {"u": "x"}, ""),
)

# --- three extra generators -----------------------------------------------
_MONO = ("lam*y*z/(r*rho^2)", "-lam*x*z/(r*rho^2)", "0")


def _helix(amp: str, arg: str, extra: str = "") -> tuple:
    return (f"a1*{amp}cos({arg} + a2){extra}", f"a1*{amp}sin({arg} + a2)", "0")


_add(
    CatalogRow("sym4", 1, ("exp(-k1*phi)*rho^(-k2)*(a1*x - a2*y)", "exp(-k1*phi)*rho^(-k2)*(a1*y + a2*x)",
                           "a3*exp(-k1*phi)*rho^(1 - k2)"), "a4*exp(-2*k1*phi)*rho^(2*(1 - k2))",
               ("v3", "v4 + k1*v8", "v7 + k2*v8"), {}, "cut",
               lambda p: p["k1"] != 0 or p["k2"] not in (F(1, 2), 1, 2), "k1 != 0 or k2 != 1/2, 1, 2",
               defaults={"k1": F(1, 2), "k2": F(3)}),
    CatalogRow("sym4", 2, ("(a1*x - a2*y)/sqrt(rho)", "(a1*y + a2*x)/sqrt(rho)", "a3*sqrt(rho)"),
               "lam*z + a4*rho", ("v3", "v4", "2*v7 + v8"), {}, "axis"),
    CatalogRow("sym4", 3, ("(a1*x - y*(a2 + lam1*z/rho))/rho", "(a1*y + x*(a2 + lam1*z/rho))/rho",
                           "lam2*ln(rho)"), "lam3*phi + lam4*ln(rho)",
               ("v3", "v4", "v7 + v8"), {}, "cut"),
    CatalogRow("sym4", 4, ("(a1*x - y*(a2 + lam*ln(rho)))/rho^2", "(a1*y + x*(a2 + lam*ln(rho)))/rho^2",
                           "a3/rho"), "a4/rho^2", ("v3", "v4", "v7 + 2*v8"), {}, "axis"),
    CatalogRow("sym4", 5, _MONO, "G", ("v4", "v5", "v6"), {"u": "r"}, "axis,origin"),
    CatalogRow("sym4", 6, _helix("z^(1 - k2/k1)*", "ln(z/k1)"), "a4*z^(2*(1 - k2/k1))",
               ("v1", "v2", "v4 + k1*v7 + k2*v8"), {}, "z+",
               lambda p: p["k1"] * p["k2"] != 0 and p["k1"] != p["k2"], "k1 k2 != 0, k1 != k2",
               variants={"corrected": (_helix("z^(1 - k2/k1)*", "ln(z)/k1"), "a4*z^(2*(1 - k2/k1))")},
               note="helix phase printed as ln(z/k1); covariance requires ln(z)/k1"),
    CatalogRow("sym4", 7, _helix("z*", "ln(z/k)", " + lam*y"), "a4*z^2",
               ("v1", "v2", "v4 + k*v7"), {}, "z+", lambda p: p["k"] != 0, "k != 0",
               variants={"corrected": (_helix("z*", "ln(z)/k", " + lam*y"), "a4*z^2")},
               note="helix phase printed as ln(z/k); covariance requires ln(z)/k"),
    CatalogRow("sym4", 8, _helix("", "ln(z/k)"), "lam*ln(z)",
               ("v1", "v2", "v4 + k*v7 + k*v8"), {}, "z+", lambda p: p["k"] != 0, "k != 0",
               variants={"corrected": (_helix("", "ln(z)/k"), "lam*ln(z)")},
               note="helix phase printed as ln(z/k); covariance requires ln(z)/k"),
    CatalogRow("sym4", 9, _helix("exp(-k2/k1*z)*", "z/k1"), "a4*exp(-2*k2/k1*z)",
               ("v1", "v2", "v4 + k1*v3 + k2*v8"), {}, "",
               lambda p: p["k1"] * p["k2"] != 0, "k1 k2 != 0"),
    CatalogRow("sym4", 10, _helix("", "z/k", " + lam1*y"), "lam2*z/k",
               ("v1", "v2", "v4 + k*v3"), {}, "", lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("sym4", 11, ("0", "a2*x^(1 - k)", "a3*x^(1 - k)"), "a4*x^(2*(1 - k))",
               ("v2", "v3", "v7 + k*v8"), {}, "x+",
               lambda p: p["k"] not in (0, F(1, 2), 1), "k != 0, 1/2, 1", defaults={"k": F(3)},
               note="straight magnetic field"),
    CatalogRow("sym4", 12, ("0", "a2*x", "a3*x + lam*y"), "a4*x^2", ("v2", "v3", "v7"), {}, "",
               note="linear equations of motion"),
    CatalogRow("sym4", 13, ("0", "a2*sqrt(x)", "a3*sqrt(x)"), "a4*x + lam1*y + lam2*z",
               ("v2", "v3", "2*v7 + v8"), {}, "x+", note="straight magnetic field"),
    CatalogRow("sym4", 14, ("0", "lam2*ln(x)", "lam3*ln(x)"), "lam1*ln(x)",
               ("v2", "v3", "v7 + v8"), {}, "x+", note="straight magnetic field"),
    CatalogRow("sym4", 15, ("a1*exp(-(k1*x + k2*y + k3*z))", "a2*exp(-(k1*x + k2*y + k3*z))",
                            "a3*exp(-(k1*x + k2*y + k3*z))"), "a4*exp(-2*(k1*x + k2*y + k3*z))",
               ("v1 + k1*v8", "v2 + k2*v8", "v3 + k3*v8"), {}, "",
               lambda p: p["k3"] != 0, "k3 != 0",
               defaults={"k1": F(1, 2), "k2": F(1, 3), "k3": F(1)}, note="straight magnetic field"),
    CatalogRow("sym4", 16, ("0", "lam4*x", "lam5*x + lam6*y"), "lam1*x + lam2*y + lam3*z",
               ("v1", "v2", "v3"), {}, "", note="linear equations of motion"),
)

# --- Noether classes ------------------------------------------------------
_add(
    CatalogRow("noe2", 1, _rot("1/z^2", a3pref="1/z"), "G/z^2", ("v4 + k*v7 + 2*k*v8",),
               {"u1": "rho/z", "u2": "ln(z) - k*phi"}, "cut,z+", lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("noe2", 2, _rot(""), "lam*phi + G", ("v4 + k*v3",), {"u1": "rho", "u2": "z - k*phi"}, "cut"),
    CatalogRow("noe2", 3, _vec("1/x"), "G/x^2", ("v7 + 2*v8",), {"u1": "y/x", "u2": "z/y"}, "x+,y+"),
    CatalogRow("noe2", 4, _vec(""), "lam*z + G", ("v3",), {"u1": "x", "u2": "y"}, ""),
    CatalogRow("noe3", 1, ("exp(-2*k*phi)*(x*F1 - y*F2)", "exp(-2*k*phi)*(y*F1 + x*F2)",
                           "exp(-k*phi)*F3"), "exp(-2*k*phi)*G",
               ("v3", "v4 + k*v7 + 2*k*v8"), {"u": "ln(rho) - k*phi"}, "cut",
               lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("noe3", 2, _XZ, "lam1*z + lam2*phi + G", ("v3", "v4"), {"u": "rho"}, "cut",
               variants={"printed-yz": (_YZ, "lam1*z + lam2*phi + G")},
               note="prints the x*z term; the point-symmetry counterpart prints y*z"),
    CatalogRow("noe3", 3, _ROW8, "G/z^2", ("v4", "v7 + 2*v8"), {"u": "rho/z"}, "axis,z+"),
    CatalogRow("noe3", 4, _vec("1/x"), "G/x^2", ("v3", "v7 + 2*v8"), {"u": "y/x"}, "x+"),
    CatalogRow("noe3", 5, ("0", "F2", "lam3*y + F3"), "lam1*y + lam2*z + G", ("v2", "v3"), {"u": "x"}, ""),
    CatalogRow("noe4", 1, ("(a1*x - y*(a2 + lam*ln(rho)))/rho^2", "(a1*y + x*(a2 + lam*ln(rho)))/rho^2",
                           "a3/rho"), "a4/rho^2", ("v3", "v4", "v7 + 2*v8"), {}, "axis"),
    CatalogRow("noe4", 2, _MONO, "G", ("v4", "v5", "v6"), {"u": "r"}, "axis,origin"),
    CatalogRow("noe4", 3, _helix("1/z*", "ln(z/k)"), "a4/z^2",
               ("v1", "v2", "v4 + k*v7 + 2*k*v8"), {}, "z+", lambda p: p["k"] != 0, "k != 0",
               variants={"corrected": (_helix("1/z*", "ln(z)/k"), "a4/z^2")},
               note="helix phase printed as ln(z/k); covariance requires ln(z)/k"),
    CatalogRow("noe4", 4, _helix("", "z/k", " + lam1*y"), "lam2*z/k",
               ("v1", "v2", "v4 + k*v3"), {}, "", lambda p: p["k"] != 0, "k != 0"),
    CatalogRow("noe4", 5, ("0", "a2/x", "a3/x"), "a4/x^2", ("v2", "v3", "v7 + 2*v8"), {}, "x+",
               note="printed side condition on k has no k in the row"),
    CatalogRow("noe4", 6, ("0", "lam4*x", "lam5*x + lam6*y"), "lam1*x + lam2*y + lam3*z",
               ("v1", "v2", "v3"), {}, "", note="linear equations of motion"),
)

ROWS: dict[str, CatalogRow] = {r.key: r for r in _ROWS}


def catalog_rows(table: str | None = None) -> list[CatalogRow]:
    return [r for r in _ROWS if table is None or r.table == table]


def catalog_row(table: str, row: int) -> CatalogRow:
    try:
        return ROWS[f"{table}:{int(row)}"]
    except KeyError:
        raise CatalogError(f"no catalog row {table}:{row}") from None


@dataclass(frozen=True)
class CatalogKey:
    """Selects a catalog row together with constants, profiles and variant."""

    table: str
    row: int
    params: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    variant: str | None = None

    @classmethod
    def parse(cls, text: str) -> "CatalogKey":
        """``"sym3:6"`` or ``"sym3:6:corrected"``."""
        parts = text.split(":")
        if len(parts) not in (2, 3) or not parts[1].isdigit():
            raise CatalogError(f"bad catalog key {text!r}")
        return cls(parts[0], int(parts[1]), variant=parts[2] if len(parts) == 3 else None)


def _default_profiles(row: CatalogRow) -> dict:
    names = set(row.invariants)
    if names == {"u1", "u2"}:
        return dict(PROFILES2)
    if names == {"u"}:
        return dict(PROFILES1)
    return {}


def catalog_instance(key: CatalogKey | str, **params) -> FieldSpec:
    """Concrete :class:`FieldSpec` of a catalog row.

    Profile expressions are written in the row's invariants and
    substituted into the potentials; remaining constants are bound from the
    defaults, the row overrides and ``key.params``.
    """
    if isinstance(key, str):
        key = CatalogKey.parse(key)
    row = catalog_row(key.table, key.row)
    p = row.params({**key.params, **params})
    if not row.admissible(p):
        raise CatalogError(f"{row.key}: side condition violated ({row.condition_text})")
    A_txt, Phi_txt = row.potentials(key.variant)

    inv = {n: ex.substitute(ex.parse(t), MACROS) for n, t in row.invariants.items()}
    profiles = _default_profiles(row)
    profiles.update(key.profiles)
    prof_map = {}
    for name in PROFILE_NAMES:
        if name not in profiles:
            continue
        pe = ex.as_expr(profiles[name])
        bad = pe.free_symbols() - set(inv) - set(p)
        if bad:
            raise CatalogError(f"profile {name} references undefined symbols {sorted(bad)}")
        prof_map[name] = ex.substitute(pe, inv)

    def build(t: str) -> ex.Expr:
        e = ex.substitute(ex.parse(t), MACROS)
        return ex.substitute(e, prof_map)

    A = tuple(build(t) for t in A_txt)
    Phi = build(Phi_txt)
    used = set()
    for e in A + (Phi,):
        used |= e.free_symbols()
    missing = used - set(ex.VARIABLES) - set(p)
    if missing:
        raise CatalogError(f"{row.key}: unbound symbols {sorted(missing)}")
    bound = {k: v for k, v in p.items() if k in used}
    variant = key.variant or row.default_variant
    name = row.key if variant == "printed" else f"{row.key}:{variant}"
    return FieldSpec(A, Phi, bound, _dom(row.domain), name)


catalogInstance = catalog_instance


__all__ = [
    "CatalogError",
    "CatalogKey",
    "CatalogRow",
    "DEFAULT_PARAMS",
    "PROFILES1",
    "PROFILES2",
    "ROWS",
    "TABLE_KEYS",
    "catalog_instance",
    "catalogInstance",
    "catalog_row",
    "catalog_rows",
]
