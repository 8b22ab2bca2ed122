"""Reading and writing field files.

A field file is INI-style text::

    [potential]
    A1 = -y/r^3
    A2 = x/r^3
    A3 = 0
    Phi = 0

    [params]
    lam = 1/2

    [domain]
    exclude = origin, axis, cut
    positive = z

Missing potential keys default to 0. Without a ``[domain]`` section the
excluded sets are guessed from the expressions.
"""

from __future__ import annotations

import configparser
from fractions import Fraction
from pathlib import Path

from .. import expr as ex
from .spec import DomainHint, FieldSpec

_EXCLUDES = {"origin", "axis", "cut"}


class FieldFileError(ValueError):
    """Malformed field file; ``key`` and ``offset`` locate expression errors."""

    def __init__(self, msg: str, key: str | None = None, offset: int | None = None):
        super().__init__(msg)
        self.key = key
        self.offset = offset


def _number(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise FieldFileError(f"parameter value {text!r} is not a number") from None


def parse_field_text(text: str, name: str = "") -> FieldSpec:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case (A1, Phi)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise FieldFileError(f"cannot parse field file: {exc}") from None
    if not cp.has_section("potential"):
        raise FieldFileError("missing [potential] section")
    pot = cp["potential"]
    unknown = set(pot) - {"A1", "A2", "A3", "Phi"}
    if unknown:
        raise FieldFileError(f"unknown potential keys {sorted(unknown)}")
    exprs = {}
    for key in ("A1", "A2", "A3", "Phi"):
        src = pot.get(key, "0")
        try:
            exprs[key] = ex.parse(src)
        except ex.ExprSyntaxError as exc:
            raise FieldFileError(f"{key}: {exc}", key, exc.offset) from None
    params = {k: _number(v) for k, v in cp["params"].items()} if cp.has_section("params") else {}
    A = (exprs["A1"], exprs["A2"], exprs["A3"])
    if cp.has_section("domain"):
        d = cp["domain"]
        excl = {s.strip() for s in d.get("exclude", "").split(",") if s.strip()}
        bad = excl - _EXCLUDES
        if bad:
            raise FieldFileError(f"unknown domain excludes {sorted(bad)}")
        pos = tuple(sorted(s.strip() for s in d.get("positive", "").split(",") if s.strip()))
        if set(pos) - {"x", "y", "z"}:
            raise FieldFileError(f"positive coordinates must be among x, y, z: {pos}")
        domain = DomainHint(axis="axis" in excl or "cut" in excl, origin="origin" in excl,
                            phi_cut="cut" in excl, positive=pos,
                            tube=float(d.get("tube", 0.1)))
    else:
        domain = DomainHint.infer(A + (exprs["Phi"],))
    try:
        return FieldSpec(A, exprs["Phi"], params, domain, name)
    except ex.UnboundSymbolError as exc:
        raise FieldFileError(f"unbound symbols {exc.args[0]}") from None


def read_field_file(path) -> FieldSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FieldFileError(f"cannot read {p}: {exc.strerror}") from None
    return parse_field_text(text, p.stem)


def field_to_text(fs: FieldSpec) -> str:
    lines = ["[potential]"]
    for key, e in zip(("A1", "A2", "A3"), fs.A):
        lines.append(f"{key} = {ex.to_string(e)}")
    lines.append(f"Phi = {ex.to_string(fs.Phi)}")
    if fs.params:
        lines += ["", "[params]"] + [f"{k} = {v}" for k, v in fs.params.items()]
    d = fs.domain
    excl = [n for n, on in (("origin", d.origin), ("axis", d.axis and not d.phi_cut), ("cut", d.phi_cut)) if on]
    lines += ["", "[domain]", f"exclude = {', '.join(excl)}", f"positive = {', '.join(d.positive)}"]
    return "\n".join(lines) + "\n"


def write_field_file(fs: FieldSpec, path) -> None:
    Path(path).write_text(field_to_text(fs), encoding="utf-8")


__all__ = ["FieldFileError", "field_to_text", "parse_field_text", "read_field_file", "write_field_file"]
