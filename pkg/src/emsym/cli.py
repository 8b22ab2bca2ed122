"""Command-line interface.

Exit codes: 0 success, 1 a verified table row failed, 2 input could not be
parsed, 3 Maxwell audit failed, 4 the prolongation oracle disagreed with the
detector, 5 degenerate generator for canon, 6 trajectory left the domain.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import expr as ex
from .fields import catalog_instance, monopole, stormer
from .fields.catalog import CatalogError
from .fields.io import FieldFileError, read_field_file
from .fields.spec import MACROS, FieldSpec
from .liealg import EquivGenerator

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MAXWELL, EXIT_ORACLE, EXIT_DEGENERATE, EXIT_DOMAIN = range(7)
MAXWELL_TOL = 1e-9

_BUILTINS = {"stormer": stormer, "monopole": monopole}


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_PARSE):
        super().__init__(msg)
        self.code = code


def load_field(spec: str) -> FieldSpec:
    """A field file path, ``catalog:KEY[:variant]`` or ``builtin:stormer|monopole``."""
    try:
        if spec.startswith("catalog:"):
            return catalog_instance(spec[len("catalog:"):])
        if spec.startswith("builtin:"):
            name = spec[len("builtin:"):]
            if name not in _BUILTINS:
                raise CliError(f"unknown builtin field {name!r}; choose from {sorted(_BUILTINS)}")
            return _BUILTINS[name]()
        return read_field_file(spec)
    except (FieldFileError, CatalogError, ex.ExprError) as exc:
        raise CliError(f"{spec}: {exc}") from None


def _read_json_arg(text: str):
    if text == "-":
        text = sys.stdin.read()
    elif not text.lstrip().startswith(("{", "[")):
        try:
            text = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {text}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON at byte {exc.pos}: {exc.msg}") from None


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


# --- classify -------------------------------------------------------------

def _classify_text(rep) -> str:
    d = rep.detection
    lines = [f"field: {rep.field.get('name') or '(unnamed)'}",
             f"dimension: {d.dimension}  (noether: {d.noether_dimension})",
             f"gap ratio: {d.gap_ratio:.3g}"]
    for row in d.echelon:
        terms = [f"{v:+.6g}*v{i}" for i, v in enumerate(row, 1) if abs(v) > 1e-12]
        lines.append("  " + " ".join(terms))
    lines.append(f"oracle agreement: {rep.oracle_agreement}")
    if rep.match:
        lines.append(f"match: {rep.match['bestTable']}  [{rep.match['best']}]")
    if rep.noether_match:
        lines.append(f"noether match: {rep.noether_match['bestTable']}  [{rep.noether_match['best']}]")
    lines += [f"warning: {w}" for w in rep.to_json()["warnings"]]
    return "\n".join(lines)


def cmd_classify(args) -> int:
    from .audit import classify

    fs = load_field(args.field)
    rep = classify(fs, tol=args.tol, seed=args.seed, match=not args.no_match)
    _emit(args, rep.to_json(), _classify_text(rep))
    if max(rep.maxwell) > MAXWELL_TOL:
        print(f"error: Maxwell audit failed (divB={rep.maxwell[0]:.3g}, curlE={rep.maxwell[1]:.3g})",
              file=sys.stderr)
        return EXIT_MAXWELL
    if not rep.oracle_agreement:
        print("error: prolongation oracle disagrees with the detected basis", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


# --- canon ----------------------------------------------------------------

def cmd_canon(args) -> int:
    from .optimal import DegenerateGenerator, canonicalize1D

    data = _read_json_arg(args.generator)
    try:
        V = EquivGenerator.from_json(data)
    except (ValueError, ZeroDivisionError, ex.ExprError) as exc:
        raise CliError(f"invalid generator: {exc}") from None
    try:
        cc = canonicalize1D(V, tol=args.tol if args.tol_given else 1e-12)
    except DegenerateGenerator as exc:
        print(f"error: degenerate generator: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    payload = cc.to_json()
    text = payload["class"] or "degenerate"
    if not cc.degenerate:
        text += "  " + ", ".join(f"{k}={v}" for k, v in payload["params"].items())
    _emit(args, payload, text)
    if cc.degenerate:
        print(f"error: degenerate generator: {cc.reason}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


# --- verify-tables --------------------------------------------------------

def cmd_verify_tables(args) -> int:
    from .audit import audit_catalog

    rep = audit_catalog(args.scope, tol=args.tol, seed=args.seed, drift=not args.no_drift)
    _emit(args, rep.to_json(), rep.text())
    return EXIT_OK if rep.ok else EXIT_FAIL


# --- integrate / involution -----------------------------------------------

def _parse_state(text: str):
    from .dynamics import PhaseState

    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise CliError(f"state must be comma-separated numbers, got {text!r}") from None
    if len(vals) == 6:
        vals = [0.0] + vals
    if len(vals) != 7:
        raise CliError("state needs x,y,z,vx,vy,vz or t,x,y,z,vx,vy,vz")
    try:
        return PhaseState(vals[0], vals[1:4], vals[4:7])
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _parse_invariants(fs: FieldSpec, specs: list[str]):
    """``H``, ``noether:c0,...,c9`` (gauge reconstructed) or ``NAME=EXPR``.

    Expressions see x, y, z, vx, vy, vz, t, the field parameters and the
    rho, r, phi shorthands of field files.
    """
    from .dynamics import InvariantFn, MissingGaugeError, hamiltonian_fn, noether_integral_fn

    out = []
    for i, spec in enumerate(specs or []):
        name, _, body = spec.partition("=") if "=" in spec else (None, "", spec)
        body = body.strip()
        try:
            if body == "H":
                inv = hamiltonian_fn(fs)
            elif body.startswith("noether:"):
                cs = [ex.parse(v) for v in body[len("noether:"):].split(",")]
                if not all(isinstance(c, ex.Const) for c in cs):
                    raise CliError(f"noether coefficients must be numbers: {body!r}")
                inv = noether_integral_fn(fs, [c.value for c in cs], "auto", name or f"I{i + 1}")
            else:
                e = ex.substitute(ex.parse(body), {**MACROS, **dict(fs.params)})
                inv = InvariantFn(name or f"I{i + 1}", e)
        except ex.ExprSyntaxError as exc:
            raise CliError(f"invariant {spec!r}: {exc}") from None
        except ex.UnboundSymbolError as exc:
            raise CliError(f"invariant {spec!r}: unbound symbols {exc.args[0]}") from None
        except (ValueError, MissingGaugeError) as exc:
            raise CliError(f"invariant {spec!r}: {exc}") from None
        if name:
            inv.name = name.strip()
        out.append(inv)
    return out


def cmd_integrate(args) -> int:
    from .dynamics import DomainExitError, StepSizeUnderflow, integrate, trajectory_csv

    fs = load_field(args.field)
    s0 = _parse_state(args.state)
    invs = _parse_invariants(fs, args.invariant)
    method = "rk4" if args.step else "adaptive"
    tol = args.tol if args.tol_given else 1e-10
    code = EXIT_OK
    try:
        traj = integrate(fs, s0, args.t_end, method=method, h=args.step or 1e-2, atol=tol, rtol=tol)
    except (DomainExitError, StepSizeUnderflow) as exc:
        traj = exc.trajectory
        last = traj.final
        print(f"error: {exc}; last valid state t={last.t!r} x={last.x.tolist()} v={last.v.tolist()}",
              file=sys.stderr)
        code = EXIT_DOMAIN
    csv_text = trajectory_csv(traj, invs)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return code


def cmd_involution(args) -> int:
    from .dynamics import involution_report

    fs = load_field(args.field)
    invs = _parse_invariants(fs, args.invariant or ["H"])
    s0 = _parse_state(args.state) if args.state else None
    rep = involution_report(fs, invs, n_states=args.states, seed=args.seed, s0=s0, t_end=args.t_end,
                            tol=args.tol if args.tol_given else 1e-10)
    js = rep.to_json()
    lines = ["brackets (max |{Ii, Ij}| over states):"]
    w = max(len(n) for n in rep.names)
    for n, row in zip(rep.names, rep.brackets):
        lines.append(f"  {n:>{w}}  " + "  ".join(f"{v:9.2e}" for v in row))
    for n, d in zip(rep.names, rep.drift):
        lines.append(f"drift {n}: {'-' if d is None else format(d, '.2e')}")
    lines.append(f"jacobian rank: {rep.rank} of {len(invs)}")
    _emit(args, js, "\n".join(lines))
    return EXIT_OK


# --- parser ---------------------------------------------------------------

class _TolAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.tol_given = True


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive, default=1e-8, action=_TolAction,
                        help="numerical tolerance (default 1e-8; integrators default to 1e-10)")
    common.add_argument("--seed", type=_nonneg_int, default=0, help="sampling seed (default 0)")
    common.add_argument("--format", choices=("json", "text"), default="json", help="report format (default json)")
    common.add_argument("--out", help="write the output to this file instead of stdout")

    p = argparse.ArgumentParser(prog="emsym", description="Point symmetries of charged-particle motion.",
                                epilog="FIELD is a field file, catalog:KEY (e.g. catalog:sym3:6) "
                                       "or builtin:stormer / builtin:monopole.")
    p.add_argument("--version", action="version", version=f"emsym {__version__}")
    p.set_defaults(tol_given=False)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="detect and identify the symmetry algebra of a field")
    c.add_argument("field")
    c.add_argument("--no-match", action="store_true", help="skip the catalog matching step")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("canon", parents=[common], help="canonical one-dimensional subalgebra of a generator")
    c.add_argument("generator", help='JSON {"c": [c1..c9], "f": "gauge"}, a file with it, or - for stdin')
    c.set_defaults(func=cmd_canon)

    c = sub.add_parser("verify-tables", parents=[common], help="audit the optimal systems and the field catalog")
    c.add_argument("--scope", choices=("optimal", "symmetry", "noether", "all"), default="all")
    c.add_argument("--no-drift", action="store_true", help="skip trajectory drift checks for Noether rows")
    c.set_defaults(func=cmd_verify_tables)

    c = sub.add_parser("integrate", parents=[common], help="integrate a trajectory and write CSV")
    c.add_argument("field")
    c.add_argument("--state", required=True, help="initial state x,y,z,vx,vy,vz or t,x,y,z,vx,vy,vz")
    c.add_argument("--t-end", type=float, default=10.0, help="final time (default 10)")
    c.add_argument("--step", type=_positive, help="fixed RK4 step; adaptive Dormand-Prince when omitted")
    c.add_argument("--invariant", action="append",
                   help="extra CSV column: H, noether:c0,...,c9 or NAME=EXPR in x,y,z,vx,vy,vz,t (repeatable)")
    c.set_defaults(func=cmd_integrate)

    c = sub.add_parser("involution", parents=[common], help="Poisson brackets, drift and independence of invariants")
    c.add_argument("field")
    c.add_argument("--invariant", action="append", help="as for integrate (default: H)")
    c.add_argument("--state", help="start of the drift trajectory (default: first sampled state)")
    c.add_argument("--t-end", type=float, default=20.0, help="drift trajectory length (default 20)")
    c.add_argument("--states", type=_nonneg_int, default=20, help="random states for brackets (default 20)")
    c.set_defaults(func=cmd_involution)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "t_end", None) is not None and not np.isfinite(args.t_end):
        parser.error("--t-end must be finite")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
