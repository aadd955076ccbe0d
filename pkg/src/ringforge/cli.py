"""``ringforge`` command line interface.

Every subcommand prints one JSON object on stdout.  Exit status is 0 on
success, 1 on a domain error (printed as ``{"error": {...}}``) and 2 on a
usage error.  Emitted objects carry their inputs under the keys ``form``,
``matrix``, ``element`` and ``table``, so any output can be fed back through
``--input``.

Negative leading coefficients need the ``=`` form: ``--form=-1,0,0,2``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arithmat, forms, param, verify
from .exactalg import PolyMatrix, PolyRing, Polynomial
from .forms import BinaryForm, UnimodularMatrix

SUBCOMMANDS = (
    "table", "act", "arith", "trace-norm", "inverse", "param", "transport",
    "check-iso", "verify", "covariants", "from-order",
)


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise ValueError(f"expected comma separated integers, got {text!r}") from None


def _matrix_text(M: PolyMatrix) -> list[list]:
    return [[_scalar(e) for e in M.row(i)] for i in range(M.rows)]


def _scalar(e):
    if isinstance(e, Polynomial):
        return int(e) if e.is_constant() else str(e)
    return int(e)


class _Inputs:
    """Form, matrix, element and table taken from flags or an ``--input`` JSON object."""

    def __init__(self, args):
        self.obj = {}
        if getattr(args, "input", None):
            text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
            self.obj = json.loads(text)
            if not isinstance(self.obj, dict):
                raise ValueError("--input must contain a JSON object")
        self.args = args

    def form(self, required: bool = True) -> BinaryForm | None:
        text = getattr(self.args, "form", None)
        if text is not None:
            return BinaryForm(_ints(text))
        if "form" in self.obj:
            return BinaryForm.from_json(self.obj["form"])
        if required:
            raise UsageError("a form is required (--form a1,...,an+1 or --input)")
        return None

    def matrix(self, required: bool = True) -> UnimodularMatrix | None:
        text = getattr(self.args, "matrix", None)
        if text is not None:
            vals = _ints(text)
            if len(vals) != 4:
                raise ValueError("--matrix needs exactly four integers p,q,r,s")
            return UnimodularMatrix(*vals)
        if "matrix" in self.obj:
            return UnimodularMatrix.from_json(self.obj["matrix"])
        if required:
            raise UsageError("a matrix is required (--matrix p,q,r,s or --input)")
        return None

    def element(self, n: int, required: bool = True) -> list[int] | None:
        text = getattr(self.args, "element", None)
        if text is not None:
            coords = _ints(text)
        elif "element" in self.obj:
            coords = [int(c) for c in self.obj["element"]["coords"]]
        elif required:
            raise UsageError("an element is required (--element x0,...,x{n-1} or --input)")
        else:
            return None
        if len(coords) != n:
            raise ValueError(f"element needs {n} coordinates, got {len(coords)}")
        return coords

    def table(self) -> arithmat.StructureConstants:
        text = getattr(self.args, "table", None)
        if text is not None:
            return arithmat.StructureConstants.from_json(json.loads(text))
        if "table" in self.obj:
            return arithmat.StructureConstants.from_json(self.obj["table"])
        raise UsageError("a table is required (--table JSON or --input)")


# -- subcommands -------------------------------------------------------------


def cmd_table(args, inp: _Inputs) -> dict:
    form = inp.form()
    ctx = arithmat.OrderContext(form)
    out = {"form": form.to_json(), "table": arithmat.multiplication_table(ctx).to_json()}
    if args.normalized:
        out["normalized_table"] = arithmat.normalized_cubic_table(ctx).to_json()
    return out


def cmd_act(args, inp: _Inputs) -> dict:
    form, M = inp.form(), inp.matrix()
    return {"form": form.to_json(), "matrix": M.to_json(), "result": forms.act(form, M).to_json()}


def cmd_arith(args, inp: _Inputs) -> dict:
    form = inp.form()
    ctx = arithmat.OrderContext(form)
    coords = inp.element(form.degree, required=False)
    out = {"form": form.to_json()}
    if coords is None:
        names = [f"x{i}" for i in range(form.degree)]
        ring = PolyRing(names)
        sym = arithmat.OrderContext.from_coeffs(form.coeffs, ring)
        out["matrix_of_element"] = _matrix_text(arithmat.arithmetic_matrix(sym, ring.gens(*names)))
    else:
        out["element"] = {"coords": coords}
        out["matrix_of_element"] = _matrix_text(arithmat.arithmetic_matrix(ctx, coords))
    return out


def cmd_trace_norm(args, inp: _Inputs) -> dict:
    form = inp.form()
    ctx = arithmat.OrderContext(form)
    elem = ctx.element(inp.element(form.degree))
    return {"form": form.to_json(), "element": elem.to_json(),
            "trace": arithmat.trace(elem), "norm": arithmat.norm(elem)}


def cmd_inverse(args, inp: _Inputs) -> dict:
    form = inp.form()
    ctx = arithmat.OrderContext(form)
    elem = ctx.element(inp.element(form.degree))
    inv = arithmat.element_inverse(elem)
    return {"form": form.to_json(), "element": elem.to_json(),
            "inverse": {"coords": list(inv.coords), "denom": inv.denom}}


def cmd_param(args, inp: _Inputs) -> dict:
    form = inp.form(required=False)
    M = inp.matrix(required=False)
    n = args.n
    if form is not None:
        if n is not None and n != form.degree:
            raise ValueError(f"--n {n} does not match the degree {form.degree} of --form")
        n = form.degree
    if n is None:
        raise UsageError("param needs --n or --form")
    if n < 3:
        raise ValueError("param needs n >= 3")
    names = [] if form is not None else [f"a{k}" for k in range(1, n + 2)]
    names += [] if M is not None else ["p", "q", "r", "s"]
    ring = PolyRing(names)
    a = form.coeffs if form is not None else ring.gens(*[f"a{k}" for k in range(1, n + 2)])
    pqrs = M.as_tuple() if M is not None else ring.gens("p", "q", "r", "s")
    system = param.ParamSystem.build(a, pqrs, ring)
    out = {"n": n}
    if form is not None:
        out["form"] = form.to_json()
    if M is not None:
        out["matrix"] = M.to_json()
    out["b"] = [_scalar(b) for b in system.b]
    for name in ("A", "B", "Q", "P", "T"):
        out[name] = _matrix_text(getattr(system, name))
    return out


def cmd_transport(args, inp: _Inputs) -> dict:
    form, M = inp.form(), inp.matrix()
    coords = inp.element(form.degree)
    return {"form": form.to_json(), "matrix": M.to_json(), "element": {"coords": coords},
            "result": {"coords": param.transport_element(form, M, coords)}}


def cmd_check_iso(args, inp: _Inputs) -> dict:
    form, M = inp.form(), inp.matrix()
    report = param.isomorphism_check(form, M, trials=args.trials, seed=args.seed)
    out = report.to_json()
    out["_ok"] = report.ok
    return out


def cmd_verify(args, inp: _Inputs) -> dict:
    if (args.n is None) == (args.up_to is None):
        raise UsageError("verify needs exactly one of --n or --up-to")
    if args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(3, args.up_to + 1))
    for n in ns:
        if n < 3:
            raise ValueError("verify needs n >= 3")
    prefailures = {}
    if args.precheck:
        for n in ns:
            bad = verify.evaluation_precheck(n, points=args.precheck)
            if bad:
                prefailures[n] = bad
    certs = verify.verify_range(ns)
    objs = []
    for cert in certs:
        obj = cert.to_json(timing=args.timing)
        if args.precheck:
            obj["precheck"] = {"points": args.precheck, "mismatches": prefailures.get(cert.n, [])}
        objs.append(obj)
    out = objs[0] if args.n is not None else {"certificates": objs}
    if args.json:
        Path(args.json).write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    out = dict(out)
    out["_ok"] = all(c.verified for c in certs)
    return out


def cmd_covariants(args, inp: _Inputs) -> dict:
    form = inp.form(required=False)
    cov = verify.quartic_covariants(form)
    syz = verify.syzygy_check(form, cov)
    out = {}
    if form is not None:
        out["form"] = form.to_json()
    out.update(cov.to_json())
    out["syzygy"] = "holds" if syz.holds else "fails"
    if not syz.holds:
        out["syzygy_difference"] = str(syz.difference)
    out["_ok"] = syz.holds
    return out


def cmd_from_order(args, inp: _Inputs) -> dict:
    table = inp.table()
    form = arithmat.cubic_form_from_order(table)
    return {"table": table.to_json(), "form": form.to_json()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringforge", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, form=False, matrix=False, element=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        sp.add_argument("--input", help="JSON file with form/matrix/element/table keys ('-' for stdin)")
        sp.add_argument("--pretty", action="store_true", help="indented output")
        if form:
            sp.add_argument("--form", help="coefficients a1,...,an+1")
        if matrix:
            sp.add_argument("--matrix", help="p,q,r,s with ps - qr = +-1")
        if element:
            sp.add_argument("--element", help="coordinates x0,...,x{n-1}")
        return sp

    sp = add("table", cmd_table, "multiplication table of the order", form=True)
    sp.add_argument("--normalized", action="store_true", help="also the (1, phi, psi) cubic table")
    add("act", cmd_act, "the form B o M", form=True, matrix=True)
    add("arith", cmd_arith, "arithmetic matrix (symbolic without --element)", form=True, element=True)
    add("trace-norm", cmd_trace_norm, "trace and norm of an element", form=True, element=True)
    add("inverse", cmd_inverse, "inverse of an element", form=True, element=True)
    sp = add("param", cmd_param, "matrices A, B, Q, P, T", form=True, matrix=True)
    sp.add_argument("--n", type=int)
    add("transport", cmd_transport, "map an element of the ring of B o M to the ring of B",
        form=True, matrix=True, element=True)
    sp = add("check-iso", cmd_check_iso, "random homomorphism trials", form=True, matrix=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("verify", cmd_verify, "certify the parametrisation identity")
    sp.add_argument("--n", type=int)
    sp.add_argument("--up-to", type=int)
    sp.add_argument("--json", help="also write the certificate(s) to this file")
    sp.add_argument("--timing", action="store_true", help="add wall time under 'meta'")
    sp.add_argument("--precheck", type=int, default=0, metavar="POINTS",
                    help="first compare both sides at this many random integer points")
    add("covariants", cmd_covariants, "quartic invariants, covariants and syzygy", form=True)
    sp = add("from-order", cmd_from_order, "cubic form from a rank 3 multiplication table")
    sp.add_argument("--table", help="table JSON as printed by 'table'")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args, _Inputs(args))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ringforge: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, KeyError, TypeError, json.JSONDecodeError, OSError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err, indent=2 if args.pretty else None))
        return 1
    ok = out.pop("_ok", True)
    print(json.dumps(out, indent=2 if args.pretty else None))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
