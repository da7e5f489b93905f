"""Command-line front end.

Exit codes: 0 success, 1 parse or validation failure, 2 violated mathematical
precondition, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import artin, chow
from .classes import ClassParseError, format_class, parse_class
from .fan import (
    ConeNotFoundError,
    FanValidationError,
    PreconditionError,
    StackyFan,
    is_complete,
    is_simplicial,
    multiplicity_table,
    nonsimplicial_cones,
    star_subdivide,
)
from .linalg import format_rational

EXIT_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_IO = 3


class CLIError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _load(path) -> StackyFan:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CLIError(EXIT_IO, f"cannot read fan file {path}: {exc.strerror or exc}") from exc
    return StackyFan.loads(text)


def _write(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CLIError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from exc


def _cone_arg(text):
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise CLIError(EXIT_INPUT, f"cone selector must be comma-separated ray indices, got {text!r}") from exc


def cmd_validate(fan, args):
    data = {"valid": True, "rank": fan.rank, "rays": fan.nrays, "max_cones": len(fan.max_cones)}
    return data, f"valid: rank {fan.rank}, {fan.nrays} rays, {len(fan.max_cones)} maximal cones"


def cmd_info(fan, args):
    ns = nonsimplicial_cones(fan)
    table = multiplicity_table(fan)
    data = {
        "rank": fan.rank,
        "rays": fan.nrays,
        "complete": is_complete(fan),
        "simplicial": is_simplicial(fan),
        "nonsimplicial_cones": [sorted(c) for c in ns],
        "multiplicities": {",".join(map(str, c)): d for c, d in table.items()},
    }
    lines = [
        f"rank: {fan.rank}",
        f"rays: {fan.nrays}",
        f"complete: {'yes' if data['complete'] else 'no'}",
        f"simplicial: {'yes' if data['simplicial'] else 'no'}",
        "nonsimplicial cones: " + (" ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in ns) or "none"),
        "multiplicities of maximal cones:",
    ]
    for c in fan.max_cones:
        key = tuple(sorted(c))
        label = "{" + ",".join(map(str, key)) + "}"
        lines.append(f"  {label}: {table[key] if key in table else 'nonsimplicial'}")
    return data, "\n".join(lines)


def cmd_subdivide(fan, args):
    sub, fmap = star_subdivide(fan, _cone_arg(args.cone))
    text = sub.dumps()
    if args.output:
        _write(args.output, text + "\n")
    data = sub.to_dict()
    return data, text


def cmd_simplicialize(fan, args):
    res = artin.simplicialize(fan)
    if args.output:
        _write(args.output, res.target.dumps() + "\n")
    if args.report:
        _write(args.report, json.dumps(_jsonable(res.to_dict()), indent=2) + "\n")
    lines = [f"steps: {len(res.steps)}"]
    for s in res.steps:
        lines.append(f"  subdivide {{{','.join(map(str, s.cone))}}} -> ray {s.new_index} = {list(s.new_ray)}")
    lines.append("pullback:")
    for i in range(res.pullback.source_rays):
        img = " + ".join(f"y{j}" if c == 1 else f"{c}*y{j}" for j, c in res.pullback.images[i])
        lines.append(f"  x{i} -> {img}")
    if not args.output:
        lines.append(res.target.dumps())
    return res.to_dict(), "\n".join(lines)


def cmd_sr(fan, args):
    pres = chow.sr_presentation(fan)
    rels = [format_class(c) for c in pres.relation_classes()]
    nonfaces = [sorted(s) for s in pres.minimal_nonfaces]
    lines = ["linear relations:"] + [f"  {r}" for r in rels]
    lines.append("minimal nonfaces:")
    lines += ["  " + "*".join(f"x{i}" for i in s) for s in nonfaces]
    return {"linear_relations": rels, "minimal_nonfaces": nonfaces}, "\n".join(lines)


def _class(fan, text):
    return parse_class(text, fan.nrays)


def cmd_reduce(fan, args):
    cls = _class(fan, args.cls)
    out = chow.reduce_squarefree(fan, cls)
    return {"class": format_class(out)}, format_class(out)


def cmd_integrate(fan, args):
    cls = _class(fan, args.cls)
    if is_simplicial(fan):
        value = chow.integrate_simplicial(fan, cls)
    else:
        value = artin.integrate_artin(fan, cls)
    return {"integral": value}, format_rational(value)


def cmd_euler(fan, args):
    method = args.method
    if method == "auto":
        method = "simplicial" if is_simplicial(fan) else "pullback"
    if method == "simplicial":
        value = chow.euler_simplicial(fan)
        return {"method": method, "euler": value}, format_rational(value)
    if method == "pullback":
        value = artin.euler_artin(fan)
        return {"method": method, "euler": value}, format_rational(value)
    report = artin.euler_artin_3d(fan)
    lines = [format_rational(report.chi), f"simplicialization: {format_rational(report.chi_simplicial)}"]
    for t in report.new_cone_terms:
        lines.append(
            f"new cone {{{','.join(map(str, t.tau))}}} of {{{','.join(map(str, t.cone))}}}: {format_rational(t.value)}"
        )
    for t in report.ray_terms:
        lines.append(f"ray {t.ray} of {{{','.join(map(str, t.cone))}}}: {format_rational(t.value)}")
    lines.append(f"correction: {format_rational(report.correction)}")
    data = {
        "method": method,
        "euler": report.chi,
        "simplicial_euler": report.chi_simplicial,
        "correction": report.correction,
        "new_cone_terms": [
            {"cone": list(t.cone), "tau": list(t.tau), "multiplicity": t.multiplicity, "value": t.value}
            for t in report.new_cone_terms
        ],
        "ray_terms": [
            {
                "cone": list(t.cone),
                "ray": t.ray,
                "plus_ray": t.plus_ray,
                "minus_ray": t.minus_ray,
                "b": t.b,
                "multiplicity_plus": t.multiplicity_plus,
                "value": t.value,
            }
            for t in report.ray_terms
        ],
    }
    return data, "\n".join(lines)


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "subdivide": cmd_subdivide,
    "simplicialize": cmd_simplicialize,
    "sr": cmd_sr,
    "reduce": cmd_reduce,
    "integrate": cmd_integrate,
    "euler": cmd_euler,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="artin-toric", description="Exact intersection theory on toric stacks from stacky-fan files."
    )
    parser.add_argument("--json", action="store_true", help="emit a machine-readable JSON document")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("fan", help="fan file (JSON)")
        return p

    add("validate", "check the fan axioms")
    add("info", "summary, nonsimplicial cones and multiplicities")
    p = add("subdivide", "stacky star subdivision at a cone")
    p.add_argument("--cone", required=True, help="comma-separated ray indices, e.g. 0,1,2,3")
    p.add_argument("--output", "-o", help="write the subdivided fan here")
    p = add("simplicialize", "subdivide until simplicial")
    p.add_argument("--output", "-o", help="write the simplicial fan here")
    p.add_argument("--report", help="write the step and pullback report here")
    add("sr", "Stanley-Reisner presentation")
    p = add("reduce", "rewrite a class in square-free form")
    p.add_argument("cls", metavar="CLASS")
    p = add("integrate", "integrate a top-degree class")
    p.add_argument("cls", metavar="CLASS")
    p = add("euler", "Euler characteristic")
    p.add_argument("--method", choices=["auto", "simplicial", "pullback", "formula3d"], default="auto")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        fan = _load(args.fan)
        data, text = COMMANDS[args.command](fan, args)
    except CLIError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.code
    except FanValidationError as exc:
        print(f"error: invalid fan ({exc.axiom}): {exc}", file=stderr)
        return EXIT_INPUT
    except (ClassParseError, ConeNotFoundError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    if args.json:
        print(json.dumps(_jsonable(data), indent=2, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
