"""Command-line front-end.

Subcommands: charpoly, classify, check, ghat, nilpotent-complete,
parameterize, pb, enumerate, search, digraph.  Global flags: ``--json``
for machine-readable reports, ``--assume NAME=RATIONAL`` (repeatable) to
concretize parameters before analysis, and ``--jobs K`` for the search
workers.

Exit codes: 0 for clean verdicts (including "no" and "conditional"),
1 for input or usage errors, 2 for internal invariant violations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import companion, enumeration, families, pbcompanion
from .errors import FamilyError, InternalInvariantError
from .exprpoly import param_indet
from .matrices import Pattern, SymMatrix, parse_matrix_text, render_matrix_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ulhc", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument(
        "--assume",
        action="append",
        default=[],
        metavar="NAME=RATIONAL",
        help="bind a parameter to a rational value (repeatable)",
    )
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for search")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charpoly", help="characteristic polynomial of a matrix file")
    p.add_argument("file")

    p = sub.add_parser("classify", help="family membership of a matrix file")
    p.add_argument("file")

    p = sub.add_parser("check", help="companion verdict")
    p.add_argument("--method", choices=("direct", "structural", "ghat"), default="direct")
    p.add_argument("file")

    p = sub.add_parser("ghat", help="subdiagonal-sum companion test")
    p.add_argument("file")

    p = sub.add_parser("nilpotent-complete", help="solve checkpoint rows for nilpotency")
    p.add_argument("file")
    p.add_argument("--checkpoints", required=True, metavar="M1,M2,...")

    p = sub.add_parser("parameterize", help="companion family of a pattern")
    p.add_argument("--set", dest="family", required=True, choices=("G",))
    p.add_argument("--indices", required=True, metavar="I1,I2,...")

    p = sub.add_parser("pb", help="PB-companion analysis")
    p.add_argument("file")
    p.add_argument("--report", choices=("full", "ma", "concat", "criterion"), default="full")

    p = sub.add_parser("enumerate", help="enumerate patterns of a family")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--family", required=True, choices=enumeration.FAMILIES)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--count", action="store_true")
    group.add_argument("--emit", action="store_true")

    p = sub.add_parser("search", help="evidence searches")
    p.add_argument("kind", choices=("fiedler-mixed",))
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("digraph", help="digraph of a matrix, optionally compared")
    p.add_argument("file")
    p.add_argument("--compare", default=None)

    return parser


def _parse_assumptions(pairs: list[str]) -> dict:
    bindings = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise _UsageError(f"--assume expects NAME=RATIONAL, got {pair!r}")
        try:
            indet = param_indet(name.strip())
            bindings[indet] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise _UsageError(f"--assume {pair!r}: {exc}") from exc
    return bindings


def _load_matrix(path: str, bindings: dict) -> tuple[SymMatrix, dict]:
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(data).hexdigest()
    matrix = parse_matrix_text(data.decode("utf-8"))
    if bindings:
        matrix = matrix.substitute(bindings)
    return matrix, {"path": path, "sha256": digest}


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad {what} list {text!r}") from exc


def _dispatch(args, bindings) -> dict:
    if args.command == "charpoly":
        matrix, source = _load_matrix(args.file, bindings)
        return {"command": "charpoly", "input": source, "charpoly": matrix.charpoly().render()}

    if args.command == "classify":
        matrix, source = _load_matrix(args.file, bindings)
        label, tilde, hat = families.classify_matrix(matrix)
        report = label.to_json()
        report.update({"command": "classify", "input": source, "tilde": tilde, "hat": hat})
        return report

    if args.command in ("check", "ghat"):
        method = "ghat" if args.command == "ghat" else args.method
        matrix, source = _load_matrix(args.file, bindings)
        if method == "direct":
            result = companion.is_companion_direct(matrix)
        elif method == "structural":
            result = companion.is_companion_structural(matrix)
        else:
            result = companion.g_hat_companion_test(matrix)
        report = result.to_json()
        report.update({"command": "check", "input": source})
        return report

    if args.command == "nilpotent-complete":
        matrix, source = _load_matrix(args.file, bindings)
        checkpoints = _parse_int_list(args.checkpoints, "checkpoint")
        completed = companion.nilpotent_complete(matrix, checkpoints)
        return {
            "command": "nilpotent-complete",
            "input": source,
            "checkpoints": checkpoints,
            "matrix": render_matrix_text(completed),
        }

    if args.command == "parameterize":
        indices = _parse_int_list(args.indices, "index")
        n = len(indices)
        positions = tuple((i, i - k) for k, i in enumerate(indices))
        pattern = Pattern(n, positions)
        matrix = companion.parameterize_g(pattern)
        free = sorted({name for row in matrix.entries for e in row for name in e.param_names()})
        return {
            "command": "parameterize",
            "set": args.family,
            "indices": indices,
            "pattern": pattern.render(),
            "free_params": free,
            "matrix": render_matrix_text(matrix),
        }

    if args.command == "pb":
        matrix, source = _load_matrix(args.file, bindings)
        report = {"command": "pb", "input": source, "report": args.report}
        try:
            full = pbcompanion.is_pb_companion(matrix)
        except FamilyError as exc:
            report.update({"verdict": {"kind": "no"}, "witnesses": [str(exc)]})
            return report
        if args.report in ("full", "ma"):
            report["ma"] = [[e.render() for e in row] for row in full.ma]
        if args.report in ("full", "concat"):
            report["degrees"] = list(full.degrees)
            report["concat"] = [list(c) for c in full.concat]
            report["block_dets"] = [d.render() for d in full.block_dets]
        if args.report in ("full", "criterion"):
            criterion = pbcompanion.length_le2_criterion(matrix)
            report["criterion"] = (
                "not-applicable" if criterion is None else criterion.to_json()
            )
        report["basis"] = [p.render() for p in full.basis]
        report["det"] = full.det.render()
        report["verdict"] = full.verdict.to_json()
        return report

    if args.command == "enumerate":
        patterns = enumeration.enumerate_patterns(args.order, args.family)
        report = {"command": "enumerate", "order": args.order, "family": args.family}
        if args.emit:
            report["patterns"] = [p.render() for p in patterns]
            report["count"] = len(report["patterns"])
        else:
            report["count"] = sum(1 for _ in patterns)
        return report

    if args.command == "search":
        if args.order >= 5 and args.budget is None:
            raise _UsageError("orders 5 and 6 require an explicit --budget")
        result = enumeration.fiedler_mixed_superpattern_search(
            args.order, budget=args.budget, jobs=args.jobs
        )
        report = result.to_json()
        report.update({"command": "search", "kind": args.kind, "order": args.order})
        return report

    if args.command == "digraph":
        matrix, source = _load_matrix(args.file, bindings)
        graph = enumeration.build_digraph(matrix)
        report = graph.to_json()
        report.update({"command": "digraph", "input": source})
        if args.compare:
            other, other_source = _load_matrix(args.compare, bindings)
            report["compare"] = other_source
            report["isomorphic"] = enumeration.digraphs_isomorphic(
                graph, enumeration.build_digraph(other)
            )
        return report

    raise _UsageError(f"unknown command {args.command!r}")


def _render_human(report: dict) -> str:
    lines = []
    skip = {"command", "input", "timing_ms"}
    for key in sorted(report):
        if key in skip:
            continue
        value = report[key]
        if isinstance(value, dict) and "kind" in value:
            text = value["kind"]
            if value.get("conditions"):
                conds = ", ".join(
                    f"{c['poly']} {'=' if c['relation'] == 'zero' else '!='} 0"
                    for c in value["conditions"]
                )
                text += f" ({conds})"
            lines.append(f"{key}: {text}")
        elif isinstance(value, str) and "\n" in value:
            lines.append(f"{key}:")
            lines.extend("  " + line for line in value.rstrip("\n").splitlines())
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{key}:")
            for row in value:
                lines.append("  " + " ".join(str(c) for c in row))
        elif isinstance(value, list):
            lines.append(f"{key}:")
            lines.extend(f"  {item}" for item in value)
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def run(argv: list[str]) -> tuple[int, dict]:
    """Parse arguments, dispatch, and return (exit_code, report)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        bindings = _parse_assumptions(args.assume)
        started = time.perf_counter()
        report = _dispatch(args, bindings)
        report["timing_ms"] = round((time.perf_counter() - started) * 1000, 3)
        return EXIT_OK, report
    except _UsageError as exc:
        return EXIT_USAGE, {"error": str(exc)}
    except InternalInvariantError as exc:
        return EXIT_INTERNAL, {"error": f"internal invariant violation: {exc}"}
    except ValueError as exc:
        return EXIT_USAGE, {"error": str(exc)}


def main(argv: list[str] | None = None) -> int:
    code, report = run(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in (sys.argv[1:] if argv is None else argv)
    if want_json:
        print(json.dumps(report, sort_keys=True, indent=2))
    elif "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
    else:
        print(_render_human(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
