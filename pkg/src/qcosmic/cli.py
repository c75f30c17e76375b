"""Command-line interface: parse, check, measure, diagram, format.

Exit codes are stable for CI use:

  0  success, no validation errors (warnings allowed)
  1  validation errors found
  2  parse or lexical failure
  3  usage or I/O error

Reports go to stdout (or the ``-o`` file); diagnostics go to stderr. The
two streams never carry each other's content.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagnostics import Diagnostic, has_errors, render_all, sort_key
from .emit import OutputFormat, RenderOptions, render_csv, render_dot, render_json, render_text
from .formatter import format_model
from .measure import DedupMode, measure_system
from .model import Model, UnresolvedReferenceError
from .parser import parse_model
from .rules import validate

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_USAGE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="qcosmic",
        description="Functional size measurement for hybrid classical/quantum software models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="validate a model and report diagnostics")
    check.add_argument("input", help="path to a .qcm model file")

    measure = sub.add_parser("measure", help="measure a model and print the QCFP report")
    measure.add_argument("input", help="path to a .qcm model file")
    measure.add_argument(
        "--format",
        choices=["text", "json", "csv"],
        default="text",
        help="report format (default: text)",
    )
    measure.add_argument(
        "--dedup",
        choices=["endpoint", "cosmic"],
        default="endpoint",
        help="movement de-duplication key: include the counterpart (endpoint) "
        "or collapse on kind and data group alone (cosmic)",
    )
    measure.add_argument("--by-layer", action="store_true", help="include per-layer rows")
    measure.add_argument("-o", "--output", help="write the report to a file instead of stdout")

    diagram = sub.add_parser("diagram", help="emit a DOT context diagram")
    diagram.add_argument("input", help="path to a .qcm model file")
    diagram.add_argument("--format", choices=["dot"], default="dot", help="diagram format")
    diagram.add_argument("--scope", help="diagram a single functional process")
    diagram.add_argument("-o", "--output", help="write the diagram to a file instead of stdout")

    fmt = sub.add_parser("fmt", help="print the model in canonical form")
    fmt.add_argument("input", help="path to a .qcm model file")
    fmt.add_argument("-o", "--output", help="write the formatted model to a file instead of stdout")

    return parser


def _read_input(path: str) -> str:
    return Path(path).read_text(encoding="utf-8-sig")


def _emit_diagnostics(diagnostics: list[Diagnostic]) -> None:
    if diagnostics:
        print(render_all(sorted(diagnostics, key=sort_key)), file=sys.stderr)


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _load(path: str) -> tuple[Model | None, list[Diagnostic], int]:
    """Parse the input file; on failure the exit code is already decided."""
    try:
        text = _read_input(path)
    except OSError as exc:
        print(f"qcosmic: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        return None, [], EXIT_USAGE
    result = parse_model(text, file=path)
    if result.model is None:
        _emit_diagnostics(result.diagnostics)
        return None, [], EXIT_PARSE
    return result.model, result.diagnostics, EXIT_OK


def _run_check(args) -> int:
    model, parse_diags, code = _load(args.input)
    if model is None:
        return code
    diagnostics = parse_diags + validate(model)
    _emit_diagnostics(diagnostics)
    return EXIT_VALIDATION if has_errors(diagnostics) else EXIT_OK


def _run_measure(args) -> int:
    model, parse_diags, code = _load(args.input)
    if model is None:
        return code
    diagnostics = parse_diags + validate(model)
    _emit_diagnostics(diagnostics)
    if has_errors(diagnostics):
        return EXIT_VALIDATION
    report = measure_system(model, dedup=DedupMode(args.dedup))
    if args.format == "json":
        text = render_json(report)
    elif args.format == "csv":
        text = render_csv(report)
    else:
        opts = RenderOptions(format=OutputFormat.TEXT, by_layer=args.by_layer)
        text = render_text(report, opts)
    _write_output(text, args.output)
    return EXIT_OK


def _run_diagram(args) -> int:
    model, parse_diags, code = _load(args.input)
    if model is None:
        return code
    diagnostics = parse_diags + validate(model)
    _emit_diagnostics(diagnostics)
    if has_errors(diagnostics):
        return EXIT_VALIDATION
    opts = RenderOptions(format=OutputFormat.DOT, scope=args.scope)
    try:
        text = render_dot(model, opts)
    except UnresolvedReferenceError as exc:
        print(f"qcosmic: --scope: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_output(text, args.output)
    return EXIT_OK


def _run_fmt(args) -> int:
    model, parse_diags, code = _load(args.input)
    if model is None:
        return code
    _emit_diagnostics(parse_diags)
    _write_output(format_model(model), args.output)
    return EXIT_OK


_COMMANDS = {
    "check": _run_check,
    "measure": _run_measure,
    "diagram": _run_diagram,
    "fmt": _run_fmt,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"qcosmic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"qcosmic: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
