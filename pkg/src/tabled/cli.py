"""Command line: check, run, test, import-csv, datasheet.

Exit status: 0 success, 1 static or validation error, 2 runtime error,
3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .csvio import CsvError, import_csv_file, table_to_literal
from .datasheet import build_datasheet
from .diagnostics import render_all, render_diagnostic
from .errors import BenchError, ManifestError
from .harness import SuiteConfig, default_corpus_dir, load_corpus, load_tables, run_suite
from .interp import DEFAULT_SEED, EvalConfig
from .pipeline import check_source, run_checked

EXIT_OK, EXIT_STATIC, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2, 3
SEED_ENV = "TABLED_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    try:
        EvalConfig(seed=value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return _seed(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tabled", description="Check and run table programs, and run the benchmark corpus.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def corpus_opt(q):
        q.add_argument("--corpus", type=Path, default=None, help="corpus directory (default: the bundled corpus)")

    c = sub.add_parser("check", help="type-check programs and print diagnostics")
    c.add_argument("files", nargs="+", type=Path)
    c.add_argument("--machine", action="store_true", help="print diagnostics as NDJSON")
    corpus_opt(c)

    r = sub.add_parser("run", help="check and then evaluate a program")
    r.add_argument("file", type=Path)
    r.add_argument("--machine", action="store_true")
    r.add_argument("--ensure", action="store_true", help="check predicted schemas against results at run time")
    r.add_argument("--force", action="store_true", help="run even if the checker reports errors")
    r.add_argument("--seed", type=_seed, default=None, help=f"PRNG seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    corpus_opt(r)

    t = sub.add_parser("test", help="run the conformance suite")
    t.add_argument("corpus_dir", nargs="?", type=Path, default=None)
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--seed", type=_seed, default=None)

    i = sub.add_parser("import-csv", help="convert a CSV file to a table literal")
    i.add_argument("file", type=Path)
    i.add_argument("--schema", type=Path, default=None, help="sidecar schema: one table header line")
    i.add_argument("-o", "--output", type=Path, default=None)
    i.add_argument("--machine", action="store_true")

    d = sub.add_parser("datasheet", help="write the datasheet in Markdown")
    d.add_argument("-o", "--output", type=Path, default=None)
    d.add_argument("--date", type=dt.date.fromisoformat, default=None, help="date to record (default: today)")
    corpus_opt(d)
    return p


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(path: Optional[Path], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _corpus(root: Optional[Path]):
    try:
        return load_corpus(root)
    except ManifestError as exc:
        raise UsageError(str(exc)) from None


def _globals(root: Optional[Path]):
    tables, _ = load_tables(_corpus(root))
    return tables


def _print_diags(diags, machine: bool, sources: dict, stream) -> None:
    if diags:
        stream.write(render_all(diags, "machine" if machine else "human", sources) + "\n")


def cmd_check(args) -> int:
    env = _globals(args.corpus)
    status = EXIT_OK
    for path in args.files:
        source = _read(path)
        checked = check_source(source, str(path), env)
        _print_diags(checked.diagnostics, args.machine, {str(path): source}, sys.stdout)
        if not checked.ok:
            status = EXIT_STATIC
    return status


def cmd_run(args) -> int:
    env = _globals(args.corpus)
    source = _read(args.file)
    checked = check_source(source, str(args.file), env)
    sources = {str(args.file): source}
    _print_diags(checked.diagnostics, args.machine, sources, sys.stderr)
    if checked.program is None or (not checked.ok and not args.force):
        return EXIT_STATIC
    seed = args.seed if args.seed is not None else default_seed()
    ran = run_checked(checked, env, EvalConfig(args.ensure, seed, sys.stdout))
    if ran.error is not None:
        sys.stdout.flush()
        mode = "machine" if args.machine else "human"
        sys.stderr.write(render_diagnostic(ran.error, mode, source) + "\n")
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_test(args) -> int:
    entries = _corpus(args.corpus_dir)
    seed = args.seed if args.seed is not None else default_seed()
    report = run_suite(entries, SuiteConfig(ensure_mode=True, seed=seed, jobs=max(1, args.jobs)))
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_STATIC


def cmd_import_csv(args) -> int:
    if not args.file.is_file():
        raise UsageError(f"cannot read {args.file}: no such file")
    if args.schema is not None and not args.schema.is_file():
        raise UsageError(f"cannot read {args.schema}: no such file")
    try:
        table = import_csv_file(args.file, args.schema)
    except CsvError as exc:
        _print_diags(exc.diagnostics, args.machine, {}, sys.stderr)
        return EXIT_STATIC
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    _write(args.output, table_to_literal(table))
    return EXIT_OK


def cmd_datasheet(args) -> int:
    entries = _corpus(args.corpus)
    report = run_suite(entries)
    _write(args.output, build_datasheet(entries, report, args.date))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "test": cmd_test,
    "import-csv": cmd_import_csv,
    "datasheet": cmd_datasheet,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"tabled: {exc}\n")
        return EXIT_USAGE
    except BenchError as exc:  # should not escape the commands, but never crash with a traceback
        sys.stderr.write(f"tabled: {exc.kind.value}: {exc.message}\n")
        return EXIT_STATIC


if __name__ == "__main__":
    sys.exit(main())
