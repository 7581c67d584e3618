"""Source-to-result plumbing shared by the corpus runner and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from .checker.check import CheckResult, check_program
from .diagnostics import Diagnostic
from .errors import BenchError, SourceSpan
from .interp import Env, EvalConfig, EvalResult, Interpreter, eval_program
from .model import Table
from .syntax import ast as A
from .syntax.parser import parse_source, parse_table_literal


def start_of(file: str) -> SourceSpan:
    return SourceSpan(file, 1, 1, 1, 1)


@dataclass
class Checked:
    """A parsed and checked program; ``program`` is None when parsing failed."""

    file: str
    source: str
    program: Optional[A.Program]
    result: CheckResult

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return self.result.diagnostics

    @property
    def ok(self) -> bool:
        return self.program is not None and self.result.ok


@dataclass
class Ran:
    """Outcome of evaluating a checked program."""

    output: str
    bindings: dict[str, Any] = field(default_factory=dict)
    error: Optional[Diagnostic] = None


def check_source(source: str, file: str, env: Optional[Mapping[str, Table]] = None) -> Checked:
    try:
        program = parse_source(source, file)
    except BenchError as exc:
        return Checked(file, source, None, CheckResult([Diagnostic.from_error(exc, start_of(file))]))
    return Checked(file, source, program, check_program(program, env, file))


def run_checked(checked: Checked, env: Optional[Mapping[str, Table]], config: EvalConfig) -> Ran:
    """Evaluate a parsed program, turning a raised error into a diagnostic.

    Output printed before a failure is kept.
    """
    assert checked.program is not None
    interp = Interpreter(env, config, checked.result.predicted)
    try:
        result: EvalResult = interp.run(checked.program)
    except BenchError as exc:
        printed = "".join(line + "\n" for line in interp.lines)
        return Ran(printed, error=Diagnostic.from_error(exc, start_of(checked.file)))
    return Ran(result.output, result.bindings)


def load_table(path: Path | str) -> Table:
    """Read a file holding one table literal; raises BenchError when it is malformed."""
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    lit = parse_table_literal(source, str(path))
    return Interpreter().eval(lit, Env())


def check_table_source(source: str, file: str) -> list[Diagnostic]:
    """Static diagnostics for a file holding one table literal."""
    try:
        lit = parse_table_literal(source, file)
    except BenchError as exc:
        return [Diagnostic.from_error(exc, start_of(file))]
    return check_program(A.Program([A.ExprStmt(lit, span=lit.span)], span=lit.span), None, file).diagnostics


__all__ = ["Checked", "Ran", "check_source", "check_table_source", "eval_program", "load_table", "run_checked"]
