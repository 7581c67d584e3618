"""Corpus manifest loading and the conformance runner."""

from __future__ import annotations

import difflib
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .diagnostics import Diagnostic
from .errors import BenchError, ManifestError
from .interp import DEFAULT_SEED, EvalConfig
from .model import Table
from .pipeline import check_source, load_table, run_checked

MANIFEST = "corpus.toml"
KINDS = ("table", "program", "error")


def default_corpus_dir() -> Path:
    return Path(str(resources.files("tabled") / "corpus"))


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    kind: str  # table | program | error
    path: Path
    tables: tuple[str, ...] = ()
    # tables
    schema: tuple[str, ...] = ()
    nrows: Optional[int] = None
    # programs
    output: Optional[Path] = None
    # errors
    category: Optional[str] = None
    line: Optional[int] = None
    column: Optional[int] = None
    suggestion: Optional[str] = None
    suggestion_kind: Optional[str] = None
    runtime: bool = False
    reconstructed: bool = False
    corrected: Optional[Path] = None
    task: str = ""
    explanation: str = ""


_FIELDS = {
    "table": {"id", "path", "schema", "nrows"},
    "program": {"id", "path", "tables", "output"},
    "error": {
        "id", "path", "tables", "category", "line", "column", "suggestion", "suggestion_kind",
        "runtime", "reconstructed", "corrected", "task", "explanation",
    },
}
_REQUIRED = {
    "table": {"id", "path", "schema", "nrows"},
    "program": {"id", "path", "output"},
    "error": {"id", "path", "category", "line", "column"},
}


def load_corpus(root: Path | str | None = None) -> list[CorpusEntry]:
    """Parse ``corpus.toml`` under ``root``; raises ManifestError on any problem."""
    root = Path(root) if root is not None else default_corpus_dir()
    manifest = root / MANIFEST
    try:
        data = tomllib.loads(manifest.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError(str(manifest), "manifest file not found") from None
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(str(manifest), f"malformed TOML: {exc}") from None

    unknown_sections = set(data) - set(KINDS)
    if unknown_sections:
        raise ManifestError(str(manifest), f"unknown sections {sorted(unknown_sections)}")

    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for kind in KINDS:
        for raw in data.get(kind, []):
            where = f"{manifest} [{kind}] {raw.get('id', '?')}"
            missing = _REQUIRED[kind] - set(raw)
            if missing:
                raise ManifestError(where, f"missing keys {sorted(missing)}")
            extra = set(raw) - _FIELDS[kind]
            if extra:
                raise ManifestError(where, f"unknown keys {sorted(extra)}")
            if raw["id"] in seen:
                raise ManifestError(where, f'duplicate id "{raw["id"]}"')
            seen.add(raw["id"])
            paths = {}
            for key in ("path", "output", "corrected"):
                if key in raw:
                    p = root / raw[key]
                    if not p.is_file():
                        raise ManifestError(where, f"{key} {raw[key]} does not exist")
                    paths[key] = p
            entries.append(
                CorpusEntry(
                    id=raw["id"],
                    kind=kind,
                    path=paths["path"],
                    tables=tuple(raw.get("tables", ())),
                    schema=tuple(raw.get("schema", ())),
                    nrows=raw.get("nrows"),
                    output=paths.get("output"),
                    category=raw.get("category"),
                    line=raw.get("line"),
                    column=raw.get("column"),
                    suggestion=raw.get("suggestion"),
                    suggestion_kind=raw.get("suggestion_kind"),
                    runtime=bool(raw.get("runtime", False)),
                    reconstructed=bool(raw.get("reconstructed", False)),
                    corrected=paths.get("corrected"),
                    task=raw.get("task", ""),
                    explanation=raw.get("explanation", ""),
                )
            )

    table_ids = {e.id for e in entries if e.kind == "table"}
    for e in entries:
        for t in e.tables:
            if t not in table_ids:
                raise ManifestError(f"{manifest} [{e.kind}] {e.id}", f'unknown table "{t}"')
    return entries


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


@dataclass
class SuiteConfig:
    ensure_mode: bool = True
    seed: int = DEFAULT_SEED
    jobs: int = 1


@dataclass
class EntryResult:
    id: str
    kind: str
    passed: bool
    detail: str = ""


@dataclass
class ConformanceReport:
    results: list[EntryResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[EntryResult]:
        return [r for r in self.results if not r.passed]

    def render(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.kind:<7} {r.id}")
            if not r.passed and r.detail:
                lines.extend("        " + d for d in r.detail.splitlines())
        n = len(self.results)
        lines.append(f"{n - len(self.failures)}/{n} entries passed")
        return "\n".join(lines) + "\n"


def load_tables(entries: list[CorpusEntry]) -> tuple[dict[str, Table], dict[str, str]]:
    """Tables that load, plus an error message for each that does not."""
    tables, broken = {}, {}
    for e in entries:
        if e.kind != "table":
            continue
        try:
            tables[e.id] = load_table(e.path)
        except BenchError as exc:
            broken[e.id] = f"{exc.kind.value}: {exc.message}"
    return tables, broken


def _check_table(e: CorpusEntry, tables, broken) -> EntryResult:
    if e.id in broken:
        return EntryResult(e.id, e.kind, False, broken[e.id])
    t = tables[e.id]
    actual = tuple(str(c) for c in t.schema.columns)
    problems = []
    if actual != e.schema:
        problems.append(f"schema: expected {list(e.schema)}, got {list(actual)}")
    if t.nrows != e.nrows:
        problems.append(f"nrows: expected {e.nrows}, got {t.nrows}")
    return EntryResult(e.id, e.kind, not problems, "\n".join(problems))


def _env_for(e: CorpusEntry, tables, broken):
    bad = [t for t in e.tables if t in broken]
    if bad:
        return None, f"tables failed to load: {bad}"
    return {t: tables[t] for t in e.tables}, ""


def _diag_line(d: Diagnostic) -> str:
    first = f" [{d.suggestions[0].kind}: {d.suggestions[0].text}]" if d.suggestions else ""
    return f"{d.category} at {d.span.start_line}:{d.span.start_col}: {d.message}{first}"


def _run_program(e: CorpusEntry, tables, broken, cfg: SuiteConfig) -> EntryResult:
    env, why = _env_for(e, tables, broken)
    if env is None:
        return EntryResult(e.id, e.kind, False, why)
    checked = check_source(e.path.read_text(encoding="utf-8"), str(e.path), env)
    errors = [d for d in checked.diagnostics if d.is_error]
    if errors:
        return EntryResult(e.id, e.kind, False, "\n".join(_diag_line(d) for d in errors))
    ran = run_checked(checked, env, EvalConfig(cfg.ensure_mode, cfg.seed, _NullSink()))
    if ran.error is not None:
        return EntryResult(e.id, e.kind, False, "runtime error: " + _diag_line(ran.error))
    expected = e.output.read_text(encoding="utf-8")
    if ran.output != expected:
        diff = difflib.unified_diff(
            expected.splitlines(), ran.output.splitlines(), "expected", "actual", lineterm=""
        )
        return EntryResult(e.id, e.kind, False, "\n".join(diff))
    return EntryResult(e.id, e.kind, True)


def _first_error(e: CorpusEntry, env, cfg: SuiteConfig) -> tuple[Optional[Diagnostic], str]:
    checked = check_source(e.path.read_text(encoding="utf-8"), str(e.path), env)
    errors = [d for d in checked.diagnostics if d.is_error]
    if not e.runtime:
        if not errors:
            return None, "the checker reported no error"
        return errors[0], ""
    if errors:
        return None, "expected a runtime error, but the checker rejected the program: " + _diag_line(errors[0])
    ran = run_checked(checked, env, EvalConfig(cfg.ensure_mode, cfg.seed, _NullSink()))
    if ran.error is None:
        return None, "expected a runtime error, but the program ran to completion"
    return ran.error, ""


def _run_error(e: CorpusEntry, tables, broken, cfg: SuiteConfig) -> EntryResult:
    env, why = _env_for(e, tables, broken)
    if env is None:
        return EntryResult(e.id, e.kind, False, why)
    d, why = _first_error(e, env, cfg)
    if d is None:
        return EntryResult(e.id, e.kind, False, why)
    problems = []
    if d.category != e.category:
        problems.append(f"category: expected {e.category}, got {d.category}")
    if (d.span.start_line, d.span.start_col) != (e.line, e.column):
        problems.append(f"location: expected {e.line}:{e.column}, got {d.span.start_line}:{d.span.start_col}")
    if e.suggestion is not None:
        top = d.suggestions[0] if d.suggestions else None
        if top is None or top.text != e.suggestion or (e.suggestion_kind and top.kind != e.suggestion_kind):
            shown = f"{top.kind}: {top.text}" if top else "none"
            problems.append(f"first suggestion: expected {e.suggestion_kind}: {e.suggestion}, got {shown}")
    if e.corrected is not None:
        fixed = check_source(e.corrected.read_text(encoding="utf-8"), str(e.corrected), env)
        fixed_errors = [x for x in fixed.diagnostics if x.is_error]
        if fixed_errors:
            problems.append("corrected program does not check: " + _diag_line(fixed_errors[0]))
        else:
            ran = run_checked(fixed, env, EvalConfig(cfg.ensure_mode, cfg.seed, _NullSink()))
            if ran.error is not None:
                problems.append("corrected program fails: " + _diag_line(ran.error))
    if problems:
        problems.append("diagnostic: " + _diag_line(d))
    return EntryResult(e.id, e.kind, not problems, "\n".join(problems))


class _NullSink:
    def write(self, text: str) -> int:
        return len(text)


def run_suite(entries: list[CorpusEntry], cfg: Optional[SuiteConfig] = None) -> ConformanceReport:
    """Run every entry; the report is ordered by entry id whatever the job count."""
    cfg = cfg or SuiteConfig()
    tables, broken = load_tables(entries)

    def run(e: CorpusEntry) -> EntryResult:
        try:
            if e.kind == "table":
                return _check_table(e, tables, broken)
            if e.kind == "program":
                return _run_program(e, tables, broken, cfg)
            return _run_error(e, tables, broken, cfg)
        except BenchError as exc:
            return EntryResult(e.id, e.kind, False, f"{exc.kind.value}: {exc.message}")

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run, entries))
    else:
        results = [run(e) for e in entries]
    return ConformanceReport(sorted(results, key=lambda r: r.id))
