"""Structured diagnostics: categories, spans, ranked suggestions, rendering."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import CODES, BenchError, ContractViolation, Kind, SourceSpan

ERROR = "error"
WARNING = "warning"

WARNING_KINDS = {Kind.UNUSED_BINDING, Kind.POSSIBLY_MISSING, Kind.UNCHECKED_FUNCTION}

RENAME_TO = "RenameTo"
REWRITE_TO = "RewriteTo"
REORDER_COLUMNS = "ReorderColumns"


@dataclass(frozen=True)
class Suggestion:
    kind: str
    text: str
    score: float
    permutation: Optional[tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 < self.score <= 1:
            raise ValueError(f"suggestion score {self.score} outside (0, 1]")


@dataclass
class Diagnostic:
    severity: str
    kind: Kind
    span: SourceSpan
    message: str
    expected: Optional[str] = None
    actual: Optional[str] = None
    suggestions: list[Suggestion] = field(default_factory=list)
    sub: Optional[Kind] = None
    cell: Optional[tuple[int, str]] = None  # 1-based data row, column name

    def __post_init__(self):
        if not self.message:
            raise ValueError("diagnostic message must not be empty")
        self.suggestions = sorted(self.suggestions, key=lambda s: -s.score)

    @property
    def code(self) -> str:
        return CODES[self.kind]

    @property
    def category(self) -> str:
        if self.kind is Kind.CONTRACT_VIOLATION and self.sub is not None:
            return f"ContractViolation({self.sub.value})"
        return self.kind.value

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def key(self):
        s = self.span
        return (s.file, s.start_line, s.start_col, s.end_line, s.end_col, self.code, self.message)

    @classmethod
    def from_error(cls, exc: BenchError, fallback: SourceSpan) -> Diagnostic:
        """Wrap a raised error (runtime or validation) as a diagnostic."""
        span = exc.span or fallback
        message = exc.message
        if exc.trace:
            message += " (" + "; ".join(exc.trace) + ")"
        direct = exc.kind in CODES and exc.kind not in WARNING_KINDS and exc.kind is not Kind.CONTRACT_VIOLATION
        if direct and not isinstance(exc, ContractViolation):
            return cls(ERROR, exc.kind, span, message, cell=exc.details.get("cell"))
        return cls(ERROR, Kind.CONTRACT_VIOLATION, span, message, sub=exc.kind)


def sort_diagnostics(diags: Sequence[Diagnostic]) -> list[Diagnostic]:
    unique = {}
    for d in diags:
        unique.setdefault(d.key(), d)
    return sorted(unique.values(), key=lambda d: (d.span.file, d.span.start_line, d.span.start_col, d.code, d.message))


# --------------------------------------------------------------------------
# edit distance and column suggestions
# --------------------------------------------------------------------------


def damerau_levenshtein(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner)."""
    inf = len(a) + len(b)
    last_row: dict[str, int] = {}
    d = [[inf] * (len(b) + 2) for _ in range(len(a) + 2)]
    for i in range(len(a) + 1):
        d[i + 1][0] = inf
        d[i + 1][1] = i
    for j in range(len(b) + 1):
        d[0][j + 1] = inf
        d[1][j + 1] = j
    for i in range(1, len(a) + 1):
        last_match_col = 0
        for j in range(1, len(b) + 1):
            i1 = last_row.get(b[j - 1], 0)
            j1 = last_match_col
            cost = 0 if a[i - 1] == b[j - 1] else 1
            if cost == 0:
                last_match_col = j
            d[i + 1][j + 1] = min(
                d[i][j] + cost,
                d[i + 1][j] + 1,
                d[i][j + 1] + 1,
                d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1),
            )
        last_row[a[i - 1]] = i
    return d[len(a) + 1][len(b) + 1]


def rename_threshold(bad: str) -> int:
    return max(2, math.ceil(len(bad) / 4))


_CONNECTIVES = ((" and ", "and"), (" or ", "or"))


def suggest_columns(bad: str, header: Sequence[str], row_text: Optional[str] = "r") -> list[Suggestion]:
    """Ranked fixes for a reference to a column that does not exist.

    A name that splits on " and " / " or " into existing columns yields a
    rewrite combining the parts (ranked first, together with a rename to each
    part); other near-miss names yield renames scored by similarity.
    """
    out: list[Suggestion] = []
    seen: set[tuple[str, str]] = set()

    def add(s: Suggestion):
        if (s.kind, s.text) not in seen and s.text != bad:
            seen.add((s.kind, s.text))
            out.append(s)

    if row_text is not None:
        for token, op in _CONNECTIVES:
            parts = bad.split(token)
            if len(parts) >= 2 and all(p in header for p in parts):
                text = f" {op} ".join(f'{row_text}["{p}"]' for p in parts)
                add(Suggestion(REWRITE_TO, text, 1.0))
                for p in parts:
                    add(Suggestion(RENAME_TO, p, max(len(p) / len(bad), 0.01)))
    limit = rename_threshold(bad)
    for name in header:
        if name == bad:
            continue
        dist = damerau_levenshtein(bad, name)
        score = 1 - dist / max(len(bad), len(name))
        if dist <= limit and score > 0:
            add(Suggestion(RENAME_TO, name, score))
    order = {s: i for i, s in enumerate(out)}
    return sorted(out, key=lambda s: (-s.score, order[s]))


# --------------------------------------------------------------------------
# swapped-column detection for table literals
# --------------------------------------------------------------------------


def _moves(ncols: int):
    for i, j in itertools.combinations(range(ncols), 2):
        perm = list(range(ncols))
        perm[i], perm[j] = perm[j], perm[i]
        yield tuple(perm)
    for i, j, k in itertools.combinations(range(ncols), 3):
        for a, b, c in ((j, k, i), (k, i, j)):
            perm = list(range(ncols))
            perm[i], perm[j], perm[k] = a, b, c
            yield tuple(perm)


def describe_permutation(header: Sequence[str], perm: Sequence[int]) -> str:
    moved = [h for h in range(len(perm)) if perm[h] != h]
    if len(moved) == 2:
        a, b = moved
        return f'swap columns "{header[a]}" and "{header[b]}"'
    parts = [f'the data under "{header[perm[h]]}" belongs under "{header[h]}"' for h in moved]
    return "reorder columns: " + ", ".join(parts)


def detect_column_swap(
    header: Sequence[str],
    rows: Sequence[Sequence[object]],
    fits: Callable[[object, int], bool],
) -> Optional[Suggestion]:
    """Find a permutation moving at most three columns that makes every cell fit.

    ``rows[r][d]`` describes the cell in data column ``d``; ``fits(cell, h)``
    says whether it belongs under header column ``h``. ``perm[h]`` is the
    data column that should sit under header column ``h``. Transpositions are
    tried before 3-cycles; the first success wins.
    """
    ncols = len(header)
    if any(len(row) != ncols for row in rows):
        return None
    for perm in _moves(ncols):
        if all(fits(row[perm[h]], h) for row in rows for h in range(ncols)):
            return Suggestion(REORDER_COLUMNS, describe_permutation(header, perm), 1.0, perm)
    return None


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def to_record(d: Diagnostic) -> dict:
    rec = {
        "code": d.code,
        "severity": d.severity,
        "category": d.category,
        "file": d.span.file,
        "startLine": d.span.start_line,
        "startCol": d.span.start_col,
        "endLine": d.span.end_line,
        "endCol": d.span.end_col,
        "message": d.message,
    }
    if d.expected is not None:
        rec["expected"] = d.expected
    if d.actual is not None:
        rec["actual"] = d.actual
    rec["suggestions"] = [{"kind": s.kind, "text": s.text, "score": round(s.score, 4)} for s in d.suggestions]
    return rec


def render_diagnostic(d: Diagnostic, mode: str = "human", source: Optional[str] = None) -> str:
    if mode == "machine":
        return json.dumps(to_record(d), ensure_ascii=False)
    s = d.span
    lines = [f"{d.severity}[{d.code}] {d.category}: {d.message}", f"  --> {s.file}:{s.start_line}:{s.start_col}"]
    if source is not None:
        src_lines = source.splitlines()
        if 1 <= s.start_line <= len(src_lines):
            text = src_lines[s.start_line - 1]
            width = len(str(s.start_line))
            end_col = s.end_col if s.end_line == s.start_line else len(text) + 1
            carets = "^" * max(1, end_col - s.start_col)
            lines.append(f"{' ' * width} |")
            lines.append(f"{s.start_line} | {text}")
            lines.append(f"{' ' * width} | {' ' * (s.start_col - 1)}{carets}")
    if d.cell is not None:
        lines.append(f'  = at data row {d.cell[0]}, column "{d.cell[1]}"')
    if d.expected is not None:
        lines.append(f"  = expected: {d.expected}")
    if d.actual is not None:
        lines.append(f"  = actual:   {d.actual}")
    if d.suggestions:
        lines.append("  suggestions:")
        for i, sug in enumerate(d.suggestions, 1):
            label = {RENAME_TO: "rename", REWRITE_TO: "rewrite", REORDER_COLUMNS: "reorder"}[sug.kind]
            lines.append(f"    {i}. {sug.text}  ({label}, score {sug.score:.2f})")
    return "\n".join(lines)


def render_all(diags: Sequence[Diagnostic], mode: str = "human", sources: Optional[dict[str, str]] = None) -> str:
    sources = sources or {}
    sep = "\n" if mode == "machine" else "\n\n"
    return sep.join(render_diagnostic(d, mode, sources.get(d.span.file)) for d in diags)
