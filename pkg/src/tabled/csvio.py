"""CSV import: comma-separated, double-quote quoting, first record is the header.

Without a schema each column's sort is inferred: Number when every non-empty
field parses as a number, Boolean when every non-empty field is ``true`` or
``false``, String otherwise. A column with any empty field is optional. With
a schema (a table header such as ``name: String | age: Number?``) fields are
converted to the declared sorts and validated instead.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import model as M
from .diagnostics import ERROR, Diagnostic
from .errors import BenchError, Kind, SourceSpan, TableError
from .interp import annotation_sort
from .model import MISSING, ColName, Column, Schema, Table
from .render import render_table
from .syntax.parser import parse_table_literal

NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


class CsvError(Exception):
    """Import failed; carries diagnostics pointing into the CSV file."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass
class Record:
    line: int  # 1-based line where the record starts
    cols: list[int]  # 1-based character column where each field starts
    fields: list[str]


def _field_starts(raw_line: str) -> list[int]:
    starts, quoted, i = [1], False, 0
    while i < len(raw_line):
        ch = raw_line[i]
        if ch == '"':
            if quoted and i + 1 < len(raw_line) and raw_line[i + 1] == '"':
                i += 1
            else:
                quoted = not quoted
        elif ch == "," and not quoted:
            starts.append(i + 2)
        i += 1
    return starts


def read_records(text: str) -> list[Record]:
    lines = text.splitlines()
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    out: list[Record] = []
    start = 1
    for fields in reader:
        raw = lines[start - 1] if start - 1 < len(lines) else ""
        cols = _field_starts(raw)
        cols += [1] * (len(fields) - len(cols))
        if fields:  # skip blank lines
            out.append(Record(start, cols, fields))
        start = reader.line_num + 1
    return out


def parse_number(text: str) -> Optional[float]:
    return float(text) if NUMBER_RE.fullmatch(text.strip()) else None


def infer_column(values: list[str]) -> tuple[M.Sort, bool]:
    present = [v for v in values if v != ""]
    optional = len(present) < len(values)
    if all(parse_number(v) is not None for v in present):
        return M.NUMBER, optional
    if all(v in ("true", "false") for v in present):
        return M.BOOLEAN, optional
    return M.STRING, optional


def convert(text: str, sort: M.Sort):
    """Field text as a value of ``sort``, or None when it does not fit."""
    if isinstance(sort, M.NumberSort):
        return parse_number(text)
    if isinstance(sort, M.BooleanSort):
        return {"true": True, "false": False}.get(text)
    if isinstance(sort, M.StringSort):
        return text
    if isinstance(sort, M.ColNameSort):
        return ColName(text) if text else None
    return None


def load_schema(source: str, file: str = "<schema>") -> Schema:
    """Read a sidecar schema written as a table-literal header line."""
    lit = parse_table_literal("table:\n  " + source.strip() + "\nend\n", file)
    cols = []
    for h in lit.header:
        if h.sort is None:
            raise TableError(Kind.SORT_MISMATCH, f'schema column "{h.name}" has no sort', h.span)
        if h.sort.name == "Seq":
            raise TableError(Kind.SORT_MISMATCH, f'schema column "{h.name}": sequences cannot be read from CSV', h.span)
        cols.append(Column(h.name, annotation_sort(h.sort), h.sort.optional))
    return Schema(tuple(cols))


def _fields(n: int) -> str:
    return f"{n} field{'' if n == 1 else 's'}"


def _diag(file: str, line: int, col: int, kind: Kind, message: str, **kw) -> Diagnostic:
    return Diagnostic(ERROR, kind, SourceSpan(file, line, col, line, col + 1), message, **kw)


def import_csv(text: str, file: str = "<csv>", schema: Optional[Schema] = None) -> Table:
    """Parse CSV text into a table; raises CsvError with located diagnostics."""
    try:
        records = read_records(text)
    except csv.Error as exc:
        raise CsvError([_diag(file, 1, 1, Kind.PARSE_ERROR, f"malformed CSV: {exc}")]) from None
    if not records:
        raise CsvError([_diag(file, 1, 1, Kind.PARSE_ERROR, "the file has no header record")])
    head, body = records[0], records[1:]
    problems: list[Diagnostic] = []
    seen: set[str] = set()
    for name, col in zip(head.fields, head.cols):
        if name == "":
            problems.append(_diag(file, head.line, col, Kind.CONTRACT_VIOLATION, "empty column name", sub=Kind.EMPTY_NAME))
        elif name in seen:
            problems.append(_diag(file, head.line, col, Kind.DUPLICATE_COLUMN, f'column name "{name}" appears more than once'))
        seen.add(name)
    width = len(head.fields)
    for rec in body:
        if len(rec.fields) != width:
            problems.append(
                _diag(file, rec.line, 1, Kind.RAGGED_ROW, f"record has {_fields(len(rec.fields))} but the header has {width}")
            )
    if problems:
        raise CsvError(problems)

    if schema is None:
        columns = []
        for c, name in enumerate(head.fields):
            sort, optional = infer_column([rec.fields[c] for rec in body])
            columns.append(Column(name, sort, optional))
        schema = Schema(tuple(columns))
    elif schema.names != tuple(head.fields):
        raise CsvError(
            [_diag(file, head.line, 1, Kind.SORT_MISMATCH, "the CSV header does not match the schema",
                   expected=", ".join(schema.names), actual=", ".join(head.fields))]
        )

    rows = []
    for rec in body:
        row = []
        for c, (col, text) in enumerate(zip(schema.columns, rec.fields)):
            if text == "":
                if not col.optional:
                    problems.append(_diag(file, rec.line, rec.cols[c], Kind.ILLEGAL_MISSING,
                                          f'empty field in column "{col.name}", which is not optional'))
                row.append(MISSING)
                continue
            value = convert(text, col.sort)
            if value is None:
                problems.append(_diag(file, rec.line, rec.cols[c], Kind.SORT_MISMATCH,
                                      f'"{text}" in column "{col.name}" is not a {col.sort}',
                                      expected=str(col.sort), actual=repr(text)))
                row.append(MISSING)
                continue
            row.append(value)
        rows.append(row)
    if problems:
        raise CsvError(problems)
    try:
        return M.validate_table(schema, rows)
    except BenchError as exc:  # pragma: no cover - every case is reported above
        raise CsvError([Diagnostic.from_error(exc, SourceSpan(file, 1, 1, 1, 1))]) from None


def import_csv_file(path: Path | str, schema_path: Path | str | None = None) -> Table:
    path = Path(path)
    schema = None
    if schema_path is not None:
        schema_path = Path(schema_path)
        try:
            schema = load_schema(schema_path.read_text(encoding="utf-8"), str(schema_path))
        except BenchError as exc:
            raise CsvError([Diagnostic.from_error(exc, SourceSpan(str(schema_path), 1, 1, 1, 1))]) from None
    return import_csv(path.read_text(encoding="utf-8-sig"), str(path), schema)


def table_to_literal(t: Table) -> str:
    return render_table(t) + "\n"
