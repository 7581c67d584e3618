"""Render runtime tables as ``table:`` literals that parse back to the same table."""

from __future__ import annotations

from typing import Any

from .model import (
    MISSING,
    BooleanSort,
    ColName,
    ColNameSort,
    Column,
    NumberSort,
    SeqSort,
    Sort,
    StringSort,
    Table,
    format_number,
)
from .syntax.printer import quote

INDENT = "  "


def sort_annotation(sort: Sort) -> str | None:
    """Surface spelling of a sort, or None when the surface syntax has none."""
    if isinstance(sort, NumberSort):
        return "Number"
    if isinstance(sort, StringSort):
        return "String"
    if isinstance(sort, BooleanSort):
        return "Boolean"
    if isinstance(sort, ColNameSort):
        return "ColName"
    if isinstance(sort, SeqSort):
        inner = sort_annotation(sort.elem)
        return None if inner is None else f"Seq<{inner}>"
    return None


def _header_cell(col: Column) -> str:
    ann = sort_annotation(col.sort)
    if ann is None:
        return quote(col.name)
    return f"{quote(col.name)}: {ann}{'?' if col.optional else ''}"


def render_value(v: Any, level: int = 0) -> str:
    if v is MISSING:
        return "_"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return format_number(v)
    if isinstance(v, ColName):
        return quote(v.text)
    if isinstance(v, str):
        return quote(v)
    if isinstance(v, tuple):
        return "[" + ", ".join(render_value(x, level) for x in v) + "]"
    if isinstance(v, Table):
        return render_table(v, level)
    raise TypeError(f"cannot render {v!r}")


def render_table(t: Table, level: int = 0) -> str:
    pad = INDENT * level
    inner = INDENT * (level + 1)
    lines = ["table:", inner + " | ".join(_header_cell(c) for c in t.schema.columns)]
    for row in t.rows:
        lines.append(inner + " | ".join(render_value(v, level + 1) for v in row))
    lines.append(pad + "end")
    return "\n".join(lines)
