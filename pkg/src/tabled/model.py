"""Runtime data model: sorts, schemas, cells, rows and immutable tables.

A :class:`Table` can only be built through validation, so every table object in
the system is rectangular, has distinct column names, and holds sort-valid
cells. Missing data is the :data:`MISSING` sentinel and is legal only in
columns whose schema entry is marked optional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .errors import ColumnNameError, Kind, TableError

# --------------------------------------------------------------------------
# Sorts
# --------------------------------------------------------------------------


class Sort:
    """The kind of data a column holds. Equality is structural."""

    __slots__ = ()


@dataclass(frozen=True)
class NumberSort(Sort):
    def __str__(self):
        return "Number"


@dataclass(frozen=True)
class BooleanSort(Sort):
    def __str__(self):
        return "Boolean"


@dataclass(frozen=True)
class StringSort(Sort):
    def __str__(self):
        return "String"


@dataclass(frozen=True)
class ColNameSort(Sort):
    def __str__(self):
        return "ColName"


@dataclass(frozen=True)
class NothingSort(Sort):
    """Element sort of a sequence or column that has no values at all."""

    def __str__(self):
        return "Nothing"


@dataclass(frozen=True)
class SeqSort(Sort):
    elem: Sort

    def __str__(self):
        return f"Seq<{self.elem}>"


@dataclass(frozen=True)
class TableSort(Sort):
    schema: Schema

    def __str__(self):
        return f"Table<{self.schema}>"


NUMBER = NumberSort()
BOOLEAN = BooleanSort()
STRING = StringSort()
COLNAME = ColNameSort()
NOTHING = NothingSort()

ORDERED_SORTS = (NUMBER, STRING, BOOLEAN)


def join_sorts(a: Sort, b: Sort) -> Sort | None:
    """Least sort covering both, where ``Nothing`` sits below everything."""
    if a == b:
        return a
    if isinstance(a, NothingSort):
        return b
    if isinstance(b, NothingSort):
        return a
    if {a, b} == {STRING, COLNAME}:
        return COLNAME
    if isinstance(a, SeqSort) and isinstance(b, SeqSort):
        elem = join_sorts(a.elem, b.elem)
        return None if elem is None else SeqSort(elem)
    return None


# --------------------------------------------------------------------------
# Values
# --------------------------------------------------------------------------


class _Missing:
    __slots__ = ()

    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return "MISSING"


MISSING = _Missing()


@dataclass(frozen=True)
class ColName:
    """A first-class column name."""

    text: str

    def __post_init__(self):
        if not isinstance(self.text, str):
            raise TypeError(f"column name must be text, got {self.text!r}")
        if not self.text:
            raise ColumnNameError(Kind.EMPTY_NAME, "column names must not be empty")

    def __str__(self):
        return self.text


def name_text(n: ColName | str) -> str:
    return n.text if isinstance(n, ColName) else n


def is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def sort_of_value(v: Any) -> Sort:
    """The sort a single (present) value belongs to."""
    if isinstance(v, bool):
        return BOOLEAN
    if is_number(v):
        return NUMBER
    if isinstance(v, ColName):
        return COLNAME
    if isinstance(v, str):
        return STRING
    if isinstance(v, tuple):
        return SeqSort(sort_of_elements(v))
    if isinstance(v, Table):
        return TableSort(v.schema)
    raise TypeError(f"not a table value: {v!r}")


def sort_of_elements(values: Iterable[Any]) -> Sort:
    """Common sort of the present values; ``Nothing`` when there are none.

    Raises ``TypeError`` when the values disagree.
    """
    sort: Sort = NOTHING
    for v in values:
        if v is MISSING:
            continue
        joined = join_sorts(sort, sort_of_value(v))
        if joined is None:
            raise TypeError(f"values of sorts {sort} and {sort_of_value(v)} cannot share a column")
        sort = joined
    return sort


def conform(v: Any, sort: Sort) -> tuple[bool, Any]:
    """Check ``v`` against ``sort``; returns (ok, normalized value).

    Numbers normalize to ``float``; plain strings are accepted where a
    ColName is expected and converted.
    """
    if isinstance(sort, NumberSort):
        if is_number(v):
            return True, float(v)
        return False, v
    if isinstance(sort, BooleanSort):
        return isinstance(v, bool), v
    if isinstance(sort, StringSort):
        return type(v) is str, v
    if isinstance(sort, ColNameSort):
        if isinstance(v, ColName):
            return True, v
        if type(v) is str and v:
            return True, ColName(v)
        return False, v
    if isinstance(sort, SeqSort):
        if not isinstance(v, (tuple, list)):
            return False, v
        out = []
        for item in v:
            ok, item = conform(item, sort.elem)
            if not ok:
                return False, v
            out.append(item)
        return True, tuple(out)
    if isinstance(sort, TableSort):
        return isinstance(v, Table) and v.schema == sort.schema, v
    return False, v


def describe_value(v: Any) -> str:
    if v is MISSING:
        return "an empty cell"
    try:
        return f"{sort_of_value(v)} {format_value(v)}"
    except TypeError:
        return repr(v)


def format_number(x: float) -> str:
    if math.isfinite(x) and float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def format_value(v: Any) -> str:
    """Plain rendering used by ``println``."""
    if v is MISSING:
        return "_"
    if isinstance(v, bool):
        return "true" if v else "false"
    if is_number(v):
        return format_number(v)
    if isinstance(v, (str, ColName)):
        return str(v)
    if isinstance(v, tuple):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    if isinstance(v, Table):
        return f"<table {v.nrows}x{v.ncols}>"
    if isinstance(v, Row):
        return "row(" + ", ".join(f"{n}: {format_value(x)}" for n, x in zip(v.header, v.cells)) + ")"
    return repr(v)


# --------------------------------------------------------------------------
# Schemas
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Column:
    name: str
    sort: Sort
    optional: bool = False

    def __str__(self):
        return f"{self.name}: {self.sort}{'?' if self.optional else ''}"


@dataclass(frozen=True)
class Schema:
    columns: tuple[Column, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))

    @classmethod
    def of(cls, *specs: tuple) -> Schema:
        """``Schema.of(("name", STRING), ("quiz1", NUMBER, True))``"""
        return cls(tuple(Column(*spec) for spec in specs))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __len__(self):
        return len(self.columns)

    def __iter__(self) -> Iterator[Column]:
        return iter(self.columns)

    def __contains__(self, name) -> bool:
        return name_text(name) in self.names

    def index(self, name: ColName | str) -> int:
        return self.names.index(name_text(name))

    def __getitem__(self, name: ColName | str) -> Column:
        return self.columns[self.index(name)]

    def __str__(self):
        return ", ".join(str(c) for c in self.columns)


# --------------------------------------------------------------------------
# Tables and rows
# --------------------------------------------------------------------------


def _check_grid(schema: Schema, rows: Sequence[Sequence[Any]]) -> tuple[tuple[Any, ...], ...]:
    seen: set[str] = set()
    for c, col in enumerate(schema.columns):
        if not col.name:
            raise TableError(Kind.EMPTY_NAME, f"column {c} has an empty name", c=c)
        if col.name in seen:
            raise TableError(
                Kind.DUPLICATE_COLUMN,
                f'column name "{col.name}" appears more than once',
                c=c,
                name=col.name,
            )
        seen.add(col.name)
    width = len(schema)
    out = []
    for r, row in enumerate(rows):
        row = tuple(row)
        if len(row) != width:
            raise TableError(
                Kind.RAGGED_ROW,
                f"row {r} has {len(row)} cells but the schema has {width} columns",
                r=r,
                expected=width,
                actual=len(row),
            )
        cells = []
        for c, (col, cell) in enumerate(zip(schema.columns, row)):
            if cell is MISSING:
                if not col.optional:
                    raise TableError(
                        Kind.ILLEGAL_MISSING,
                        f'cell ({c}, {r}) is empty but column "{col.name}" is not optional',
                        c=c,
                        r=r,
                        column=col.name,
                    )
                cells.append(cell)
                continue
            ok, value = conform(cell, col.sort)
            if not ok:
                raise TableError(
                    Kind.SORT_MISMATCH,
                    f'cell ({c}, {r}) holds {describe_value(cell)} but column "{col.name}" has sort {col.sort}',
                    c=c,
                    r=r,
                    column=col.name,
                    expected=col.sort,
                    actual=cell,
                )
            cells.append(value)
        out.append(tuple(cells))
    return tuple(out)


@dataclass(frozen=True, eq=True)
class Table:
    """An immutable schema plus a rectangular grid of cells (row-major)."""

    schema: Schema
    rows: tuple[tuple[Any, ...], ...] = ()

    def __post_init__(self):
        if not isinstance(self.schema, Schema):
            object.__setattr__(self, "schema", Schema(tuple(self.schema)))
        object.__setattr__(self, "rows", _check_grid(self.schema, self.rows))

    @property
    def header(self) -> tuple[str, ...]:
        return self.schema.names

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.schema)

    def row(self, i: int) -> Row:
        return get_row(self, i)

    def iter_rows(self) -> Iterator[Row]:
        for cells in self.rows:
            yield Row(self.schema, cells)

    def column(self, name: ColName | str) -> tuple[Any, ...]:
        if name_text(name) not in self.schema:
            raise TableError(
                Kind.UNKNOWN_COLUMN,
                f'no column named "{name_text(name)}"',
                name=name_text(name),
                header=self.header,
            )
        c = self.schema.index(name)
        return tuple(row[c] for row in self.rows)

    def cell(self, c: int, r: int) -> Any:
        return self.rows[r][c]

    def missing_cells(self) -> list[tuple[str, int]]:
        return [
            (col.name, r)
            for r, row in enumerate(self.rows)
            for col, cell in zip(self.schema.columns, row)
            if cell is MISSING
        ]

    def __repr__(self):
        return f"Table({self.schema}; {self.nrows} rows)"


@dataclass(frozen=True)
class Row:
    schema: Schema
    cells: tuple[Any, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.schema):
            raise TableError(
                Kind.RAGGED_ROW,
                f"row has {len(self.cells)} cells for {len(self.schema)} columns",
                expected=len(self.schema),
                actual=len(self.cells),
            )

    def __getitem__(self, name: ColName | str) -> Any:
        return get_value(self, name)

    @property
    def header(self) -> tuple[str, ...]:
        return self.schema.names


def validate_table(schema: Schema, rows: Sequence[Sequence[Any]]) -> Table:
    """Build a table, raising :class:`TableError` at the first violation.

    Header problems come first, then cells in row-major order.
    """
    return Table(schema, tuple(tuple(r) for r in rows))


def schema_of(t: Table) -> Schema:
    return t.schema


def header_of(t: Table) -> tuple[str, ...]:
    return t.header


def nrows(t: Table) -> int:
    return t.nrows


def ncols(t: Table) -> int:
    return t.ncols


def get_row(t: Table, i: int) -> Row:
    if not is_number(i) or i != int(i) or not 0 <= i < t.nrows:
        raise TableError(
            Kind.ROW_INDEX_OUT_OF_BOUNDS,
            f"row index {format_value(i)} is out of bounds for a table with {t.nrows} rows",
            index=i,
            nrows=t.nrows,
        )
    return Row(t.schema, t.rows[int(i)])


def get_value(row: Row, c: ColName | str) -> Any:
    name = name_text(c)
    if name not in row.schema:
        raise TableError(
            Kind.UNKNOWN_COLUMN,
            f'row has no column named "{name}"',
            name=name,
            header=row.header,
        )
    return row.cells[row.schema.index(name)]


# --------------------------------------------------------------------------
# Column-name primitives
# --------------------------------------------------------------------------


def name_append(a: ColName | str, b: ColName | str) -> ColName:
    text = name_text(a) + name_text(b)
    if not text:
        raise ColumnNameError(Kind.EMPTY_NAME, "appending two empty names gives an empty name")
    return ColName(text)


def name_split(n: ColName | str, sep: str) -> list[str]:
    if not sep:
        raise ColumnNameError(Kind.EMPTY_SEPARATOR, "cannot split a name on an empty separator")
    return name_text(n).split(sep)


def name_prefix(n: ColName | str, p: ColName | str) -> bool:
    return name_text(n).startswith(name_text(p))
