"""The Table API with contract enclosures.

Every operation takes and returns immutable :class:`~tabled.model.Table`
values. Requirements raise :class:`~tabled.errors.ContractViolation`;
guarantees are asserted when :func:`~tabled.contracts.ensure_mode` is active.
"""

from __future__ import annotations

import functools
from collections import Counter
from typing import Any, Callable, Sequence

from .contracts import ensures, require
from .errors import BenchError, ContractViolation, Kind
from .model import (
    COLNAME,
    MISSING,
    NUMBER,
    ORDERED_SORTS,
    STRING,
    ColName,
    Column,
    Row,
    Schema,
    Table,
    TableSort,
    format_value,
    is_number,
    name_text,
    sort_of_elements,
)

GetKey = Callable[[Row], Any]
Compare = Callable[[Any, Any], Any]


# --------------------------------------------------------------------------
# shared requirement helpers
# --------------------------------------------------------------------------


def _names(cs: Sequence[ColName | str]) -> list[str]:
    return [name_text(c) for c in cs]


def _require_column(t: Table, c: str, role: str = "column") -> Column:
    require(
        c in t.schema,
        Kind.UNKNOWN_COLUMN,
        f'{role} "{c}" is not in the header {list(t.header)}',
        name=c,
        header=t.header,
    )
    return t.schema[c]


def _require_fresh(t: Table, c: str) -> None:
    require(
        c not in t.schema,
        Kind.DUPLICATE_COLUMN,
        f'column "{c}" is already in the header {list(t.header)}',
        name=c,
        header=t.header,
    )


def _require_distinct(cs: list[str]) -> None:
    seen = set()
    for c in cs:
        require(c not in seen, Kind.DUPLICATE_COLUMN, f'column "{c}" is listed twice', name=c)
        seen.add(c)


def _require_no_missing(t: Table, c: str) -> None:
    col = t.schema.index(c)
    for r, row in enumerate(t.rows):
        require(
            row[col] is not MISSING,
            Kind.MISSING_CELL,
            f'column "{c}" has an empty cell at row {r}',
            column=c,
            row=r,
        )


def _column_values(t: Table, c: str) -> list[Any]:
    col = t.schema.index(c)
    return [row[col] for row in t.rows]


# --------------------------------------------------------------------------
# postcondition checks
# --------------------------------------------------------------------------


def _same_schema(t2, t1, *args, **kwargs):
    if t2.schema != t1.schema:
        return f"schema changed from ({t1.schema}) to ({t2.schema})"


def _header_is(expected):
    def check(t2, *args, **kwargs):
        want = tuple(expected(*args, **kwargs))
        if t2.header != want:
            return f"header is {list(t2.header)}, expected {list(want)}"

    return check


def _kept_sorts(t2, t1, *args, **kwargs):
    for name in t1.header:
        if name in t2.schema and t2.schema[name] != t1.schema[name]:
            return f'column "{name}" changed from {t1.schema[name]} to {t2.schema[name]}'


def _nrows_is(expected):
    def check(t2, *args, **kwargs):
        want = expected(*args, **kwargs)
        if t2.nrows != want:
            return f"output has {t2.nrows} rows, expected {want}"

    return check


def _rows_from_input(t2, t1, *args, **kwargs):
    """Every output row, restricted to the input's columns, is an input row."""
    names = [n for n in t1.header if n in t2.schema]
    src = {tuple(r[t1.schema.index(n)] for n in names) for r in t1.rows}
    for r in t2.rows:
        if tuple(r[t2.schema.index(n)] for n in names) not in src:
            return "output contains a row that is not in the input"


def _permutation_of_input(t2, t1, *args, **kwargs):
    if Counter(t2.rows) != Counter(t1.rows):
        return "output rows are not a permutation of the input rows"


# --------------------------------------------------------------------------
# column construction
# --------------------------------------------------------------------------


def _append_column(t: Table, column: Column, values: Sequence[Any]) -> Table:
    schema = Schema(t.schema.columns + (column,))
    return Table(schema, tuple(row + (v,) for row, v in zip(t.rows, values)))


def _values_sort(vs):
    try:
        return sort_of_elements(vs)
    except TypeError as exc:
        raise ContractViolation(Kind.SORT_MISMATCH, f"values do not share one sort: {exc}") from None


def _new_column_sort(t2, t1, c, vs):
    col = t2.schema[name_text(c)]
    if col.sort != _values_sort(vs):
        return f'column "{name_text(c)}" has sort {col.sort}, not the sort of the values'


@ensures(
    _header_is(lambda t1, c, vs: t1.header + (name_text(c),)),
    _kept_sorts,
    _new_column_sort,
    _nrows_is(lambda t1, c, vs: t1.nrows),
)
def add_column(t1: Table, c: ColName | str, vs: Sequence[Any]) -> Table:
    """Append a column named ``c`` holding ``vs``, one value per row."""
    c = name_text(c)
    _require_fresh(t1, c)
    vs = tuple(vs)
    require(
        len(vs) == t1.nrows,
        Kind.LENGTH_MISMATCH,
        f"{len(vs)} values for a table with {t1.nrows} rows",
        expected=t1.nrows,
        actual=len(vs),
    )
    sort = _values_sort(vs)
    optional = any(v is MISSING for v in vs)
    return _append_column(t1, Column(c, sort, optional), vs)


def build_column(t1: Table, c: ColName | str, f: Callable[[Row], Any]) -> Table:
    """Apply ``f`` to each row in order and append the results as column ``c``."""
    c = name_text(c)
    _require_fresh(t1, c)
    values = []
    for i, row in enumerate(t1.iter_rows()):
        try:
            values.append(f(row))
        except BenchError as exc:
            exc.details.setdefault("row", i)
            exc.trace.append(f"buildColumn at row {i}")
            raise
    return add_column(t1, c, values)


def get_column(t: Table, c: ColName | str) -> tuple[Any, ...]:
    c = name_text(c)
    _require_column(t, c)
    return tuple(_column_values(t, c))


# --------------------------------------------------------------------------
# row and column selection
# --------------------------------------------------------------------------


@ensures(_same_schema, _nrows_is(lambda t1, ns: len(ns)))
def select_rows_by_index(t1: Table, ns: Sequence[float]) -> Table:
    ns = tuple(ns)
    picked = []
    for n in ns:
        require(
            is_number(n) and float(n).is_integer(),
            Kind.NON_INTEGRAL_INDEX,
            f"row index {format_value(n) if is_number(n) else repr(n)} is not an integer",
            index=n,
        )
        require(
            0 <= n < t1.nrows,
            Kind.ROW_INDEX_OUT_OF_BOUNDS,
            f"row index {format_value(n)} is out of bounds for a table with {t1.nrows} rows",
            index=n,
            nrows=t1.nrows,
        )
        picked.append(t1.rows[int(n)])
    return Table(t1.schema, tuple(picked))


@ensures(_same_schema, _nrows_is(lambda t1, bs: sum(1 for b in bs if b is True)))
def select_rows_by_mask(t1: Table, bs: Sequence[bool]) -> Table:
    bs = tuple(bs)
    require(
        len(bs) == t1.nrows,
        Kind.LENGTH_MISMATCH,
        f"mask has {len(bs)} entries for a table with {t1.nrows} rows",
        expected=t1.nrows,
        actual=len(bs),
    )
    for b in bs:
        require(isinstance(b, bool), Kind.SORT_MISMATCH, f"mask entry {b!r} is not a Boolean")
    return Table(t1.schema, tuple(row for row, keep in zip(t1.rows, bs) if keep))


def select_rows(t1: Table, sel: Sequence[Any]) -> Table:
    """Select rows by a sequence of indices or by a Boolean mask."""
    sel = tuple(sel)
    if sel and all(isinstance(b, bool) for b in sel):
        return select_rows_by_mask(t1, sel)
    if not sel and t1.nrows == 0:
        return select_rows_by_mask(t1, sel)
    return select_rows_by_index(t1, sel)


@ensures(_header_is(lambda t1, cs: _names(cs)), _kept_sorts, _nrows_is(lambda t1, cs: t1.nrows))
def select_columns(t1: Table, cs: Sequence[ColName | str]) -> Table:
    cs = _names(cs)
    for c in cs:
        _require_column(t1, c)
    _require_distinct(cs)
    idx = [t1.schema.index(c) for c in cs]
    schema = Schema(tuple(t1.schema.columns[i] for i in idx))
    return Table(schema, tuple(tuple(row[i] for i in idx) for row in t1.rows))


@ensures(
    _header_is(lambda t1, cs: [n for n in t1.header if n not in _names(cs)]),
    _kept_sorts,
    _nrows_is(lambda t1, cs: t1.nrows),
)
def drop_columns(t1: Table, cs: Sequence[ColName | str]) -> Table:
    cs = _names(cs)
    for c in cs:
        _require_column(t1, c)
    _require_distinct(cs)
    return select_columns(t1, [n for n in t1.header if n not in cs])


@ensures(_same_schema, _nrows_is(lambda t1, n: int(n)), _rows_from_input)
def head(t1: Table, n: float) -> Table:
    require(
        is_number(n) and float(n).is_integer() and 0 <= n <= t1.nrows,
        Kind.HEAD_OUT_OF_RANGE,
        f"head needs 0 <= n <= {t1.nrows}, got {format_value(n)}",
        n=n,
        nrows=t1.nrows,
    )
    return Table(t1.schema, t1.rows[: int(n)])


def _require_sortable(t1: Table, c: str) -> None:
    col = _require_column(t1, c)
    require(
        col.sort in ORDERED_SORTS,
        Kind.UNSORTABLE_SORT,
        f'column "{c}" has sort {col.sort}, which has no built-in order',
        column=c,
    )
    _require_no_missing(t1, c)


def _sorted_by_column(t2, t1, c, ascending=True):
    values = _column_values(t2, name_text(c))
    pairs = zip(values, values[1:])
    if any((b < a) if ascending else (a < b) for a, b in pairs):
        return f'rows are not ordered by "{name_text(c)}"'


@ensures(_same_schema, _permutation_of_input, _sorted_by_column)
def tsort(t1: Table, c: ColName | str, ascending: bool = True) -> Table:
    """Stable sort by one column: numeric, code-point, or false-before-true."""
    c = name_text(c)
    _require_sortable(t1, c)
    i = t1.schema.index(c)
    rows = sorted(t1.rows, key=lambda row: row[i], reverse=not ascending)
    return Table(t1.schema, tuple(rows))


def order_by(t1: Table, spec: Sequence[tuple[GetKey, Compare]]) -> Table:
    """Lexicographic stable sort by (getKey, compare) pairs.

    ``compare`` is a strict less-than. Later pairs are consulted only when all
    earlier keys tie.
    """
    spec = tuple(spec)
    require(len(spec) > 0, Kind.EMPTY_SPEC, "orderBy needs at least one (getKey, compare) pair")
    return _order_by(t1, spec)


def _less(compare: Compare, a: Any, b: Any, k: int) -> bool:
    out = compare(a, b)
    require(isinstance(out, bool), Kind.SORT_MISMATCH, f"compare function of pair {k} returned {out!r}, not a Boolean")
    return out


@ensures(_same_schema, _permutation_of_input)
def _order_by(t1: Table, spec):
    keyed = []
    for i, row in enumerate(t1.iter_rows()):
        keys = []
        for get_key, _ in spec:
            try:
                keys.append(get_key(row))
            except BenchError as exc:
                exc.trace.append(f"orderBy getKey at row {i}")
                raise
        keyed.append((keys, t1.rows[i]))

    def cmp(x, y):
        for k, (_, compare) in enumerate(spec):
            a, b = x[0][k], y[0][k]
            lt = _less(compare, a, b, k)
            gt = _less(compare, b, a, k)
            if lt and gt:
                raise ContractViolation(
                    Kind.INVALID_COMPARATOR,
                    f"compare function of pair {k} says {format_value(a)} < {format_value(b)} and the reverse",
                    pair=k,
                )
            if lt:
                return -1
            if gt:
                return 1
        return 0

    ordered = sorted(keyed, key=functools.cmp_to_key(cmp))
    return Table(t1.schema, tuple(row for _, row in ordered))


# --------------------------------------------------------------------------
# concatenation and joins
# --------------------------------------------------------------------------


@ensures(_same_schema, _nrows_is(lambda t1, t2: t1.nrows + t2.nrows))
def vcat(t1: Table, t2: Table) -> Table:
    require(
        t1.schema == t2.schema,
        Kind.SCHEMA_MISMATCH,
        f"vcat needs identical schemas: ({t1.schema}) vs ({t2.schema})",
    )
    return Table(t1.schema, t1.rows + t2.rows)


@ensures(
    _header_is(lambda t1, t2: t1.header + t2.header),
    _nrows_is(lambda t1, t2: t1.nrows),
)
def hcat(t1: Table, t2: Table) -> Table:
    require(
        t1.nrows == t2.nrows,
        Kind.LENGTH_MISMATCH,
        f"hcat needs equal row counts: {t1.nrows} vs {t2.nrows}",
        expected=t1.nrows,
        actual=t2.nrows,
    )
    for name in t2.header:
        require(name not in t1.schema, Kind.DUPLICATE_COLUMN, f'both tables have a column "{name}"', name=name)
    schema = Schema(t1.schema.columns + t2.schema.columns)
    return Table(schema, tuple(a + b for a, b in zip(t1.rows, t2.rows)))


def join_header(left: Sequence[str], right: Sequence[str], key: str) -> list[tuple[str, str]]:
    """(right name, output name) for each right column that survives a join."""
    taken = set(left)
    out = []
    for name in right:
        if name == key:
            continue
        new = name
        k = 2
        while new in taken:
            new = f"{name}_{k}"
            k += 1
        taken.add(new)
        out.append((name, new))
    return out


@ensures(_nrows_is(lambda t1, t2, c: t1.nrows), _kept_sorts, _rows_from_input)
def left_join(t1: Table, t2: Table, c: ColName | str) -> Table:
    """Keep every left row once; look up its key in the right table."""
    c = name_text(c)
    left_col = _require_column(t1, c, "join key")
    right_col = _require_column(t2, c, "join key")
    require(
        left_col.sort == right_col.sort,
        Kind.SORT_MISMATCH,
        f'join key "{c}" has sort {left_col.sort} on the left but {right_col.sort} on the right',
        expected=left_col.sort,
        actual=right_col.sort,
    )
    require(
        not left_col.optional and not right_col.optional,
        Kind.SORT_MISMATCH,
        f'join key "{c}" must not be optional',
    )
    ki = t2.schema.index(c)
    lookup: dict[Any, tuple] = {}
    for row in t2.rows:
        require(
            row[ki] not in lookup,
            Kind.DUPLICATE_RIGHT_KEY,
            f'right table has key {format_value(row[ki])} more than once',
            key=row[ki],
        )
        lookup[row[ki]] = row
    renamed = join_header(t1.header, t2.header, c)
    extra = tuple(Column(new, t2.schema[old].sort, True) for old, new in renamed)
    pick = [t2.schema.index(old) for old, _ in renamed]
    li = t1.schema.index(c)
    rows = []
    for row in t1.rows:
        match = lookup.get(row[li])
        rows.append(row + tuple(MISSING if match is None else match[j] for j in pick))
    return Table(Schema(t1.schema.columns + extra), tuple(rows))


# --------------------------------------------------------------------------
# pivots
# --------------------------------------------------------------------------


@ensures(_nrows_is(lambda t1, cs, names_to, values_to: t1.nrows * len(cs)))
def pivot_longer(t1: Table, cs: Sequence[ColName | str], names_to: ColName | str, values_to: ColName | str) -> Table:
    """Move the columns ``cs`` into (name, value) pairs, one row per cell."""
    cs = _names(cs)
    names_to, values_to = name_text(names_to), name_text(values_to)
    require(len(cs) > 0, Kind.EMPTY_INPUT, "pivotLonger needs at least one column")
    for c in cs:
        _require_column(t1, c)
    _require_distinct(cs)
    sorts = {t1.schema[c].sort for c in cs}
    require(
        len(sorts) == 1,
        Kind.SORT_MISMATCH,
        f"pivoted columns must share one sort, found {sorted(map(str, sorts))}",
    )
    require(names_to != values_to, Kind.NAME_CLASH, f'names and values both go to "{names_to}"')
    kept = [n for n in t1.header if n not in cs]
    for target in (names_to, values_to):
        require(target not in kept, Kind.NAME_CLASH, f'"{target}" would clash with a kept column', name=target)
    (sort,) = sorts
    optional = any(t1.schema[c].optional for c in cs)
    schema = Schema(
        tuple(t1.schema[n] for n in kept) + (Column(names_to, COLNAME), Column(values_to, sort, optional))
    )
    keep_idx = [t1.schema.index(n) for n in kept]
    rows = []
    for row in t1.rows:
        base = tuple(row[i] for i in keep_idx)
        for c in cs:
            rows.append(base + (ColName(c), row[t1.schema.index(c)]))
    return Table(schema, tuple(rows))


def pivot_wider(t1: Table, names_from: ColName | str, values_from: ColName | str) -> Table:
    """Spread (name, value) pairs back into one column per distinct name."""
    names_from, values_from = name_text(names_from), name_text(values_from)
    name_col = _require_column(t1, names_from)
    value_col = _require_column(t1, values_from)
    require(names_from != values_from, Kind.NAME_CLASH, "namesFrom and valuesFrom are the same column")
    require(
        name_col.sort in (COLNAME, STRING),
        Kind.SORT_MISMATCH,
        f'column "{names_from}" has sort {name_col.sort}; names must be ColName or String',
        expected=COLNAME,
        actual=name_col.sort,
    )
    ni, vi = t1.schema.index(names_from), t1.schema.index(values_from)
    for r, row in enumerate(t1.rows):
        require(row[ni] is not MISSING, Kind.MISSING_NAME, f"row {r} has no name in \"{names_from}\"", row=r)
        require(str(row[ni]) != "", Kind.MISSING_NAME, f"row {r} has an empty name", row=r)
    keys = [n for n in t1.header if n not in (names_from, values_from)]
    key_idx = [t1.schema.index(n) for n in keys]
    new_names: list[str] = []
    for row in t1.rows:
        n = str(row[ni])
        if n not in new_names:
            require(n not in keys, Kind.NAME_CLASH, f'new column "{n}" clashes with a key column', name=n)
            new_names.append(n)
    groups: dict[tuple, dict[str, Any]] = {}
    for r, row in enumerate(t1.rows):
        k = tuple(row[i] for i in key_idx)
        cell = groups.setdefault(k, {})
        n = str(row[ni])
        require(
            n not in cell,
            Kind.DUPLICATE_COMBINATION,
            f'two rows share the key {[format_value(v) for v in k]} and name "{n}"',
            row=r,
        )
        cell[n] = row[vi]
    columns = [t1.schema[n] for n in keys]
    for n in new_names:
        absent = any(n not in cell for cell in groups.values())
        columns.append(Column(n, value_col.sort, value_col.optional or absent))
    rows = tuple(k + tuple(cell.get(n, MISSING) for n in new_names) for k, cell in groups.items())
    return Table(Schema(tuple(columns)), rows)


# --------------------------------------------------------------------------
# grouping
# --------------------------------------------------------------------------


def _groups_partition(t2, t1, c):
    members = [row for g in _column_values(t2, "groups") for row in g.rows]
    if len(members) != t1.nrows:
        return "groups do not cover the input rows exactly once"


def _group_by(t1: Table, c: str, keep_key: bool) -> Table:
    col = _require_column(t1, c)
    require(not col.optional, Kind.MISSING_CELL, f'group key "{c}" is optional', column=c)
    _require_no_missing(t1, c)
    ki = t1.schema.index(c)
    if keep_key:
        sub = t1.schema
        project = lambda row: row  # noqa: E731
    else:
        sub = Schema(tuple(x for x in t1.schema.columns if x.name != c))
        project = lambda row: row[:ki] + row[ki + 1 :]  # noqa: E731
    buckets: dict[Any, list] = {}
    for row in t1.rows:
        buckets.setdefault(row[ki], []).append(project(row))
    schema = Schema((Column("key", col.sort), Column("groups", TableSort(sub))))
    rows = tuple((k, Table(sub, tuple(members))) for k, members in buckets.items())
    return Table(schema, rows)


@ensures(_header_is(lambda t1, c: ("key", "groups")), _groups_partition)
def group_by_retentive(t1: Table, c: ColName | str) -> Table:
    """One row per distinct key; each group keeps the key column."""
    return _group_by(t1, name_text(c), keep_key=True)


@ensures(_header_is(lambda t1, c: ("key", "groups")), _groups_partition)
def group_by_subtractive(t1: Table, c: ColName | str) -> Table:
    """One row per distinct key; groups drop the key column."""
    return _group_by(t1, name_text(c), keep_key=False)


# --------------------------------------------------------------------------
# numeric helpers
# --------------------------------------------------------------------------


def dot_product(t: Table, c1: ColName | str, c2: ColName | str) -> float:
    c1, c2 = name_text(c1), name_text(c2)
    for c in (c1, c2):
        col = _require_column(t, c)
        require(
            col.sort == NUMBER,
            Kind.SORT_MISMATCH,
            f'column "{c}" has sort {col.sort}, not Number',
            expected=NUMBER,
            actual=col.sort,
        )
    i, j = t.schema.index(c1), t.schema.index(c2)
    total = 0.0
    for r, row in enumerate(t.rows):
        for c, k in ((c1, i), (c2, j)):
            require(row[k] is not MISSING, Kind.MISSING_CELL, f'column "{c}" is empty at row {r}', column=c, row=r)
        total += row[i] * row[j]
    return total


__all__ = [
    "add_column",
    "build_column",
    "dot_product",
    "drop_columns",
    "get_column",
    "group_by_retentive",
    "group_by_subtractive",
    "head",
    "hcat",
    "join_header",
    "left_join",
    "order_by",
    "pivot_longer",
    "pivot_wider",
    "select_columns",
    "select_rows",
    "select_rows_by_index",
    "select_rows_by_mask",
    "tsort",
    "vcat",
]
