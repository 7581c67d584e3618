"""Static types, table types and the facts the checker tracks about values."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .. import model as M


class StaticType:
    __slots__ = ()


@dataclass(frozen=True)
class NumT(StaticType):
    def __str__(self):
        return "Number"


@dataclass(frozen=True)
class BoolT(StaticType):
    def __str__(self):
        return "Boolean"


@dataclass(frozen=True)
class StrT(StaticType):
    def __str__(self):
        return "String"


@dataclass(frozen=True)
class ColNameT(StaticType):
    def __str__(self):
        return "ColName"


@dataclass(frozen=True)
class NothingT(StaticType):
    """Element type of a sequence known to be empty; below every type."""

    def __str__(self):
        return "Nothing"


@dataclass(frozen=True)
class UnitT(StaticType):
    """The non-value of statements, loops and one-armed ``if``."""

    def __str__(self):
        return "Unit"


@dataclass(frozen=True)
class ErrorT(StaticType):
    """Placeholder after a reported error; compatible with everything so one
    mistake does not cascade into many diagnostics."""

    def __str__(self):
        return "?"


@dataclass(frozen=True)
class SeqT(StaticType):
    elem: StaticType

    def __str__(self):
        return f"Seq<{self.elem}>"


@dataclass(frozen=True)
class OptionalT(StaticType):
    inner: StaticType

    def __str__(self):
        return f"{self.inner}?"


@dataclass(frozen=True)
class ColumnType:
    name: str
    type: StaticType
    optional: bool = False

    def __str__(self):
        return f"{self.name}: {self.type}{'?' if self.optional else ''}"


@dataclass(frozen=True)
class TableType:
    columns: tuple[ColumnType, ...] = ()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __getitem__(self, name: str) -> ColumnType:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def without(self, names: Iterable[str]) -> TableType:
        drop = set(names)
        return TableType(tuple(c for c in self.columns if c.name not in drop))

    def select(self, names: Iterable[str]) -> TableType:
        return TableType(tuple(self[n] for n in names))

    def plus(self, *cols: ColumnType) -> TableType:
        return TableType(self.columns + tuple(cols))

    @classmethod
    def from_schema(cls, schema: M.Schema) -> TableType:
        return cls(tuple(ColumnType(c.name, sort_to_type(c.sort), c.optional) for c in schema.columns))

    def has_error(self) -> bool:
        return any(_has_error(c.type) for c in self.columns)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.columns) + ")"


@dataclass(frozen=True)
class TableT(StaticType):
    table: TableType

    def __str__(self):
        return f"Table{self.table}"


@dataclass(frozen=True)
class RowT(StaticType):
    table: TableType

    def __str__(self):
        return f"Row{self.table}"


@dataclass(frozen=True)
class FunT(StaticType):
    """A builtin operation used as a value."""

    name: str

    def __str__(self):
        return f"<builtin {self.name}>"


@dataclass(frozen=True, eq=False)
class ClosureT(StaticType):
    """A user function value; compared by identity, checked per call site."""

    node: object
    scope: object = field(repr=False)

    def __str__(self):
        params = ", ".join(p.name for p in self.node.params)
        return f"function({params})"


@dataclass(frozen=True)
class SpecT(StaticType):
    """The ``[(getKey, compare), ...]`` argument of orderBy."""

    pairs: tuple

    def __str__(self):
        return "OrderBySpec"


NUM, BOOL, STR, COLNAME, NOTHING, UNIT, ERROR = NumT(), BoolT(), StrT(), ColNameT(), NothingT(), UnitT(), ErrorT()


def _has_error(t: StaticType) -> bool:
    if isinstance(t, ErrorT):
        return True
    if isinstance(t, (SeqT,)):
        return _has_error(t.elem)
    if isinstance(t, OptionalT):
        return _has_error(t.inner)
    if isinstance(t, (TableT, RowT)):
        return t.table.has_error()
    return False


def has_error(t: StaticType) -> bool:
    return _has_error(t)


# --------------------------------------------------------------------------
# sorts <-> types
# --------------------------------------------------------------------------


def sort_to_type(sort: M.Sort) -> StaticType:
    if isinstance(sort, M.NumberSort):
        return NUM
    if isinstance(sort, M.BooleanSort):
        return BOOL
    if isinstance(sort, M.StringSort):
        return STR
    if isinstance(sort, M.ColNameSort):
        return COLNAME
    if isinstance(sort, M.NothingSort):
        return NOTHING
    if isinstance(sort, M.SeqSort):
        return SeqT(sort_to_type(sort.elem))
    if isinstance(sort, M.TableSort):
        return TableT(TableType.from_schema(sort.schema))
    raise TypeError(f"unknown sort {sort!r}")


def is_cell_type(t: StaticType) -> bool:
    """Whether values of ``t`` can be stored in a table cell."""
    if isinstance(t, (NumT, BoolT, StrT, ColNameT, NothingT, ErrorT)):
        return True
    if isinstance(t, SeqT):
        return is_cell_type(t.elem)
    if isinstance(t, TableT):
        return True
    return False


def split_optional(t: StaticType) -> tuple[StaticType, bool]:
    if isinstance(t, OptionalT):
        return t.inner, True
    return t, False


def column_read(col: ColumnType) -> StaticType:
    return OptionalT(col.type) if col.optional else col.type


# --------------------------------------------------------------------------
# subtyping and joins
# --------------------------------------------------------------------------


def assignable(actual: StaticType, expected: StaticType) -> bool:
    """Can a value of type ``actual`` be used where ``expected`` is required?"""
    if actual == expected or isinstance(actual, (ErrorT, NothingT)) or isinstance(expected, ErrorT):
        return True
    if isinstance(actual, StrT) and isinstance(expected, ColNameT):
        return True
    if isinstance(expected, OptionalT):
        inner = actual.inner if isinstance(actual, OptionalT) else actual
        return assignable(inner, expected.inner)
    if isinstance(actual, SeqT) and isinstance(expected, SeqT):
        return assignable(actual.elem, expected.elem)
    if isinstance(actual, TableT) and isinstance(expected, TableT):
        return table_assignable(actual.table, expected.table)
    if isinstance(actual, RowT) and isinstance(expected, RowT):
        return table_assignable(actual.table, expected.table)
    return False


def table_assignable(actual: TableType, expected: TableType) -> bool:
    if actual.names != expected.names:
        return False
    for a, e in zip(actual.columns, expected.columns):
        if a.optional and not e.optional:
            return False
        if not assignable(a.type, e.type):
            return False
    return True


def join(a: StaticType, b: StaticType) -> Optional[StaticType]:
    """Least type covering both, or None."""
    if a == b:
        return a
    if isinstance(a, ErrorT) or isinstance(b, ErrorT):
        return ERROR
    if isinstance(a, NothingT):
        return b
    if isinstance(b, NothingT):
        return a
    if isinstance(a, OptionalT) or isinstance(b, OptionalT):
        ia, _ = split_optional(a)
        ib, _ = split_optional(b)
        inner = join(ia, ib)
        return None if inner is None else OptionalT(inner)
    if {type(a), type(b)} == {StrT, ColNameT}:
        return COLNAME
    if isinstance(a, SeqT) and isinstance(b, SeqT):
        elem = join(a.elem, b.elem)
        return None if elem is None else SeqT(elem)
    if isinstance(a, TableT) and isinstance(b, TableT):
        tt = join_tables(a.table, b.table)
        return None if tt is None else TableT(tt)
    if isinstance(a, RowT) and isinstance(b, RowT):
        tt = join_tables(a.table, b.table)
        return None if tt is None else RowT(tt)
    return None


def join_tables(a: TableType, b: TableType) -> Optional[TableType]:
    if a.names != b.names:
        return None
    cols = []
    for x, y in zip(a.columns, b.columns):
        t = join(x.type, y.type)
        if t is None:
            return None
        cols.append(ColumnType(x.name, t, x.optional or y.optional))
    return TableType(tuple(cols))


def schema_conforms(schema: M.Schema, predicted: TableType) -> bool:
    """Does a runtime schema fit inside a predicted table type?

    Names and order must match exactly. A predicted optional column may be
    complete at runtime, and an empty column (sort Nothing) fits any sort.
    """
    return table_assignable(TableType.from_schema(schema), predicted)


# --------------------------------------------------------------------------
# facts
# --------------------------------------------------------------------------

MAX_CANDIDATES = 512


@dataclass(frozen=True)
class NameFact:
    """What the checker knows about the text of a string or column name.

    ``candidates`` lists every text the value may have (a single entry means
    the name is known exactly); ``None`` means nothing is known. ``origin``
    says where a candidate set came from, for messages.
    """

    candidates: Optional[tuple[str, ...]]
    origin: str = ""

    @classmethod
    def known(cls, text: str) -> NameFact:
        return cls((text,))

    @property
    def is_known(self) -> bool:
        return self.candidates is not None and len(self.candidates) == 1

    @property
    def text(self) -> str:
        assert self.is_known
        return self.candidates[0]

    def describe(self) -> str:
        if self.candidates is None:
            return "an unknown name"
        if self.is_known:
            return f'"{self.text}"'
        shown = ", ".join(f'"{c}"' for c in self.candidates[:6])
        more = ", ..." if len(self.candidates) > 6 else ""
        return f"one of {shown}{more}" + (f" ({self.origin})" if self.origin else "")


OPAQUE = NameFact(None)


def concat_facts(a: Optional[NameFact], b: Optional[NameFact]) -> NameFact:
    if a is None or b is None or a.candidates is None or b.candidates is None:
        return OPAQUE
    if len(a.candidates) * len(b.candidates) > MAX_CANDIDATES:
        return OPAQUE
    texts = tuple(dict.fromkeys(x + y for x, y in itertools.product(a.candidates, b.candidates)))
    origin = a.origin or b.origin
    return NameFact(texts, origin if len(texts) > 1 else "")


def union_facts(facts: Iterable[Optional[NameFact]], origin: str = "") -> NameFact:
    out: list[str] = []
    for f in facts:
        if f is None or f.candidates is None:
            return OPAQUE
        out.extend(f.candidates)
    texts = tuple(dict.fromkeys(out))
    if not texts:
        return OPAQUE
    return NameFact(texts, origin if len(texts) > 1 else "")


@dataclass(frozen=True)
class Abs:
    """An abstract value: a static type plus optional facts.

    * ``names``: for strings and column names, the possible texts.
    * ``items``: for sequence literals, the element abstractions in order.
    * ``elem_names``: for sequences, the possible texts of any element.
    * ``nrows``: for tables, a statically known row count.
    * ``domains``: for tables, the possible texts of ColName columns whose
      values were produced by pivotLonger.
    """

    type: StaticType
    names: Optional[NameFact] = None
    items: Optional[tuple[Abs, ...]] = None
    elem_names: Optional[NameFact] = None
    nrows: Optional[int] = None
    domains: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def plain(self) -> Abs:
        return Abs(self.type)

    def with_type(self, t: StaticType) -> Abs:
        return replace(self, type=t)

    def domain(self, column: str) -> Optional[tuple[str, ...]]:
        return dict(self.domains).get(column)

    @property
    def length(self) -> Optional[int]:
        return None if self.items is None else len(self.items)

    def name_candidates_of_elements(self) -> Optional[NameFact]:
        if self.items is not None:
            return union_facts((i.names for i in self.items), (self.elem_names.origin if self.elem_names else ""))
        return self.elem_names


def abs_of(t: StaticType) -> Abs:
    return Abs(t)


def join_abs(a: Abs, b: Abs) -> Optional[Abs]:
    """Least abstract value covering both, or None when the types do not join."""
    t = join(a.type, b.type)
    if t is None:
        return None
    names = None
    if a.names is not None or b.names is not None:
        names = union_facts([a.names, b.names])
    items = None
    if a.items is not None and b.items is not None and len(a.items) == len(b.items):
        parts = [join_abs(x, y) for x, y in zip(a.items, b.items)]
        items = None if any(p is None for p in parts) else tuple(parts)
    elem_names = None
    if items is None:
        if a.items == ():
            elem_names = b.name_candidates_of_elements()
        elif b.items == ():
            elem_names = a.name_candidates_of_elements()
        else:
            fa, fb = a.name_candidates_of_elements(), b.name_candidates_of_elements()
            if fa is not None and fb is not None:
                elem_names = union_facts([fa, fb])
    nrows = a.nrows if a.nrows == b.nrows else None
    domains = a.domains if a.domains == b.domains else ()
    return Abs(t, names, items, elem_names, nrows, domains)
