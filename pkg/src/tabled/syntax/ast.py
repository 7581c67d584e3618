"""AST for the surface language. Spans are excluded from equality, so two
trees compare equal when they are the same program up to layout."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Optional

from ..errors import SourceSpan


def _span():
    return field(default=None, compare=False, repr=False)


class Node:
    span: SourceSpan

    def children(self) -> Iterator[Node]:
        for f in fields(self):
            if f.name == "span":
                continue
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, (list, tuple)):
                for item in v:
                    if isinstance(item, Node):
                        yield item
                    elif isinstance(item, (list, tuple)):
                        yield from (x for x in item if isinstance(x, Node))

    def walk(self) -> Iterator[Node]:
        yield self
        for child in self.children():
            yield from child.walk()


# ----- expressions --------------------------------------------------------


@dataclass(eq=True)
class NumberLit(Node):
    value: float
    span: SourceSpan = _span()


@dataclass(eq=True)
class BoolLit(Node):
    value: bool
    span: SourceSpan = _span()


@dataclass(eq=True)
class StringLit(Node):
    value: str
    span: SourceSpan = _span()


@dataclass(eq=True)
class Blank(Node):
    """The ``_`` marker for an empty table cell."""

    span: SourceSpan = _span()


@dataclass(eq=True)
class SeqLit(Node):
    items: list
    span: SourceSpan = _span()


@dataclass(eq=True)
class SortAnn(Node):
    """A column sort annotation such as ``Number`` or ``Seq<String>?``."""

    name: str
    elem: Optional[SortAnn] = None
    optional: bool = False
    span: SourceSpan = _span()


@dataclass(eq=True)
class HeaderCell(Node):
    name: str
    sort: Optional[SortAnn] = None
    span: SourceSpan = _span()


@dataclass(eq=True)
class TableRow(Node):
    cells: list
    span: SourceSpan = _span()


@dataclass(eq=True)
class TableLit(Node):
    header: list
    rows: list
    span: SourceSpan = _span()


@dataclass(eq=True)
class Var(Node):
    name: str
    span: SourceSpan = _span()


@dataclass(eq=True)
class Param(Node):
    name: str
    span: SourceSpan = _span()


@dataclass(eq=True)
class FunctionDef(Node):
    params: list
    body: list
    span: SourceSpan = _span()


@dataclass(eq=True)
class Call(Node):
    callee: Node
    args: list
    span: SourceSpan = _span()


@dataclass(eq=True)
class RowIndex(Node):
    target: Node
    key: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class Not(Node):
    operand: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class Neg(Node):
    operand: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class If(Node):
    cond: Node
    then: list
    orelse: Optional[list] = None
    span: SourceSpan = _span()


@dataclass(eq=True)
class Println(Node):
    arg: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class OrderBySpec(Node):
    """``[(getKey, compare), ...]`` as the second argument of ``orderBy``."""

    pairs: list
    span: SourceSpan = _span()


# ----- statements ---------------------------------------------------------


@dataclass(eq=True)
class Bind(Node):
    name: str
    value: Node
    span: SourceSpan = _span()
    name_span: SourceSpan = _span()


@dataclass(eq=True)
class ExprStmt(Node):
    expr: Node
    span: SourceSpan = _span()


@dataclass(eq=True)
class ForIn(Node):
    var: str
    iterable: Node
    body: list
    span: SourceSpan = _span()
    var_span: SourceSpan = _span()


@dataclass(eq=True)
class Program(Node):
    body: list
    span: SourceSpan = _span()


BINOPS = ("++", "and", "or", "==", "<", "<=", "+", "-", "*", "/")
