"""Pretty-printer whose output reparses to an equal AST.

Binary operators are always parenthesized so no precedence reasoning is
needed on the way back in.
"""

from __future__ import annotations

from ..model import format_number
from . import ast as A

INDENT = "  "


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_sort_ann(s: A.SortAnn) -> str:
    inner = f"<{format_sort_ann(s.elem)}>" if s.elem is not None else ""
    return f"{s.name}{inner}{'?' if s.optional else ''}"


def pretty(node: A.Node, level: int = 0) -> str:
    if isinstance(node, A.Program):
        return "\n".join(_stmt(s, 0) for s in node.body) + ("\n" if node.body else "")
    return _expr(node, level)


def _block(stmts: list, level: int) -> str:
    return "".join(_stmt(s, level) + "\n" for s in stmts)


def _stmt(s, level: int) -> str:
    pad = INDENT * level
    if isinstance(s, A.Bind):
        return f"{pad}{s.name} = {_expr(s.value, level)}"
    if isinstance(s, A.ForIn):
        return f"{pad}for {s.var} in {_expr(s.iterable, level)}:\n{_block(s.body, level + 1)}{pad}end"
    if isinstance(s, A.ExprStmt):
        return pad + _expr(s.expr, level)
    raise TypeError(f"not a statement: {s!r}")


def _expr(e, level: int) -> str:
    pad = INDENT * level
    if isinstance(e, A.NumberLit):
        return format_number(e.value)
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.StringLit):
        return quote(e.value)
    if isinstance(e, A.Blank):
        return "_"
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.SeqLit):
        return "[" + ", ".join(_expr(x, level) for x in e.items) + "]"
    if isinstance(e, A.BinOp):
        return f"({_expr(e.left, level)} {e.op} {_expr(e.right, level)})"
    if isinstance(e, A.Not):
        return f"(not {_expr(e.operand, level)})"
    if isinstance(e, A.Neg):
        return f"(-{_expr(e.operand, level)})"
    if isinstance(e, A.Call):
        return f"{_expr(e.callee, level)}({', '.join(_expr(a, level) for a in e.args)})"
    if isinstance(e, A.OrderBySpec):
        pairs = ", ".join(f"({_expr(k, level)}, {_expr(c, level)})" for k, c in e.pairs)
        return f"[{pairs}]"
    if isinstance(e, A.RowIndex):
        return f"{_expr(e.target, level)}[{_expr(e.key, level)}]"
    if isinstance(e, A.Println):
        return f"println({_expr(e.arg, level)})"
    if isinstance(e, A.FunctionDef):
        params = ", ".join(p.name for p in e.params)
        return f"function({params}):\n{_block(e.body, level + 1)}{pad}end"
    if isinstance(e, A.If):
        out = f"if {_expr(e.cond, level)}:\n{_block(e.then, level + 1)}"
        if e.orelse is not None:
            out += f"{pad}else:\n{_block(e.orelse, level + 1)}"
        return out + f"{pad}end"
    if isinstance(e, A.TableLit):
        inner = INDENT * (level + 1)
        head = " | ".join(
            quote(h.name) + (f": {format_sort_ann(h.sort)}" if h.sort else "") for h in e.header
        )
        rows = "".join(f"{inner}{' | '.join(_expr(c, level + 1) for c in r.cells)}\n" for r in e.rows)
        return f"table:\n{inner}{head}\n{rows}{pad}end"
    raise TypeError(f"not an expression: {e!r}")
