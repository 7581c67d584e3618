"""Schema-aware static checking.

User functions have no declared types. Each call site checks the body afresh
with the abstract values of its arguments (monomorphization), so a function
applied to two tables is checked twice, each time against a concrete row
type. Alongside types the checker tracks facts: the possible texts of a
column name, the items of a sequence literal, a table's row count. Those
facts are what lets ``r[c]`` inside ``for c in header(t)`` resolve.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from ..diagnostics import (
    ERROR,
    WARNING,
    Diagnostic,
    Suggestion,
    detect_column_swap,
    sort_diagnostics,
    suggest_columns,
)
from ..errors import Kind, SourceSpan
from ..model import Table, format_number
from ..ops import join_header
from ..signatures import SIGNATURES, arguments
from ..syntax import ast as A
from .types import (
    BOOL,
    COLNAME,
    ERROR as ERROR_T,
    NOTHING,
    NUM,
    STR,
    UNIT,
    Abs,
    BoolT,
    ClosureT,
    ColNameT,
    ColumnType,
    ErrorT,
    FunT,
    NameFact,
    NothingT,
    NumT,
    OptionalT,
    RowT,
    SeqT,
    SpecT,
    StaticType,
    StrT,
    TableT,
    TableType,
    UnitT,
    assignable,
    column_read,
    concat_facts,
    has_error,
    is_cell_type,
    join,
    split_optional,
    join_abs,
    union_facts,
)

MAX_LOOP_PASSES = 6
MAX_UNROLL = 64
ORDERED_TYPES = (NUM, STR, BOOL)


@dataclass
class Binding:
    abs: Abs
    span: Optional[SourceSpan]
    warn_unused: bool = False
    used: bool = False


class Scope:
    def __init__(
        self, parent: Optional[Scope] = None, boundary: bool = False, local: bool = False, definite: bool = False
    ):
        self.parent = parent
        self.boundary = boundary  # assignments never look past this scope
        self.local = local  # bindings here get unused-binding warnings
        self.definite = definite  # runs exactly once whenever its parent runs
        self.vars: dict[str, Binding] = {}
        self.facts: dict[str, NameFact] = {}  # narrowed name facts
        self.present: set[tuple[str, str]] = set()  # (row var, column) known non-empty

    def child(self, local: Optional[bool] = None, definite: bool = False) -> Scope:
        return Scope(self, local=self.local if local is None else local, definite=definite)

    def lookup(self, name: str) -> tuple[Optional[Binding], Optional[Scope]]:
        s = self
        while s is not None:
            if name in s.vars:
                return s.vars[name], s
            s = s.parent
        return None, None

    def assignable_binding(self, name: str) -> tuple[Optional[Binding], Optional[Scope]]:
        s = self
        while s is not None:
            if name in s.vars:
                return s.vars[name], s
            if s.boundary:
                return None, None
            s = s.parent
        return None, None

    def chain_to(self, stop: Scope):
        s = self
        while s is not None:
            yield s
            if s is stop:
                return
            s = s.parent

    def visible_names(self) -> list[str]:
        out, s = [], self
        while s is not None:
            out.extend(s.vars)
            s = s.parent
        return out


@dataclass
class CheckResult:
    diagnostics: list[Diagnostic]
    predicted: dict[int, set[TableType]] = field(default_factory=dict)
    bindings: dict[str, Abs] = field(default_factory=dict)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if not d.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass
class Ctx:
    """Where a builtin was called from, for diagnostics."""

    name: str
    span: SourceSpan
    arg_nodes: Optional[list] = None
    scope: Optional[Scope] = None

    def arg_span(self, i: int) -> SourceSpan:
        if self.arg_nodes is not None and i < len(self.arg_nodes):
            return self.arg_nodes[i].span
        return self.span

    def arg_text(self, i: int) -> Optional[str]:
        if self.arg_nodes is not None and i < len(self.arg_nodes) and isinstance(self.arg_nodes[i], A.Var):
            return self.arg_nodes[i].name
        return None


def env_abs(value: Any) -> Abs:
    if isinstance(value, Abs):
        return value
    if isinstance(value, Table):
        return Abs(TableT(TableType.from_schema(value.schema)), nrows=value.nrows)
    raise TypeError(f"cannot describe {value!r} statically")


def _quote_list(names) -> str:
    return "[" + ", ".join(f'"{n}"' for n in names) + "]"


class Checker:
    def __init__(self, env: Optional[Mapping[str, Any]] = None, file: str = "<input>"):
        self.file = file
        self.diags: list[Diagnostic] = []
        self.predicted: dict[int, set[TableType]] = defaultdict(set)
        self.memo: dict[tuple, Abs] = {}
        self.active: list[int] = []
        self.defined: dict[int, A.FunctionDef] = {}
        self.applied: set[int] = set()
        self.prelude = Scope(boundary=True)
        for name, value in (env or {}).items():
            self.prelude.vars[name] = Binding(env_abs(value), None)

    # ----- reporting --------------------------------------------------------

    def report(self, kind: Kind, span: SourceSpan, message: str, severity: str = ERROR, **kw) -> None:
        self.diags.append(Diagnostic(severity, kind, span, message, **kw))

    def warn(self, kind: Kind, span: SourceSpan, message: str, **kw) -> None:
        self.report(kind, span, message, WARNING, **kw)

    def mismatch(self, span: SourceSpan, message: str, expected, actual) -> Abs:
        hint = ""
        if isinstance(actual, OptionalT) and assignable(actual.inner, expected):
            hint = "; the value may be an empty cell, so guard it with isMissing or use withDefault"
        self.report(Kind.SORT_MISMATCH, span, message + hint, expected=str(expected), actual=str(actual))
        return Abs(ERROR_T)

    def predict(self, node: A.Node, a: Abs) -> Abs:
        if isinstance(a.type, TableT) and not has_error(a.type):
            self.predicted[id(node)].add(a.type.table)
        return a

    # ----- programs and blocks -------------------------------------------

    def check_program(self, program: A.Program) -> CheckResult:
        top = Scope(self.prelude, boundary=True)
        self.block(program.body, top)
        for key, node in self.defined.items():
            if key not in self.applied:
                self.warn(
                    Kind.UNCHECKED_FUNCTION,
                    node.span,
                    "this function is never called, so its body was not checked",
                )
        bindings = {name: b.abs for name, b in top.vars.items()}
        return CheckResult(sort_diagnostics(self.diags), dict(self.predicted), bindings)

    def block(self, stmts: list, scope: Scope) -> Abs:
        value = Abs(UNIT)
        for s in stmts:
            value = self.stmt(s, scope)
        return value

    def close_scope(self, scope: Scope) -> None:
        for name, b in scope.vars.items():
            if b.warn_unused and not b.used and b.span is not None:
                self.warn(Kind.UNUSED_BINDING, b.span, f'"{name}" is bound but never used')

    def stmt(self, s, scope: Scope) -> Abs:
        if isinstance(s, A.Bind):
            self.bind(s, scope)
            return Abs(UNIT)
        if isinstance(s, A.ForIn):
            self.for_in(s, scope)
            return Abs(UNIT)
        return self.expr(s.expr, scope)

    def bind(self, s: A.Bind, scope: Scope) -> None:
        value = self.expr(s.value, scope)
        if isinstance(value.type, UnitT):
            self.report(Kind.SORT_MISMATCH, s.value.span, f'the right-hand side of "{s.name}" produces no value')
            value = Abs(ERROR_T)
        existing, home = scope.assignable_binding(s.name)
        if existing is None:
            scope.vars[s.name] = Binding(value, s.name_span, warn_unused=scope.local)
            return
        joined = join(existing.abs.type, value.type)
        if joined is None:
            self.report(
                Kind.SORT_MISMATCH,
                s.value.span,
                f'"{s.name}" holds {existing.abs.type}; it cannot be rebound to {value.type}',
                expected=str(existing.abs.type),
                actual=str(value.type),
            )
            joined = ERROR_T
        strong = all(sc.definite for sc in scope.chain_to(home) if sc is not home)
        if strong and joined == value.type:
            existing.abs = value
        elif isinstance(joined, ErrorT):
            existing.abs = Abs(ERROR_T)
        else:
            existing.abs = join_abs(existing.abs, value).with_type(joined)
        self.forget(s.name, scope, home)

    def forget(self, name: str, scope: Scope, home: Scope) -> None:
        for sc in scope.chain_to(home):
            sc.facts.pop(name, None)
            sc.present = {p for p in sc.present if p[0] != name}

    def assigned_names(self, stmts: list) -> set[str]:
        out: set[str] = set()
        for s in stmts:
            for node in _walk_no_functions(s):
                if isinstance(node, A.Bind):
                    out.add(node.name)
        return out

    def for_in(self, s: A.ForIn, scope: Scope) -> None:
        it = self.expr(s.iterable, scope)
        if isinstance(it.type, SeqT):
            var = Abs(it.type.elem, names=it.name_candidates_of_elements())
        elif isinstance(it.type, ErrorT):
            var = Abs(ERROR_T)
        else:
            self.report(
                Kind.SORT_MISMATCH,
                s.iterable.span,
                f"for needs a sequence to iterate over, got {it.type}",
                expected="Seq<...>",
                actual=str(it.type),
            )
            var = Abs(ERROR_T)
        if it.items and len(it.items) <= MAX_UNROLL:
            # A sequence known element by element: check the body once per element.
            for item in it.items:
                body = scope.child(local=True, definite=True)
                body.vars[s.var] = Binding(item, s.var_span)
                self.block(s.body, body)
                self.close_scope(body)
            return
        outer = []
        for name in self.assigned_names(s.body):
            b, home = scope.assignable_binding(name)
            if b is not None:
                self.forget(name, scope, home)
                outer.append(b)
        mark, memo = len(self.diags), dict(self.memo)
        # Iterate until the bindings the body assigns stop growing. If facts
        # keep growing, drop them and settle on types alone.
        for attempt in range(MAX_LOOP_PASSES + 1):
            if attempt == MAX_LOOP_PASSES:
                for b in outer:
                    b.abs = b.abs.plain()
            before = [b.abs for b in outer]
            del self.diags[mark:]
            self.memo = dict(memo)
            body = scope.child(local=True)
            body.vars[s.var] = Binding(var, s.var_span)
            self.block(s.body, body)
            after = [b.abs for b in outer]
            if after == before:
                break
            if attempt == MAX_LOOP_PASSES:
                for b in outer:
                    b.abs = b.abs.plain()
        self.close_scope(body)

    # ----- expressions ----------------------------------------------------

    def expr(self, e, scope: Scope) -> Abs:
        method = getattr(self, "expr_" + type(e).__name__)
        return method(e, scope)

    def expr_NumberLit(self, e, scope):
        return Abs(NUM)

    def expr_BoolLit(self, e, scope):
        return Abs(BOOL)

    def expr_StringLit(self, e, scope):
        return Abs(STR, names=NameFact.known(e.value))

    def expr_Blank(self, e, scope):
        self.report(Kind.SORT_MISMATCH, e.span, "`_` marks an empty cell and is only allowed inside a table literal")
        return Abs(ERROR_T)

    def expr_SeqLit(self, e, scope):
        items = tuple(self.expr(x, scope) for x in e.items)
        elem: StaticType = NOTHING
        for node, item in zip(e.items, items):
            if isinstance(item.type, UnitT):
                self.report(Kind.SORT_MISMATCH, node.span, "this element produces no value")
                continue
            joined = join(elem, item.type)
            if joined is None:
                self.report(
                    Kind.SORT_MISMATCH,
                    node.span,
                    f"sequence elements must share one sort; this one is {item.type} but earlier ones are {elem}",
                    expected=str(elem),
                    actual=str(item.type),
                )
                continue
            elem = joined
        return Abs(SeqT(elem), items=items)

    def expr_Var(self, e, scope):
        b, home = scope.lookup(e.name)
        if b is None:
            if e.name in SIGNATURES:
                return Abs(FunT(e.name))
            sugg = suggest_columns(e.name, list(dict.fromkeys(scope.visible_names() + list(SIGNATURES))), None)
            self.report(Kind.UNBOUND_NAME, e.span, f'"{e.name}" is not defined', suggestions=sugg)
            return Abs(ERROR_T)
        b.used = True
        value = b.abs
        for sc in scope.chain_to(home):
            if e.name in sc.facts:
                value = Abs(value.type, names=sc.facts[e.name])
                break
        return value

    def expr_FunctionDef(self, e, scope):
        self.defined.setdefault(id(e), e)
        return Abs(ClosureT(e, scope))

    def expr_Println(self, e, scope):
        a = self.expr(e.arg, scope)
        if isinstance(a.type, UnitT):
            self.report(Kind.SORT_MISMATCH, e.arg.span, "println needs a value")
        return Abs(UNIT)

    def expr_OrderBySpec(self, e, scope):
        pairs = tuple((self.expr(k, scope), self.expr(c, scope)) for k, c in e.pairs)
        return Abs(SpecT(pairs))

    def expr_Not(self, e, scope):
        a = self.expr(e.operand, scope)
        if not assignable(a.type, BOOL):
            return self.mismatch(e.operand.span, f"not needs a Boolean, got {a.type}", BOOL, a.type)
        return Abs(BOOL)

    def expr_Neg(self, e, scope):
        a = self.expr(e.operand, scope)
        if not assignable(a.type, NUM):
            return self.mismatch(e.operand.span, f"negation needs a Number, got {a.type}", NUM, a.type)
        return Abs(NUM)

    def expr_BinOp(self, e, scope):
        if e.op == "and":
            left = self.expr(e.left, scope)
            then_n, _ = self.narrowings(e.left, scope)
            inner = scope.child()
            self.apply_narrowings(inner, then_n)
            right = self.expr(e.right, inner)
        else:
            left = self.expr(e.left, scope)
            right = self.expr(e.right, scope)
        lt, rt = left.type, right.type
        op = e.op
        if op in ("and", "or"):
            for node, t in ((e.left, lt), (e.right, rt)):
                if not assignable(t, BOOL):
                    self.mismatch(node.span, f"{op} needs Boolean operands, got {t}", BOOL, t)
            return Abs(BOOL)
        if op in ("+", "-", "*", "/"):
            for node, t in ((e.left, lt), (e.right, rt)):
                if not assignable(t, NUM):
                    self.mismatch(node.span, f"{op} needs Number operands, got {t}", NUM, t)
            return Abs(NUM)
        if op == "++":
            return self.concat(e, left, right)
        for node, t in ((e.left, lt), (e.right, rt)):
            if isinstance(t, OptionalT):
                return self.mismatch(node.span, f"cannot compare with {op} here", t.inner, t)
            if isinstance(t, (UnitT, ClosureT, FunT, SpecT)):
                return self.mismatch(node.span, f"cannot compare {t} values", "a value", t)
        if isinstance(lt, ErrorT) or isinstance(rt, ErrorT):
            return Abs(BOOL)
        if op == "==":
            if join(lt, rt) is None:
                self.report(
                    Kind.SORT_MISMATCH,
                    e.span,
                    f"== compares values of different sorts ({lt} and {rt}); the result would always be false",
                    expected=str(lt),
                    actual=str(rt),
                )
            return Abs(BOOL)
        ordered = join(lt, rt)
        if ordered == COLNAME:
            ordered = STR
        if ordered not in ORDERED_TYPES and not isinstance(ordered, NothingT):
            self.report(
                Kind.SORT_MISMATCH,
                e.span,
                f"{op} needs two Numbers, two Strings or two Booleans, got {lt} and {rt}",
                expected="Number, String or Boolean",
                actual=f"{lt} and {rt}",
            )
        return Abs(BOOL)

    def concat(self, e, left: Abs, right: Abs) -> Abs:
        lt, rt = left.type, right.type
        if isinstance(lt, ErrorT) or isinstance(rt, ErrorT):
            return Abs(ERROR_T)
        if isinstance(lt, SeqT) and isinstance(rt, SeqT):
            elem = join(lt.elem, rt.elem)
            if elem is None:
                return self.mismatch(e.span, f"++ joins sequences of different sorts ({lt} and {rt})", lt, rt)
            items = left.items + right.items if left.items is not None and right.items is not None else None
            names = None
            if items is None:
                a, b = left.name_candidates_of_elements(), right.name_candidates_of_elements()
                names = union_facts([a, b]) if a is not None and b is not None else None
            return Abs(SeqT(elem), items=items, elem_names=names)
        text_types = (StrT, ColNameT)
        for node, t in ((e.left, lt), (e.right, rt)):
            if not isinstance(t, text_types):
                return self.mismatch(node.span, f"++ joins two Strings, two ColNames or two sequences, got {t}", STR, t)
        result = COLNAME if isinstance(lt, ColNameT) and isinstance(rt, ColNameT) else STR
        return Abs(result, names=concat_facts(left.names, right.names))

    def expr_If(self, e, scope):
        cond = self.expr(e.cond, scope)
        if not assignable(cond.type, BOOL):
            self.mismatch(e.cond.span, f"an if condition must be a Boolean, got {cond.type}", BOOL, cond.type)
        then_n, else_n = self.narrowings(e.cond, scope)
        # an arm runs for certain when narrowing rules the other one out
        then_v = self.branch(e.then, then_n, scope, definite=_dead(else_n))
        if e.orelse is None:
            return Abs(UNIT)
        else_v = self.branch(e.orelse, else_n, scope, definite=_dead(then_n))
        if then_v is None or else_v is None:
            return then_v or else_v or Abs(UNIT)
        joined = join(then_v.type, else_v.type)
        if joined is None or isinstance(joined, UnitT):
            return Abs(UNIT)
        return Abs(joined)

    def branch(self, stmts: list, narrowed: list, scope: Scope, definite: bool = False) -> Optional[Abs]:
        """Check one arm of an ``if``; None when narrowing shows it cannot run."""
        if _dead(narrowed):
            return None
        inner = scope.child(definite=definite)
        self.apply_narrowings(inner, narrowed)
        value = self.block(stmts, inner)
        self.close_scope(inner)
        return value

    # ----- narrowing ------------------------------------------------------

    def narrowings(self, cond, scope: Scope) -> tuple[list, list]:
        """Facts that hold in the then/else branch of ``if cond``."""
        if isinstance(cond, A.Not):
            t, f = self.narrowings(cond.operand, scope)
            return f, t
        if isinstance(cond, A.BinOp) and cond.op == "and":
            lt, _ = self.narrowings(cond.left, scope)
            rt, _ = self.narrowings(cond.right, scope)
            return lt + rt, []
        if isinstance(cond, A.Call) and isinstance(cond.callee, A.Var) and not scope.lookup(cond.callee.name)[0]:
            name, args = cond.callee.name, cond.args
            if name == "isMissing" and len(args) == 1 and isinstance(args[0], A.RowIndex):
                ri = args[0]
                if isinstance(ri.target, A.Var):
                    key = self.quiet_expr(ri.key, scope)
                    if key.names is not None and key.names.candidates is not None:
                        present = [("present", ri.target.name, c) for c in key.names.candidates]
                        return [], present
            if name == "namePrefix" and len(args) == 2 and isinstance(args[0], A.Var):
                var = self.quiet_expr(args[0], scope)
                prefix = self.quiet_expr(args[1], scope)
                if var.names is not None and var.names.candidates is not None and prefix.names and prefix.names.is_known:
                    p = prefix.names.text
                    keep = tuple(c for c in var.names.candidates if c.startswith(p))
                    no = tuple(c for c in var.names.candidates if not c.startswith(p))
                    origin = var.names.origin
                    then = [("fact", args[0].name, NameFact(keep, origin + f' starting with "{p}"'))]
                    other = [("fact", args[0].name, NameFact(no, origin))]
                    return then, other
        return [], []

    def quiet_expr(self, e, scope: Scope) -> Abs:
        mark, memo = len(self.diags), dict(self.memo)
        used = _used_flags(scope)
        try:
            return self.expr(e, scope)
        finally:
            del self.diags[mark:]
            self.memo = memo
            _restore_used(scope, used)

    def apply_narrowings(self, scope: Scope, items: list) -> None:
        for item in items:
            if item[0] == "present":
                scope.present.add((item[1], item[2]))
            else:
                scope.facts[item[1]] = item[2]

    def is_present(self, scope: Scope, var: str, column: str) -> bool:
        _, home = scope.lookup(var)
        if home is None:
            return False
        return any((var, column) in sc.present for sc in scope.chain_to(home))

    # ----- column references ------------------------------------------------

    def resolve(
        self,
        tt: TableType,
        name: Abs,
        span: SourceSpan,
        row_text: Optional[str] = None,
        row_var: Optional[str] = None,
        scope: Optional[Scope] = None,
    ) -> StaticType:
        """Type of reading column ``name`` of a table or row of type ``tt``."""
        if isinstance(name.type, ErrorT):
            return ERROR_T
        if not assignable(name.type, COLNAME):
            self.mismatch(span, f"a column name must be a ColName or String, got {name.type}", COLNAME, name.type)
            return ERROR_T
        fact = name.names
        if fact is None or fact.candidates is None:
            if not tt.columns:
                self.report(Kind.UNKNOWN_COLUMN, span, "the table has no columns")
                return ERROR_T
            candidates = tt.names
            what = "a column name that is not known before running"
        else:
            candidates = fact.candidates
            what = fact.describe()
        absent = [c for c in candidates if c not in tt]
        if absent:
            bad = absent[0]
            if fact is not None and fact.is_known:
                message = f'no column named "{bad}"'
            else:
                message = f'the column name may be "{bad}", which is not in the header'
            self.report(
                Kind.UNKNOWN_COLUMN,
                span,
                message,
                expected=f"one of {_quote_list(tt.names)}",
                actual=f'"{bad}"',
                suggestions=suggest_columns(bad, tt.names, row_text),
            )
            return ERROR_T
        cols = [tt[c] for c in candidates]
        types = list(dict.fromkeys(c.type for c in cols))
        if len(types) > 1:
            groups = "; ".join(
                f"{t}: {', '.join(c.name for c in cols if c.type == t)}" for t in types
            )
            self.report(
                Kind.HETEROGENEOUS_DYNAMIC_ACCESS,
                span,
                f"{what} may refer to columns of different sorts ({groups}); "
                "narrow the table with dropColumns or selectColumns first",
                expected="columns of one sort",
                actual=", ".join(str(t) for t in types),
            )
            return ERROR_T
        optional = any(
            c.optional and not (row_var and scope and self.is_present(scope, row_var, c.name)) for c in cols
        )
        return OptionalT(types[0]) if optional else types[0]

    def expr_RowIndex(self, e, scope):
        target = self.expr(e.target, scope)
        key = self.expr(e.key, scope)
        t = target.type
        if isinstance(t, ErrorT):
            return Abs(ERROR_T)
        if isinstance(t, RowT):
            row_var = e.target.name if isinstance(e.target, A.Var) else None
            row_text = row_var or "r"
            result = self.resolve(t.table, key, e.span, row_text, row_var, scope)
            return Abs(result)
        if isinstance(t, SeqT):
            if not assignable(key.type, NUM):
                return self.mismatch(e.key.span, f"a sequence index must be a Number, got {key.type}", NUM, key.type)
            if target.items is not None and len(target.items) == 1:
                return target.items[0]
            return Abs(t.elem, names=target.name_candidates_of_elements())
        if isinstance(t, TableT):
            self.report(
                Kind.SORT_MISMATCH,
                e.span,
                "a table cannot be indexed directly; use getColumn(t, c) or getRow(t, i)",
                expected="a Row or Seq",
                actual=str(t),
            )
            return Abs(ERROR_T)
        return self.mismatch(e.target.span, f"only rows and sequences can be indexed, got {t}", "a Row or Seq", t)

    # ----- table literals ------------------------------------------------

    def ann_type(self, s: A.SortAnn) -> StaticType:
        if s.name == "Seq":
            return SeqT(self.ann_type(s.elem))
        return {"Number": NUM, "String": STR, "Boolean": BOOL, "ColName": COLNAME}[s.name]

    def expr_TableLit(self, e, scope):
        names = [h.name for h in e.header]
        ncols = len(names)
        seen: set[str] = set()
        for h in e.header:
            if h.name in seen:
                self.report(
                    Kind.DUPLICATE_COLUMN,
                    h.span,
                    f'column name "{h.name}" appears more than once in the header',
                    actual=f'"{h.name}"',
                )
            seen.add(h.name)
        grid: list[tuple[int, A.TableRow, list]] = []
        for r, row in enumerate(e.rows):
            if len(row.cells) != ncols:
                self.report(
                    Kind.RAGGED_ROW,
                    row.span,
                    f"data row {r + 1} has {len(row.cells)} cells but the header has {ncols} columns",
                    expected=f"{ncols} cells",
                    actual=f"{len(row.cells)} cells",
                )
                for cell in row.cells:
                    if not isinstance(cell, A.Blank):
                        self.expr(cell, scope)
                continue
            types = []
            for c, cell in enumerate(row.cells):
                if isinstance(cell, A.Blank):
                    types.append(None)
                    continue
                a = self.expr(cell, scope)
                if not is_cell_type(a.type):
                    self.report(
                        Kind.SORT_MISMATCH,
                        cell.span,
                        f"{a.type} values cannot be stored in a table cell",
                        cell=(r + 1, names[c]),
                    )
                    types.append(ERROR_T)
                else:
                    types.append(a.type)
            grid.append((r, row, types))

        columns: list[tuple[StaticType, bool, bool]] = []  # type, optional, annotated
        for c, h in enumerate(e.header):
            if h.sort is not None:
                columns.append((self.ann_type(h.sort), h.sort.optional, True))
                continue
            present = [types[c] for _, _, types in grid if types[c] is not None]
            t = present[0] if present else NOTHING
            for p in present[1:]:
                t = join(t, p) or t
            optional = any(types[c] is None for _, _, types in grid)
            columns.append((t, optional, False))

        def fits(cell_type, h: int) -> bool:
            t, optional, _ = columns[h]
            if cell_type is None:
                return optional
            return assignable(cell_type, t)

        mismatches, missing = [], []
        for r, row, types in grid:
            for c, ct in enumerate(types):
                if ct is None:
                    if not columns[c][1]:
                        missing.append((r, row.cells[c], c))
                elif not fits(ct, c):
                    mismatches.append((r, row.cells[c], c, ct))
        swap = None
        if mismatches:
            swap = detect_column_swap(names, [types for _, _, types in grid], fits)
        if swap is not None:
            r, cell, c, ct = mismatches[0]
            moved = [names[h] for h in range(ncols) if swap.permutation[h] != h]
            self.report(
                Kind.SORT_MISMATCH,
                cell.span,
                f'data row {r + 1} holds {ct} {_cell_text(cell)} in column "{names[c]}", which has sort '
                f"{columns[c][0]}; the data in columns {_quote_list(moved)} looks swapped",
                expected=str(columns[c][0]),
                actual=str(ct),
                suggestions=[swap],
                cell=(r + 1, names[c]),
            )
        else:
            for r, cell, c, ct in mismatches:
                self.report(
                    Kind.SORT_MISMATCH,
                    cell.span,
                    f'data row {r + 1} holds {ct} {_cell_text(cell)} in column "{names[c]}", which has sort '
                    f"{columns[c][0]}",
                    expected=str(columns[c][0]),
                    actual=str(ct),
                    cell=(r + 1, names[c]),
                )
        for r, cell, c in missing:
            t = columns[c][0]
            self.report(
                Kind.ILLEGAL_MISSING,
                cell.span,
                f'data row {r + 1} leaves column "{names[c]}" empty, but the column is not optional',
                expected=f"a {t} value",
                actual="an empty cell",
                suggestions=[Suggestion("RewriteTo", f"{names[c]}: {t}?", 0.5)],
                cell=(r + 1, names[c]),
            )
        cols = []
        used: set[str] = set()
        for name, (t, optional, _) in zip(names, columns):
            if name in used:
                continue
            used.add(name)
            cols.append(ColumnType(name, t, optional))
        return self.predict(e, Abs(TableT(TableType(tuple(cols))), nrows=len(e.rows)))

    # ----- calls ---------------------------------------------------------

    def expr_Call(self, e, scope):
        callee = self.expr(e.callee, scope)
        args = [self.expr(a, scope) for a in e.args]
        name = e.callee.name if isinstance(e.callee, A.Var) else "function"
        result = self.apply(callee, args, Ctx(name, e.span, e.args, scope), e.callee.span)
        return self.predict(e, result)

    def apply(self, f: Abs, args: list[Abs], ctx: Ctx, fspan: Optional[SourceSpan] = None) -> Abs:
        t = f.type
        if isinstance(t, ErrorT):
            return Abs(ERROR_T)
        if isinstance(t, FunT):
            sig = SIGNATURES[t.name]
            if not sig.accepts(len(args)):
                self.report(
                    Kind.ARITY_MISMATCH,
                    ctx.span,
                    f"{t.name} takes {sig.arity_text()}, got {len(args)}",
                    expected=sig.text,
                    actual=arguments(len(args)),
                )
                return Abs(ERROR_T)
            handler = getattr(self, "b_" + t.name)
            return handler(Ctx(t.name, ctx.span, ctx.arg_nodes, ctx.scope), args)
        if isinstance(t, ClosureT):
            return self.apply_closure(t, args, ctx)
        self.report(
            Kind.SORT_MISMATCH,
            fspan or ctx.span,
            f"{t} is not a function",
            expected="a function",
            actual=str(t),
        )
        return Abs(ERROR_T)

    def apply_closure(self, clo: ClosureT, args: list[Abs], ctx: Ctx) -> Abs:
        node = clo.node
        self.applied.add(id(node))
        if len(node.params) != len(args):
            self.report(
                Kind.ARITY_MISMATCH,
                ctx.span,
                f"{ctx.name} takes {arguments(len(node.params))}, got {len(args)}",
                expected=arguments(len(node.params)),
                actual=arguments(len(args)),
            )
            return Abs(ERROR_T)
        if id(node) in self.active:
            self.report(
                Kind.RECURSION,
                ctx.span,
                "recursive calls are not supported; each call is checked with its argument types, "
                "which would never finish",
            )
            return Abs(ERROR_T)
        key = (id(clo), tuple(args))
        if key in self.memo:
            return self.memo[key]
        self.active.append(id(node))
        try:
            body = Scope(clo.scope, boundary=True, local=True)
            for p, a in zip(node.params, args):
                body.vars[p.name] = Binding(a, p.span)
            result = self.block(node.body, body)
            self.close_scope(body)
        finally:
            self.active.pop()
        self.memo[key] = result
        return result

    # ----- builtin helpers ------------------------------------------------

    def table_arg(self, ctx: Ctx, i: int, a: Abs) -> Optional[TableType]:
        if isinstance(a.type, TableT):
            return a.type.table
        if not isinstance(a.type, ErrorT):
            self.report(
                Kind.NON_TABLE_ARGUMENT,
                ctx.arg_span(i),
                f"argument {i + 1} of {ctx.name} must be a table, got {a.type}",
                expected="Table",
                actual=str(a.type),
            )
        return None

    def expect(self, ctx: Ctx, i: int, a: Abs, t: StaticType, what: str = "") -> bool:
        if assignable(a.type, t):
            return True
        self.mismatch(
            ctx.arg_span(i),
            f"argument {i + 1} of {ctx.name} must be {what or t}, got {a.type}",
            t,
            a.type,
        )
        return False

    def known_name(self, ctx: Ctx, i: int, a: Abs) -> Optional[str]:
        if isinstance(a.type, ErrorT) or not self.expect(ctx, i, a, COLNAME, "a column name"):
            return None
        if a.names is not None and a.names.is_known:
            return a.names.text
        self.report(
            Kind.UNRESOLVED_NAME,
            ctx.arg_span(i),
            f"{ctx.name} needs this column name to be known before running, but it may be "
            f"{a.names.describe() if a.names else 'any name'}",
        )
        return None

    def name_list(self, ctx: Ctx, i: int, a: Abs) -> Optional[list[str]]:
        if isinstance(a.type, ErrorT) or not self.expect(ctx, i, a, SeqT(COLNAME), "a sequence of column names"):
            return None
        if a.items is not None and all(x.names is not None and x.names.is_known for x in a.items):
            return [x.names.text for x in a.items]
        self.report(
            Kind.UNRESOLVED_NAME,
            ctx.arg_span(i),
            f"{ctx.name} needs the list of column names to be known before running",
        )
        return None

    def require_present(self, ctx: Ctx, i: int, tt: TableType, name: str) -> bool:
        if name in tt:
            return True
        self.report(
            Kind.UNKNOWN_COLUMN,
            ctx.arg_span(i),
            f'no column named "{name}"',
            expected=f"one of {_quote_list(tt.names)}",
            actual=f'"{name}"',
            suggestions=suggest_columns(name, tt.names, None),
        )
        return False

    def require_fresh(self, ctx: Ctx, i: int, tt: TableType, name: str) -> bool:
        if name not in tt:
            return True
        self.report(
            Kind.DUPLICATE_COLUMN,
            ctx.arg_span(i),
            f'column "{name}" is already in the header',
            expected=f"a name other than {_quote_list(tt.names)}",
            actual=f'"{name}"',
        )
        return False

    def require_distinct(self, ctx: Ctx, i: int, names: list[str]) -> bool:
        seen = set()
        for n in names:
            if n in seen:
                self.report(Kind.DUPLICATE_COLUMN, ctx.arg_span(i), f'column "{n}" is listed twice')
                return False
            seen.add(n)
        return True

    def element_type(self, ctx: Ctx, i: int, a: Abs) -> Optional[tuple[StaticType, bool]]:
        if isinstance(a.type, ErrorT):
            return None
        if not isinstance(a.type, SeqT):
            self.mismatch(ctx.arg_span(i), f"argument {i + 1} of {ctx.name} must be a sequence, got {a.type}",
                          "Seq<...>", a.type)
            return None
        elem, optional = split_optional(a.type.elem)
        if not is_cell_type(elem):
            self.mismatch(ctx.arg_span(i), f"{elem} values cannot be stored in a table cell", "a cell sort", elem)
            return None
        return elem, optional

    def contract(self, ctx: Ctx, i: int, sub: Kind, message: str) -> None:
        self.report(Kind.CONTRACT_VIOLATION, ctx.arg_span(i), message, sub=sub)

    # ----- builtins ---------------------------------------------------------

    def b_header(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        if tt is None:
            return Abs(SeqT(COLNAME))
        source = ctx.arg_text(0)
        origin = f"the header of {source}" if source else "the header"
        items = tuple(Abs(COLNAME, names=NameFact.known(n)) for n in tt.names)
        return Abs(SeqT(COLNAME) if tt.names else SeqT(NOTHING), items=items,
                   elem_names=NameFact(tt.names, origin))

    def b_nrows(self, ctx, args):
        self.table_arg(ctx, 0, args[0])
        return Abs(NUM)

    def b_ncols(self, ctx, args):
        self.table_arg(ctx, 0, args[0])
        return Abs(NUM)

    def b_getRow(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        self.expect(ctx, 1, args[1], NUM)
        return Abs(RowT(tt)) if tt is not None else Abs(ERROR_T)

    def b_getValue(self, ctx, args):
        r = args[0]
        if isinstance(r.type, ErrorT):
            return Abs(ERROR_T)
        if not isinstance(r.type, RowT):
            return self.mismatch(ctx.arg_span(0), f"getValue needs a row, got {r.type}", "Row", r.type)
        row_var = ctx.arg_text(0)
        return Abs(self.resolve(r.type.table, args[1], ctx.arg_span(1), None, row_var, ctx.scope))

    def b_getColumn(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        if tt is None:
            return Abs(ERROR_T)
        t = self.resolve(tt, args[1], ctx.arg_span(1))
        if isinstance(t, ErrorT):
            return Abs(ERROR_T)
        names = None
        fact = args[1].names
        if isinstance(split_optional(t)[0], ColNameT) and fact is not None and fact.is_known:
            dom = args[0].domain(fact.text)
            names = NameFact(dom) if dom else None
        return Abs(SeqT(t), elem_names=names)

    def b_addColumn(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        c = self.known_name(ctx, 1, args[1])
        elem = self.element_type(ctx, 2, args[2])
        if tt is None or c is None or elem is None:
            return Abs(ERROR_T)
        self.require_fresh(ctx, 1, tt, c)
        n, vs = args[0].nrows, args[2].length
        if n is not None and vs is not None and n != vs:
            self.report(
                Kind.LENGTH_MISMATCH,
                ctx.arg_span(2),
                f"addColumn got {vs} values for a table with {n} rows",
                expected=f"{n} values",
                actual=f"{vs} values",
            )
        if c in tt:
            return Abs(ERROR_T)
        return Abs(TableT(tt.plus(ColumnType(c, *elem))), nrows=args[0].nrows, domains=args[0].domains)

    def b_buildColumn(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        c = self.known_name(ctx, 1, args[1])
        if tt is None:
            return Abs(ERROR_T)
        out = self.apply(args[2], [Abs(RowT(tt))], Ctx(ctx.arg_text(2) or "function", ctx.arg_span(2)), ctx.arg_span(2))
        if isinstance(out.type, UnitT):
            self.report(Kind.SORT_MISMATCH, ctx.arg_span(2), "the function passed to buildColumn returns no value")
            return Abs(ERROR_T)
        elem, optional = split_optional(out.type)
        if not is_cell_type(elem):
            return self.mismatch(ctx.arg_span(2), f"{elem} values cannot be stored in a table cell", "a cell sort", elem)
        if c is None or not self.require_fresh(ctx, 1, tt, c):
            return Abs(ERROR_T)
        return Abs(TableT(tt.plus(ColumnType(c, elem, optional))), nrows=args[0].nrows, domains=args[0].domains)

    def b_selectRows(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        sel = args[1]
        if tt is None:
            return Abs(ERROR_T)
        t = sel.type
        nrows = None
        if isinstance(t, ErrorT):
            pass
        elif isinstance(t, SeqT) and isinstance(t.elem, NumT):
            nrows = sel.length
        elif isinstance(t, SeqT) and isinstance(t.elem, BoolT):
            n, m = args[0].nrows, sel.length
            if n is not None and m is not None and n != m:
                self.report(
                    Kind.LENGTH_MISMATCH,
                    ctx.arg_span(1),
                    f"the mask has {m} entries for a table with {n} rows",
                    expected=f"{n} entries",
                    actual=f"{m} entries",
                )
        elif isinstance(t, SeqT) and isinstance(t.elem, NothingT):
            nrows = 0
        else:
            self.mismatch(
                ctx.arg_span(1),
                f"selectRows needs row indices (Seq<Number>) or a mask (Seq<Boolean>), got {t}",
                "Seq<Number> or Seq<Boolean>",
                t,
            )
        return Abs(TableT(tt), nrows=nrows, domains=args[0].domains)

    def b_selectColumns(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        names = self.name_list(ctx, 1, args[1])
        if tt is None or names is None:
            return Abs(ERROR_T)
        if not all(self.require_present(ctx, 1, tt, n) for n in names) or not self.require_distinct(ctx, 1, names):
            return Abs(ERROR_T)
        doms = tuple(d for d in args[0].domains if d[0] in names)
        return Abs(TableT(tt.select(names)), nrows=args[0].nrows, domains=doms)

    def b_dropColumns(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        names = self.name_list(ctx, 1, args[1])
        if tt is None or names is None:
            return Abs(ERROR_T)
        if not all(self.require_present(ctx, 1, tt, n) for n in names) or not self.require_distinct(ctx, 1, names):
            return Abs(ERROR_T)
        doms = tuple(d for d in args[0].domains if d[0] not in names)
        return Abs(TableT(tt.without(names)), nrows=args[0].nrows, domains=doms)

    def b_head(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        self.expect(ctx, 1, args[1], NUM)
        return Abs(TableT(tt), domains=args[0].domains) if tt is not None else Abs(ERROR_T)

    def b_tsort(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        c = self.known_name(ctx, 1, args[1])
        self.expect(ctx, 2, args[2], BOOL)
        if tt is None:
            return Abs(ERROR_T)
        if c is not None and self.require_present(ctx, 1, tt, c):
            col = tt[c]
            if col.type not in ORDERED_TYPES and not isinstance(col.type, ErrorT):
                self.contract(ctx, 1, Kind.UNSORTABLE_SORT,
                              f'column "{c}" has sort {col.type}; tsort orders Numbers, Strings and Booleans only')
            elif col.optional:
                self.warn(Kind.POSSIBLY_MISSING, ctx.arg_span(1),
                          f'column "{c}" is optional; tsort fails if any of its cells is empty')
        return Abs(TableT(tt), nrows=args[0].nrows, domains=args[0].domains)

    def b_orderBy(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        spec = args[1]
        if tt is None:
            return Abs(ERROR_T)
        if not isinstance(spec.type, SpecT):
            return self.mismatch(ctx.arg_span(1), "orderBy needs a list of (getKey, compare) pairs", "OrderBySpec",
                                 spec.type)
        nodes = ctx.arg_nodes[1].pairs if ctx.arg_nodes and isinstance(ctx.arg_nodes[1], A.OrderBySpec) else None
        for k, (get_key, compare) in enumerate(spec.type.pairs):
            kspan = nodes[k][0].span if nodes else ctx.span
            cspan = nodes[k][1].span if nodes else ctx.span
            key = self.apply(get_key, [Abs(RowT(tt))], Ctx("getKey", kspan), kspan)
            if isinstance(key.type, UnitT):
                self.report(Kind.SORT_MISMATCH, kspan, "the getKey function returns no value")
                continue
            if isinstance(key.type, OptionalT):
                self.mismatch(kspan, "the getKey function may return an empty cell", key.type.inner, key.type)
                continue
            out = self.apply(compare, [Abs(key.type), Abs(key.type)], Ctx("compare", cspan), cspan)
            if not assignable(out.type, BOOL):
                self.mismatch(cspan, f"the compare function must return a Boolean, got {out.type}", BOOL, out.type)
        return Abs(TableT(tt), nrows=args[0].nrows, domains=args[0].domains)

    def b_vcat(self, ctx, args):
        t1 = self.table_arg(ctx, 0, args[0])
        t2 = self.table_arg(ctx, 1, args[1])
        if t1 is None or t2 is None:
            return Abs(ERROR_T)
        if t1 != t2:
            if not (t1.has_error() or t2.has_error()):
                self.report(
                    Kind.SORT_MISMATCH,
                    ctx.span,
                    "vcat needs two tables with identical schemas",
                    expected=str(t1),
                    actual=str(t2),
                )
            return Abs(ERROR_T)
        n1, n2 = args[0].nrows, args[1].nrows
        return Abs(TableT(t1), nrows=None if n1 is None or n2 is None else n1 + n2)

    def b_hcat(self, ctx, args):
        t1 = self.table_arg(ctx, 0, args[0])
        t2 = self.table_arg(ctx, 1, args[1])
        if t1 is None or t2 is None:
            return Abs(ERROR_T)
        n1, n2 = args[0].nrows, args[1].nrows
        if n1 is not None and n2 is not None and n1 != n2:
            self.report(
                Kind.LENGTH_MISMATCH,
                ctx.span,
                f"hcat needs tables with the same number of rows, got {n1} and {n2}",
                expected=f"{n1} rows",
                actual=f"{n2} rows",
            )
        clash = [n for n in t2.names if n in t1]
        if clash:
            self.report(Kind.DUPLICATE_COLUMN, ctx.arg_span(1), f'both tables have a column "{clash[0]}"')
            return Abs(ERROR_T)
        return Abs(TableT(t1.plus(*t2.columns)), nrows=n1 if n1 is not None else n2,
                   domains=args[0].domains + args[1].domains)

    def b_leftJoin(self, ctx, args):
        t1 = self.table_arg(ctx, 0, args[0])
        t2 = self.table_arg(ctx, 1, args[1])
        c = self.known_name(ctx, 2, args[2])
        if t1 is None or t2 is None or c is None:
            return Abs(ERROR_T)
        if not (self.require_present(ctx, 2, t1, c) and self.require_present(ctx, 2, t2, c)):
            return Abs(ERROR_T)
        left, right = t1[c], t2[c]
        if left.type != right.type:
            self.report(
                Kind.SORT_MISMATCH,
                ctx.arg_span(2),
                f'join key "{c}" has sort {left.type} on the left but {right.type} on the right',
                expected=str(left.type),
                actual=str(right.type),
            )
        elif left.optional or right.optional:
            self.report(Kind.SORT_MISMATCH, ctx.arg_span(2), f'join key "{c}" must not be optional')
        extra = [ColumnType(new, t2[old].type, True) for old, new in join_header(t1.names, t2.names, c)]
        return Abs(TableT(t1.plus(*extra)), nrows=args[0].nrows)

    def b_pivotLonger(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        cs = self.name_list(ctx, 1, args[1])
        names_to = self.known_name(ctx, 2, args[2])
        values_to = self.known_name(ctx, 3, args[3])
        if tt is None or cs is None or names_to is None or values_to is None:
            return Abs(ERROR_T)
        if not cs:
            self.contract(ctx, 1, Kind.EMPTY_INPUT, "pivotLonger needs at least one column")
            return Abs(ERROR_T)
        if not all(self.require_present(ctx, 1, tt, n) for n in cs) or not self.require_distinct(ctx, 1, cs):
            return Abs(ERROR_T)
        types = list(dict.fromkeys(tt[n].type for n in cs))
        if len(types) > 1:
            self.report(
                Kind.SORT_MISMATCH,
                ctx.arg_span(1),
                "the pivoted columns must share one sort, found " + ", ".join(map(str, types)),
                expected="one sort",
                actual=", ".join(map(str, types)),
            )
            return Abs(ERROR_T)
        if names_to == values_to:
            self.contract(ctx, 3, Kind.NAME_CLASH, f'names and values both go to "{names_to}"')
            return Abs(ERROR_T)
        kept = tt.without(cs)
        for i, target in ((2, names_to), (3, values_to)):
            if target in kept:
                self.contract(ctx, i, Kind.NAME_CLASH, f'"{target}" would clash with a kept column')
                return Abs(ERROR_T)
        optional = any(tt[n].optional for n in cs)
        out = kept.plus(ColumnType(names_to, COLNAME), ColumnType(values_to, types[0], optional))
        n = args[0].nrows
        doms = tuple(d for d in args[0].domains if d[0] in kept) + ((names_to, tuple(cs)),)
        return Abs(TableT(out), nrows=None if n is None else n * len(cs), domains=doms)

    def b_pivotWider(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        names_from = self.known_name(ctx, 1, args[1])
        values_from = self.known_name(ctx, 2, args[2])
        if tt is None or names_from is None or values_from is None:
            return Abs(ERROR_T)
        if not (self.require_present(ctx, 1, tt, names_from) and self.require_present(ctx, 2, tt, values_from)):
            return Abs(ERROR_T)
        if names_from == values_from:
            self.contract(ctx, 2, Kind.NAME_CLASH, "namesFrom and valuesFrom are the same column")
            return Abs(ERROR_T)
        ncol = tt[names_from]
        if ncol.type not in (COLNAME, STR):
            return self.mismatch(ctx.arg_span(1), f'column "{names_from}" must hold column names', COLNAME, ncol.type)
        domain = args[0].domain(names_from)
        if domain is None:
            self.report(
                Kind.UNRESOLVED_NAME,
                ctx.arg_span(1),
                f'pivotWider makes one column per distinct value of "{names_from}", and those values are not '
                "known before running; they are known when the table comes from pivotLonger",
            )
            return Abs(ERROR_T)
        keys = tt.without([names_from, values_from])
        clash = [d for d in domain if d in keys]
        if clash:
            self.contract(ctx, 1, Kind.NAME_CLASH, f'new column "{clash[0]}" clashes with a key column')
            return Abs(ERROR_T)
        vtype = tt[values_from].type
        return Abs(TableT(keys.plus(*(ColumnType(d, vtype, True) for d in domain))))

    def group_by(self, ctx, args, keep_key: bool):
        tt = self.table_arg(ctx, 0, args[0])
        c = self.known_name(ctx, 1, args[1])
        if tt is None or c is None or not self.require_present(ctx, 1, tt, c):
            return Abs(ERROR_T)
        col = tt[c]
        if col.optional:
            self.report(Kind.SORT_MISMATCH, ctx.arg_span(1), f'group key "{c}" must not be optional')
        sub = tt if keep_key else tt.without([c])
        return Abs(TableT(TableType((ColumnType("key", col.type), ColumnType("groups", TableT(sub))))))

    def b_groupByRetentive(self, ctx, args):
        return self.group_by(ctx, args, True)

    def b_groupBySubtractive(self, ctx, args):
        return self.group_by(ctx, args, False)

    def b_sampleRows(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        for i in range(1, len(args)):
            self.expect(ctx, i, args[i], NUM)
        return Abs(TableT(tt), domains=args[0].domains) if tt is not None else Abs(ERROR_T)

    def b_dotProduct(self, ctx, args):
        tt = self.table_arg(ctx, 0, args[0])
        if tt is None:
            return Abs(NUM)
        for i in (1, 2):
            t = self.resolve(tt, args[i], ctx.arg_span(i))
            inner, optional = split_optional(t)
            if not assignable(inner, NUM):
                self.mismatch(ctx.arg_span(i), f"dotProduct needs Number columns, got {inner}", NUM, inner)
            elif optional:
                self.warn(
                    Kind.POSSIBLY_MISSING,
                    ctx.arg_span(i),
                    "this column is optional; dotProduct fails if any of its cells is empty",
                )
        return Abs(NUM)

    def b_fisherTest(self, ctx, args):
        for i in (0, 1):
            self.expect(ctx, i, args[i], SeqT(BOOL), "Seq<Boolean>")
        return Abs(NUM)

    def b_isMissing(self, ctx, args):
        return Abs(BOOL)

    def b_withDefault(self, ctx, args):
        inner, _ = split_optional(args[0].type)
        joined = join(inner, args[1].type)
        if joined is None or isinstance(joined, OptionalT):
            return self.mismatch(ctx.arg_span(1), f"the default must have sort {inner}", inner, args[1].type)
        return Abs(joined)

    def b_nameAppend(self, ctx, args):
        ok = all(self.expect(ctx, i, args[i], COLNAME, "a column name") for i in (0, 1))
        return Abs(COLNAME, names=concat_facts(args[0].names, args[1].names) if ok else None)

    def b_nameSplit(self, ctx, args):
        self.expect(ctx, 0, args[0], COLNAME, "a column name")
        self.expect(ctx, 1, args[1], STR)
        return Abs(SeqT(STR))

    def b_namePrefix(self, ctx, args):
        self.expect(ctx, 0, args[0], COLNAME, "a column name")
        self.expect(ctx, 1, args[1], COLNAME, "a column name")
        return Abs(BOOL)

    def b_length(self, ctx, args):
        if not isinstance(args[0].type, (SeqT, ErrorT)):
            self.mismatch(ctx.arg_span(0), f"length needs a sequence, got {args[0].type}", "Seq<...>", args[0].type)
        return Abs(NUM)

    def b_range(self, ctx, args):
        self.expect(ctx, 0, args[0], NUM)
        return Abs(SeqT(NUM))


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _dead(narrowed: list) -> bool:
    """Narrowing leaves a name with no possible value, so the arm cannot run."""
    return any(item[0] == "fact" and item[2].candidates == () for item in narrowed)


def _walk_no_functions(node):
    yield node
    if isinstance(node, A.FunctionDef):
        return
    for child in node.children():
        yield from _walk_no_functions(child)


def _used_flags(scope: Scope) -> list[tuple[Binding, bool]]:
    out, s = [], scope
    while s is not None:
        out.extend((b, b.used) for b in s.vars.values())
        s = s.parent
    return out


def _restore_used(scope: Scope, flags) -> None:
    for b, used in flags:
        b.used = used


def _cell_text(cell) -> str:
    if isinstance(cell, A.StringLit):
        return f'"{cell.value}"'
    if isinstance(cell, A.NumberLit):
        return format_number(cell.value)
    if isinstance(cell, A.BoolLit):
        return "true" if cell.value else "false"
    return "value"


def check_program(program: A.Program, env: Optional[Mapping[str, Any]] = None, file: str = "<input>") -> CheckResult:
    """Check a whole program against the given initial bindings (usually tables)."""
    return Checker(env, file).check_program(program)
