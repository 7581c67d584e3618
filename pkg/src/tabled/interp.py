"""Tree-walking evaluator.

Evaluation is strict and mirrors the checker's scoping: each block gets its
own scope, assignment to a name already bound in the enclosing function
rebinds it, and anything else creates a local. Reading an empty cell is fine;
handing one to any primitive other than ``isMissing``/``withDefault`` fails.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, TextIO

from . import model as M
from . import ops, stats
from .checker.types import schema_conforms
from .contracts import ensure_mode
from .errors import BenchError, ContractViolation, EnsureViolation, EvalError, Kind, SourceSpan
from .model import MISSING, ColName, Row, Table, format_value, is_number, name_text
from .render import render_table
from .signatures import SIGNATURES, arguments
from .syntax import ast as A

DEFAULT_SEED = 42


@dataclass
class EvalConfig:
    ensure_mode: bool = False
    seed: int = DEFAULT_SEED
    out: TextIO = field(default_factory=lambda: sys.stdout)

    def __post_init__(self):
        if not (isinstance(self.seed, int) and 1 <= self.seed <= stats.MODULUS - 1):
            raise ValueError(f"seed must be an integer in [1, {stats.MODULUS - 1}], got {self.seed!r}")


@dataclass
class EvalResult:
    bindings: dict[str, Any]
    output: str
    value: Any = None


@dataclass(eq=False)
class Closure:
    node: A.FunctionDef
    env: Env

    def __repr__(self):
        return f"<function({', '.join(p.name for p in self.node.params)})>"


@dataclass(frozen=True)
class Builtin:
    name: str

    def __repr__(self):
        return f"<builtin {self.name}>"


@dataclass(frozen=True)
class Spec:
    pairs: tuple


class Env:
    def __init__(self, parent: Optional[Env] = None, boundary: bool = False):
        self.parent = parent
        self.boundary = boundary
        self.vars: dict[str, Any] = {}

    def lookup(self, name: str):
        e = self
        while e is not None:
            if name in e.vars:
                return e.vars[name]
            e = e.parent
        raise KeyError(name)

    def assign(self, name: str, value: Any) -> None:
        e = self
        while e is not None:
            if name in e.vars:
                e.vars[name] = value
                return
            if e.boundary:
                break
            e = e.parent
        self.vars[name] = value


def _fault(message: str, span: Optional[SourceSpan] = None) -> EvalError:
    return EvalError(Kind.TYPE_FAULT, message, span)


def _no_missing(v: Any, what: str, span: Optional[SourceSpan] = None) -> Any:
    if v is MISSING:
        raise ContractViolation(Kind.MISSING_CELL, f"{what} received an empty cell", span)
    return v


def _text(v: Any, what: str) -> str:
    _no_missing(v, what)
    if isinstance(v, (str, ColName)):
        return name_text(v)
    raise _fault(f"{what} needs a column name, got {format_value(v)}")


def _seq(v: Any, what: str) -> tuple:
    _no_missing(v, what)
    if isinstance(v, tuple):
        return v
    raise _fault(f"{what} needs a sequence, got {format_value(v)}")


def _table(v: Any, what: str) -> Table:
    _no_missing(v, what)
    if isinstance(v, Table):
        return v
    raise EvalError(Kind.NON_TABLE_ARGUMENT, f"{what} needs a table, got {format_value(v)}")


def _number(v: Any, what: str) -> float:
    _no_missing(v, what)
    if is_number(v):
        return float(v)
    raise _fault(f"{what} needs a Number, got {format_value(v)}")


def _int(v: Any, what: str) -> int:
    x = _number(v, what)
    if not x.is_integer():
        raise ContractViolation(Kind.NON_INTEGRAL_INDEX, f"{what} needs a whole number, got {format_value(x)}")
    return int(x)


def _bool(v: Any, what: str) -> bool:
    _no_missing(v, what)
    if isinstance(v, bool):
        return v
    raise _fault(f"{what} needs a Boolean, got {format_value(v)}")


def _equal(a: Any, b: Any) -> bool:
    if isinstance(a, ColName) or isinstance(b, ColName):
        if isinstance(a, (str, ColName)) and isinstance(b, (str, ColName)):
            return name_text(a) == name_text(b)
        return False
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(_equal(x, y) for x, y in zip(a, b))
    return a == b


def format_output(v: Any) -> str:
    if isinstance(v, Table):
        return render_table(v)
    if isinstance(v, Row):  # shown as a one-row table
        return render_table(Table(v.schema, (v.cells,)))
    return format_value(v)


class Interpreter:
    def __init__(
        self,
        env: Optional[Mapping[str, Any]] = None,
        config: Optional[EvalConfig] = None,
        predicted: Optional[Mapping[int, set]] = None,
    ):
        self.config = config or EvalConfig()
        self.predicted = predicted or {}
        self.prelude = Env(boundary=True)
        self.prelude.vars.update(env or {})
        self.lines: list[str] = []

    # ----- entry point ----------------------------------------------------

    def run(self, program: A.Program) -> EvalResult:
        top = Env(self.prelude, boundary=True)
        with ensure_mode(self.config.ensure_mode):
            value = self.block(program.body, top)
        return EvalResult(dict(top.vars), "".join(line + "\n" for line in self.lines), value)

    def emit(self, text: str) -> None:
        self.lines.append(text)
        self.config.out.write(text + "\n")

    # ----- statements -----------------------------------------------------

    def block(self, stmts: list, env: Env) -> Any:
        value = None
        for s in stmts:
            if isinstance(s, A.Bind):
                env.assign(s.name, self.eval(s.value, env))
                value = None
            elif isinstance(s, A.ForIn):
                self.for_in(s, env)
                value = None
            else:
                value = self.eval(s.expr, env)
        return value

    def for_in(self, s: A.ForIn, env: Env) -> None:
        seq = self.eval(s.iterable, env)
        try:
            items = _seq(seq, "for")
        except BenchError as exc:
            raise exc.with_span(s.iterable.span)
        for item in items:
            body = Env(env)
            body.vars[s.var] = item
            self.block(s.body, body)

    # ----- expressions ----------------------------------------------------

    def eval(self, e, env: Env) -> Any:
        try:
            return getattr(self, "ev_" + type(e).__name__)(e, env)
        except BenchError as exc:
            raise exc.with_span(e.span)

    def ev_NumberLit(self, e, env):
        return float(e.value)

    def ev_BoolLit(self, e, env):
        return e.value

    def ev_StringLit(self, e, env):
        return e.value

    def ev_SeqLit(self, e, env):
        return tuple(self.eval(x, env) for x in e.items)

    def ev_Var(self, e, env):
        try:
            return env.lookup(e.name)
        except KeyError:
            if e.name in SIGNATURES:
                return Builtin(e.name)
            raise EvalError(Kind.UNBOUND_NAME, f'"{e.name}" is not defined', e.span) from None

    def ev_FunctionDef(self, e, env):
        return Closure(e, env)

    def ev_Println(self, e, env):
        self.emit(format_output(self.eval(e.arg, env)))
        return None

    def ev_OrderBySpec(self, e, env):
        return Spec(tuple((self.eval(k, env), self.eval(c, env)) for k, c in e.pairs))

    def ev_Not(self, e, env):
        return not _bool(self.eval(e.operand, env), "not")

    def ev_Neg(self, e, env):
        return -_number(self.eval(e.operand, env), "negation")

    def ev_BinOp(self, e, env):
        op = e.op
        if op == "and":
            return _bool(self.eval(e.left, env), "and") and _bool(self.eval(e.right, env), "and")
        if op == "or":
            return _bool(self.eval(e.left, env), "or") or _bool(self.eval(e.right, env), "or")
        a = self.eval(e.left, env)
        b = self.eval(e.right, env)
        _no_missing(a, op, e.left.span)
        _no_missing(b, op, e.right.span)
        if op == "++":
            if isinstance(a, tuple) and isinstance(b, tuple):
                return a + b
            if isinstance(a, (str, ColName)) and isinstance(b, (str, ColName)):
                text = name_text(a) + name_text(b)
                return ColName(text) if isinstance(a, ColName) and isinstance(b, ColName) else text
            raise _fault(f"++ cannot join {format_value(a)} and {format_value(b)}")
        if op == "==":
            return _equal(a, b)
        if op in ("<", "<="):
            if isinstance(a, ColName):
                a = a.text
            if isinstance(b, ColName):
                b = b.text
            comparable = (is_number(a) and is_number(b)) or all(isinstance(x, str) for x in (a, b)) or all(
                isinstance(x, bool) for x in (a, b)
            )
            if not comparable:
                raise _fault(f"{op} cannot compare {format_value(a)} and {format_value(b)}")
            return a < b if op == "<" else a <= b
        x, y = _number(a, op), _number(b, op)
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if y == 0:
            raise EvalError(Kind.DIVISION_BY_ZERO, "division by zero")
        return x / y

    def ev_If(self, e, env):
        if _bool(self.eval(e.cond, env), "if"):
            return self.block(e.then, Env(env))
        if e.orelse is not None:
            return self.block(e.orelse, Env(env))
        return None

    def ev_RowIndex(self, e, env):
        target = self.eval(e.target, env)
        key = self.eval(e.key, env)
        if isinstance(target, Row):
            return M.get_value(target, _text(key, "row indexing"))
        if isinstance(target, tuple):
            i = _int(key, "sequence indexing")
            if not 0 <= i < len(target):
                raise ContractViolation(
                    Kind.ROW_INDEX_OUT_OF_BOUNDS, f"index {i} is out of bounds for a sequence of length {len(target)}"
                )
            return target[i]
        raise _fault(f"cannot index {format_value(target)}")

    def ev_TableLit(self, e, env):
        names = [h.name for h in e.header]
        grid = []
        for row in e.rows:
            grid.append([MISSING if isinstance(c, A.Blank) else self.eval(c, env) for c in row.cells])
        columns = []
        for c, h in enumerate(e.header):
            if h.sort is not None:
                columns.append(M.Column(h.name, annotation_sort(h.sort), h.sort.optional))
                continue
            present = [row[c] for row in grid if c < len(row) and row[c] is not MISSING]
            sort = M.NOTHING
            for v in present:
                try:
                    sort = M.join_sorts(sort, M.sort_of_value(v)) or sort
                except TypeError:
                    pass
            optional = any(c < len(row) and row[c] is MISSING for row in grid)
            columns.append(M.Column(h.name, sort, optional))
        try:
            table = M.validate_table(M.Schema(tuple(columns)), grid)
        except BenchError as exc:
            d = exc.details
            if "r" in d and "c" in d:
                exc.span = e.rows[d["r"]].cells[d["c"]].span
                exc.details["cell"] = (d["r"] + 1, names[d["c"]])
            elif "r" in d:
                exc.span = e.rows[d["r"]].span
            elif "c" in d:
                exc.span = e.header[d["c"]].span
            raise
        return self.check_prediction(e, table)

    def check_prediction(self, node, value):
        if self.config.ensure_mode and isinstance(value, Table):
            expected = self.predicted.get(id(node))
            if expected and not any(schema_conforms(value.schema, p) for p in expected):
                shown = " or ".join(str(p) for p in expected)
                raise EnsureViolation(
                    f"result schema ({value.schema}) disagrees with the checked table type {shown}",
                    node.span,
                )
        return value

    # ----- calls ------------------------------------------------------------

    def ev_Call(self, e, env):
        f = self.eval(e.callee, env)
        args = [self.eval(a, env) for a in e.args]
        name = e.callee.name if isinstance(e.callee, A.Var) else "function"
        try:
            value = self.call(f, args, name)
        except BenchError as exc:
            exc.with_span(e.span)
            raise
        return self.check_prediction(e, value)

    def call(self, f: Any, args: list, name: str = "function") -> Any:
        if isinstance(f, Builtin):
            sig = SIGNATURES[f.name]
            if not sig.accepts(len(args)):
                raise EvalError(Kind.ARITY_MISMATCH, f"{f.name} takes {sig.arity_text()}, got {len(args)}")
            try:
                return BUILTINS[f.name](self, args)
            except BenchError as exc:
                exc.trace.append(f"in {f.name}")
                raise
        if isinstance(f, Closure):
            params = f.node.params
            if len(params) != len(args):
                raise EvalError(Kind.ARITY_MISMATCH, f"{name} takes {arguments(len(params))}, got {len(args)}")
            env = Env(f.env, boundary=True)
            for p, a in zip(params, args):
                env.vars[p.name] = a
            try:
                return self.block(f.node.body, env)
            except BenchError as exc:
                if exc.span is not None:
                    exc.trace.append(f"in {name} called with {arguments(len(args))}")
                raise
        raise _fault(f"{format_value(f) if not callable(f) else f} is not a function")

    def as_python(self, f: Any, name: str) -> Callable:
        """Wrap a language function so Table API operations can call it."""
        if not isinstance(f, (Closure, Builtin)):
            raise _fault(f"{name} needs a function, got {format_value(f)}")
        return lambda *args: self.call(f, list(args), f"the function passed to {name}")


def annotation_sort(s: A.SortAnn) -> M.Sort:
    """The sort a header annotation such as ``Seq<Number>?`` names (ignoring the ``?``)."""
    if s.name == "Seq":
        return M.SeqSort(annotation_sort(s.elem))
    return {"Number": M.NUMBER, "String": M.STRING, "Boolean": M.BOOLEAN, "ColName": M.COLNAME}[s.name]


# --------------------------------------------------------------------------
# builtins
# --------------------------------------------------------------------------


def _b_with_default(it, args):
    v, d = args
    return d if v is MISSING else v


def _b_build_column(it, args):
    t, c, f = args
    return ops.build_column(_table(t, "buildColumn"), _text(c, "buildColumn"), it.as_python(f, "buildColumn"))


def _b_order_by(it, args):
    t, spec = args
    if not isinstance(spec, Spec):
        raise _fault("orderBy needs a list of (getKey, compare) pairs")
    pairs = [(it.as_python(k, "getKey"), it.as_python(c, "compare")) for k, c in spec.pairs]
    return ops.order_by(_table(t, "orderBy"), pairs)


def _b_sample_rows(it, args):
    t, n = args[0], args[1]
    seed = _int(args[2], "sampleRows seed") if len(args) > 2 else it.config.seed
    return stats.sample_rows(_table(t, "sampleRows"), _int(n, "sampleRows"), seed)


def _b_range(it, args):
    n = _int(args[0], "range")
    return tuple(float(i) for i in range(max(n, 0)))


def _names(v, what):
    return [_text(x, what) for x in _seq(v, what)]


def _b_get_row(it, args):
    t = _table(args[0], "getRow")
    _no_missing(args[1], "getRow")
    return M.get_row(t, args[1])


def _b_get_value(it, args):
    r = _no_missing(args[0], "getValue")
    if not isinstance(r, Row):
        raise _fault(f"getValue needs a row, got {format_value(r)}")
    return M.get_value(r, _text(args[1], "getValue"))


BUILTINS: dict[str, Callable[[Interpreter, list], Any]] = {
    "header": lambda it, a: tuple(ColName(n) for n in _table(a[0], "header").header),
    "nrows": lambda it, a: float(_table(a[0], "nrows").nrows),
    "ncols": lambda it, a: float(_table(a[0], "ncols").ncols),
    "getRow": _b_get_row,
    "getValue": _b_get_value,
    "getColumn": lambda it, a: ops.get_column(_table(a[0], "getColumn"), _text(a[1], "getColumn")),
    "addColumn": lambda it, a: ops.add_column(_table(a[0], "addColumn"), _text(a[1], "addColumn"), _seq(a[2], "addColumn")),
    "buildColumn": _b_build_column,
    "selectRows": lambda it, a: ops.select_rows(_table(a[0], "selectRows"), _seq(a[1], "selectRows")),
    "selectColumns": lambda it, a: ops.select_columns(_table(a[0], "selectColumns"), _names(a[1], "selectColumns")),
    "dropColumns": lambda it, a: ops.drop_columns(_table(a[0], "dropColumns"), _names(a[1], "dropColumns")),
    "head": lambda it, a: ops.head(_table(a[0], "head"), _number(a[1], "head")),
    "tsort": lambda it, a: ops.tsort(_table(a[0], "tsort"), _text(a[1], "tsort"), _bool(a[2], "tsort")),
    "orderBy": _b_order_by,
    "vcat": lambda it, a: ops.vcat(_table(a[0], "vcat"), _table(a[1], "vcat")),
    "hcat": lambda it, a: ops.hcat(_table(a[0], "hcat"), _table(a[1], "hcat")),
    "leftJoin": lambda it, a: ops.left_join(_table(a[0], "leftJoin"), _table(a[1], "leftJoin"), _text(a[2], "leftJoin")),
    "pivotLonger": lambda it, a: ops.pivot_longer(
        _table(a[0], "pivotLonger"), _names(a[1], "pivotLonger"), _text(a[2], "pivotLonger"), _text(a[3], "pivotLonger")
    ),
    "pivotWider": lambda it, a: ops.pivot_wider(
        _table(a[0], "pivotWider"), _text(a[1], "pivotWider"), _text(a[2], "pivotWider")
    ),
    "groupByRetentive": lambda it, a: ops.group_by_retentive(_table(a[0], "groupByRetentive"), _text(a[1], "groupByRetentive")),
    "groupBySubtractive": lambda it, a: ops.group_by_subtractive(
        _table(a[0], "groupBySubtractive"), _text(a[1], "groupBySubtractive")
    ),
    "sampleRows": _b_sample_rows,
    "dotProduct": lambda it, a: ops.dot_product(_table(a[0], "dotProduct"), _text(a[1], "dotProduct"), _text(a[2], "dotProduct")),
    "fisherTest": lambda it, a: stats.fisher_test(_seq(a[0], "fisherTest"), _seq(a[1], "fisherTest")),
    "isMissing": lambda it, a: a[0] is MISSING,
    "withDefault": _b_with_default,
    "nameAppend": lambda it, a: M.name_append(_text(a[0], "nameAppend"), _text(a[1], "nameAppend")),
    "nameSplit": lambda it, a: tuple(M.name_split(_text(a[0], "nameSplit"), _text(a[1], "nameSplit"))),
    "namePrefix": lambda it, a: M.name_prefix(_text(a[0], "namePrefix"), _text(a[1], "namePrefix")),
    "length": lambda it, a: float(len(_seq(a[0], "length"))),
    "range": _b_range,
}

assert set(BUILTINS) == set(SIGNATURES)


def eval_program(
    program: A.Program,
    env: Optional[Mapping[str, Any]] = None,
    config: Optional[EvalConfig] = None,
    predicted: Optional[Mapping[int, set]] = None,
) -> EvalResult:
    """Evaluate a parsed program; raises :class:`BenchError` on failure."""
    return Interpreter(env, config, predicted).run(program)
