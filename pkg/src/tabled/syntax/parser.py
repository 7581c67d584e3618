"""Recursive-descent parser producing :mod:`tabled.syntax.ast` trees.

Grammar (EBNF)::

    program   = { NL } [ stmt { NL { NL } stmt } ] { NL } EOF
    stmt      = IDENT "=" { NL } expr
              | "for" IDENT "in" expr ":" block "end"
              | expr
    block     = { NL } [ stmt { NL { NL } stmt } ] { NL }
    expr      = or
    or        = and { "or" and }
    and       = not { "and" not }
    not       = "not" not | cmp
    cmp       = add [ ( "==" | "<" | "<=" ) add ]
    add       = mul { ( "+" | "-" | "++" ) mul }
    mul       = unary { ( "*" | "/" ) unary }
    unary     = "-" unary | postfix
    postfix   = primary { "(" args ")" | "[" expr "]" }
    primary   = NUM | STR | "true" | "false" | IDENT | "(" expr ")"
              | "[" [ expr { "," expr } ] "]"
              | "function" "(" [ IDENT { "," IDENT } ] ")" ":" block "end"
              | "if" expr ":" block [ "else" ":" block ] "end"
              | "println" "(" expr ")"
              | table
    table     = "table" ":" NL header NL { row NL } "end"
    header    = hcell { "|" hcell }
    hcell     = ( STR | IDENT { IDENT } ) [ ":" sort ]
    sort      = IDENT [ "<" sort ">" ] [ "?" ]
    row       = cell { "|" cell }
    cell      = "_" | expr

``orderBy(t, [(getKey, compare), ...])`` is a special form: its second
argument is a bracketed list of parenthesized pairs.
"""

from __future__ import annotations

from ..errors import ParseError, SourceSpan
from . import ast as A
from .lexer import Token, tokenize

SORT_NAMES = ("Number", "String", "Boolean", "ColName", "Seq")

_CMP = {"EQEQ": "==", "LT": "<", "LE": "<="}
_ADD = {"PLUS": "+", "MINUS": "-", "CONCAT": "++"}
_MUL = {"STAR": "*", "SLASH": "/"}


class Parser:
    def __init__(self, tokens: list[Token], file: str = "<input>"):
        self.tokens = tokens
        self.pos = 0
        self.file = file

    # ----- token helpers -------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _eof_span(self) -> SourceSpan:
        if self.tokens:
            s = self.tokens[-1].span
            return SourceSpan(s.file, s.end_line, s.end_col, s.end_line, s.end_col)
        return SourceSpan(self.file, 1, 1, 1, 1)

    def error(self, expected: tuple[str, ...]) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok is None else _describe(tok)
        span = self._eof_span() if tok is None else tok.span
        want = " or ".join(expected)
        return ParseError(f"expected {want}, found {found}", span, expected, found)

    def expect(self, kind: str, label: str | None = None) -> Token:
        if not self.at(kind):
            raise self.error((label or _label(kind),))
        return self.advance()

    def skip_newlines(self) -> None:
        while self.at("NEWLINE"):
            self.advance()

    # ----- statements ----------------------------------------------------

    def parse_program(self) -> A.Program:
        body = self.parse_block(terminators=())
        if self.peek() is not None:
            raise self.error(("a new statement",))
        if body:
            span = body[0].span.cover(body[-1].span)
        else:
            span = SourceSpan(self.file, 1, 1, 1, 1)
        return A.Program(body, span)

    def parse_block(self, terminators: tuple[str, ...]) -> list:
        stmts = []
        self.skip_newlines()
        while self.peek() is not None and not self.at(*terminators):
            stmts.append(self.parse_stmt())
            if self.at(*terminators) or self.peek() is None:
                break
            if not self.at("NEWLINE"):
                want = tuple(_label(k) for k in terminators) + ("a line break",)
                raise self.error(want)
            self.skip_newlines()
        return stmts

    def parse_stmt(self):
        tok = self.peek()
        if tok.kind == "IDENT" and self.peek(1) is not None and self.peek(1).kind == "EQ":
            self.advance()
            self.advance()
            self.skip_newlines()
            value = self.parse_expr()
            return A.Bind(tok.text, value, tok.span.cover(value.span), tok.span)
        if tok.kind == "KW_FOR":
            self.advance()
            var = self.expect("IDENT", "a loop variable")
            self.expect("KW_IN")
            iterable = self.parse_expr()
            self.expect("COLON")
            body = self.parse_block(("KW_END",))
            end = self.expect("KW_END")
            return A.ForIn(var.text, iterable, body, tok.span.cover(end.span), var.span)
        expr = self.parse_expr()
        return A.ExprStmt(expr, expr.span)

    # ----- expressions ---------------------------------------------------

    def parse_expr(self):
        return self.parse_or()

    def _binary(self, sub, ops: dict[str, str]):
        left = sub()
        while self.peek() is not None and self.peek().kind in ops:
            op = ops[self.advance().kind]
            right = sub()
            left = A.BinOp(op, left, right, left.span.cover(right.span))
        return left

    def parse_or(self):
        return self._binary(self.parse_and, {"KW_OR": "or"})

    def parse_and(self):
        return self._binary(self.parse_not, {"KW_AND": "and"})

    def parse_not(self):
        if self.at("KW_NOT"):
            tok = self.advance()
            operand = self.parse_not()
            return A.Not(operand, tok.span.cover(operand.span))
        return self.parse_cmp()

    def parse_cmp(self):
        left = self.parse_add()
        if self.peek() is not None and self.peek().kind in _CMP:
            op = _CMP[self.advance().kind]
            right = self.parse_add()
            left = A.BinOp(op, left, right, left.span.cover(right.span))
        return left

    def parse_add(self):
        return self._binary(self.parse_mul, _ADD)

    def parse_mul(self):
        return self._binary(self.parse_unary, _MUL)

    def parse_unary(self):
        if self.at("MINUS"):
            tok = self.advance()
            operand = self.parse_unary()
            return A.Neg(operand, tok.span.cover(operand.span))
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_primary()
        while True:
            if self.at("LPAREN"):
                self.advance()
                if isinstance(expr, A.Var) and expr.name == "orderBy":
                    args = self.parse_order_by_args()
                else:
                    args = self.parse_args("RPAREN")
                end = self.expect("RPAREN")
                expr = A.Call(expr, args, expr.span.cover(end.span))
            elif self.at("LBRACKET"):
                self.advance()
                key = self.parse_expr()
                end = self.expect("RBRACKET")
                expr = A.RowIndex(expr, key, expr.span.cover(end.span))
            else:
                return expr

    def parse_args(self, closer: str) -> list:
        args = []
        if self.at(closer):
            return args
        args.append(self.parse_expr())
        while self.at("COMMA"):
            self.advance()
            args.append(self.parse_expr())
        return args

    def parse_order_by_args(self) -> list:
        table = self.parse_expr()
        self.expect("COMMA")
        open_ = self.expect("LBRACKET")
        pairs = []
        while True:
            self.expect("LPAREN", "a (getKey, compare) pair")
            get_key = self.parse_expr()
            self.expect("COMMA")
            compare = self.parse_expr()
            self.expect("RPAREN")
            pairs.append((get_key, compare))
            if not self.at("COMMA"):
                break
            self.advance()
        close = self.expect("RBRACKET")
        return [table, A.OrderBySpec(pairs, open_.span.cover(close.span))]

    def parse_primary(self):
        tok = self.peek()
        if tok is None:
            raise self.error(("an expression",))
        kind = tok.kind
        if kind == "NUM":
            self.advance()
            return A.NumberLit(tok.value, tok.span)
        if kind == "STR":
            self.advance()
            return A.StringLit(tok.value, tok.span)
        if kind in ("KW_TRUE", "KW_FALSE"):
            self.advance()
            return A.BoolLit(tok.value, tok.span)
        if kind == "IDENT":
            self.advance()
            return A.Var(tok.text, tok.span)
        if kind == "LPAREN":
            self.advance()
            inner = self.parse_expr()
            self.expect("RPAREN")
            return inner
        if kind == "LBRACKET":
            self.advance()
            items = self.parse_args("RBRACKET")
            end = self.expect("RBRACKET")
            return A.SeqLit(items, tok.span.cover(end.span))
        if kind == "KW_FUNCTION":
            return self.parse_function()
        if kind == "KW_IF":
            return self.parse_if()
        if kind == "KW_PRINTLN":
            self.advance()
            self.expect("LPAREN")
            arg = self.parse_expr()
            end = self.expect("RPAREN")
            return A.Println(arg, tok.span.cover(end.span))
        if kind == "KW_TABLE":
            return self.parse_table()
        if kind == "BLANK":
            raise ParseError("a blank cell marker `_` is only allowed inside a table literal", tok.span,
                             ("an expression",), "_")
        raise self.error(("an expression",))

    def parse_function(self):
        start = self.advance()
        self.expect("LPAREN")
        params = []
        if not self.at("RPAREN"):
            while True:
                p = self.expect("IDENT", "a parameter name")
                params.append(A.Param(p.text, p.span))
                if not self.at("COMMA"):
                    break
                self.advance()
        self.expect("RPAREN")
        self.expect("COLON")
        body = self.parse_block(("KW_END",))
        end = self.expect("KW_END")
        return A.FunctionDef(params, body, start.span.cover(end.span))

    def parse_if(self):
        start = self.advance()
        cond = self.parse_expr()
        self.expect("COLON")
        then = self.parse_block(("KW_END", "KW_ELSE"))
        orelse = None
        if self.at("KW_ELSE"):
            self.advance()
            self.expect("COLON")
            orelse = self.parse_block(("KW_END",))
        end = self.expect("KW_END")
        return A.If(cond, then, orelse, start.span.cover(end.span))

    # ----- table literals --------------------------------------------------

    def parse_table(self):
        start = self.advance()
        self.expect("COLON")
        self.expect("NEWLINE", "a line break before the header")
        self.skip_newlines()
        header = [self.parse_header_cell()]
        while self.at("PIPE"):
            self.advance()
            header.append(self.parse_header_cell())
        rows = []
        while True:
            if self.at("KW_END"):
                break
            self.expect("NEWLINE", "a line break after a table row")
            self.skip_newlines()
            if self.at("KW_END"):
                break
            rows.append(self.parse_row())
        end = self.expect("KW_END")
        return A.TableLit(header, rows, start.span.cover(end.span))

    def parse_header_cell(self):
        tok = self.peek()
        if tok is not None and tok.kind == "STR":
            self.advance()
            name, span = tok.value, tok.span
        elif tok is not None and tok.kind == "IDENT":
            words = [self.advance()]
            while self.at("IDENT"):
                words.append(self.advance())
            name = " ".join(w.text for w in words)
            span = words[0].span.cover(words[-1].span)
        else:
            raise self.error(("a column name",))
        sort = None
        if self.at("COLON"):
            self.advance()
            sort = self.parse_sort()
            span = span.cover(sort.span)
        return A.HeaderCell(name, sort, span)

    def parse_sort(self):
        tok = self.expect("IDENT", "a sort name")
        if tok.text not in SORT_NAMES:
            raise ParseError(
                f"unknown sort {tok.text!r}; expected one of {', '.join(SORT_NAMES)}",
                tok.span,
                SORT_NAMES,
                tok.text,
            )
        span = tok.span
        elem = None
        if tok.text == "Seq":
            self.expect("LT")
            elem = self.parse_sort()
            end = self.expect("GT")
            span = span.cover(end.span)
        optional = False
        if self.at("QUESTION"):
            optional = True
            span = span.cover(self.advance().span)
        return A.SortAnn(tok.text, elem, optional, span)

    def parse_row(self):
        cells = [self.parse_cell()]
        while self.at("PIPE"):
            self.advance()
            cells.append(self.parse_cell())
        return A.TableRow(cells, cells[0].span.cover(cells[-1].span))

    def parse_cell(self):
        if self.at("BLANK"):
            return A.Blank(self.advance().span)
        return self.parse_expr()


def _label(kind: str) -> str:
    if kind.startswith("KW_"):
        return f"`{kind[3:].lower()}`"
    from .lexer import PUNCT_TEXT

    if kind in PUNCT_TEXT:
        return f"`{PUNCT_TEXT[kind]}`"
    return {"IDENT": "a name", "NEWLINE": "a line break", "STR": "a string", "NUM": "a number"}.get(kind, kind)


def _describe(tok: Token) -> str:
    if tok.kind == "NEWLINE":
        return "a line break"
    return f"`{tok.text}`"


def parse_program(tokens: list[Token], file: str = "<input>") -> A.Program:
    return Parser(tokens, file).parse_program()


def parse_source(source: str, file: str = "<input>") -> A.Program:
    return parse_program(tokenize(source, file), file)


def parse_table_literal(source: str, file: str = "<input>") -> A.TableLit:
    """Parse a single ``table: ... end`` block."""
    p = Parser(tokenize(source, file), file)
    p.skip_newlines()
    if not p.at("KW_TABLE"):
        raise p.error(("`table`",))
    lit = p.parse_table()
    p.skip_newlines()
    if p.peek() is not None:
        raise p.error(("end of input",))
    return lit
