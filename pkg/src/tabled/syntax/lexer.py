"""Tokenizer for ``.tbl`` sources.

Newlines are significant (they end statements and table rows) except inside
parentheses and brackets; a ``function``/``if``/``for``/``table`` block opened
inside brackets makes them significant again until its ``end``. A ``>`` that
opens a line is a REPL prompt and is skipped, so transcripts can be pasted
verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import LexError, SourceSpan

KEYWORDS = {
    "function",
    "end",
    "for",
    "in",
    "if",
    "else",
    "and",
    "or",
    "not",
    "true",
    "false",
    "table",
    "println",
}

# longest first
PUNCT = [
    ("++", "CONCAT"),
    ("==", "EQEQ"),
    ("<=", "LE"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("[", "LBRACKET"),
    ("]", "RBRACKET"),
    (",", "COMMA"),
    (":", "COLON"),
    ("=", "EQ"),
    ("<", "LT"),
    (">", "GT"),
    ("+", "PLUS"),
    ("-", "MINUS"),
    ("*", "STAR"),
    ("/", "SLASH"),
    ("|", "PIPE"),
    ("?", "QUESTION"),
]

PUNCT_TEXT = {kind: text for text, kind in PUNCT}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: object = None
    span: SourceSpan = field(default=None, compare=False)

    def __repr__(self):
        return f"{self.kind}({self.text!r})"


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    stack: list[str] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    at_line_start = True

    def span(l0, c0, l1, c1):
        return SourceSpan(file, l0, c0, l1, c1)

    def emit_newline(l0, c0):
        if tokens and tokens[-1].kind != "NEWLINE" and (not stack or stack[-1] == "block"):
            tokens.append(Token("NEWLINE", "\n", None, span(l0, c0, l0, c0 + 1)))

    while i < n:
        ch = source[i]
        if ch == "\n":
            emit_newline(line, col)
            i += 1
            line, col = line + 1, 1
            at_line_start = True
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        if at_line_start and ch == ">" and (i + 1 == n or source[i + 1] in " \t\r\n"):
            # prompt marker
            i += 1
            col += 1
            at_line_start = False
            continue
        at_line_start = False
        start_line, start_col = line, col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j + 1 < n and source[j] == "." and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            col += j - i
            i = j
            tokens.append(Token("NUM", text, float(text), span(start_line, start_col, line, col)))
            continue
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            col += j - i
            i = j
            if text == "_":
                kind = "BLANK"
            elif text in KEYWORDS:
                kind = "KW_" + text.upper()
            else:
                kind = "IDENT"
            if kind in ("KW_FUNCTION", "KW_IF", "KW_FOR", "KW_TABLE"):
                stack.append("block")
            elif kind == "KW_END" and stack and stack[-1] == "block":
                stack.pop()
            value = {"true": True, "false": False}.get(text) if kind in ("KW_TRUE", "KW_FALSE") else None
            tokens.append(Token(kind, text, value, span(start_line, start_col, line, col)))
            continue
        if ch == '"':
            j = i + 1
            out = []
            while True:
                if j >= n or source[j] == "\n":
                    raise LexError(
                        "unterminated string literal",
                        span(start_line, start_col, line, col + (j - i)),
                        '"',
                    )
                c = source[j]
                if c == "\\":
                    nxt = source[j + 1] if j + 1 < n else ""
                    if nxt not in ('"', "\\"):
                        ecol = col + (j - i)
                        raise LexError(
                            f"unsupported escape \\{nxt}; only \\\" and \\\\ are allowed",
                            span(line, ecol, line, ecol + 2),
                            "\\" + nxt,
                        )
                    out.append(nxt)
                    j += 2
                    continue
                if c == '"':
                    j += 1
                    break
                out.append(c)
                j += 1
            text = source[i:j]
            col += j - i
            i = j
            tokens.append(Token("STR", text, "".join(out), span(start_line, start_col, line, col)))
            continue
        for text, kind in PUNCT:
            if source.startswith(text, i):
                i += len(text)
                col += len(text)
                if kind in ("LPAREN", "LBRACKET"):
                    stack.append("paren")
                elif kind in ("RPAREN", "RBRACKET") and stack and stack[-1] == "paren":
                    stack.pop()
                tokens.append(Token(kind, text, None, span(start_line, start_col, line, col)))
                break
        else:
            raise LexError(f"unexpected character {ch!r}", span(line, col, line, col + 1), ch)
    if tokens and tokens[-1].kind == "NEWLINE":
        tokens.pop()
    return tokens


def detokenize(tokens: list[Token]) -> str:
    """Render tokens back to source text (one space between tokens)."""
    parts: list[str] = []
    for tok in tokens:
        if tok.kind == "NEWLINE":
            parts.append("\n")
        else:
            if parts and parts[-1] != "\n":
                parts.append(" ")
            parts.append(tok.text)
    return "".join(parts)
