"""Recursive-descent parser for the sentence grammar.

::

    sentence := (("E"|"A") var ".")* matrix
    matrix   := disj
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "!" unary | ("E"|"A") var "<=" term "." matrix
              | "(" matrix ")" | atom
    atom     := term ("="|"!="|"<"|"<="|">"|">=") term
    term     := prod (("+"|"-") prod)*
    prod     := factor ("*" factor)*
    factor   := nat | var | "(" term ")"

``-`` is truncated subtraction.  The Unicode forms of the connectives,
quantifiers and comparisons are accepted as synonyms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    CMP_OPS,
    EXISTS,
    FORALL,
    And,
    BinOp,
    Bounded,
    Cmp,
    Const,
    Matrix,
    Or,
    Sentence,
    Term,
    Var,
    negate_matrix,
)

_UNICODE = {
    "∃": "E", "∀": "A", "¬": "!", "∧": "&", "∨": "|",
    "≠": "!=", "≤": "<=", "≥": ">=", "−": "-", "·": "*", "×": "*",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>!=|<=|>=|[=<>!&|().+*\-])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'nat', 'ident', 'quant', 'op', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        ch = text[pos]
        if ch in _UNICODE:
            toks.append(_classify(_UNICODE[ch], line, pos - line_start + 1))
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            toks.append(_classify(m.group(), line, pos - line_start + 1, kind))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _classify(text: str, line: int, col: int, kind: str | None = None) -> _Tok:
    if kind is None:
        kind = "op" if not text.isalnum() else "ident"
    if kind == "ident" and text in (EXISTS, FORALL):
        kind = "quant"
    return _Tok(kind, text, line, col)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind not in ("op",):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    # grammar
    def sentence(self) -> Sentence:
        prefix = []
        while self.tok.kind == "quant" and self.peek(2).text == ".":
            q = self.tok.text
            var_tok = self.peek()
            if var_tok.kind != "ident":
                raise self.error("expected a variable after quantifier", var_tok)
            if var_tok.text in self.scope:
                raise self.error(f"duplicate prefix variable {var_tok.text!r}", var_tok)
            self.i += 3
            prefix.append((q, var_tok.text))
            self.scope.append(var_tok.text)
        if self.tok.kind == "eof":
            raise self.error("missing matrix")
        matrix = self.disj()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return Sentence(tuple(prefix), matrix)

    def disj(self) -> Matrix:
        m = self.conj()
        while self.accept("|"):
            m = Or(m, self.conj())
        return m

    def conj(self) -> Matrix:
        m = self.unary()
        while self.accept("&"):
            m = And(m, self.unary())
        return m

    def unary(self) -> Matrix:
        tok = self.tok
        if self.accept("!"):
            return negate_matrix(self.unary())
        if tok.kind == "quant":
            return self.bounded()
        if tok.kind == "op" and tok.text == "(" and not self._paren_is_term():
            self.i += 1
            m = self.disj()
            self.expect(")")
            return m
        return self.atom()

    def _paren_is_term(self) -> bool:
        """Decide whether the group opening here is a term, by looking past it."""
        depth = 0
        j = self.i
        while True:
            t = self.toks[j]
            if t.kind == "eof":
                return False
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    nxt = self.toks[j + 1]
                    return nxt.kind == "op" and nxt.text in CMP_OPS + ("+", "*", "-")
            j += 1

    def bounded(self) -> Matrix:
        q = self.tok.text
        var_tok = self.peek()
        if var_tok.kind != "ident":
            raise self.error("expected a variable after quantifier", var_tok)
        self.i += 2
        if self.tok.kind == "eof":
            raise self.error("missing matrix")
        if self.tok.text == ".":
            raise self.error(
                f"unbounded quantifier over {var_tok.text!r} inside the matrix (not prenex)"
            )
        self.expect("<=")
        if var_tok.text in self.scope:
            raise self.error(f"variable {var_tok.text!r} is already bound", var_tok)
        bound = self.term()
        self.expect(".")
        self.scope.append(var_tok.text)
        try:
            body = self.disj()
        finally:
            self.scope.pop()
        return Bounded(q, var_tok.text, bound, body)

    def atom(self) -> Matrix:
        left = self.term()
        tok = self.tok
        if tok.kind != "op" or tok.text not in CMP_OPS:
            got = tok.text or "end of input"
            raise self.error(f"expected a comparison, got {got!r}")
        self.i += 1
        right = self.term()
        return Cmp(tok.text, left, right)

    def term(self) -> Term:
        t = self.prod()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            t = BinOp(op, t, self.prod())
        return t

    def prod(self) -> Term:
        t = self.factor()
        while self.accept("*"):
            t = BinOp("*", t, self.factor())
        return t

    def factor(self) -> Term:
        tok = self.tok
        if tok.kind == "nat":
            self.i += 1
            return Const(int(tok.text))
        if tok.kind == "ident":
            if tok.text not in self.scope:
                raise self.error(f"unbound variable {tok.text!r}")
            self.i += 1
            return Var(tok.text)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        got = tok.text or "end of input"
        raise self.error(f"expected a term, got {got!r}")


def parse_sentence(text: str) -> Sentence:
    """Parse ``text`` into a :class:`Sentence`.

    Raises :class:`ParseError` (with line and column) on malformed input,
    unbound variables, and duplicate or shadowed variables.
    """
    return _Parser(text).sentence()
