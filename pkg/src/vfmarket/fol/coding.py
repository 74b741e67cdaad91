"""An injective numbering of sentences up to renaming of bound variables.

A sentence is walked in a fixed order and every syntactic choice becomes a
digit in a mixed-radix numeral: a choice among ``r`` alternatives is a
digit ``d < r`` and the code is ``d0 + r0*(d1 + r1*(d2 + ...))``.
Variables are written as positions in the current scope, naturals with a
unary length header followed by binary digits.  Digit 0 always selects a
terminal alternative, so decoding any natural terminates.  The numbering is
injective but not onto: a natural whose digits are not used up by the
sentence they spell is not a code.
"""
from __future__ import annotations

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
    canonical_names,
)

_TERM_KINDS_OPEN = ("const", "var", "+", "*", "-")
_TERM_KINDS_CLOSED = ("const", "+", "*", "-")
_MATRIX_KINDS = ("atom", "&", "|", "bounded")


class _Writer:
    def __init__(self):
        self.digits: list[tuple[int, int]] = []

    def choice(self, radix: int, digit: int) -> None:
        assert 0 <= digit < radix
        self.digits.append((digit, radix))

    def value(self) -> int:
        code = 0
        for digit, radix in reversed(self.digits):
            code = code * radix + digit
        return code


class _Reader:
    def __init__(self, code: int):
        self.rest = code

    def choice(self, radix: int) -> int:
        self.rest, digit = divmod(self.rest, radix)
        return digit


def _write_nat(w: _Writer, n: int) -> None:
    m = n + 1
    length = m.bit_length() - 1
    for _ in range(length):
        w.choice(2, 1)
    w.choice(2, 0)
    for i in range(length - 1, -1, -1):
        w.choice(2, (m >> i) & 1)


def _read_nat(r: _Reader) -> int:
    length = 0
    while r.choice(2):
        length += 1
    m = 1
    for _ in range(length):
        m = (m << 1) | r.choice(2)
    return m - 1


def _write_term(w: _Writer, t: Term, scope: list[str]) -> None:
    kinds = _TERM_KINDS_OPEN if scope else _TERM_KINDS_CLOSED
    if isinstance(t, Const):
        w.choice(len(kinds), 0)
        _write_nat(w, t.value)
    elif isinstance(t, Var):
        w.choice(len(kinds), 1)
        w.choice(len(scope), scope.index(t.name))
    else:
        w.choice(len(kinds), kinds.index(t.op))
        _write_term(w, t.left, scope)
        _write_term(w, t.right, scope)


def _read_term(r: _Reader, scope: list[str]) -> Term:
    kinds = _TERM_KINDS_OPEN if scope else _TERM_KINDS_CLOSED
    kind = kinds[r.choice(len(kinds))]
    if kind == "const":
        return Const(_read_nat(r))
    if kind == "var":
        return Var(scope[r.choice(len(scope))])
    left = _read_term(r, scope)
    right = _read_term(r, scope)
    return BinOp(kind, left, right)


def _write_matrix(w: _Writer, m: Matrix, scope: list[str]) -> None:
    if isinstance(m, Cmp):
        w.choice(4, 0)
        w.choice(len(CMP_OPS), CMP_OPS.index(m.op))
        _write_term(w, m.left, scope)
        _write_term(w, m.right, scope)
    elif isinstance(m, (And, Or)):
        w.choice(4, 1 if isinstance(m, And) else 2)
        _write_matrix(w, m.left, scope)
        _write_matrix(w, m.right, scope)
    else:
        w.choice(4, 3)
        w.choice(2, 0 if m.quant == EXISTS else 1)
        _write_term(w, m.bound, scope)
        _write_matrix(w, m.body, scope + [m.var])


def _read_matrix(r: _Reader, scope: list[str]) -> Matrix:
    kind = _MATRIX_KINDS[r.choice(4)]
    if kind == "atom":
        op = CMP_OPS[r.choice(len(CMP_OPS))]
        left = _read_term(r, scope)
        right = _read_term(r, scope)
        return Cmp(op, left, right)
    if kind in ("&", "|"):
        left = _read_matrix(r, scope)
        right = _read_matrix(r, scope)
        return And(left, right) if kind == "&" else Or(left, right)
    quant = EXISTS if r.choice(2) == 0 else FORALL
    bound = _read_term(r, scope)
    var = f"v{len(scope)}"
    body = _read_matrix(r, scope + [var])
    return Bounded(quant, var, bound, body)


def canonical_code(s: Sentence) -> int:
    """Natural number identifying the alpha-equivalence class of ``s``."""
    cached = s.__dict__.get("_code")
    if cached is not None:
        return cached
    canon = canonical_names(s)
    w = _Writer()
    for q, _ in canon.prefix:
        w.choice(2, 1)
        w.choice(2, 0 if q == EXISTS else 1)
    w.choice(2, 0)
    _write_matrix(w, canon.matrix, [v for _, v in canon.prefix])
    code = w.value()
    s.__dict__["_code"] = code
    return code


def enumerate_sentence(k: int) -> Sentence | None:
    """Inverse of :func:`canonical_code`, or ``None`` if ``k`` is not a code."""
    if k < 0:
        raise ValueError("codes are naturals")
    r = _Reader(k)
    prefix = []
    while r.choice(2):
        q = EXISTS if r.choice(2) == 0 else FORALL
        prefix.append((q, f"v{len(prefix)}"))
    matrix = _read_matrix(r, [v for _, v in prefix])
    if r.rest:
        return None
    return Sentence(tuple(prefix), matrix)
