"""Lowering of matrices to the flat node arrays consumed by the kernels."""
from __future__ import annotations

from dataclasses import dataclass

from .. import _purekernels as op
from .syntax import And, BinOp, Bounded, Cmp, Const, Matrix, Or, Sentence, Term, Var

_CMP = {"=": op.OP_EQ, "!=": op.OP_NE, "<": op.OP_LT, "<=": op.OP_LE, ">": op.OP_GT, ">=": op.OP_GE}
_ARITH = {"+": op.OP_ADD, "*": op.OP_MUL, "-": op.OP_SUB}


@dataclass(frozen=True)
class Program:
    kind: tuple
    a: tuple
    b: tuple
    c: tuple
    root: int
    nslots: int
    quants: tuple  # prefix quantifiers as 0 (exists) / 1 (forall); slots 0..len-1

    def env(self) -> list[int]:
        return [0] * max(self.nslots, 1)

    @property
    def arrays(self):
        return self.kind, self.a, self.b, self.c


class _Builder:
    def __init__(self):
        self.kind, self.a, self.b, self.c = [], [], [], []
        self.nslots = 0

    def node(self, k, a=0, b=0, c=0) -> int:
        self.kind.append(k)
        self.a.append(a)
        self.b.append(b)
        self.c.append(c)
        return len(self.kind) - 1

    def term(self, t: Term, slots: dict[str, int]) -> int:
        if isinstance(t, Const):
            return self.node(op.OP_CONST, t.value)
        if isinstance(t, Var):
            return self.node(op.OP_VAR, slots[t.name])
        left = self.term(t.left, slots)
        right = self.term(t.right, slots)
        return self.node(_ARITH[t.op], left, right)

    def matrix(self, m: Matrix, slots: dict[str, int]) -> int:
        if isinstance(m, Cmp):
            left = self.term(m.left, slots)
            right = self.term(m.right, slots)
            return self.node(_CMP[m.op], left, right)
        if isinstance(m, (And, Or)):
            left = self.matrix(m.left, slots)
            right = self.matrix(m.right, slots)
            return self.node(op.OP_AND if isinstance(m, And) else op.OP_OR, left, right)
        assert isinstance(m, Bounded)
        bound = self.term(m.bound, slots)
        slot = len(slots)
        self.nslots = max(self.nslots, slot + 1)
        body = self.matrix(m.body, {**slots, m.var: slot})
        return self.node(op.OP_BEX if m.quant == "E" else op.OP_BALL, slot, bound, body)


def compile_sentence(s: Sentence) -> Program:
    """Compile ``s``; prefix variable ``j`` is bound to slot ``j``."""
    cached = s.__dict__.get("_program")
    if cached is not None:
        return cached
    builder = _Builder()
    slots = {v: j for j, (_, v) in enumerate(s.prefix)}
    builder.nslots = len(slots)
    root = builder.matrix(s.matrix, slots)
    prog = Program(
        tuple(builder.kind), tuple(builder.a), tuple(builder.b), tuple(builder.c),
        root, builder.nslots, tuple(0 if q == "E" else 1 for q, _ in s.prefix),
    )
    s.__dict__["_program"] = prog
    return prog
