"""Classification, evaluation and the ``play`` transformation on sentences."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .. import kernels
from .compile import compile_sentence
from .syntax import (
    EXISTS,
    And,
    Bounded,
    Const,
    Or,
    Sentence,
    dual,
    matrix_constants,
    negate_matrix,
    rename_matrix,
    sentence_names,
    subst_matrix,
)


class SentenceError(ValueError):
    """Operation applied to a sentence of the wrong shape."""


# -- moves -----------------------------------------------------------------

class _Pass:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Pass"

    def __reduce__(self):
        return (_Pass, ())


PASS = _Pass()


@dataclass(frozen=True)
class Witnesses:
    """A nonempty finite set of naturals, kept sorted and duplicate-free."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(sorted(set(self.values)))
        if not vals:
            raise SentenceError("a move must name at least one natural")
        if any(not isinstance(v, int) or v < 0 for v in vals):
            raise SentenceError(f"witnesses must be naturals, got {self.values!r}")
        object.__setattr__(self, "values", vals)

    def __iter__(self):
        return iter(self.values)

    def __repr__(self):
        return "{" + ",".join(map(str, self.values)) + "}"


Move = Union[_Pass, Witnesses]


def as_move(x) -> Move:
    """Coerce ``None``/``PASS``/an iterable of naturals to a :data:`Move`."""
    if x is None or x is PASS:
        return PASS
    if isinstance(x, Witnesses):
        return x
    if isinstance(x, int):
        return Witnesses((x,))
    return Witnesses(tuple(x))


def format_move(m: Move) -> str:
    return "Pass" if m is PASS else repr(m)


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class SentenceClass:
    kind: str  # "Sigma", "Pi" or "Delta0"
    level: int

    def __str__(self):
        return "Delta0" if self.kind == "Delta0" else f"{self.kind}_{self.level}"


def quantifier_blocks(prefix) -> list[list[tuple[str, str]]]:
    blocks: list[list[tuple[str, str]]] = []
    for q, v in prefix:
        if blocks and blocks[-1][0][0] == q:
            blocks[-1].append((q, v))
        else:
            blocks.append([(q, v)])
    return blocks


def classify(s: Sentence) -> SentenceClass:
    if not s.prefix:
        return SentenceClass("Delta0", 0)
    kind = "Sigma" if s.prefix[0][0] == EXISTS else "Pi"
    return SentenceClass(kind, len(quantifier_blocks(s.prefix)))


def is_sigma(s: Sentence) -> bool:
    return bool(s.prefix) and s.prefix[0][0] == EXISTS


def is_pi(s: Sentence) -> bool:
    return bool(s.prefix) and s.prefix[0][0] != EXISTS


# -- evaluation ------------------------------------------------------------

def eval_delta0(s: Sentence) -> bool:
    if s.prefix:
        raise SentenceError(f"not a Delta0 sentence: {s}")
    prog = compile_sentence(s)
    return kernels.evaluate(*prog.arrays, prog.root, prog.env())


def bounded_eval(s: Sentence, bound: int) -> bool:
    """Truth of ``s`` with every prefix variable restricted to ``0..bound``."""
    prog = compile_sentence(s)
    return kernels.prefix_bounded(*prog.arrays, prog.root, prog.env(), prog.quants, bound)


def eval_cost(s: Sentence, cap: int = 10**6) -> int:
    """Work needed to decide a Delta0 sentence (node visits, no short-circuit).

    ``eval_cost(negate(s)) == eval_cost(s)``.
    """
    if s.prefix:
        raise SentenceError(f"not a Delta0 sentence: {s}")
    prog = compile_sentence(s)
    return kernels.cost(*prog.arrays, prog.root, prog.env(), cap)


def window(s: Sentence, t: int) -> Sentence:
    """The Delta0 approximation with every prefix quantifier bounded by ``t``."""
    m = s.matrix
    for q, v in reversed(s.prefix):
        m = Bounded(q, v, Const(t), m)
    return Sentence((), m)


# -- syntactic transformations --------------------------------------------

def negate(s: Sentence) -> Sentence:
    return Sentence(tuple((dual(q), v) for q, v in s.prefix), negate_matrix(s.matrix))


def substitute_leading(s: Sentence, n: int) -> Sentence:
    if not s.prefix:
        raise SentenceError(f"Delta0 sentence has no leading variable: {s}")
    (_, var), rest = s.prefix[0], s.prefix[1:]
    return Sentence(rest, subst_matrix(s.matrix, {var: Const(n)}))


def _fresh(base: str, index: int, taken: set[str]) -> str:
    name = f"{base}{index}"
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{index}_{k}"
    taken.add(name)
    return name


def play_set(s: Sentence, move: Move) -> Sentence:
    """Apply a move: Pass leaves ``s`` alone, a witness set instantiates the leading variable.

    For several witnesses the instances are combined by disjunction (Sigma)
    or conjunction (Pi) and re-prenexed.  Each instance gets fresh names for
    its remaining prefix variables; the merged prefix keeps the quantifier
    blocks of ``s``, listing the instances in ascending witness order inside
    each block, so the sentence class drops by exactly one level when the
    leading block is exhausted.
    """
    move = as_move(move)
    if move is PASS:
        return s
    if not s.prefix:
        raise SentenceError(f"cannot play a witness set on a Delta0 sentence: {s}")
    witnesses = move.values
    if len(witnesses) == 1:
        return substitute_leading(s, witnesses[0])
    combine = Or if s.prefix[0][0] == EXISTS else And
    rest = s.prefix[1:]
    taken = sentence_names(s)
    blocks = quantifier_blocks(rest)
    merged_blocks: list[list[tuple[str, str]]] = [[] for _ in blocks]
    matrix = None
    for i, n in enumerate(witnesses, start=1):
        inst = substitute_leading(s, n)
        renaming = {v: _fresh(v, i, taken) for _, v in rest}
        body = rename_matrix(inst.matrix, renaming)
        for bi, block in enumerate(blocks):
            merged_blocks[bi].extend((q, renaming[v]) for q, v in block)
        matrix = body if matrix is None else combine(matrix, body)
    prefix = tuple(entry for block in merged_blocks for entry in block)
    return Sentence(prefix, matrix)


def max_constant(s: Sentence) -> int:
    return max(matrix_constants(s.matrix), default=0)


def instances(s: Sentence, witnesses: Iterable[int]) -> list[Sentence]:
    return [substitute_leading(s, n) for n in sorted(set(witnesses))]
