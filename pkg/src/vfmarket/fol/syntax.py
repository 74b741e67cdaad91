"""Abstract syntax for prenex sentences over a small arithmetic signature.

Terms are naturals, variables, sums, products and truncated differences.
Matrices are comparison atoms closed under conjunction, disjunction and
bounded quantification.  Negation is not a node: it is pushed to the atoms
when a matrix is built (see :func:`negate_matrix`), so every matrix is in
negation normal form and negation is an involution on syntax.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

EXISTS = "E"
FORALL = "A"
QUANTIFIERS = (EXISTS, FORALL)

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")
_CMP_NEGATION = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
TERM_OPS = ("+", "*", "-")


def dual(q: str) -> str:
    return FORALL if q == EXISTS else EXISTS


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 0:
            raise ValueError(f"constants are naturals, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of TERM_OPS; '-' is truncated at zero
    left: "Term"
    right: "Term"


Term = Union[Const, Var, BinOp]


# -- matrices --------------------------------------------------------------

@dataclass(frozen=True)
class Cmp:
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class And:
    left: "Matrix"
    right: "Matrix"


@dataclass(frozen=True)
class Or:
    left: "Matrix"
    right: "Matrix"


@dataclass(frozen=True)
class Bounded:
    """``E var<=bound. body`` or ``A var<=bound. body``."""

    quant: str
    var: str
    bound: Term
    body: "Matrix"


Matrix = Union[Cmp, And, Or, Bounded]


def negate_matrix(m: Matrix) -> Matrix:
    if isinstance(m, Cmp):
        return Cmp(_CMP_NEGATION[m.op], m.left, m.right)
    if isinstance(m, And):
        return Or(negate_matrix(m.left), negate_matrix(m.right))
    if isinstance(m, Or):
        return And(negate_matrix(m.left), negate_matrix(m.right))
    return Bounded(dual(m.quant), m.var, m.bound, negate_matrix(m.body))


# -- sentences -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sentence:
    """A prenex sentence: unbounded quantifier prefix plus a matrix.

    Equality and hashing are up to renaming of bound variables, so
    sentences can be used directly as inventory and price keys.  Use
    :meth:`same_syntax` for exact structural comparison.
    """

    prefix: tuple[tuple[str, str], ...]
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(tuple(p) for p in self.prefix))

    @cached_property
    def canonical(self) -> tuple:
        return _canonical(self)

    def __eq__(self, other):
        if not isinstance(other, Sentence):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def same_syntax(self, other: "Sentence") -> bool:
        return self.prefix == other.prefix and self.matrix == other.matrix

    @property
    def is_delta0(self) -> bool:
        return not self.prefix

    def __str__(self):
        return print_sentence(self)

    def __repr__(self):
        return f"Sentence({print_sentence(self)!r})"


# -- traversal helpers -----------------------------------------------------

def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, BinOp):
        yield from term_vars(t.left)
        yield from term_vars(t.right)


def matrix_names(m: Matrix) -> Iterator[str]:
    """Every variable name occurring in ``m``, bound or free."""
    if isinstance(m, Cmp):
        yield from term_vars(m.left)
        yield from term_vars(m.right)
    elif isinstance(m, (And, Or)):
        yield from matrix_names(m.left)
        yield from matrix_names(m.right)
    else:
        yield m.var
        yield from term_vars(m.bound)
        yield from matrix_names(m.body)


def sentence_names(s: Sentence) -> set[str]:
    names = {v for _, v in s.prefix}
    names.update(matrix_names(s.matrix))
    return names


def term_constants(t: Term) -> Iterator[int]:
    if isinstance(t, Const):
        yield t.value
    elif isinstance(t, BinOp):
        yield from term_constants(t.left)
        yield from term_constants(t.right)


def matrix_constants(m: Matrix) -> Iterator[int]:
    if isinstance(m, Cmp):
        yield from term_constants(m.left)
        yield from term_constants(m.right)
    elif isinstance(m, (And, Or)):
        yield from matrix_constants(m.left)
        yield from matrix_constants(m.right)
    else:
        yield from term_constants(m.bound)
        yield from matrix_constants(m.body)


def subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, BinOp):
        return BinOp(t.op, subst_term(t.left, mapping), subst_term(t.right, mapping))
    return t


def subst_matrix(m: Matrix, mapping: dict[str, Term]) -> Matrix:
    """Substitute free occurrences; binders shadow entries of ``mapping``."""
    if isinstance(m, Cmp):
        return Cmp(m.op, subst_term(m.left, mapping), subst_term(m.right, mapping))
    if isinstance(m, And):
        return And(subst_matrix(m.left, mapping), subst_matrix(m.right, mapping))
    if isinstance(m, Or):
        return Or(subst_matrix(m.left, mapping), subst_matrix(m.right, mapping))
    inner = mapping
    if m.var in mapping:
        inner = {k: v for k, v in mapping.items() if k != m.var}
    return Bounded(m.quant, m.var, subst_term(m.bound, mapping), subst_matrix(m.body, inner))


def rename_matrix(m: Matrix, renaming: dict[str, str]) -> Matrix:
    """Rename free and bound variables alike (``renaming`` must be injective)."""
    if isinstance(m, Cmp):
        return Cmp(m.op, _rename_term(m.left, renaming), _rename_term(m.right, renaming))
    if isinstance(m, And):
        return And(rename_matrix(m.left, renaming), rename_matrix(m.right, renaming))
    if isinstance(m, Or):
        return Or(rename_matrix(m.left, renaming), rename_matrix(m.right, renaming))
    return Bounded(
        m.quant,
        renaming.get(m.var, m.var),
        _rename_term(m.bound, renaming),
        rename_matrix(m.body, renaming),
    )


def _rename_term(t: Term, renaming: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(renaming.get(t.name, t.name))
    if isinstance(t, BinOp):
        return BinOp(t.op, _rename_term(t.left, renaming), _rename_term(t.right, renaming))
    return t


# -- alpha-canonical form --------------------------------------------------

def _canonical(s: Sentence) -> tuple:
    scope = [v for _, v in s.prefix]
    return (tuple(q for q, _ in s.prefix), _canon_matrix(s.matrix, scope))


def _canon_term(t: Term, scope: list[str]):
    if isinstance(t, Const):
        return ("c", t.value)
    if isinstance(t, Var):
        # innermost binding wins; names are unique in well-formed sentences
        return ("v", len(scope) - 1 - scope[::-1].index(t.name))
    return (t.op, _canon_term(t.left, scope), _canon_term(t.right, scope))


def _canon_matrix(m: Matrix, scope: list[str]):
    if isinstance(m, Cmp):
        return (m.op, _canon_term(m.left, scope), _canon_term(m.right, scope))
    if isinstance(m, And):
        return ("&", _canon_matrix(m.left, scope), _canon_matrix(m.right, scope))
    if isinstance(m, Or):
        return ("|", _canon_matrix(m.left, scope), _canon_matrix(m.right, scope))
    bound = _canon_term(m.bound, scope)
    return ("b" + m.quant, bound, _canon_matrix(m.body, scope + [m.var]))


def canonical_names(s: Sentence) -> Sentence:
    """Rename every binder to ``v0, v1, ...`` in binding order."""
    counter = iter(range(10**9))
    renaming = {v: f"v{next(counter)}" for _, v in s.prefix}

    def walk(m: Matrix) -> Matrix:
        if isinstance(m, Cmp):
            return Cmp(m.op, _rename_term(m.left, renaming), _rename_term(m.right, renaming))
        if isinstance(m, (And, Or)):
            return type(m)(walk(m.left), walk(m.right))
        bound = _rename_term(m.bound, renaming)
        fresh = f"v{next(counter)}"
        saved = renaming.get(m.var)
        renaming[m.var] = fresh
        body = walk(m.body)
        if saved is None:
            del renaming[m.var]
        else:
            renaming[m.var] = saved
        return Bounded(m.quant, fresh, bound, body)

    matrix = walk(s.matrix)
    prefix = tuple((q, renaming[v]) for q, v in s.prefix)
    return Sentence(prefix, matrix)


def canonical_text(s: Sentence) -> str:
    return print_sentence(canonical_names(s))


# -- printer ---------------------------------------------------------------

def print_term(t: Term) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    return f"({print_term(t.left)}{t.op}{print_term(t.right)})"


def print_matrix(m: Matrix) -> str:
    if isinstance(m, Cmp):
        return f"{print_term(m.left)}{m.op}{print_term(m.right)}"
    if isinstance(m, And):
        return f"({print_matrix(m.left)} & {print_matrix(m.right)})"
    if isinstance(m, Or):
        return f"({print_matrix(m.left)} | {print_matrix(m.right)})"
    return f"({m.quant} {m.var}<={print_term(m.bound)}. {print_matrix(m.body)})"


def print_sentence(s: Sentence) -> str:
    head = "".join(f"{q} {v}. " for q, v in s.prefix)
    return head + print_matrix(s.matrix)
