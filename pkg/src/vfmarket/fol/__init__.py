"""Prenex first-order sentences over arithmetic: syntax, parsing and the play algebra."""
from .coding import canonical_code, enumerate_sentence
from .ops import (
    PASS,
    Move,
    SentenceClass,
    SentenceError,
    Witnesses,
    as_move,
    bounded_eval,
    classify,
    eval_cost,
    eval_delta0,
    format_move,
    is_pi,
    is_sigma,
    max_constant,
    negate,
    play_set,
    quantifier_blocks,
    substitute_leading,
    window,
)
from .parser import ParseError, parse_sentence
from .syntax import (
    And,
    BinOp,
    Bounded,
    Cmp,
    Const,
    Or,
    Sentence,
    Var,
    canonical_names,
    canonical_text,
    print_sentence,
)

__all__ = [
    "And", "BinOp", "Bounded", "Cmp", "Const", "Move", "Or", "PASS", "ParseError",
    "Sentence", "SentenceClass", "SentenceError", "Var", "Witnesses", "as_move",
    "bounded_eval", "canonical_code", "canonical_names", "canonical_text", "classify",
    "enumerate_sentence", "eval_cost", "eval_delta0", "format_move", "is_pi", "is_sigma",
    "max_constant", "negate", "parse_sentence", "play_set", "print_sentence",
    "quantifier_blocks", "substitute_leading", "window",
]
