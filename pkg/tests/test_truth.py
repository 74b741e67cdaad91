import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfmarket.fol import PASS, Witnesses, canonical_code, parse_sentence
from vfmarket.game import ConstPlayer, DivergePlayer, FunctionPlayer
from vfmarket.truth import STAR, ThreeVal, bounded_tarski, construct_player

from .oracles import tarski_value
from .strategies import sentences

P = parse_sentence


@pytest.mark.parametrize("text, bound, expected", [
    ("E x. x*x=4", 5, ThreeVal.TRUE),
    ("A x. x>=0", 5, ThreeVal.UNKNOWN),
    ("A x. x<3", 5, ThreeVal.FALSE),
    ("E x. x*x=5", 50, ThreeVal.UNKNOWN),
    ("2+2=5", 1, ThreeVal.FALSE),
])
def test_bounded_tarski_examples(text, bound, expected):
    assert bounded_tarski(P(text), bound) is expected


def test_bounded_tarski_rejects_zero_bound():
    with pytest.raises(ValueError):
        bounded_tarski(P("E x. x=0"), 0)


_LETTER = {ThreeVal.TRUE: "T", ThreeVal.FALSE: "F", ThreeVal.UNKNOWN: "U"}


@given(sentences(max_prefix=3), st.integers(1, 3))
@settings(max_examples=80)
def test_bounded_tarski_matches_oracle(s, bound):
    assert _LETTER[bounded_tarski(s, bound)] == tarski_value(s, bound)


@given(sentences(max_prefix=2), st.integers(1, 3))
@settings(max_examples=60)
def test_bounded_tarski_monotone_in_bound(s, bound):
    lo, hi = bounded_tarski(s, bound), bounded_tarski(s, bound + 1)
    if lo is not ThreeVal.UNKNOWN:
        assert hi is lo


def test_constructed_player_fires_once_at_code():
    s = P("E y. 3<y")
    k = canonical_code(s)
    player = construct_player(ConstPlayer([4]))
    assert player.fire_time(s) == k
    assert player(k - 1, s) is PASS
    assert player(k, s) == Witnesses((4,))
    assert player(k + 1, s) is PASS


def test_constructed_player_waits_for_cost():
    s = P("E y. 3<y")
    k = canonical_code(s)
    player = construct_player(FunctionPlayer(lambda _: [4], cost=k + 10))
    assert player.fire_time(s) == k + 10


def test_constructed_player_label_and_divergence():
    s = P("E y. 3<y")
    k = canonical_code(s)
    assert construct_player(ConstPlayer([4]))(k, s, "other") is PASS
    assert construct_player(DivergePlayer()).fire_time(s) is None
    assert STAR == "*"


def test_constructed_player_with_clock_and_persistence():
    s = P("E y. 3<y")
    k = canonical_code(s)
    player = construct_player(ConstPlayer([4]), clock=lambda t: 1000 * t * t, persistent=True)
    first = player.fire_time(s)
    assert 1000 * first * first >= k > 1000 * (first - 1) ** 2
    assert player(first - 1, s) is PASS
    assert player(first, s) == player(first + 7, s) == Witnesses((4,))


@given(st.integers(1, 10**7))
def test_clock_inversion_is_least(need):
    s = P("E y. 3<y")
    player = construct_player(FunctionPlayer(lambda _: [4], cost=need), clock=lambda t: 3 * t + 1)
    t = player.fire_time(s)
    target = max(canonical_code(s), need)
    assert 3 * t + 1 >= target and (t == 0 or 3 * (t - 1) + 1 < target)
