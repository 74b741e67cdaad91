import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfmarket.fol import PASS, Witnesses, eval_delta0, parse_sentence
from vfmarket.game import (
    ConstPlayer,
    DivergePlayer,
    FunctionPlayer,
    PassPlayer,
    Role,
    SuccessorChallenger,
    TablePlayer,
    Verdict,
    check_alpha_true,
    playfull,
    turn,
)

from .strategies import delta0_sentences, sentences

P = parse_sentence


def test_turn_follows_leading_quantifier():
    assert turn(P("E x. x=1")) is Role.VERIFIER
    assert turn(P("A x. x=1")) is Role.FALSIFIER
    assert turn(P("1=1")) is Role.RESOLVED


def test_delta0_resolves_immediately():
    out = playfull(P("2*2=4"), PassPlayer(), PassPlayer(), 10)
    assert out.summary() == "Resolved(2*2=4, true)".replace("2*2", "(2*2)")
    assert out.transcript == () and out.fuel_used == 0


def test_verifier_witness_resolves_false():
    out = playfull(P("E x. x>=8"), ConstPlayer([7]), PassPlayer(), 10)
    assert out.resolved and out.truth is False
    assert out.summary() == "Resolved(7>=8, false)"
    assert out.lines() == ["t=0 mover=V move={7} sentence=E x. x>=8"]


@pytest.mark.parametrize("beta", [PassPlayer(), DivergePlayer()])
def test_universal_without_challenge_diverges(beta):
    out = playfull(P("A x. x>=0"), PassPlayer(), beta, 50)
    assert not out.resolved and out.truth is None


def test_stall_after_two_passes():
    out = playfull(P("E x. x=1"), PassPlayer(), PassPlayer(), 50)
    assert out.reason == "stalled"
    assert out.fuel_used == 1


def test_fuel_exhausted_by_divergence():
    out = playfull(P("E x. x=1"), DivergePlayer(), PassPlayer(), 50)
    assert out.reason == "fuel exhausted" and out.fuel_used == 0


def test_fuel_budget_counts_costs():
    alpha = FunctionPlayer(lambda s: [3], cost=4)
    assert not playfull(P("E x. x=3"), alpha, PassPlayer(), 3).resolved
    out = playfull(P("E x. x=3"), alpha, PassPlayer(), 4)
    assert out.resolved and out.truth and out.fuel_used == 4


def test_two_round_game():
    s = P("E x. A y. x>=y")
    out = playfull(s, ConstPlayer([3]), SuccessorChallenger(), 100)
    assert out.resolved and out.truth is False
    assert [st.mover for st in out.transcript] == ["V", "F"]
    assert out.transcript[1].move == Witnesses((4,))


def test_role_enforcement_skips_off_role_slots():
    # beta would refute if allowed to move on the existential
    s = P("E x. x=2")
    sneaky = ConstPlayer([0])
    out = playfull(s, PassPlayer(), sneaky, 20)
    assert not out.resolved and out.transcript[0].move is PASS
    literal = playfull(s, PassPlayer(), sneaky, 20, role_enforce=False)
    assert literal.resolved and literal.truth is False


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        playfull(P("1=1"), PassPlayer(), PassPlayer(), 0)


def test_table_player_default_and_cost():
    s = P("E x. x*x=4")
    alpha = TablePlayer({s: [2]}, default=PassPlayer(), entry_cost=3)
    assert alpha.cost(s) == 3 and alpha.move(s) == Witnesses((2,))
    assert alpha.move(P("E x. x=9")) is PASS


def test_check_alpha_true_verdicts():
    s = P("E x. x*x=4")
    assert check_alpha_true(s, ConstPlayer([2]), [PassPlayer()], 20).verdict is Verdict.SUPPORTED
    res = check_alpha_true(s, ConstPlayer([3]), [PassPlayer(), PassPlayer()], 20)
    assert res.verdict is Verdict.REFUTED and res.refuted_by == 0
    assert str(res) == "Refuted(by adversary 0)"
    assert check_alpha_true(s, PassPlayer(), [PassPlayer()], 20).verdict is Verdict.INCONCLUSIVE


@given(sentences(max_prefix=3), st.integers(1, 40), st.integers(0, 5), st.integers(0, 5))
@settings(max_examples=80)
def test_playfull_invariants(s, fuel, a, b):
    out = playfull(s, ConstPlayer([a]), ConstPlayer([b]), fuel)
    assert out.fuel_used <= fuel
    assert len(out.transcript) <= len(s.prefix)
    if out.resolved:
        assert not out.sentence.prefix
        assert out.truth == eval_delta0(out.sentence)
    for st_ in out.transcript:
        expected = "V" if turn(st_.sentence) is Role.VERIFIER else "F"
        assert st_.mover == expected


@given(delta0_sentences())
def test_delta0_games_take_no_moves(s):
    out = playfull(s, DivergePlayer(), DivergePlayer(), 1)
    assert out.resolved and out.truth == eval_delta0(s)
