from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfmarket.garrabrant import (
    CASH,
    MAX_PRIMES,
    Atom,
    GAgent,
    GState,
    PAnd,
    PNot,
    POr,
    PropError,
    evaluate,
    g_equilibrium,
    g_inventory_step,
    g_run,
    min_valuation,
    neg,
    parse_prop,
    parse_theorem_stream,
    pc_valuations,
    primes,
)
from vfmarket.market.schedule import DemandSchedule as D

from .oracles import brute_valuations

A = parse_prop


def props(max_prime=6, depth=3):
    leaf = st.integers(1, max_prime).map(Atom)
    return st.recursive(
        leaf,
        lambda sub: st.one_of(sub.map(PNot), st.builds(PAnd, sub, sub), st.builds(POr, sub, sub)),
        max_leaves=2 ** depth)


inventories = st.dictionaries(
    props(), st.fractions(-3, 3, max_denominator=6).filter(bool), max_size=4
).flatmap(lambda inv: st.fractions(-2, 5, max_denominator=3).map(lambda c: {**inv, CASH: c}))


def test_parse_prop_grammar():
    p = A("!(P1 & P2) | P3")
    assert str(p) == "(!(P1 & P2) | P3)"
    assert primes(p) == {1, 2, 3}
    with pytest.raises(PropError):
        A("P1 &")
    with pytest.raises(PropError):
        A("Q1")


def test_neg_is_boolean():
    p = A("P1 & P2")
    for w in ({1: True, 2: True}, {1: False, 2: True}):
        assert evaluate(neg(p), w) == (not evaluate(p, w))


def test_two_assets_with_disjunction_proven():
    assert min_valuation({A("P1"): 1, A("P2"): 1}, [A("P1 | P2")]) == 1


def test_complementary_holdings():
    assert pc_valuations({A("P1"): 1, A("!P1"): 1}) == {F(1)}


def test_single_asset():
    assert pc_valuations({A("P1"): 1}) == {F(0), F(1)}


def test_inconsistent_theorems():
    assert pc_valuations({A("P1"): 1}, [A("P1"), A("!P1")]) == set()
    assert min_valuation({A("P1"): 1}, [A("P1 & !P1")]) is None


def test_prime_bound():
    big = {Atom(i): 1 for i in range(1, MAX_PRIMES + 2)}
    with pytest.raises(PropError):
        pc_valuations(big)


def test_twenty_primes_supported():
    inv = {Atom(i): F(1, i) for i in range(1, MAX_PRIMES + 1)}
    vals = pc_valuations(inv, [A("P1")])
    assert min(vals) == 1 and max(vals) == sum(F(1, i) for i in range(1, MAX_PRIMES + 1))


@given(inventories, st.lists(props(), max_size=2))
@settings(max_examples=200)
def test_matches_brute_force(inv, thms):
    assert pc_valuations(inv, thms) == brute_valuations(inv, thms, evaluate, primes)


@given(st.dictionaries(st.integers(1, 8), st.fractions(-3, 3, max_denominator=5).filter(bool), max_size=6),
       st.fractions(-2, 2, max_denominator=4))
def test_independent_primes_extremes(coeffs, cash):
    inv = {Atom(i): q for i, q in coeffs.items()}
    inv[CASH] = cash
    vals = pc_valuations(inv)
    assert min(vals) == cash + sum(q for q in coeffs.values() if q < 0)
    assert max(vals) == cash + sum(q for q in coeffs.values() if q > 0)


@given(inventories, st.lists(props(), max_size=2), props())
@settings(max_examples=100)
def test_more_theorems_fewer_valuations(inv, thms, extra):
    assert pc_valuations(inv, thms + [extra]) <= pc_valuations(inv, thms)


def test_resolve_proven():
    state = GState([A("P1")], [GAgent("a", inventory={A("P1"): F(2)})])
    g_inventory_step(state, 0, {}, [A("P1")])
    assert state.agents[0].inventory == {CASH: 2}


def test_reject_trade_below_zero():
    state = GState([A("P1")], [GAgent("a", endowment=0)])
    g_inventory_step(state, 0, {0: {A("P1"): 1, CASH: F(-3, 2)}}, [])
    assert state.agents[0].rejected == 1 and state.agents[0].inventory == {}


def test_accept_affordable_trade():
    state = GState([A("P1")], [GAgent("a", endowment=1)])
    g_inventory_step(state, 0, {0: {A("P1"): 1, CASH: F(-1, 2)}}, [])
    assert state.agents[0].accepted == 1
    assert state.agents[0].inventory == {CASH: F(3, 2) - 1, A("P1"): 1}


def test_empty_trade_only_endows():
    state = GState([], [GAgent("a", endowment=2, birthday=1)])
    g_inventory_step(state, 0, {}, [])
    assert state.agents[0].inventory == {}
    g_inventory_step(state, 1, {0: {}}, [])
    assert state.agents[0].inventory == {CASH: 2}


def test_g_equilibrium_examples():
    s = A("P1")
    buyer = lambda t, x: D.buy(1, F(7, 10)) if x == s else None  # noqa: E731
    seller = lambda t, x: D.buy(1, F(3, 10)) if x == neg(s) else None  # noqa: E731
    assert g_equilibrium([buyer, seller], 0, s) == F(7, 10)
    assert g_equilibrium([], 0, s) == F(1, 2)
    assert g_equilibrium([], 0, s, F(2, 5)) == F(2, 5)
    sym = lambda t, x: D.buy(1, F(1, 2))  # noqa: E731
    assert g_equilibrium([sym], 0, s) == F(1, 2)


def test_theorem_stream_parsing():
    text = "# proven facts\n3\tP1 | P2\n\n1\tP3\n"
    assert parse_theorem_stream(text) == [(1, A("P3")), (3, A("P1 | P2"))]
    with pytest.raises(PropError, match="line 1"):
        parse_theorem_stream("3 P1")


def _random_agents(draw_orders):
    agents = []
    for i, book in enumerate(draw_orders):
        agents.append(GAgent(f"g{i}", F(2), i,
                             (lambda b: lambda t, s: b.get((t % 3, s)))(book)))
    return agents


order_books = st.lists(
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.sampled_from([A("P1"), A("!P1"), A("P2"), A("!P2"), A("P1 | P2"),
                                                        A("!(P1 | P2)")])),
        st.lists(st.tuples(st.fractions(0, 1, max_denominator=6),
                           st.fractions(-2, 3, max_denominator=3).filter(bool)), min_size=1, max_size=2)
        .map(lambda orders: D(tuple(orders))),
        max_size=4),
    min_size=1, max_size=3)


@given(order_books)
@settings(max_examples=60)
def test_accepted_agents_stay_solvent(books):
    theorems = [(2, A("P1 | P2")), (5, A("P2"))]
    state = GState([A("P1"), A("P2"), A("P1 | P2")], _random_agents(books))
    for _ in range(8):
        g_run(state, 1, theorems)
        thms = [f for t, f in theorems if t < state.t]
        for agent in state.agents:
            if agent.accepted:
                assert min_valuation(agent.inventory, thms) >= 0
