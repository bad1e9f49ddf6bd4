import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delaygames.model import PARITY, REACHABILITY, SAFETY, InvalidInput
from delaygames.solver import (
    Objective,
    PositionalStrategy,
    TurnGameBuilder,
    attractor,
    solve_delay_free,
    verify_positional_strategy,
)


def random_turn_game(seed: int, n: int, kind: str):
    rng = random.Random(seed)
    b = TurnGameBuilder()
    for i in range(n):
        b.node(i, rng.randrange(2))
    for i in range(n):
        for a in rng.sample("abc", rng.randint(1, 3)):
            b.edge(i, a, rng.randrange(n))
    marked = frozenset(i for i in range(n) if rng.random() < 0.3)
    if kind == SAFETY:
        obj = Objective(SAFETY, unsafe=marked)
    elif kind == REACHABILITY:
        obj = Objective(REACHABILITY, target=marked)
    else:
        obj = Objective(PARITY, colors=tuple(rng.randrange(5) for _ in range(n)))
    return b.build(0, obj)


def chain(edges_n0):
    b = TurnGameBuilder()
    n0, n1, t, other = (b.node(x, o) for x, o in (("n0", 1), ("n1", 0), ("t", 0), ("x", 0)))
    for a, v in edges_n0:
        b.edge(n0, a, {"n1": n1, "t": t, "x": other}[v])
    b.edge(n1, "go", t)
    b.edge(t, "stay", t)
    b.edge(other, "stay", other)
    return b.build(n0, Objective(REACHABILITY, target=frozenset({t})))


def test_attractor_of_everything_and_nothing():
    g = random_turn_game(1, 8, SAFETY)
    assert attractor(g, 0, range(8))[0] == frozenset(range(8))
    assert attractor(g, 1, [])[0] == frozenset()


def test_attractor_chain():
    g = chain([("a", "n1"), ("b", "t")])
    region, strat = attractor(g, 0, [2])
    assert {0, 1, 2} == region and strat[1] == "go"
    g = chain([("a", "n1"), ("b", "x")])
    region, _ = attractor(g, 0, [2])
    assert region == {1, 2}


def single(kind, **obj):
    b = TurnGameBuilder()
    b.node("v", 0)
    b.edge(0, "loop", 0)
    return b.build(0, Objective(kind, **obj))


def test_trivial_wins():
    assert solve_delay_free(single(REACHABILITY, target=frozenset({0}))).winner == 0
    assert solve_delay_free(single(SAFETY)).regions[0] == {0}
    assert solve_delay_free(single(PARITY, colors=(0,))).winner == 0
    assert solve_delay_free(single(PARITY, colors=(1,))).winner == 1


def test_dead_end_rejected():
    b = TurnGameBuilder()
    b.node("v", 0)
    with pytest.raises(InvalidInput):
        b.build(0, Objective(SAFETY))


def test_strategy_into_unsafe_fails_verification():
    b = TurnGameBuilder()
    v, good, bad = b.node("v", 0), b.node("good", 0), b.node("bad", 0)
    b.edge(v, "a", good)
    b.edge(v, "b", bad)
    b.edge(good, "s", good)
    b.edge(bad, "s", bad)
    g = b.build(v, Objective(SAFETY, unsafe=frozenset({bad})))
    assert verify_positional_strategy(g, PositionalStrategy(0, {v: "a", good: "s", bad: "s"}), 0)
    assert not verify_positional_strategy(g, PositionalStrategy(0, {v: "b", good: "s", bad: "s"}), 0)
    with pytest.raises(InvalidInput):
        verify_positional_strategy(g, PositionalStrategy(0, {v: "a"}), 0)


kinds = st.sampled_from([SAFETY, REACHABILITY, PARITY])


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 12), kind=kinds)
def test_regions_partition_and_strategies_win_everywhere(seed, n, kind):
    g = random_turn_game(seed, n, kind)
    sol = solve_delay_free(g)
    assert sol.regions[0] | sol.regions[1] == set(range(n))
    assert not sol.regions[0] & sol.regions[1]
    for player in (0, 1):
        for v in sol.regions[player]:
            start = dataclasses.replace(g, initial=v)
            assert verify_positional_strategy(start, sol.strategy(player), player)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 10), kind=kinds, pick=st.integers(0, 10**6))
def test_random_winning_strategies_agree_with_regions(seed, n, kind, pick):
    g = random_turn_game(seed, n, kind)
    rng = random.Random(pick)
    strat = PositionalStrategy(0, {v: rng.choice(g.edges[v])[0] for v in range(n) if g.owner[v] == 0})
    if verify_positional_strategy(g, strat, 0):
        assert g.initial in solve_delay_free(g).regions[0]


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 12), player=st.integers(0, 1), data=st.data())
def test_attractor_is_monotone(seed, n, player, data):
    g = random_turn_game(seed, n, SAFETY)
    small = data.draw(st.sets(st.integers(0, n - 1)))
    big = small | data.draw(st.sets(st.integers(0, n - 1)))
    assert attractor(g, player, small)[0] <= attractor(g, player, big)[0]


def test_attractor_strategy_decreases_rank():
    g = random_turn_game(11, 12, REACHABILITY)
    region, strat = attractor(g, 0, g.objective.target)
    start = dataclasses.replace(g, initial=min(region))
    completed = {v: strat.choice.get(v, g.edges[v][0][0]) for v in range(len(g)) if g.owner[v] == 0}
    assert verify_positional_strategy(start, PositionalStrategy(0, completed), 0)
