from fractions import Fraction

import pytest

from delaygames import solve_under_delay
from delaygames.fixtures import fig2, fig4, random_instance
from delaygames.model import CONTROLLER, ENVIRONMENT, PARITY, InvalidInput
from delaygames.stochastic import (
    ADVERSARY,
    STOCHASTIC,
    AdversarialMDP,
    FiniteMixedStrategy,
    almost_sure_reachability,
    almost_sure_safety,
    check_almost_sure,
    induce_adversarial_mdp,
)
from delaygames.model import REACHABILITY, SAFETY


def uniform(game, delay, weights=None):
    arena = game.arena
    if weights is None:
        return FiniteMixedStrategy.uniform(arena.controller_actions, arena.controller_states, delay)
    words = {w: Fraction(1, 2) for w in (("h",), ("t",))} if delay else {(): Fraction(1)}
    return FiniteMixedStrategy(delay, ("m0",), "m0", {},
                               {("m0", s): weights for s in arena.controller_states}, words)


def always(game, delay, action):
    arena = game.arena
    alpha = (action,) * (delay // 2)
    return FiniteMixedStrategy(delay, ("m0",), "m0", {},
                               {("m0", s): {action: 1} for s in arena.controller_states}, {alpha: 1})


def test_point_mass_gives_single_successors():
    game = fig4()
    _, strat = solve_under_delay(game, 0)
    mdp = induce_adversarial_mdp(game, 0, FiniteMixedStrategy.point_mass(strat))
    for v in range(len(mdp)):
        if mdp.kinds[v] == STOCHASTIC:
            assert len(mdp.edges[v]) == 1


def test_uniform_branches_evenly_on_fig4():
    mdp = induce_adversarial_mdp(fig4(), 2, uniform(fig4(), 2))
    for v in range(len(mdp)):
        if mdp.kinds[v] == STOCHASTIC:
            assert sorted(p for _, _, p in mdp.edges[v]) == [Fraction(1, 2)] * 2


def test_adversary_keeps_both_choices_on_fig2():
    mdp = induce_adversarial_mdp(fig2(), 2, always(fig2(), 2, "h"))
    adversary = [v for v in range(len(mdp)) if mdp.kinds[v] == ADVERSARY]
    assert adversary
    assert all(len(mdp.edges[v]) == 2 for v in adversary)


def test_every_node_has_a_successor_and_probabilities_sum_to_one():
    mdp = induce_adversarial_mdp(fig4(), 2, uniform(fig4(), 2))
    for v in range(len(mdp)):
        assert mdp.edges[v]
        if mdp.kinds[v] == STOCHASTIC:
            assert sum(p for _, _, p in mdp.edges[v]) == 1


def tiny(kind, edges, kinds, **sets):
    n = len(kinds)
    return AdversarialMDP(tuple(range(n)), tuple(kinds), tuple(tuple(e) for e in edges), 0, kind,
                          **{k: frozenset(v) for k, v in sets.items()})


def test_safety_support_reachability():
    half = Fraction(1, 2)
    safe = tiny(SAFETY, [[("a", 0, Fraction(1))], [("a", 1, Fraction(1))]], [STOCHASTIC] * 2, unsafe={1})
    assert almost_sure_safety(safe)
    risky = tiny(SAFETY, [[("a", 0, half), ("b", 1, half)], [("a", 1, Fraction(1))]], [STOCHASTIC] * 2, unsafe={1})
    assert not almost_sure_safety(risky)


def test_reachability_examples():
    assert almost_sure_reachability(tiny(REACHABILITY, [[("a", 0, None)]], [ADVERSARY], target={0}))
    half = Fraction(1, 2)
    coin = tiny(REACHABILITY, [[("a", 0, half), ("b", 1, half)], [("a", 1, Fraction(1))]],
                [STOCHASTIC] * 2, target={1})
    assert almost_sure_reachability(coin)
    dodge = tiny(REACHABILITY, [[("a", 0, None), ("b", 1, None)], [("a", 1, Fraction(1))]],
                 [ADVERSARY, STOCHASTIC], target={1})
    assert not almost_sure_reachability(dodge)


def test_fig4_uniform_wins_almost_surely_but_not_surely():
    game = fig4()
    verdict, _ = solve_under_delay(game, 2, extract=False)
    assert not verdict.controller_wins
    assert check_almost_sure(game, 2, uniform(game, 2), CONTROLLER)


def test_fig4_deterministic_strategies_fail():
    game = fig4()
    for action in ("h", "t"):
        assert not check_almost_sure(game, 2, always(game, 2, action), CONTROLLER)


def test_verdicts_depend_on_support_only():
    game = fig4()
    skewed = uniform(game, 2, {"h": Fraction(1, 3), "t": Fraction(2, 3)})
    assert bool(check_almost_sure(game, 2, skewed)) == bool(check_almost_sure(game, 2, uniform(game, 2)))
    a = induce_adversarial_mdp(game, 2, skewed)
    b = induce_adversarial_mdp(game, 2, uniform(game, 2))
    assert [a.support(v) for v in range(len(a))] == [b.support(v) for v in range(len(b))]


def test_environment_side_false_is_inconclusive():
    game = fig2()
    arena = game.arena
    strat = FiniteMixedStrategy.uniform(arena.environment_actions, arena.environment_states)
    verdict = check_almost_sure(game, 2, strat, ENVIRONMENT)
    assert not verdict.holds and not verdict.conclusive


def test_environment_side_true_is_conclusive():
    game = fig2()
    arena = game.arena
    # controller has only one useful action here; environment wins by mismatching it
    from delaygames.model import Arena, ControlGame
    edges = dict(arena.transitions)
    for x in ("h", "t"):
        edges[f"c{x}", "h"] = edges[f"c{x}", "t"] = "bad"
    game = ControlGame(Arena(arena.states, arena.owner, arena.initial, arena.controller_actions,
                             arena.environment_actions, edges), game.condition)
    strat = FiniteMixedStrategy.uniform(arena.environment_actions, arena.environment_states)
    verdict = check_almost_sure(game, 2, strat, ENVIRONMENT)
    assert verdict.holds and verdict.conclusive


@pytest.mark.parametrize("dist,message", [
    ({"h": Fraction(1, 2)}, "sum"),
    ({"h": Fraction(3, 2), "t": Fraction(-1, 2)}, "negative"),
    ({}, "empty"),
])
def test_bad_distributions_rejected(dist, message):
    with pytest.raises(InvalidInput, match=message):
        FiniteMixedStrategy(0, ("m0",), "m0", {}, {("m0", "c0"): dist})


def test_alpha_length_checked():
    with pytest.raises(InvalidInput):
        FiniteMixedStrategy(2, ("m0",), "m0", {}, {("m0", "c0"): {"h": 1}}, {(): 1})


def test_undefined_action_rejected():
    game = fig4()
    strat = FiniteMixedStrategy(0, ("m0",), "m0", {}, {("m0", s): {"z": 1} for s in game.arena.controller_states})
    with pytest.raises(InvalidInput):
        induce_adversarial_mdp(game, 0, strat)


def test_parity_rejected():
    game = random_instance(1, 4, condition_kind=PARITY)
    strat = FiniteMixedStrategy.uniform(game.arena.controller_actions, game.arena.controller_states)
    with pytest.raises(InvalidInput):
        check_almost_sure(game, 0, strat)


def test_sure_implies_almost_sure(control_corpus):
    checked = 0
    for seed, game in control_corpus:
        for delay in (0, 2):
            verdict, strat = solve_under_delay(game, delay)
            if verdict.controller_wins:
                checked += 1
                assert check_almost_sure(game, delay, FiniteMixedStrategy.point_mass(strat)), (seed, delay)
    assert checked >= 50
