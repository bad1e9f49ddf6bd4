import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delaygames.control import (
    DelayedStrategy,
    OddDelayError,
    build_queue_game,
    extract_delayed_strategy,
    max_delay,
    queue_game_size,
    solve_environment,
    solve_under_delay,
    verify_delayed_strategy,
)
from delaygames.fixtures import exponential_family, fig1, fig2, fig4, random_instance
from delaygames.model import (
    CONTROLLER,
    REACHABILITY,
    SAFETY,
    Arena,
    ControlGame,
    InvalidInput,
    StateCondition,
    product_with_projection,
)
from delaygames.solver import Objective, TurnGameBuilder, solve_delay_free

FIG1_DELTA_MAX = 2


@pytest.mark.parametrize("delay", [1, 3, -2])
def test_odd_or_negative_delay_rejected(delay):
    with pytest.raises(OddDelayError, match="delay must be even"):
        solve_under_delay(fig2(), delay)
    with pytest.raises(InvalidInput):
        build_queue_game(fig2(), delay)


def test_zero_delay_queue_game_is_the_arena():
    game = fig1()
    g = build_queue_game(game, 0)
    assert len(g) == len(game.arena.states)
    assert g.labels[g.initial] == ("c", "c1", ())
    for v, lab in enumerate(g.labels):
        s = lab[1]
        assert g.owner[v] == (0 if game.arena.owner[s] == CONTROLLER else 1)
        assert {(a, g.labels[w][1]) for a, w in g.edges[v]} == {
            (a, game.arena.transitions[s, a]) for a in game.arena.actions_at(s)}
    assert {g.labels[v][1] for v in g.objective.unsafe} == {"e3"}


def test_delay_two_counts_controller_nodes():
    game = fig1()
    g = build_queue_game(game, 2)
    ctrl = [lab for lab in g.labels if lab[0] == "c"]
    init = [lab for lab in g.labels if lab[0] == "init"]
    assert len(ctrl) == 2 * len(game.arena.controller_states)
    assert len(init) == 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), delay=st.sampled_from([0, 2, 4, 6]),
       automaton=st.sampled_from([None, 2]))
def test_queue_game_size_matches_closed_form(seed, n, delay, automaton):
    game = random_instance(seed, n, automaton_states=automaton)
    assert len(build_queue_game(game, delay)) == queue_game_size(game, delay)


def test_fig2_second_action_is_committed_before_environment_moves():
    g = build_queue_game(fig2(), 2)
    for v, lab in enumerate(g.labels):
        if lab[0] == "c" and lab[1] in ("ch", "ct"):
            # whatever controller picks now, the applied action is already in the queue
            applied = {g.labels[w][1] for _, w in g.edges[v]}
            assert len(applied) == 1
            assert applied == {"ok" if lab[2][0] == lab[1][1] else "bad"}


@pytest.mark.parametrize("delay", [0, 2])
def test_fig1_controller_wins(delay):
    verdict, strategy = solve_under_delay(fig1(), delay)
    assert verdict.controller_wins and verdict.classification == "controller"
    assert len(strategy.alpha) == delay // 2
    assert verify_delayed_strategy(fig1(), strategy)


def test_fig1_delta_max_is_frozen():
    report = max_delay(fig1(), 10)
    assert report.outcome == "delta_max" and report.value == FIG1_DELTA_MAX


@pytest.mark.parametrize("delay", [2, 4])
def test_fig2_undetermined_under_delay(delay):
    verdict, strategy = solve_under_delay(fig2(), delay)
    assert verdict.classification == "undetermined" and strategy is None


def test_fig4_no_sure_win_under_delay_two():
    assert not solve_under_delay(fig4(), 2)[0].controller_wins


def test_environment_verdicts():
    assert solve_environment(fig2()) == (False, None)
    assert solve_environment(fig4())[0] is False
    game = fig2()
    doomed = ControlGame(game.arena, StateCondition(SAFETY, unsafe=set(game.arena.states)))
    wins, strat = solve_environment(doomed)
    assert wins and strat.player == 1


def test_zero_delay_strategy_is_positional():
    verdict, strategy = solve_under_delay(fig1(), 0)
    assert strategy.alpha == ()
    # each product state maps to one memory state, so the choice depends on the state alone
    by_state = {}
    for (m, s), a in strategy.act.items():
        by_state.setdefault(s, set()).add(a)
    assert all(len(v) == 1 for v in by_state.values())


def test_losing_queue_strategy_is_refused():
    game = fig2()
    g = build_queue_game(game, 2)
    losing = solve_delay_free(g).strategy(0)
    with pytest.raises(InvalidInput):
        extract_delayed_strategy(game, 2, losing)


def test_verification_catches_a_bad_strategy():
    # plays b at c2, which enters e3
    bad = DelayedStrategy(0, (), ("m",), "m", {}, {("m", "c1"): "a", ("m", "c2"): "b", ("m", "c3"): "b"})
    assert not verify_delayed_strategy(fig1(), bad)
    incomplete = DelayedStrategy(0, (), ("m",), "m", {}, {("m", "c1"): "a"})
    with pytest.raises(InvalidInput):
        verify_delayed_strategy(fig1(), incomplete)


def test_strategy_alpha_length_checked():
    with pytest.raises(InvalidInput):
        DelayedStrategy(4, ("a",), ("m",), "m", {}, {})


def test_max_delay_outcomes():
    game = fig2()
    doomed = ControlGame(game.arena, StateCondition(SAFETY, unsafe={"c0"}))
    assert max_delay(doomed, 4).outcome == "loses_at_zero"
    report = max_delay(fig2(), 6)
    assert report.outcome == "delta_max" and report.delta_max == 0
    safe = ControlGame(game.arena, StateCondition(SAFETY))
    report = max_delay(safe, 4)
    assert report.outcome == "wins_up_to_cap" and report.value == 4 and report.delta_max is None
    assert [v.delay for v in report.verdicts] == [0, 2, 4]


def test_exponential_family_grows_between_first_members():
    d1 = max_delay(exponential_family(1), 12).delta_max
    d2 = max_delay(exponential_family(2), 12).delta_max
    assert d2 > d1


def direct_turn_game(game):
    """Delay-free game built straight from the product arena, without queue machinery."""
    pgame, _ = product_with_projection(game)
    arena = pgame.arena
    b = TurnGameBuilder()
    for s in arena.states:
        b.node(s, 0 if arena.owner[s] == CONTROLLER else 1)
    for (s, a), t in arena.transitions.items():
        b.edge(b.index[s], a, b.index[t])
    cond = pgame.condition
    idx = b.index
    if cond.kind == SAFETY:
        obj = Objective(SAFETY, unsafe=frozenset(idx[s] for s in cond.unsafe))
    elif cond.kind == REACHABILITY:
        obj = Objective(REACHABILITY, target=frozenset(idx[s] for s in cond.target))
    else:
        obj = Objective("parity", colors=tuple(cond.colors[s] for s in b.labels))
    return b.build(idx[arena.initial], obj)


def test_corpus_properties(control_corpus):
    sensitive = 0
    for seed, game in control_corpus:
        wins = []
        for delay in (0, 2, 4, 6):
            verdict, strategy = solve_under_delay(game, delay)
            assert not (verdict.controller_wins and verdict.environment_wins)
            wins.append(verdict.controller_wins)
            if strategy is not None:
                assert verify_delayed_strategy(game, strategy)
        # winning delays are downward closed
        assert wins == sorted(wins, reverse=True), seed
        assert wins[0] == (solve_delay_free(direct_turn_game(game)).winner == 0)
        sensitive += len(set(wins)) > 1
    assert sensitive >= 50


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), delay=st.sampled_from([0, 2]))
def test_parity_games_solve_consistently(seed, n, delay):
    game = random_instance(seed, n, condition_kind="parity")
    verdict, strategy = solve_under_delay(game, delay)
    if delay == 0:
        assert verdict.controller_wins != verdict.environment_wins
    if strategy is not None:
        assert verify_delayed_strategy(game, strategy)


def test_single_action_alphabets_allowed():
    owner = {"c": CONTROLLER, "e": "environment"}
    arena = Arena(("c", "e"), owner, "c", ("a",), ("u",), {("c", "a"): "e", ("e", "u"): "c"})
    game = ControlGame(arena, StateCondition(REACHABILITY, target={"e"}))
    assert solve_under_delay(game, 4)[0].controller_wins
