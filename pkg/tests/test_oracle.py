import pytest

from delaygames import solve_delay_game, solve_under_delay
from delaygames.delaygame import PLAYER_I, PLAYER_O
from delaygames.fixtures import ex2, fig2, random_delay_spec, random_instance
from delaygames.model import PARITY, REACHABILITY, SAFETY, InvalidInput, StateCondition, ControlGame
from delaygames.oracle import brute_force_delay_game, brute_force_under_delay


def test_unsafe_initial_state_loses_at_every_horizon():
    game = fig2()
    game = ControlGame(game.arena, StateCondition(SAFETY, unsafe={"c0"}))
    assert not any(brute_force_under_delay(game, 0, h) for h in range(4))


def test_fig2_delay_two():
    assert brute_force_under_delay(fig2(), 2) is False
    assert solve_under_delay(fig2(), 2, extract=False)[0].controller_wins is False


@pytest.mark.parametrize("k,winner", [(1, PLAYER_I), (2, PLAYER_O)])
def test_lookahead_example(k, winner):
    assert brute_force_delay_game(ex2(k)) == winner


def test_agreement_on_control_games(control_corpus):
    for seed, game in control_corpus[:100]:
        for delay in (0, 2, 4):
            expected = solve_under_delay(game, delay, extract=False)[0].controller_wins
            assert brute_force_under_delay(game, delay) == expected, (seed, delay)


def test_agreement_on_delay_games(delay_corpus):
    for seed, spec in delay_corpus[:50]:
        for k in (0, 1, 2):
            s = spec.with_lookahead(k)
            assert brute_force_delay_game(s) == solve_delay_game(s).winner, (seed, k)


@pytest.mark.parametrize("seed", range(30))
def test_monotone_in_horizon(seed):
    for kind in (SAFETY, REACHABILITY):
        game = random_instance(seed, 5, condition_kind=kind)
        values = [brute_force_under_delay(game, 2, h) for h in range(12)]
        if kind == SAFETY:
            assert values == sorted(values, reverse=True)
        else:
            assert values == sorted(values)


def test_parity_rejected():
    with pytest.raises(InvalidInput):
        brute_force_under_delay(random_instance(0, 4, condition_kind=PARITY), 0)
    with pytest.raises(InvalidInput):
        brute_force_delay_game(random_delay_spec(0, kind=PARITY))


def test_odd_delay_rejected():
    with pytest.raises(InvalidInput):
        brute_force_under_delay(fig2(), 1)
