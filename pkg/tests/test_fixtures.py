import pytest

from delaygames import solve_under_delay
from delaygames.fixtures import (
    BUILTINS,
    builtin_instance,
    exponential_family,
    random_delay_spec,
    random_instance,
)
from delaygames.model import (
    PARITY,
    REACHABILITY,
    SAFETY,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    validate_automaton,
    validate_control_game,
)


def test_same_seed_same_instance():
    assert random_instance(7, 5) == random_instance(7, 5)
    assert random_delay_spec(7) == random_delay_spec(7)


def test_thousand_samples_validate():
    kinds = (SAFETY, REACHABILITY, PARITY)
    for seed in range(1000):
        game = random_instance(seed, 2 + seed % 7, action_sizes=(1 + seed % 3, 1 + seed % 2),
                               condition_kind=kinds[seed % 3], automaton_states=(None, 1, 3)[seed % 3])
        assert validate_control_game(game).ok, seed


def test_random_delay_specs_validate():
    for seed in range(200):
        assert not validate_automaton(random_delay_spec(seed, kind=(SAFETY, REACHABILITY, PARITY)[seed % 3]).condition)


@pytest.mark.parametrize("n_states,sizes", [(1, (2, 2)), (4, (0, 2)), (4, (2, 9))])
def test_infeasible_parameters(n_states, sizes):
    with pytest.raises(InvalidInput):
        random_instance(0, n_states, action_sizes=sizes)


def test_builtins_load():
    for name in BUILTINS:
        obj = builtin_instance(name)
        if isinstance(obj, ControlGame):
            assert validate_control_game(obj).ok
        else:
            assert isinstance(obj, DelayGameSpec) and not validate_automaton(obj.condition)


def test_unknown_builtin():
    with pytest.raises(InvalidInput):
        builtin_instance("fig3")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exponential_family_size(n):
    game = exponential_family(n)
    assert validate_control_game(game).ok
    assert len(game.arena.states) == 4 * n * n + 7


def test_exponential_family_rejects_zero():
    with pytest.raises(InvalidInput):
        exponential_family(0)


def test_fig2_undetermined_at_two():
    assert solve_under_delay(builtin_instance("fig2"), 2, extract=False)[0].classification == "undetermined"
