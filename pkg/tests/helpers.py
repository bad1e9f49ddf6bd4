"""Small independent reference computations used across test modules."""

from delaygames.model import LassoWord, play_states, state_condition_holds


def play_lasso(arena, pairs: LassoWord) -> LassoWord:
    """State lasso of the play induced by a lasso of (controller, environment) action pairs."""
    prefix_actions = [x for pair in pairs.prefix for x in pair]
    states = play_states(arena, prefix_actions)
    s = states[-1]
    starts = {}
    cycle_states = []
    while s not in starts:
        starts[s] = len(cycle_states)
        for a, b in pairs.cycle:
            s = arena.transitions[s, a]
            cycle_states.append(s)
            s = arena.transitions[s, b]
            cycle_states.append(s)
    i = starts[s]
    # states[-1] is the first cycle start; cycle_states lists the states after it
    seq = states[:-1] + [states[-1]] + cycle_states
    start_index = len(states) - 1 + i
    return LassoWord(tuple(seq[:start_index + 1]), tuple(seq[start_index + 1:]))


def simulate_win(game, pairs: LassoWord) -> bool:
    return state_condition_holds(game, play_lasso(game.arena, pairs))
