"""Bounded-horizon minimax deciders used to cross-check the fixpoint solvers.

These share no code with the queue and buffer constructions or the attractor
solver: successors are generated on the fly and values are filled into a
table indexed by remaining depth.
"""

from __future__ import annotations

from delaygames.delaygame import PLAYER_I, PLAYER_O
from delaygames.model import (
    CONTROLLER,
    PARITY,
    SAFETY,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    make_absorbing,
    product_with_projection,
)


def _explore(initial, successors):
    nodes, seen, stack = [], {initial}, [initial]
    while stack:
        v = stack.pop()
        nodes.append(v)
        for w in successors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return nodes


def _minimax(initial, successors, maximizer, goal, safety: bool, horizon: int) -> bool:
    """Value of the depth-``horizon`` game tree rooted at ``initial``.

    Safety: the maximizer must keep every node within the horizon good.
    Reachability: she must hit a goal node within the horizon.
    """
    nodes = _explore(initial, successors)
    succ = {v: list(successors(v)) for v in nodes}
    # value[v] at remaining depth 0
    value = {v: goal(v) for v in nodes}
    for _ in range(horizon):
        nxt = {}
        for v in nodes:
            kids = [value[w] for w in succ[v]]
            best = any(kids) if maximizer(v) else all(kids)
            nxt[v] = (goal(v) and best) if safety else (goal(v) or best)
        if nxt == value:
            break
        value = nxt
    return value[initial]


def _queue_successors(pgame: ControlGame, delay: int):
    arena = pgame.arena
    h = delay // 2

    def successors(node):
        if node[0] == "init":
            w = node[1]
            if len(w) + 1 < h:
                return [("init", w + (a,)) for a in arena.controller_actions]
            return [("play", arena.initial, w + (a,)) for a in arena.controller_actions]
        _, s, queue = node
        if arena.owner[s] == CONTROLLER:
            out = []
            for a in arena.controller_actions:
                applied = queue[0] if queue else a
                rest = (queue + (a,))[1:] if queue else ()
                out.append(("play", arena.transitions[s, applied], rest))
            return out
        return [("play", arena.transitions[s, e], queue) for e in arena.environment_actions]

    initial = ("init", ()) if h else ("play", arena.initial, ())
    return initial, successors


def queue_horizon(game: ControlGame, delay: int) -> int:
    pgame, _ = product_with_projection(game)
    n = len(pgame.arena.controller_actions)
    h = delay // 2
    return len(pgame.arena.states) * n**h + sum(n**i for i in range(h))


def brute_force_under_delay(game: ControlGame, delay: int, horizon: int | None = None) -> bool:
    if delay < 0 or delay % 2:
        raise InvalidInput("delay must be even")
    pgame, _ = product_with_projection(game)
    cond = pgame.condition
    if cond.kind == PARITY:
        raise InvalidInput("the oracle does not handle parity conditions")
    if horizon is None:
        horizon = queue_horizon(game, delay)
    arena = pgame.arena
    initial, successors = _queue_successors(pgame, delay)

    def state(node):
        return arena.initial if node[0] == "init" else node[1]

    def maximizer(node):
        return node[0] == "init" or arena.owner[node[1]] == CONTROLLER

    if cond.kind == SAFETY:
        return _minimax(initial, successors, maximizer, lambda v: state(v) not in cond.unsafe, True, horizon)
    return _minimax(initial, successors, maximizer, lambda v: state(v) in cond.target, False, horizon)


def buffer_horizon(spec: DelayGameSpec) -> int:
    n = len(spec.input_alphabet)
    words = sum(n**i for i in range(spec.lookahead + 2))
    return len(spec.condition.states) * words


def brute_force_delay_game(spec: DelayGameSpec, horizon: int | None = None) -> str:
    aut = make_absorbing(spec.condition)
    if aut.kind == PARITY:
        raise InvalidInput("the oracle does not handle parity conditions")
    if horizon is None:
        horizon = buffer_horizon(spec)
    k = spec.lookahead

    def successors(node):
        q, w = node
        if len(w) <= k:
            return [(q, w + (a,)) for a in spec.input_alphabet]
        return [(aut.delta[q, (w[0], b)], w[1:]) for b in spec.output_alphabet]

    def player_o(node):
        return len(node[1]) == k + 1

    if aut.kind == SAFETY:
        won = _minimax((aut.initial, ()), successors, player_o, lambda v: v[0] not in aut.unsafe, True, horizon)
    else:
        won = _minimax((aut.initial, ()), successors, player_o, lambda v: v[0] in aut.target, False, horizon)
    return PLAYER_O if won else PLAYER_I


__all__ = ["brute_force_delay_game", "brute_force_under_delay", "buffer_horizon", "queue_horizon"]
