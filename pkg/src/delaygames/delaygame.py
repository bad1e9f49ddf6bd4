"""Delay games with constant lookahead, solved through a buffer game.

Player I's letters that Player O has not answered yet sit in a buffer.  While
the buffer holds at most ``k`` letters Player I appends; once it holds
``k + 1`` Player O answers the oldest one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from delaygames.model import PARITY, REACHABILITY, SAFETY, DelayGameSpec, make_absorbing
from delaygames.solver import (
    Objective,
    PositionalStrategy,
    TurnGame,
    TurnGameBuilder,
    solve_delay_free,
)

PLAYER_I = "player_I"
PLAYER_O = "player_O"


@dataclass(frozen=True)
class DelayVerdict:
    lookahead: int
    winner: str
    witness: PositionalStrategy
    game: TurnGame

    def __post_init__(self):
        if self.winner not in (PLAYER_I, PLAYER_O):
            raise AssertionError(f"bad winner {self.winner!r}")


def buffer_moves(spec: DelayGameSpec):
    """Successor function of the buffer game.

    Returns ``(initial, owner, moves, acceptance)``; labels are
    ``("I", q, w, c)`` and ``("O", q, w)`` with ``c`` the color of the last
    transition (None before Player O's first answer or for state colors).
    """
    aut = make_absorbing(spec.condition)
    k = spec.lookahead
    use_tc = aut.kind == PARITY and aut.transition_colors is not None

    def owner(label):
        return 1 if label[0] == "I" else 0

    def moves(label):
        if label[0] == "I":
            _, q, w, _ = label
            out = []
            for a in spec.input_alphabet:
                nw = w + (a,)
                out.append((a, ("O", q, nw) if len(nw) == k + 1 else ("I", q, nw, None)))
            return out
        _, q, w = label
        out = []
        for b in spec.output_alphabet:
            pair = (w[0], b)
            c = aut.transition_colors[q, pair] if use_tc else None
            out.append((b, ("I", aut.delta[q, pair], w[1:], c)))
        return out

    def acceptance(label):
        q = label[1]
        if aut.kind == SAFETY:
            return q in aut.unsafe
        if aut.kind == REACHABILITY:
            return q in aut.target
        if use_tc:
            return label[3] if label[0] == "I" and label[3] is not None else 0
        return aut.colors[q]

    return ("I", aut.initial, (), None), owner, moves, acceptance, aut.kind


def build_buffer_game(spec: DelayGameSpec) -> TurnGame:
    initial, owner, moves, acceptance, kind = buffer_moves(spec)
    b = TurnGameBuilder()
    b.node(initial, owner(initial))
    todo = deque([initial])
    while todo:
        label = todo.popleft()
        u = b.index[label]
        for a, nxt in moves(label):
            if nxt not in b:
                b.node(nxt, owner(nxt))
                todo.append(nxt)
            b.edge(u, a, b.index[nxt])
    labels = b.labels
    if kind == SAFETY:
        obj = Objective(SAFETY, unsafe=frozenset(i for i, lab in enumerate(labels) if acceptance(lab)))
    elif kind == REACHABILITY:
        obj = Objective(REACHABILITY, target=frozenset(i for i, lab in enumerate(labels) if acceptance(lab)))
    else:
        obj = Objective(PARITY, colors=tuple(acceptance(lab) for lab in labels))
    return b.build(0, obj)


def solve_delay_game(spec: DelayGameSpec) -> DelayVerdict:
    g = build_buffer_game(spec)
    sol = solve_delay_free(g)
    # regions partition the nodes, so exactly one player wins the initial node
    assert (g.initial in sol.regions[0]) != (g.initial in sol.regions[1])
    winner = PLAYER_O if sol.winner == 0 else PLAYER_I
    witness = sol.strategy(0 if winner == PLAYER_O else 1)
    return DelayVerdict(spec.lookahead, winner, witness, g)
