"""Games under delayed control.

Controller under delay ``d`` is solved on a queue game: her commitments ride
in a FIFO of length ``d/2`` and the head is applied when her turn comes, so a
choice made after seeing the prefix up to turn ``2n`` is applied at turn
``2n + d``.  The environment observes everything, including the queue.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from delaygames.model import (
    CONTROLLER,
    PARITY,
    REACHABILITY,
    SAFETY,
    ControlGame,
    InvalidInput,
    product_with_projection,
)
from delaygames.solver import (
    Objective,
    PositionalStrategy,
    TurnGame,
    TurnGameBuilder,
    solve_delay_free,
    verify_positional_strategy,
)


class OddDelayError(InvalidInput):
    pass


def check_delay(delay: int) -> int:
    if delay < 0 or delay % 2:
        raise OddDelayError("delay must be even")
    return delay // 2


@dataclass(frozen=True)
class DelayedStrategy:
    """Controller strategy ``(alpha, tau)`` as a finite-memory machine.

    The machine is fed arena states with a lag of ``delay`` turns.  The action
    applied at turn ``2n >= delay`` is ``act[m, s]`` where ``s`` is the state
    at turn ``2n - delay`` and ``m`` the memory after the states before it.
    Missing ``update`` entries leave the memory unchanged.
    """

    delay: int
    alpha: tuple[str, ...]
    memory_states: tuple[str, ...]
    initial_memory: str
    update: Mapping[tuple[str, str], str]
    act: Mapping[tuple[str, str], str]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "memory_states", tuple(sorted(self.memory_states)))
        object.__setattr__(self, "update", dict(self.update))
        object.__setattr__(self, "act", dict(self.act))
        if len(self.alpha) * 2 != self.delay:
            raise InvalidInput("alpha must have length delay/2")

    def next_memory(self, m: str, s: str) -> str:
        return self.update.get((m, s), m)


@dataclass(frozen=True)
class ControlVerdict:
    delay: int
    controller_wins: bool
    environment_wins: bool

    def __post_init__(self):
        if self.controller_wins and self.environment_wins:
            raise AssertionError("both players cannot win")

    @property
    def classification(self) -> str:
        if self.controller_wins:
            return "controller"
        if self.environment_wins:
            return "environment"
        return "undetermined"


@dataclass(frozen=True)
class MaxDelayReport:
    verdicts: tuple[ControlVerdict, ...]
    outcome: str  # "delta_max" | "wins_up_to_cap" | "loses_at_zero"
    value: int | None = None  # delta_max, or the cap

    @property
    def delta_max(self) -> int | None:
        return self.value if self.outcome == "delta_max" else None


def _state_objective(game: ControlGame, node_state: list[str | None], initial_state: str):
    """Objective over nodes whose arena state is given (None: use the initial state)."""
    cond = game.condition
    states = [s if s is not None else initial_state for s in node_state]
    if cond.kind == SAFETY:
        return Objective(SAFETY, unsafe=frozenset(i for i, s in enumerate(states) if s in cond.unsafe))
    if cond.kind == REACHABILITY:
        return Objective(REACHABILITY, target=frozenset(i for i, s in enumerate(states) if s in cond.target))
    return Objective(PARITY, colors=tuple(cond.colors[s] for s in states))


def _queue_game(pgame: ControlGame, delay: int) -> TurnGame:
    h = check_delay(delay)
    arena = pgame.arena
    sigma = arena.controller_actions
    b = TurnGameBuilder()
    node_state: list[str | None] = []

    def add(label, owner, state):
        if label not in b:
            node_state.append(state)
        return b.node(label, owner)

    words_by_len = [list(product(sigma, repeat=i)) for i in range(h + 1)]
    for i in range(h):
        for w in words_by_len[i]:
            add(("init", w), 0, None)
    for s in arena.states:
        for q in words_by_len[h]:
            add(("c" if arena.owner[s] == CONTROLLER else "e", s, q), 0 if arena.owner[s] == CONTROLLER else 1, s)
    for i in range(h):
        for w in words_by_len[i]:
            u = b.index[("init", w)]
            for a in sigma:
                nxt = ("init", w + (a,)) if i + 1 < h else ("c", arena.initial, w + (a,))
                b.edge(u, a, b.index[nxt])
    for s in arena.states:
        ctrl = arena.owner[s] == CONTROLLER
        for q in words_by_len[h]:
            u = b.index[("c" if ctrl else "e", s, q)]
            if ctrl:
                for a in sigma:
                    if h == 0:
                        v = ("e", arena.transitions[s, a], ())
                    else:
                        v = ("e", arena.transitions[s, q[0]], q[1:] + (a,))
                    b.edge(u, a, b.index[v])
            else:
                for e in arena.environment_actions:
                    b.edge(u, e, b.index[("c", arena.transitions[s, e], q)])
    initial = b.index[("init", ())] if h else b.index[("c", arena.initial, ())]
    return b.build(initial, _state_objective(pgame, node_state, arena.initial))


def build_queue_game(game: ControlGame, delay: int) -> TurnGame:
    check_delay(delay)
    pgame, _ = product_with_projection(game)
    return _queue_game(pgame, delay)


def queue_game_size(game: ControlGame, delay: int) -> int:
    """Closed-form node count of the queue game (on the product game)."""
    h = check_delay(delay)
    pgame, _ = product_with_projection(game)
    n = len(pgame.arena.controller_actions)
    return len(pgame.arena.states) * n**h + sum(n**i for i in range(h))


def solve_environment(game: ControlGame):
    """Environment wins iff he wins the delay-free game (he always sees the full prefix)."""
    pgame, _ = product_with_projection(game)
    g = _queue_game(pgame, 0)
    sol = solve_delay_free(g)
    if sol.winner == 0:
        return False, None
    strat = sol.strategy(1)
    choice = {g.labels[v][1]: a for v, a in strat.choice.items()}
    return True, PositionalStrategy(1, choice)


def solve_under_delay(game: ControlGame, delay: int, extract: bool = True, environment_wins=None):
    check_delay(delay)
    pgame, _ = product_with_projection(game)
    g = _queue_game(pgame, delay)
    sol = solve_delay_free(g)
    wins = sol.winner == 0
    if environment_wins is None:
        environment_wins = solve_environment(game)[0]
    verdict = ControlVerdict(delay, wins, environment_wins)
    strategy = None
    if wins and extract:
        strategy = extract_delayed_strategy(game, delay, sol.strategy(0), queue_game=g)
    return verdict, strategy


def _follow_map(pgame: ControlGame, proj: dict[str, str]) -> dict:
    """(product state or None, next arena state) -> next product state."""
    follow = {(None, proj[pgame.arena.initial]): pgame.arena.initial}
    for (p, _), q in pgame.arena.transitions.items():
        follow[p, proj[q]] = q
    return follow


def extract_delayed_strategy(game: ControlGame, delay: int, queue_strategy: PositionalStrategy,
                             queue_game: TurnGame | None = None) -> DelayedStrategy:
    h = check_delay(delay)
    pgame, proj = product_with_projection(game)
    g = queue_game if queue_game is not None else _queue_game(pgame, delay)
    arena = game.arena
    follow = _follow_map(pgame, proj)

    def pick(label):
        v = g.index[label]
        if v not in queue_strategy.choice:
            raise InvalidInput(f"queue strategy undefined at {label!r}")
        return queue_strategy.choice[v]

    alpha: tuple[str, ...] = ()
    while len(alpha) < h:
        alpha += (pick(("init", alpha)),)

    # memory = (last observed product state, pending commitments)
    ids: dict[tuple, str] = {}

    def mem_id(mem):
        if mem not in ids:
            ids[mem] = f"m{len(ids)}"
        return ids[mem]

    update: dict[tuple[str, str], str] = {}
    act: dict[tuple[str, str], str] = {}
    start = ((None, alpha), arena.initial)
    mem_id(start[0])
    seen = {start}
    todo = deque([start])
    while todo:
        (p, pending), s = todo.popleft()
        p2 = follow[p, s]
        m = mem_id((p, pending))
        if arena.owner[s] == CONTROLLER:
            choice = pick(("c", p2, pending))
            act[m, s] = choice
            applied = pending[0] if h else choice
            new_pending = pending[1:] + (choice,) if h else ()
            nexts = [arena.transitions[s, applied]]
        else:
            new_pending = pending
            nexts = [arena.transitions[s, e] for e in arena.environment_actions]
        nmem = (p2, new_pending)
        update[m, s] = mem_id(nmem)
        for t in sorted(set(nexts)):
            item = (nmem, t)
            if item not in seen:
                seen.add(item)
                todo.append(item)
    strategy = DelayedStrategy(delay, alpha, tuple(ids.values()), "m0", update, act)
    if not verify_delayed_strategy(game, strategy):
        raise InvalidInput("queue strategy does not yield a winning delayed strategy")
    return strategy


def delayed_play_game(game: ControlGame, strategy: DelayedStrategy) -> TurnGame:
    """One-player graph of all plays consistent with ``strategy``.

    Simulates the delayed semantics directly: controller nodes carry the
    window of states the machine has not yet been fed.
    """
    pgame, proj = product_with_projection(game)
    arena = pgame.arena
    d = strategy.delay
    b = TurnGameBuilder()
    node_state: list[str] = []

    def add(label, owner):
        if label not in b:
            node_state.append(label[1][-1])
        return b.node(label, owner)

    start = ("c", (arena.initial,), strategy.initial_memory)
    init = add(start, 0)
    todo = deque([start])
    while todo:
        label = todo.popleft()
        kind, window, m = label
        u = b.index[label]
        s = window[-1]
        if kind == "c":
            if len(window) < d + 1:
                action = strategy.alpha[(len(window) - 1) // 2]
                nwin, nm = window, m
            else:
                seen_state = proj[window[0]]
                key = (m, seen_state)
                if key not in strategy.act:
                    raise InvalidInput(f"strategy has no action for memory {m} at {seen_state}")
                action = strategy.act[key]
                nm = strategy.next_memory(m, seen_state)
                nwin = window[1:]
            nxt = ("e", nwin + (arena.transitions[s, action],), nm)
            edges = [(action, nxt)]
        else:
            # past alpha, the oldest state is fed to the memory on every move
            if len(window) == d + 1:
                m, window = strategy.next_memory(m, proj[window[0]]), window[1:]
            edges = [(e, ("c", window + (arena.transitions[s, e],), m)) for e in arena.environment_actions]
        for a, lab in edges:
            if lab not in b:
                add(lab, 0 if lab[0] == "c" else 1)
                todo.append(lab)
            b.edge(u, a, b.index[lab])
    return b.build(init, _state_objective(pgame, node_state, arena.initial))


def verify_delayed_strategy(game: ControlGame, strategy: DelayedStrategy) -> bool:
    g = delayed_play_game(game, strategy)
    forced = {v: g.edges[v][0][0] for v in range(len(g)) if g.owner[v] == 0}
    return verify_positional_strategy(g, PositionalStrategy(0, forced), 0)


def max_delay(game: ControlGame, cap: int) -> MaxDelayReport:
    check_delay(cap)
    env = solve_environment(game)[0]
    verdicts = []
    for delay in range(0, cap + 1, 2):
        verdict, _ = solve_under_delay(game, delay, extract=False, environment_wins=env)
        verdicts.append(verdict)
        if not verdict.controller_wins:
            if delay == 0:
                return MaxDelayReport(tuple(verdicts), "loses_at_zero")
            return MaxDelayReport(tuple(verdicts), "delta_max", delay - 2)
    return MaxDelayReport(tuple(verdicts), "wins_up_to_cap", cap)
