"""Arenas, winning conditions and omega-word membership.

State identifiers are strings.  Letters of condition automata are arbitrary
hashable, sortable values: arena state ids for conditions of control games,
``(input, output)`` tuples for delay-game conditions.  Everything derived from
a model (products, queues, strategies) iterates in sorted order so results are
reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import chain
from typing import Hashable, Iterable, Mapping

CONTROLLER = "controller"
ENVIRONMENT = "environment"

SAFETY = "safety"
REACHABILITY = "reachability"
PARITY = "parity"
KINDS = (SAFETY, REACHABILITY, PARITY)


class InvalidInput(ValueError):
    """Raised when an operation receives data outside its contract."""


def join_id(*parts) -> str:
    """Compose an identifier for a tuple of component ids.

    Injective as long as the components themselves avoid ``(``, ``)`` and ``,``.
    """
    return "(" + ",".join(str(p) for p in parts) + ")"


@dataclass(frozen=True)
class Arena:
    states: tuple[str, ...]
    owner: Mapping[str, str]
    initial: str
    controller_actions: tuple[str, ...]
    environment_actions: tuple[str, ...]
    transitions: Mapping[tuple[str, str], str]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(self.states)))
        object.__setattr__(self, "controller_actions", tuple(sorted(self.controller_actions)))
        object.__setattr__(self, "environment_actions", tuple(sorted(self.environment_actions)))
        object.__setattr__(self, "owner", dict(self.owner))
        object.__setattr__(self, "transitions", dict(self.transitions))

    def actions_at(self, state: str) -> tuple[str, ...]:
        if self.owner[state] == CONTROLLER:
            return self.controller_actions
        return self.environment_actions

    def step(self, state: str, action: str) -> str:
        return self.transitions[state, action]

    @property
    def controller_states(self) -> tuple[str, ...]:
        return tuple(s for s in self.states if self.owner[s] == CONTROLLER)

    @property
    def environment_states(self) -> tuple[str, ...]:
        return tuple(s for s in self.states if self.owner[s] == ENVIRONMENT)


@dataclass(frozen=True)
class ConditionAutomaton:
    """Deterministic safety, reachability or parity automaton.

    ``transition_colors``, when given, replaces the state coloring: the run's
    color sequence is then the sequence of colors of the transitions taken.
    """

    kind: str
    alphabet: tuple
    states: tuple[str, ...]
    initial: str
    delta: Mapping[tuple[str, Hashable], str]
    unsafe: frozenset = frozenset()
    target: frozenset = frozenset()
    colors: Mapping[str, int] | None = None
    transition_colors: Mapping[tuple[str, Hashable], int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        object.__setattr__(self, "states", tuple(sorted(self.states)))
        object.__setattr__(self, "delta", dict(self.delta))
        object.__setattr__(self, "unsafe", frozenset(self.unsafe))
        object.__setattr__(self, "target", frozenset(self.target))
        if self.colors is not None:
            object.__setattr__(self, "colors", dict(self.colors))
        if self.transition_colors is not None:
            object.__setattr__(self, "transition_colors", dict(self.transition_colors))

    def step_color(self, q: str, letter) -> int:
        if self.transition_colors is not None:
            return self.transition_colors[q, letter]
        return self.colors[q]

    def run(self, word: Iterable) -> list[str]:
        q = self.initial
        out = [q]
        for x in word:
            q = self.delta[q, x]
            out.append(q)
        return out


@dataclass(frozen=True)
class StateCondition:
    """Winning condition read directly off arena states."""

    kind: str
    unsafe: frozenset = frozenset()
    target: frozenset = frozenset()
    colors: Mapping[str, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "unsafe", frozenset(self.unsafe))
        object.__setattr__(self, "target", frozenset(self.target))
        if self.colors is not None:
            object.__setattr__(self, "colors", dict(self.colors))


@dataclass(frozen=True)
class ControlGame:
    arena: Arena
    condition: StateCondition | ConditionAutomaton

    @property
    def state_based(self) -> bool:
        return isinstance(self.condition, StateCondition)


@dataclass(frozen=True)
class LassoWord:
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise InvalidInput("lasso cycle must be non-empty")

    def letters(self, n: int) -> list:
        """First ``n`` letters of the omega-word."""
        out = list(self.prefix[:n])
        i = 0
        while len(out) < n:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return out


@dataclass(frozen=True)
class DelayGameSpec:
    input_alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    lookahead: int
    condition: ConditionAutomaton

    def __post_init__(self):
        object.__setattr__(self, "input_alphabet", tuple(sorted(self.input_alphabet)))
        object.__setattr__(self, "output_alphabet", tuple(sorted(self.output_alphabet)))
        if self.lookahead < 0:
            raise InvalidInput("lookahead must be non-negative")
        pairs = {(a, b) for a in self.input_alphabet for b in self.output_alphabet}
        if set(self.condition.alphabet) != pairs:
            raise InvalidInput("condition alphabet must be the pair alphabet")

    def with_lookahead(self, k: int) -> DelayGameSpec:
        return DelayGameSpec(self.input_alphabet, self.output_alphabet, k, self.condition)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_automaton(cond: ConditionAutomaton) -> list[str]:
    problems = []
    if cond.kind not in KINDS:
        problems.append(f"unknown condition kind {cond.kind!r}")
    if not cond.alphabet:
        problems.append("automaton alphabet is empty")
    states = set(cond.states)
    if cond.initial not in states:
        problems.append(f"automaton initial state {cond.initial} unknown")
    for q in cond.states:
        for x in cond.alphabet:
            nxt = cond.delta.get((q, x))
            if nxt is None:
                problems.append(f"automaton transition not total at ({q}, {x})")
            elif nxt not in states:
                problems.append(f"automaton transition ({q}, {x}) leads to unknown state {nxt}")
    for q, x in cond.delta:
        if q not in states or x not in set(cond.alphabet):
            problems.append(f"automaton transition ({q}, {x}) outside its domain")
    if not cond.unsafe <= states:
        problems.append("unsafe set is not a subset of the automaton states")
    if not cond.target <= states:
        problems.append("target set is not a subset of the automaton states")
    if cond.kind == PARITY:
        if cond.colors is None or set(cond.colors) != states:
            problems.append("colors must be defined for every automaton state")
        elif any(c < 0 for c in cond.colors.values()):
            problems.append("colors must be non-negative")
        if cond.transition_colors is not None:
            domain = {(q, x) for q in cond.states for x in cond.alphabet}
            if set(cond.transition_colors) != domain:
                problems.append("transition colors must be defined for every transition")
    elif cond.transition_colors is not None:
        problems.append("transition colors are only meaningful for parity automata")
    return problems


def validate_control_game(game: ControlGame) -> ValidationReport:
    arena = game.arena
    report = ValidationReport()
    bad = report.violations
    states = set(arena.states)
    if not arena.controller_actions:
        bad.append("controller alphabet is empty")
    if not arena.environment_actions:
        bad.append("environment alphabet is empty")
    for s in arena.states:
        if arena.owner.get(s) not in (CONTROLLER, ENVIRONMENT):
            bad.append(f"state {s} has no valid owner")
    if arena.initial not in states:
        bad.append(f"initial state {arena.initial} unknown")
    elif arena.owner.get(arena.initial) != CONTROLLER:
        bad.append(f"initial state {arena.initial} is not controller-owned")
    if bad:
        return report
    for s in arena.states:
        for a in arena.actions_at(s):
            t = arena.transitions.get((s, a))
            if t is None:
                bad.append(f"transition not total at ({s}, {a})")
            elif t not in states:
                bad.append(f"transition ({s}, {a}) leads to unknown state {t}")
            elif arena.owner[t] == arena.owner[s]:
                bad.append(f"alternation broken at {s}")
    for (s, a) in sorted(arena.transitions):
        if s not in states or a not in arena.actions_at(s):
            bad.append(f"transition ({s}, {a}) outside the typed domain")
    cond = game.condition
    if isinstance(cond, ConditionAutomaton):
        if set(cond.alphabet) != states:
            bad.append("condition automaton alphabet differs from the arena states")
        bad.extend(validate_automaton(cond))
    else:
        if cond.kind not in KINDS:
            bad.append(f"unknown condition kind {cond.kind!r}")
        if not cond.unsafe <= states:
            bad.append("unsafe set mentions unknown states")
        if not cond.target <= states:
            bad.append("target set mentions unknown states")
        if cond.kind == PARITY and (cond.colors is None or set(cond.colors) != states):
            bad.append("colors must be defined for every arena state")
    return report


def eval_condition_on_lasso(cond: ConditionAutomaton, w: LassoWord) -> bool:
    alphabet = set(cond.alphabet)
    for x in chain(w.prefix, w.cycle):
        if x not in alphabet:
            raise InvalidInput(f"letter {x!r} outside the automaton alphabet")
    q = cond.initial
    visited = [q]
    for x in w.prefix:
        q = cond.delta[q, x]
        visited.append(q)
    # drive along the cycle until (state, position) repeats
    seen: dict[tuple[str, int], int] = {}
    trace: list[tuple[str, int]] = []
    i = 0
    while (q, i) not in seen:
        seen[q, i] = len(trace)
        x = w.cycle[i]
        trace.append((q, cond.step_color(q, x) if cond.kind == PARITY else 0))
        q = cond.delta[q, x]
        i = (i + 1) % len(w.cycle)
    visited.extend(p for p, _ in trace)
    if cond.kind == SAFETY:
        return not any(p in cond.unsafe for p in visited)
    if cond.kind == REACHABILITY:
        return any(p in cond.target for p in visited)
    loop = trace[seen[q, i]:]
    return max(c for _, c in loop) % 2 == 0


def make_absorbing(cond: ConditionAutomaton) -> ConditionAutomaton:
    """Make unsafe (safety) or target (reachability) states absorbing."""
    if cond.kind == PARITY:
        return cond
    sink = cond.unsafe if cond.kind == SAFETY else cond.target
    delta = {(q, x): (q if q in sink else t) for (q, x), t in cond.delta.items()}
    return ConditionAutomaton(
        cond.kind, cond.alphabet, cond.states, cond.initial, delta, cond.unsafe, cond.target
    )


def complement_condition(cond: ConditionAutomaton) -> ConditionAutomaton:
    if cond.kind == PARITY:
        tc = None
        if cond.transition_colors is not None:
            tc = {k: c + 1 for k, c in cond.transition_colors.items()}
        return ConditionAutomaton(
            PARITY,
            cond.alphabet,
            cond.states,
            cond.initial,
            cond.delta,
            colors={q: c + 1 for q, c in cond.colors.items()},
            transition_colors=tc,
        )
    a = make_absorbing(cond)
    if cond.kind == SAFETY:
        return ConditionAutomaton(
            REACHABILITY, a.alphabet, a.states, a.initial, a.delta, target=a.unsafe
        )
    return ConditionAutomaton(SAFETY, a.alphabet, a.states, a.initial, a.delta, unsafe=a.target)


def lift_state_condition(arena: Arena, cond: StateCondition) -> ConditionAutomaton:
    """Express a state-based condition as an automaton reading arena states."""
    letters = arena.states
    if cond.kind == SAFETY:
        delta = {}
        for q in ("bad", "ok"):
            for s in letters:
                delta[q, s] = "bad" if q == "bad" or s in cond.unsafe else "ok"
        return ConditionAutomaton(SAFETY, letters, ("bad", "ok"), "ok", delta, unsafe={"bad"})
    if cond.kind == REACHABILITY:
        delta = {}
        for q in ("no", "yes"):
            for s in letters:
                delta[q, s] = "yes" if q == "yes" or s in cond.target else "no"
        return ConditionAutomaton(REACHABILITY, letters, ("no", "yes"), "no", delta, target={"yes"})
    used = sorted(set(cond.colors.values()))
    states = ["init"] + [f"c{c}" for c in used]
    delta = {(q, s): f"c{cond.colors[s]}" for q in states for s in letters}
    colors = {"init": 0, **{f"c{c}": c for c in used}}
    return ConditionAutomaton(PARITY, letters, states, "init", delta, colors=colors)


def condition_automaton(game: ControlGame) -> ConditionAutomaton:
    """The game's winning condition as an automaton over arena states."""
    if game.state_based:
        return lift_state_condition(game.arena, game.condition)
    return game.condition


def play_states(arena: Arena, actions: Iterable[str]) -> list[str]:
    """States of the play induced by an alternating action sequence."""
    s = arena.initial
    out = [s]
    for a in actions:
        s = arena.transitions[s, a]
        out.append(s)
    return out


def product_with_projection(game: ControlGame) -> tuple[ControlGame, dict[str, str]]:
    """Product of the arena with its condition automaton.

    Returns the state-based product game and the map from product states to
    the arena states they project to.
    """
    if game.state_based:
        return game, {s: s for s in game.arena.states}
    arena = game.arena
    aut = make_absorbing(game.condition)
    use_tc = aut.kind == PARITY and aut.transition_colors is not None

    def make(s, q_prev):
        q = aut.delta[q_prev, s]
        if use_tc:
            c = aut.transition_colors[q_prev, s]
            return join_id(s, q, c), (s, q, c)
        return join_id(s, q), (s, q, None)

    init_id, init_data = make(arena.initial, aut.initial)
    data = {init_id: init_data}
    trans = {}
    queue = deque([init_id])
    while queue:
        pid = queue.popleft()
        s, q, _ = data[pid]
        for a in arena.actions_at(s):
            nid, ndata = make(arena.transitions[s, a], q)
            trans[pid, a] = nid
            if nid not in data:
                data[nid] = ndata
                queue.append(nid)
    owner = {pid: arena.owner[d[0]] for pid, d in data.items()}
    parena = Arena(
        tuple(data), owner, init_id, arena.controller_actions, arena.environment_actions, trans
    )
    if aut.kind == SAFETY:
        cond = StateCondition(SAFETY, unsafe={p for p, d in data.items() if d[1] in aut.unsafe})
    elif aut.kind == REACHABILITY:
        cond = StateCondition(REACHABILITY, target={p for p, d in data.items() if d[1] in aut.target})
    else:
        colors = {p: (d[2] if use_tc else aut.colors[d[1]]) for p, d in data.items()}
        cond = StateCondition(PARITY, colors=colors)
    return ControlGame(parena, cond), {p: d[0] for p, d in data.items()}


def product_condition(game: ControlGame) -> ControlGame:
    if game.state_based:
        raise InvalidInput("product_condition expects an automaton-based condition")
    return product_with_projection(game)[0]


def state_condition_holds(game: ControlGame, states_lasso: LassoWord) -> bool:
    """Does the state sequence ``u v^omega`` satisfy the game's winning condition?"""
    return eval_condition_on_lasso(condition_automaton(game), states_lasso)
