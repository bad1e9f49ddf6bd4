"""Randomized strategies and almost-sure winning.

Fixing a finite-memory mixed strategy turns the game into a process where the
strategy's owner moves at random and the opponent moves adversarially.  All
verdicts are qualitative: only the supports of distributions matter.

Controller's random choices are sampled when the action is applied.  The
distribution itself is fixed by the delayed observation, so an environment
that watches the play learns the distribution in advance but never the coin
flip, which is what a delayed controller actually reveals.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from delaygames.control import DelayedStrategy, check_delay
from delaygames.model import (
    CONTROLLER,
    ENVIRONMENT,
    PARITY,
    REACHABILITY,
    SAFETY,
    ControlGame,
    InvalidInput,
    product_with_projection,
)

STOCHASTIC = "stochastic"
ADVERSARY = "adversary"


def _check_distribution(dist: Mapping, what: str) -> dict:
    dist = {k: Fraction(v) for k, v in dist.items()}
    if not dist or all(p == 0 for p in dist.values()):
        raise InvalidInput(f"{what}: empty support")
    if any(p < 0 for p in dist.values()):
        raise InvalidInput(f"{what}: negative probability")
    if sum(dist.values()) != 1:
        raise InvalidInput(f"{what}: probabilities sum to {sum(dist.values())}, not 1")
    return {k: p for k, p in sorted(dist.items()) if p > 0}


@dataclass(frozen=True)
class FiniteMixedStrategy:
    """Finite-memory randomized strategy fed with a lag of ``delay`` turns.

    ``choice[m, s]`` is the distribution used at a turn whose delayed
    observation is state ``s`` with memory ``m``.  ``alpha`` distributes over
    the first ``delay/2`` actions as whole words.
    """

    delay: int
    memory_states: tuple[str, ...]
    initial_memory: str
    update: Mapping[tuple[str, str], str]
    choice: Mapping[tuple[str, str], Mapping[str, Fraction]]
    alpha: Mapping[tuple[str, ...], Fraction] = field(default_factory=lambda: {(): Fraction(1)})

    def __post_init__(self):
        check_delay(self.delay)
        object.__setattr__(self, "memory_states", tuple(sorted(self.memory_states)))
        object.__setattr__(self, "update", dict(self.update))
        object.__setattr__(
            self, "choice",
            {key: _check_distribution(d, f"choice at {key}") for key, d in sorted(self.choice.items())},
        )
        alpha = _check_distribution({tuple(w): p for w, p in self.alpha.items()}, "alpha")
        if any(len(w) * 2 != self.delay for w in alpha):
            raise InvalidInput("alpha words must have length delay/2")
        object.__setattr__(self, "alpha", alpha)
        if self.initial_memory not in self.memory_states:
            raise InvalidInput("initial memory state unknown")

    def next_memory(self, m: str, s: str) -> str:
        return self.update.get((m, s), m)

    def alpha_next(self, prefix: tuple[str, ...]) -> dict[str, Fraction]:
        """Distribution of the next alpha letter given the letters applied so far."""
        mass: dict[str, Fraction] = {}
        for w, p in self.alpha.items():
            if w[: len(prefix)] == prefix:
                mass[w[len(prefix)]] = mass.get(w[len(prefix)], Fraction(0)) + p
        total = sum(mass.values())
        return {a: p / total for a, p in sorted(mass.items())}

    @classmethod
    def uniform(cls, actions, states, delay: int = 0) -> "FiniteMixedStrategy":
        """Memoryless strategy picking uniformly among ``actions`` at each of ``states``."""
        actions = sorted(actions)
        p = Fraction(1, len(actions))
        words = list(product(actions, repeat=delay // 2))
        return cls(
            delay, ("m0",), "m0", {},
            {("m0", s): {a: p for a in actions} for s in states},
            {w: Fraction(1, len(words)) for w in words},
        )

    @classmethod
    def point_mass(cls, strategy: DelayedStrategy) -> "FiniteMixedStrategy":
        return cls(
            strategy.delay,
            strategy.memory_states,
            strategy.initial_memory,
            strategy.update,
            {key: {a: Fraction(1)} for key, a in strategy.act.items()},
            {strategy.alpha: Fraction(1)},
        )


@dataclass(frozen=True, eq=False)
class AdversarialMDP:
    labels: tuple
    kinds: tuple[str, ...]
    # per node: (action, successor, probability or None)
    edges: tuple[tuple[tuple[str, int, Fraction | None], ...], ...]
    initial: int
    objective: str
    unsafe: frozenset = frozenset()
    target: frozenset = frozenset()

    def __len__(self) -> int:
        return len(self.labels)

    def support(self, v: int) -> list[int]:
        return sorted({w for _, w, _ in self.edges[v]})


class _MDPBuilder:
    def __init__(self):
        self.index, self.labels, self.kinds, self.edges = {}, [], [], []

    def node(self, label, kind) -> int:
        if label not in self.index:
            self.index[label] = len(self.labels)
            self.labels.append(label)
            self.kinds.append(kind)
            self.edges.append([])
        return self.index[label]


def _objective_sets(pgame: ControlGame, states):
    cond = pgame.condition
    if cond.kind == PARITY:
        raise InvalidInput("almost-sure analysis supports safety and reachability only")
    if cond.kind == SAFETY:
        return SAFETY, frozenset(i for i, s in enumerate(states) if s in cond.unsafe), frozenset()
    return REACHABILITY, frozenset(), frozenset(i for i, s in enumerate(states) if s in cond.target)


def induce_adversarial_mdp(game: ControlGame, delay: int, strat: FiniteMixedStrategy) -> AdversarialMDP:
    """Process induced by a mixed controller strategy under ``delay``.

    Controller nodes carry the window of states not yet fed to the strategy's
    memory (as in the delayed play simulation), plus the alpha letters applied
    so far while alpha is still running.
    """
    check_delay(delay)
    if strat.delay != delay:
        raise InvalidInput(f"strategy is for delay {strat.delay}, not {delay}")
    pgame, proj = product_with_projection(game)
    arena = pgame.arena
    allowed = set(arena.controller_actions)
    b = _MDPBuilder()
    start = ("c", (arena.initial,), strat.initial_memory, ())
    b.node(start, STOCHASTIC)
    todo = deque([start])
    while todo:
        label = todo.popleft()
        u = b.index[label]
        s = label[1][-1]
        if label[0] == "c":
            _, window, m, applied = label
            if len(window) < delay + 1:
                dist = strat.alpha_next(applied)
                nwin, nm = window, m
            else:
                seen = proj[window[0]]
                if (m, seen) not in strat.choice:
                    raise InvalidInput(f"strategy has no distribution for memory {m} at {seen}")
                dist = strat.choice[m, seen]
                nm = strat.next_memory(m, seen)
                nwin = window[1:]
            bad = set(dist) - allowed
            if bad:
                raise InvalidInput(f"support contains undefined actions {sorted(bad)}")
            out = []
            for a, p in dist.items():
                napplied = applied + (a,) if len(window) < delay + 1 else ()
                out.append((a, ("e", nwin + (arena.transitions[s, a],), nm, napplied), p))
        else:
            _, window, m, applied = label
            if len(window) == delay + 1:
                m, window = strat.next_memory(m, proj[window[0]]), window[1:]
            out = [(e, ("c", window + (arena.transitions[s, e],), m, applied), None)
                   for e in arena.environment_actions]
        for a, lab, p in out:
            if lab not in b.index:
                b.node(lab, STOCHASTIC if lab[0] == "c" else ADVERSARY)
                todo.append(lab)
            b.edges[u].append((a, b.index[lab], p))
    kind, unsafe, target = _objective_sets(pgame, [lab[1][-1] for lab in b.labels])
    return AdversarialMDP(tuple(b.labels), tuple(b.kinds), tuple(tuple(e) for e in b.edges),
                          0, kind, unsafe, target)


def induce_environment_mdp(game: ControlGame, strat: FiniteMixedStrategy) -> AdversarialMDP:
    """Process induced by a mixed environment strategy against a fully informed controller.

    The objective is environment's: the dual of controller's condition.
    """
    if strat.delay != 0:
        raise InvalidInput("environment strategies observe without delay")
    pgame, proj = product_with_projection(game)
    arena = pgame.arena
    allowed = set(arena.environment_actions)
    b = _MDPBuilder()
    start = (arena.initial, strat.initial_memory)
    b.node(start, ADVERSARY)
    todo = deque([start])
    while todo:
        s, m = label = todo.popleft()
        u = b.index[label]
        nm = strat.next_memory(m, proj[s])
        if arena.owner[s] == CONTROLLER:
            out = [(a, (arena.transitions[s, a], nm), None) for a in arena.controller_actions]
        else:
            if (m, proj[s]) not in strat.choice:
                raise InvalidInput(f"strategy has no distribution for memory {m} at {proj[s]}")
            dist = strat.choice[m, proj[s]]
            bad = set(dist) - allowed
            if bad:
                raise InvalidInput(f"support contains undefined actions {sorted(bad)}")
            out = [(e, (arena.transitions[s, e], nm), p) for e, p in dist.items()]
        for a, lab, p in out:
            if lab not in b.index:
                b.node(lab, ADVERSARY if arena.owner[lab[0]] == CONTROLLER else STOCHASTIC)
                todo.append(lab)
            b.edges[u].append((a, b.index[lab], p))
    kind, unsafe, target = _objective_sets(pgame, [lab[0] for lab in b.labels])
    # environment wins by reaching controller's unsafe states or by avoiding her targets
    if kind == SAFETY:
        return AdversarialMDP(tuple(b.labels), tuple(b.kinds), tuple(tuple(e) for e in b.edges),
                              0, REACHABILITY, target=unsafe)
    return AdversarialMDP(tuple(b.labels), tuple(b.kinds), tuple(tuple(e) for e in b.edges),
                          0, SAFETY, unsafe=target)


def _reachable(mdp: AdversarialMDP, blocked=frozenset()) -> set[int]:
    if mdp.initial in blocked:
        return {mdp.initial}
    seen = {mdp.initial}
    stack = [mdp.initial]
    while stack:
        v = stack.pop()
        for w in mdp.support(v):
            if w not in seen:
                seen.add(w)
                if w not in blocked:
                    stack.append(w)
    return seen


def almost_sure_safety(mdp: AdversarialMDP, unsafe=None) -> bool:
    unsafe = mdp.unsafe if unsafe is None else frozenset(unsafe)
    return not (_reachable(mdp) & unsafe)


def closed_core(mdp: AdversarialMDP, target) -> set[int]:
    """Greatest target-free set the adversary can keep the process in surely."""
    core = set(range(len(mdp))) - set(target)
    changed = True
    while changed:
        changed = False
        for v in sorted(core):
            succ = mdp.support(v)
            stays = any(w in core for w in succ) if mdp.kinds[v] == ADVERSARY else all(w in core for w in succ)
            if not stays:
                core.discard(v)
                changed = True
    return core


def almost_sure_reachability(mdp: AdversarialMDP, target=None) -> bool:
    target = mdp.target if target is None else frozenset(target)
    if mdp.initial in target:
        return True
    core = closed_core(mdp, target)
    return not (_reachable(mdp, blocked=target) - set(target)) & core


@dataclass(frozen=True)
class AlmostSureVerdict:
    holds: bool
    conclusive: bool = True
    protagonist: str = CONTROLLER

    def __bool__(self) -> bool:
        return self.holds


def _decide(mdp: AdversarialMDP) -> bool:
    if mdp.objective == SAFETY:
        return almost_sure_safety(mdp)
    return almost_sure_reachability(mdp)


def check_almost_sure(game: ControlGame, delay: int, strat: FiniteMixedStrategy,
                      protagonist: str = CONTROLLER) -> AlmostSureVerdict:
    if protagonist == CONTROLLER:
        return AlmostSureVerdict(_decide(induce_adversarial_mdp(game, delay, strat)))
    if protagonist == ENVIRONMENT:
        check_delay(delay)
        holds = _decide(induce_environment_mdp(game, strat))
        # the adversary here sees more than a delayed controller would
        return AlmostSureVerdict(holds, conclusive=holds, protagonist=ENVIRONMENT)
    raise InvalidInput(f"unknown protagonist {protagonist!r}")
