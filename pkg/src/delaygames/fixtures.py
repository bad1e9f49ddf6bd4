"""Built-in instances and instance generators."""

from __future__ import annotations

import math
import random

from delaygames.model import (
    CONTROLLER,
    ENVIRONMENT,
    PARITY,
    REACHABILITY,
    SAFETY,
    Arena,
    ConditionAutomaton,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    StateCondition,
)


def _game(ctrl, env, initial, sigma_c, sigma_e, edges, condition) -> ControlGame:
    owner = {s: CONTROLLER for s in ctrl} | {s: ENVIRONMENT for s in env}
    return ControlGame(Arena(tuple(owner), owner, initial, sigma_c, sigma_e, edges), condition)


def fig1() -> ControlGame:
    """Three controller states, five environment states; e3 must be avoided.

    Controller has to play ``a`` at c2 and ``b`` at c3.  She wins under
    delays 0 and 2 and loses under delay 4.
    """
    edges = {
        ("c1", "a"): "e1", ("c1", "b"): "e2",
        ("c2", "a"): "e4", ("c2", "b"): "e3",
        ("c3", "a"): "e3", ("c3", "b"): "e5",
        ("e1", "u"): "c2", ("e1", "u'"): "c2",
        ("e2", "u"): "c3", ("e2", "u'"): "c3",
        ("e3", "u"): "c1", ("e3", "u'"): "c1",
        ("e4", "u"): "c3", ("e4", "u'"): "c1",
        ("e5", "u"): "c2", ("e5", "u'"): "c1",
    }
    return _game(("c1", "c2", "c3"), ("e1", "e2", "e3", "e4", "e5"), "c1",
                 ("a", "b"), ("u", "u'"), edges, StateCondition(SAFETY, unsafe={"e3"}))


def fig2() -> ControlGame:
    """Coin matching: controller's second move must repeat environment's first."""
    edges = {("c0", "h"): "e0", ("c0", "t"): "e0"}
    for x in ("h", "t"):
        edges["e0", x] = f"c{x}"
        for y in ("h", "t"):
            edges[f"c{x}", y] = "ok" if x == y else "bad"
    for a in ("h", "t"):
        edges["ok", a] = "cok"
        edges["cok", a] = "ok"
        edges["bad", a] = "cbad"
        edges["cbad", a] = "bad"
    return _game(("c0", "ch", "ct", "cok", "cbad"), ("e0", "ok", "bad"), "c0",
                 ("h", "t"), ("h", "t"), edges, StateCondition(SAFETY, unsafe={"bad"}))


def fig4() -> ControlGame:
    """Controller reaches ``black`` once her pick differs from environment's last one."""
    edges = {("c0", "h"): "e0", ("c0", "t"): "e0"}
    for x in ("h", "t"):
        edges["e0", x] = f"c{x}"
        for y in ("h", "t"):
            edges[f"c{x}", y] = "e0" if x == y else "black"
    for a in ("h", "t"):
        edges["black", a] = "cblack"
        edges["cblack", a] = "black"
    return _game(("c0", "ch", "ct", "cblack"), ("e0", "black"), "c0",
                 ("h", "t"), ("h", "t"), edges, StateCondition(REACHABILITY, target={"black"}))


EX2_LETTERS = ("1", "2", "3", "4")


def ex2_condition() -> ConditionAutomaton:
    """Safety automaton for "the first output differs from the first three inputs"."""
    pairs = [(a, b) for a in EX2_LETTERS for b in EX2_LETTERS]
    states = ["start", "bad", "good"] + [f"p{i}:{b}" for i in (1, 2) for b in EX2_LETTERS]
    delta = {}
    for a, b in pairs:
        delta["start", (a, b)] = "bad" if a == b else f"p1:{b}"
        delta["bad", (a, b)] = "bad"
        delta["good", (a, b)] = "good"
        for c in EX2_LETTERS:
            delta[f"p1:{c}", (a, b)] = "bad" if a == c else f"p2:{c}"
            delta[f"p2:{c}", (a, b)] = "bad" if a == c else "good"
    return ConditionAutomaton(SAFETY, pairs, states, "start", delta, unsafe={"bad"})


def ex2(k: int = 1) -> DelayGameSpec:
    return DelayGameSpec(EX2_LETTERS, EX2_LETTERS, k, ex2_condition())


def exponential_family(n: int) -> ControlGame:
    """Safety game where controller must echo a bit after ``n*n`` idle rounds.

    Environment hides a bit, the play walks a corridor of ``n*n`` rounds that
    carries the bit, then controller must repeat it.  Under delay ``d`` she
    sees the bit only if ``d <= 2*n*n``, so the largest winning delay grows
    quadratically while the arena has ``4*n*n + 7`` states.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    length = n * n
    bits = ("0", "1")
    ctrl, env = ["c0", "cbad"], ["e0", "ok", "bad"]
    edges = {}
    for a in bits:
        edges["c0", a] = "e0"
        edges["e0", a] = f"k{a}_1"
        edges["ok", a] = "c0"
        edges["bad", a] = "cbad"
        edges["cbad", a] = "bad"
    for b in bits:
        ctrl.append(f"x{b}")
        for i in range(1, length + 1):
            ctrl.append(f"k{b}_{i}")
            env.append(f"f{b}_{i}")
            nxt = f"k{b}_{i + 1}" if i < length else f"x{b}"
            for a in bits:
                edges[f"k{b}_{i}", a] = f"f{b}_{i}"
                edges[f"f{b}_{i}", a] = nxt
        for a in bits:
            edges[f"x{b}", a] = "ok" if a == b else "bad"
    return _game(ctrl, env, "c0", bits, bits, edges, StateCondition(SAFETY, unsafe={"bad"}))


CTRL_LETTERS = "abcdefgh"
ENV_LETTERS = "uvwxyz"


def random_instance(seed: int, n_states: int, action_sizes: tuple[int, int] = (2, 2),
                    condition_kind: str = SAFETY, automaton_states: int | None = None) -> ControlGame:
    """Random alternating arena with a random condition.

    With ``automaton_states`` the condition is a random automaton over the
    arena states; otherwise it is read directly off the states.
    """
    if n_states < 2:
        raise InvalidInput("need at least two states")
    nc_act, ne_act = action_sizes
    if not (1 <= nc_act <= len(CTRL_LETTERS) and 1 <= ne_act <= len(ENV_LETTERS)):
        raise InvalidInput("unsupported action alphabet sizes")
    if condition_kind not in (SAFETY, REACHABILITY, PARITY):
        raise InvalidInput(f"unknown condition kind {condition_kind!r}")
    rng = random.Random(seed)
    n_ctrl = math.ceil(n_states / 2)
    ctrl = [f"c{i}" for i in range(n_ctrl)]
    env = [f"e{i}" for i in range(n_states - n_ctrl)]
    sigma_c = tuple(CTRL_LETTERS[:nc_act])
    sigma_e = tuple(ENV_LETTERS[:ne_act])
    edges = {}
    for s in ctrl:
        for a in sigma_c:
            edges[s, a] = rng.choice(env)
    for s in env:
        for a in sigma_e:
            edges[s, a] = rng.choice(ctrl)
    states = ctrl + env
    if automaton_states is None:
        if condition_kind == SAFETY:
            cond = StateCondition(SAFETY, unsafe={s for s in states if rng.random() < 0.25})
        elif condition_kind == REACHABILITY:
            cond = StateCondition(REACHABILITY, target={s for s in states if rng.random() < 0.25})
        else:
            cond = StateCondition(PARITY, colors={s: rng.randrange(4) for s in states})
    else:
        cond = random_automaton(rng, condition_kind, sorted(states), automaton_states)
    return _game(ctrl, env, "c0", sigma_c, sigma_e, edges, cond)


def random_automaton(rng: random.Random, kind: str, alphabet, n_states: int) -> ConditionAutomaton:
    if n_states < 1:
        raise InvalidInput("automaton needs at least one state")
    states = [f"q{i}" for i in range(n_states)]
    delta = {(q, x): rng.choice(states) for q in states for x in alphabet}
    marked = {q for q in states[1:] if rng.random() < 0.5}
    if kind == SAFETY:
        return ConditionAutomaton(SAFETY, alphabet, states, "q0", delta, unsafe=marked)
    if kind == REACHABILITY:
        return ConditionAutomaton(REACHABILITY, alphabet, states, "q0", delta, target=marked)
    return ConditionAutomaton(PARITY, alphabet, states, "q0", delta, colors={q: rng.randrange(4) for q in states})


def random_delay_spec(seed: int, n_states: int = 3, kind: str = SAFETY, lookahead: int = 1,
                      alphabet_sizes: tuple[int, int] = (2, 2)) -> DelayGameSpec:
    rng = random.Random(seed)
    ins = tuple(str(i) for i in range(alphabet_sizes[0]))
    outs = tuple("xyzw"[: alphabet_sizes[1]])
    pairs = [(a, b) for a in ins for b in outs]
    return DelayGameSpec(ins, outs, lookahead, random_automaton(rng, kind, pairs, n_states))


BUILTINS = {"fig1": fig1, "fig2": fig2, "fig4": fig4, "ex2": ex2}


def builtin_instance(name: str, **params):
    if name not in BUILTINS:
        raise InvalidInput(f"unknown instance {name!r}; choose from {sorted(BUILTINS)}")
    return BUILTINS[name](**params)


def corpus_params(seed: int) -> dict:
    """Generator parameters cycled by seed: 2..6 states (weighted toward the
    larger arenas, where delay matters more often), safety/reachability,
    state-based or automaton conditions with one or two states."""
    return {
        "n_states": (6, 5, 6, 4, 6, 3, 5, 2)[seed % 8],
        "condition_kind": (SAFETY, REACHABILITY)[(seed // 8) % 2],
        "automaton_states": (None, 2, None, 1)[(seed // 16) % 4],
    }


def random_corpus(size: int, sensitive: int, delays=(0, 2, 4), start: int = 0) -> list[tuple[int, ControlGame]]:
    """``size`` random games of which at least ``sensitive`` change verdict across ``delays``.

    Plain sampling almost never yields games where delay matters, so those
    are collected first by scanning seeds and the rest is filled in order.
    Returns ``(seed, game)`` pairs sorted by seed.
    """
    from delaygames.control import solve_under_delay

    chosen: dict[int, ControlGame] = {}
    plain: list[tuple[int, ControlGame]] = []
    seed = start
    n_sensitive = 0
    while n_sensitive < sensitive or len(chosen) + len(plain) < size:
        game = random_instance(seed, **corpus_params(seed))
        verdicts = {solve_under_delay(game, d, extract=False)[0].classification for d in delays}
        if len(verdicts) > 1 and n_sensitive < sensitive:
            chosen[seed] = game
            n_sensitive += 1
        elif len(plain) < size - sensitive:
            plain.append((seed, game))
        seed += 1
        if seed - start > 200 * size:
            raise RuntimeError("could not collect enough delay-sensitive games")
    chosen.update(plain)
    return sorted(chosen.items())
