"""Translations between games under delayed control and delay games.

``control_to_delay_language`` turns a control game into the language of action
pairs whose induced play is winning for controller; ``delay_language_to_control_game``
goes back by letting controller pick inputs and environment pick outputs.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable

from delaygames.control import check_delay, solve_under_delay
from delaygames.delaygame import PLAYER_I, PLAYER_O, solve_delay_game
from delaygames.model import (
    CONTROLLER,
    PARITY,
    REACHABILITY,
    SAFETY,
    Arena,
    ConditionAutomaton,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    LassoWord,
    complement_condition,
    condition_automaton,
    eval_condition_on_lasso,
    join_id,
    make_absorbing,
)


def control_to_delay_language(game: ControlGame, complemented: bool = True) -> ConditionAutomaton:
    """Automaton over ``(controller action, environment action)`` pairs.

    A pair word is accepted iff the play it induces is winning for controller;
    with ``complemented`` the complement is returned, which is the condition
    Player I plays for in the matching delay game.
    """
    arena = game.arena
    aut = make_absorbing(condition_automaton(game))
    use_tc = aut.kind == PARITY and aut.transition_colors is not None

    def color(q, s):
        return aut.transition_colors[q, s] if use_tc else aut.colors[aut.delta[q, s]]

    alphabet = tuple((a, b) for a in arena.controller_actions for b in arena.environment_actions)
    start = (arena.initial, aut.delta[aut.initial, arena.initial])
    ids = {start: join_id(*start)}
    delta, tcolors = {}, {}
    todo = deque([start])
    while todo:
        s, q = node = todo.popleft()
        for a, b in alphabet:
            s1 = arena.transitions[s, a]
            q1 = aut.delta[q, s1]
            s2 = arena.transitions[s1, b]
            q2 = aut.delta[q1, s2]
            nxt = (s2, q2)
            if nxt not in ids:
                ids[nxt] = join_id(*nxt)
                todo.append(nxt)
            delta[ids[node], (a, b)] = ids[nxt]
            if aut.kind == PARITY:
                tcolors[ids[node], (a, b)] = max(color(q, s1), color(q1, s2))
    states = tuple(ids.values())
    qs = {ids[n]: n[1] for n in ids}
    if aut.kind == SAFETY:
        out = ConditionAutomaton(SAFETY, alphabet, states, ids[start], delta,
                                 unsafe={p for p in states if qs[p] in aut.unsafe})
    elif aut.kind == REACHABILITY:
        out = ConditionAutomaton(REACHABILITY, alphabet, states, ids[start], delta,
                                 target={p for p in states if qs[p] in aut.target})
    else:
        out = ConditionAutomaton(PARITY, alphabet, states, ids[start], delta,
                                 colors={p: 0 for p in states}, transition_colors=tcolors)
    return complement_condition(out) if complemented else out


@dataclass(frozen=True)
class LetterTags:
    """Invertible renaming of input/output letters into arena identifiers."""

    inputs: dict
    outputs: dict
    tagged: bool

    def untag(self) -> dict:
        back = {v: ("I", k) for k, v in self.inputs.items()}
        back.update({v: ("O", k) for k, v in self.outputs.items()})
        return back


INITIAL_STATE = "s0"


def letter_tags(inputs, outputs, tag: bool | None = None) -> LetterTags:
    inputs, outputs = sorted(set(inputs)), sorted(set(outputs))
    clash = bool(set(inputs) & set(outputs)) or INITIAL_STATE in set(inputs) | set(outputs)
    if tag is None:
        tag = clash
    if clash and not tag:
        raise InvalidInput("input and output alphabets must be disjoint (or tagged apart)")
    if tag:
        return LetterTags({a: f"I.{a}" for a in inputs}, {b: f"O.{b}" for b in outputs}, True)
    return LetterTags({a: str(a) for a in inputs}, {b: str(b) for b in outputs}, False)


def pair_alphabets(cond: ConditionAutomaton):
    return tuple(sorted({a for a, _ in cond.alphabet})), tuple(sorted({b for _, b in cond.alphabet}))


def delay_language_to_control_game(cond: ConditionAutomaton, tag: bool | None = None) -> ControlGame:
    """Control game in which controller supplies inputs and environment outputs.

    The condition automaton skips the initial state, remembers each input
    state and advances ``cond`` when the following output state arrives.
    """
    sigma_i, sigma_o = pair_alphabets(cond)
    tags = letter_tags(sigma_i, sigma_o, tag)
    ins = [tags.inputs[a] for a in sigma_i]
    outs = [tags.outputs[b] for b in sigma_o]
    owner = {INITIAL_STATE: CONTROLLER, **{b: CONTROLLER for b in outs}, **{a: "environment" for a in ins}}
    transitions = {}
    for s in [INITIAL_STATE, *outs]:
        for a in ins:
            transitions[s, a] = a
    for a in ins:
        for b in outs:
            transitions[a, b] = b
    arena = Arena(tuple(owner), owner, INITIAL_STATE, tuple(ins), tuple(outs), transitions)

    lang = make_absorbing(cond)
    use_tc = lang.kind == PARITY and lang.transition_colors is not None
    letters = arena.states
    waiting = {q: join_id(q) for q in lang.states}
    holding = {(q, a): join_id(q, tags.inputs[a]) for q in lang.states for a in sigma_i}
    back_in = {tags.inputs[a]: a for a in sigma_i}
    back_out = {tags.outputs[b]: b for b in sigma_o}
    junk = "junk"
    delta, tcolors = {}, {}
    for s in letters:
        delta["start", s] = waiting[lang.initial] if s == INITIAL_STATE else junk
        delta[junk, s] = junk
    for q in lang.states:
        for s in letters:
            delta[waiting[q], s] = holding[q, back_in[s]] if s in back_in else junk
            for a in sigma_i:
                if s in back_out:
                    pair = (a, back_out[s])
                    delta[holding[q, a], s] = waiting[lang.delta[q, pair]]
                    if lang.kind == PARITY:
                        tcolors[holding[q, a], s] = (
                            lang.transition_colors[q, pair] if use_tc else lang.colors[lang.delta[q, pair]]
                        )
                else:
                    delta[holding[q, a], s] = junk
    states = ("start", junk, *waiting.values(), *holding.values())

    base = {"start": None, junk: None, **{v: q for q, v in waiting.items()},
            **{v: q for (q, _), v in holding.items()}}
    if lang.kind == SAFETY:
        aut = ConditionAutomaton(SAFETY, letters, states, "start", delta,
                                 unsafe={p for p, q in base.items() if q in lang.unsafe})
    elif lang.kind == REACHABILITY:
        aut = ConditionAutomaton(REACHABILITY, letters, states, "start", delta,
                                 target={p for p, q in base.items() if q in lang.target})
    else:
        full_tc = {(p, s): tcolors.get((p, s), 0) for p in states for s in letters}
        aut = ConditionAutomaton(PARITY, letters, states, "start", delta,
                                 colors={p: 0 for p in states}, transition_colors=full_tc)
    return ControlGame(arena, aut)


def rename_letters(cond: ConditionAutomaton, mapping: dict) -> ConditionAutomaton:
    tc = None
    if cond.transition_colors is not None:
        tc = {(q, mapping[x]): c for (q, x), c in cond.transition_colors.items()}
    return ConditionAutomaton(
        cond.kind,
        tuple(mapping[x] for x in cond.alphabet),
        cond.states,
        cond.initial,
        {(q, mapping[x]): t for (q, x), t in cond.delta.items()},
        cond.unsafe,
        cond.target,
        cond.colors,
        tc,
    )


@dataclass(frozen=True)
class LanguageComparison:
    equal: bool | None  # None: inconclusive
    witness: LassoWord | None = None
    method: str = "product"


def _intersection_witness(a1: ConditionAutomaton, a2: ConditionAutomaton) -> LassoWord | None:
    """A lasso in L(a1) & L(a2) for safety/reachability automata, or None."""
    a1, a2 = make_absorbing(a1), make_absorbing(a2)
    auts = (a1, a2)
    letters = a1.alphabet

    def bad(pair):
        return any(a.kind == SAFETY and q in a.unsafe for a, q in zip(auts, pair))

    def done(pair):
        return all(a.kind == SAFETY or q in a.target for a, q in zip(auts, pair))

    def step(pair, x):
        return (a1.delta[pair[0], x], a2.delta[pair[1], x])

    start = (a1.initial, a2.initial)
    if bad(start):
        return None
    parent = {start: None}
    order = [start]
    todo = deque([start])
    while todo:
        p = todo.popleft()
        for x in letters:
            n = step(p, x)
            if n not in parent and not bad(n):
                parent[n] = (p, x)
                order.append(n)
                todo.append(n)
    # greatest set of non-bad states with a successor inside
    alive = set(order)
    changed = True
    while changed:
        changed = False
        for p in list(alive):
            if not any(step(p, x) in alive for x in letters):
                alive.discard(p)
                changed = True
    goal = next((p for p in order if p in alive and done(p)), None)
    if goal is None:
        return None
    prefix = []
    p = goal
    while parent[p] is not None:
        p, x = parent[p]
        prefix.append(x)
    prefix.reverse()
    path, seen, p = [], {goal: 0}, goal
    while True:
        x = next(x for x in letters if step(p, x) in alive)
        path.append(x)
        p = step(p, x)
        if p in seen:
            i = seen[p]
            return LassoWord(tuple(prefix) + tuple(path[:i]), tuple(path[i:]))
        seen[p] = len(path)


def _sample_lasso(rng: random.Random, letters, max_len: int = 6) -> LassoWord:
    u = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
    v = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
    return LassoWord(u, v)


def compare_languages(a: ConditionAutomaton, b: ConditionAutomaton, samples: int = 2000,
                      seed: int = 0) -> LanguageComparison:
    if set(a.alphabet) != set(b.alphabet):
        raise InvalidInput("automata over different alphabets")
    if a.kind != PARITY and b.kind != PARITY:
        for x, y in ((a, complement_condition(b)), (complement_condition(a), b)):
            w = _intersection_witness(x, y)
            if w is not None:
                return LanguageComparison(False, w)
        return LanguageComparison(True)
    rng = random.Random(seed)
    letters = list(a.alphabet)
    for _ in range(samples):
        w = _sample_lasso(rng, letters)
        if eval_condition_on_lasso(a, w) != eval_condition_on_lasso(b, w):
            return LanguageComparison(False, w, "sampling")
    return LanguageComparison(None, None, "sampling")


def _effective_color(cond: ConditionAutomaton, q, x) -> int:
    if cond.transition_colors is not None:
        return cond.transition_colors[q, x]
    return cond.colors[cond.delta[q, x]]


def _structurally_equal(a: ConditionAutomaton, b: ConditionAutomaton) -> bool:
    """Lockstep check: b's states map functionally to a's and colors agree on every step."""
    image = {b.initial: a.initial}
    todo = deque([(a.initial, b.initial)])
    seen = {(a.initial, b.initial)}
    while todo:
        p, q = todo.popleft()
        for x in a.alphabet:
            if _effective_color(a, p, x) != _effective_color(b, q, x):
                return False
            n = (a.delta[p, x], b.delta[q, x])
            if image.setdefault(n[1], n[0]) != n[0]:
                return False
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return True


def roundtrip_check(cond: ConditionAutomaton,
                    perturb: Callable[[ConditionAutomaton], ConditionAutomaton] | None = None
                    ) -> LanguageComparison:
    """Rebuild the pair language from its control game and compare with the original.

    ``perturb`` is applied to the rebuilt automaton before comparing; it
    exists so tests can check that a broken round trip is caught.
    """
    game = delay_language_to_control_game(cond)
    sigma_i, sigma_o = pair_alphabets(cond)
    tags = letter_tags(sigma_i, sigma_o)
    back_in = {v: k for k, v in tags.inputs.items()}
    back_out = {v: k for k, v in tags.outputs.items()}
    rebuilt = control_to_delay_language(game, complemented=False)
    rebuilt = rename_letters(rebuilt, {(a, b): (back_in[a], back_out[b]) for a, b in rebuilt.alphabet})
    if perturb is not None:
        rebuilt = perturb(rebuilt)
    if cond.kind == PARITY and _structurally_equal(cond, rebuilt):
        return LanguageComparison(True, None, "structure")
    return compare_languages(cond, rebuilt)


@dataclass(frozen=True)
class CorrespondenceReport:
    delay: int
    controller_wins: bool
    environment_wins: bool
    delay_game_winner: str
    equivalence_holds: bool
    environment_implication_holds: bool

    @property
    def holds(self) -> bool:
        return self.equivalence_holds and self.environment_implication_holds


def delay_game_counterpart(game: ControlGame, delay: int) -> DelayGameSpec:
    k = check_delay(delay)
    arena = game.arena
    return DelayGameSpec(arena.controller_actions, arena.environment_actions, k,
                         control_to_delay_language(game, complemented=True))


def check_correspondence(game: ControlGame, delay: int) -> CorrespondenceReport:
    """Controller wins under ``delay`` iff Player I wins the counterpart with lookahead ``delay/2``;
    and if environment wins, Player O wins."""
    verdict, _ = solve_under_delay(game, delay, extract=False)
    dv = solve_delay_game(delay_game_counterpart(game, delay))
    return CorrespondenceReport(
        delay,
        verdict.controller_wins,
        verdict.environment_wins,
        dv.winner,
        verdict.controller_wins == (dv.winner == PLAYER_I),
        (not verdict.environment_wins) or dv.winner == PLAYER_O,
    )
