"""JSON documents for games, delay-game specs and strategies.

Every document carries a ``kind`` tag.  Lists are emitted sorted and unknown
fields are rejected, so ``load(save(x)) == x`` and equal objects serialize to
identical bytes.  Pair letters of delay-game conditions are written ``"a|b"``
and probabilities as exact rationals ``"p/q"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import jsonschema

from delaygames.control import DelayedStrategy
from delaygames.model import (
    CONTROLLER,
    ENVIRONMENT,
    KINDS,
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
from delaygames.stochastic import FiniteMixedStrategy

_IDS = {"type": "array", "items": {"type": "string"}}
_RATIONAL = {"type": "string", "pattern": r"^[0-9]+(/[0-9]*[1-9][0-9]*)?$"}


def _record(**props):
    return {"type": "object", "additionalProperties": False, "required": list(props), "properties": props}


_AUTOMATON = {
    "type": "object",
    "additionalProperties": False,
    "required": ["type", "states", "initial", "delta"],
    "properties": {
        "type": {"enum": list(KINDS)},
        "scope": {"const": "automaton"},
        "states": _IDS,
        "initial": {"type": "string"},
        "delta": {"type": "array", "items": _record(**{"from": {"type": "string"}, "letter": {"type": "string"},
                                                          "to": {"type": "string"}})},
        "unsafe": _IDS,
        "target": _IDS,
        "colors": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "transition_colors": {"type": "array", "items": _record(**{
            "from": {"type": "string"}, "letter": {"type": "string"}, "color": {"type": "integer"}})},
    },
}

_STATE_CONDITION = {
    "type": "object",
    "additionalProperties": False,
    "required": ["type", "scope"],
    "properties": {
        "type": {"enum": list(KINDS)},
        "scope": {"const": "states"},
        "unsafe": _IDS,
        "target": _IDS,
        "colors": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    },
}

_MEMORY = _record(
    states=_IDS,
    initial={"type": "string"},
    update={"type": "array", "items": _record(memory={"type": "string"}, state={"type": "string"},
                                               to={"type": "string"})},
)

SCHEMAS = {
    "control_game": _record(
        kind={"const": "control_game"},
        states={"type": "array", "items": _record(id={"type": "string"},
                                                  owner={"enum": [CONTROLLER, ENVIRONMENT]})},
        initial={"type": "string"},
        controller_actions=_IDS,
        environment_actions=_IDS,
        transitions={"type": "array", "items": _record(**{"from": {"type": "string"},
                                                           "action": {"type": "string"},
                                                           "to": {"type": "string"}})},
        condition={"oneOf": [_STATE_CONDITION, {**_AUTOMATON, "required": [*_AUTOMATON["required"], "scope"]}]},
    ),
    "delay_game": _record(
        kind={"const": "delay_game"},
        input_alphabet=_IDS,
        output_alphabet=_IDS,
        lookahead={"type": "integer", "minimum": 0},
        condition=_AUTOMATON,
    ),
    "delayed_strategy": _record(
        kind={"const": "delayed_strategy"},
        delay={"type": "integer", "minimum": 0},
        alpha=_IDS,
        memory=_MEMORY,
        act={"type": "array", "items": _record(memory={"type": "string"}, state={"type": "string"},
                                                action={"type": "string"})},
    ),
    "mixed_strategy": _record(
        kind={"const": "mixed_strategy"},
        delay={"type": "integer", "minimum": 0},
        alpha={"type": "array", "items": _record(word=_IDS, p=_RATIONAL)},
        memory=_MEMORY,
        choice={"type": "array", "items": _record(
            memory={"type": "string"}, state={"type": "string"},
            distribution={"type": "object", "additionalProperties": _RATIONAL})},
    ),
}


def _letter_out(x) -> str:
    if isinstance(x, tuple):
        return f"{x[0]}|{x[1]}"
    return x


def _letter_in(x: str, pairs: bool):
    if not pairs:
        return x
    if x.count("|") != 1:
        raise InvalidInput(f"pair letter {x!r} must have the form 'a|b'")
    a, b = x.split("|")
    return (a, b)


def _check_pair_letters(letters) -> None:
    for x in letters:
        if "|" in x:
            raise InvalidInput(f"letter {x!r} contains the pair separator '|'")


def automaton_to_dict(aut: ConditionAutomaton, scope: bool = False) -> dict:
    out: dict[str, Any] = {
        "type": aut.kind,
        "states": sorted(aut.states),
        "initial": aut.initial,
        "delta": [
            {"from": q, "letter": _letter_out(x), "to": t}
            for (q, x), t in sorted(aut.delta.items(), key=lambda kv: (kv[0][0], _letter_out(kv[0][1])))
        ],
    }
    if scope:
        out["scope"] = "automaton"
    if aut.kind == SAFETY:
        out["unsafe"] = sorted(aut.unsafe)
    elif aut.kind == REACHABILITY:
        out["target"] = sorted(aut.target)
    else:
        out["colors"] = dict(sorted(aut.colors.items()))
        if aut.transition_colors is not None:
            out["transition_colors"] = [
                {"from": q, "letter": _letter_out(x), "color": c}
                for (q, x), c in sorted(aut.transition_colors.items(), key=lambda kv: (kv[0][0], _letter_out(kv[0][1])))
            ]
    return out


def automaton_from_dict(doc: dict, alphabet, pairs: bool) -> ConditionAutomaton:
    kind = doc["type"]
    delta = {(d["from"], _letter_in(d["letter"], pairs)): d["to"] for d in doc["delta"]}
    tc = None
    if "transition_colors" in doc:
        tc = {(d["from"], _letter_in(d["letter"], pairs)): d["color"] for d in doc["transition_colors"]}
    if kind == PARITY and "colors" not in doc:
        raise InvalidInput("parity automaton needs colors")
    return ConditionAutomaton(
        kind, alphabet, doc["states"], doc["initial"], delta,
        unsafe=doc.get("unsafe", ()), target=doc.get("target", ()),
        colors=doc.get("colors") if kind == PARITY else None, transition_colors=tc,
    )


def game_to_dict(game: ControlGame) -> dict:
    arena = game.arena
    cond = game.condition
    if isinstance(cond, StateCondition):
        c: dict[str, Any] = {"type": cond.kind, "scope": "states"}
        if cond.kind == SAFETY:
            c["unsafe"] = sorted(cond.unsafe)
        elif cond.kind == REACHABILITY:
            c["target"] = sorted(cond.target)
        else:
            c["colors"] = dict(sorted(cond.colors.items()))
    else:
        c = automaton_to_dict(cond, scope=True)
    return {
        "kind": "control_game",
        "states": [{"id": s, "owner": arena.owner[s]} for s in arena.states],
        "initial": arena.initial,
        "controller_actions": list(arena.controller_actions),
        "environment_actions": list(arena.environment_actions),
        "transitions": [{"from": s, "action": a, "to": t} for (s, a), t in sorted(arena.transitions.items())],
        "condition": c,
    }


def game_from_dict(doc: dict) -> ControlGame:
    owner = {d["id"]: d["owner"] for d in doc["states"]}
    if len(owner) != len(doc["states"]):
        raise InvalidInput("duplicate state identifiers")
    arena = Arena(
        tuple(owner), owner, doc["initial"], doc["controller_actions"], doc["environment_actions"],
        {(t["from"], t["action"]): t["to"] for t in doc["transitions"]},
    )
    c = doc["condition"]
    if c["scope"] == "states":
        if c["type"] == PARITY and "colors" not in c:
            raise InvalidInput("parity condition needs colors")
        cond = StateCondition(c["type"], c.get("unsafe", ()), c.get("target", ()),
                              c.get("colors") if c["type"] == PARITY else None)
    else:
        cond = automaton_from_dict(c, arena.states, pairs=False)
    return ControlGame(arena, cond)


def spec_to_dict(spec: DelayGameSpec) -> dict:
    _check_pair_letters(spec.input_alphabet + spec.output_alphabet)
    return {
        "kind": "delay_game",
        "input_alphabet": list(spec.input_alphabet),
        "output_alphabet": list(spec.output_alphabet),
        "lookahead": spec.lookahead,
        "condition": automaton_to_dict(spec.condition),
    }


def spec_from_dict(doc: dict) -> DelayGameSpec:
    _check_pair_letters(doc["input_alphabet"] + doc["output_alphabet"])
    pairs = [(a, b) for a in doc["input_alphabet"] for b in doc["output_alphabet"]]
    cond = automaton_from_dict(doc["condition"], pairs, pairs=True)
    return DelayGameSpec(doc["input_alphabet"], doc["output_alphabet"], doc["lookahead"], cond)


def _memory_to_dict(states, initial, update) -> dict:
    return {
        "states": sorted(states),
        "initial": initial,
        "update": [{"memory": m, "state": s, "to": t} for (m, s), t in sorted(update.items())],
    }


def _memory_from_dict(doc: dict):
    return doc["states"], doc["initial"], {(u["memory"], u["state"]): u["to"] for u in doc["update"]}


def delayed_strategy_to_dict(s: DelayedStrategy) -> dict:
    return {
        "kind": "delayed_strategy",
        "delay": s.delay,
        "alpha": list(s.alpha),
        "memory": _memory_to_dict(s.memory_states, s.initial_memory, s.update),
        "act": [{"memory": m, "state": st, "action": a} for (m, st), a in sorted(s.act.items())],
    }


def delayed_strategy_from_dict(doc: dict) -> DelayedStrategy:
    states, initial, update = _memory_from_dict(doc["memory"])
    act = {(a["memory"], a["state"]): a["action"] for a in doc["act"]}
    return DelayedStrategy(doc["delay"], tuple(doc["alpha"]), tuple(states), initial, update, act)


def _rational_out(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def _rational_in(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad probability {text!r}") from exc


def mixed_strategy_to_dict(s: FiniteMixedStrategy) -> dict:
    return {
        "kind": "mixed_strategy",
        "delay": s.delay,
        "alpha": [{"word": list(w), "p": _rational_out(p)} for w, p in sorted(s.alpha.items())],
        "memory": _memory_to_dict(s.memory_states, s.initial_memory, s.update),
        "choice": [
            {"memory": m, "state": st, "distribution": {a: _rational_out(p) for a, p in sorted(d.items())}}
            for (m, st), d in sorted(s.choice.items())
        ],
    }


def mixed_strategy_from_dict(doc: dict) -> FiniteMixedStrategy:
    states, initial, update = _memory_from_dict(doc["memory"])
    choice = {
        (c["memory"], c["state"]): {a: _rational_in(p) for a, p in c["distribution"].items()}
        for c in doc["choice"]
    }
    alpha: dict[tuple, Fraction] = {}
    for entry in doc["alpha"]:
        w = tuple(entry["word"])
        if w in alpha:
            raise InvalidInput(f"alpha word {list(w)} listed twice")
        alpha[w] = _rational_in(entry["p"])
    return FiniteMixedStrategy(doc["delay"], tuple(states), initial, update, choice, alpha)


_LOADERS = {
    "control_game": game_from_dict,
    "delay_game": spec_from_dict,
    "delayed_strategy": delayed_strategy_from_dict,
    "mixed_strategy": mixed_strategy_from_dict,
}


def from_dict(doc: Any):
    if not isinstance(doc, dict) or doc.get("kind") not in SCHEMAS:
        raise InvalidInput(f"document kind must be one of {sorted(SCHEMAS)}")
    try:
        jsonschema.validate(doc, SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise InvalidInput(f"schema violation at {where}: {exc.message}") from exc
    return _LOADERS[doc["kind"]](doc)


def to_dict(obj) -> dict:
    if isinstance(obj, ControlGame):
        return game_to_dict(obj)
    if isinstance(obj, DelayGameSpec):
        return spec_to_dict(obj)
    if isinstance(obj, DelayedStrategy):
        return delayed_strategy_to_dict(obj)
    if isinstance(obj, FiniteMixedStrategy):
        return mixed_strategy_to_dict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from exc
    return from_dict(doc)


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
