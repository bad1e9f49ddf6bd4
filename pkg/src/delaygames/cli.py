"""Command-line front end.

Exit codes: 0 when a verdict was computed, 2 for invalid input, 3 when the
answer is inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from delaygames import fixtures, serialize
from delaygames.control import max_delay, solve_environment, solve_under_delay
from delaygames.delaygame import solve_delay_game
from delaygames.model import (
    CONTROLLER,
    ENVIRONMENT,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    complement_condition,
    validate_automaton,
    validate_control_game,
)
from delaygames.oracle import brute_force_delay_game, brute_force_under_delay
from delaygames.stochastic import FiniteMixedStrategy, check_almost_sure
from delaygames.transforms import (
    check_correspondence,
    control_to_delay_language,
    delay_language_to_control_game,
    roundtrip_check,
)

OK, INVALID, INCONCLUSIVE = 0, 2, 3


class Report:
    """Collects human-readable lines and a machine-readable payload."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def add(self, key: str, value, text: str | None = None) -> None:
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def emit(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _load(path: str, kind):
    obj = serialize.load(path)
    if not isinstance(obj, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise InvalidInput(f"{path}: expected a {names} document")
    if isinstance(obj, ControlGame):
        report = validate_control_game(obj)
        if not report.ok:
            raise InvalidInput("; ".join(report.violations))
    elif isinstance(obj, DelayGameSpec):
        problems = validate_automaton(obj.condition)
        if problems:
            raise InvalidInput("; ".join(problems))
    return obj


def _write(obj, path: str | None) -> None:
    text = serialize.dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args, out: Report) -> int:
    obj = serialize.load(args.game)
    problems: list[str] = []
    if isinstance(obj, ControlGame):
        problems = validate_control_game(obj).violations
    elif isinstance(obj, DelayGameSpec):
        problems = validate_automaton(obj.condition)
    out.add("kind", serialize.to_dict(obj)["kind"])
    out.add("violations", problems)
    if problems:
        for p in problems:
            out.lines.append(f"violation: {p}")
        return INVALID
    out.lines.append("ok")
    return OK


def cmd_solve(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    verdict, strategy = solve_under_delay(game, args.delay)
    out.add("delay", args.delay)
    out.add("controller_wins", verdict.controller_wins, f"controller wins under delay {args.delay}: {_yes(verdict.controller_wins)}")
    out.add("environment_wins", verdict.environment_wins, f"environment wins: {_yes(verdict.environment_wins)}")
    out.add("classification", verdict.classification, verdict.classification)
    if strategy is not None:
        out.add("alpha", list(strategy.alpha), f"alpha: {' '.join(strategy.alpha) or '(empty)'}")
        if args.strategy_out:
            _write(strategy, args.strategy_out)
    return OK


def cmd_solve_env(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    wins, strategy = solve_environment(game)
    out.add("environment_wins", wins, f"environment wins: {_yes(wins)}")
    if strategy is not None:
        choice = dict(sorted(strategy.choice.items()))
        out.add("strategy", choice)
        for s, a in choice.items():
            out.lines.append(f"  {s} -> {a}")
    return OK


def cmd_max_delay(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    report = max_delay(game, args.cap)
    out.add("verdicts", {str(v.delay): v.classification for v in report.verdicts})
    for v in report.verdicts:
        out.lines.append(f"delay {v.delay}: {v.classification}")
    out.add("outcome", report.outcome)
    out.add("value", report.value)
    if report.outcome == "delta_max":
        out.lines.append(f"maximal winning delay: {report.value}")
        return OK
    if report.outcome == "loses_at_zero":
        out.lines.append("controller loses already without delay")
        return OK
    out.lines.append(f"wins up to {report.value} (inconclusive beyond)")
    return INCONCLUSIVE


def cmd_solve_delay_game(args, out: Report) -> int:
    spec = _load(args.game, DelayGameSpec)
    if args.lookahead is not None:
        spec = spec.with_lookahead(args.lookahead)
    verdict = solve_delay_game(spec)
    out.add("lookahead", spec.lookahead)
    out.add("winner", verdict.winner, f"lookahead {spec.lookahead}: {verdict.winner} wins")
    return OK


def cmd_to_delay_game(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    cond = control_to_delay_language(game, complemented=args.complement)
    arena = game.arena
    spec = DelayGameSpec(arena.controller_actions, arena.environment_actions, args.lookahead, cond)
    _write(spec, args.out)
    return OK


def cmd_to_control_game(args, out: Report) -> int:
    spec = _load(args.game, DelayGameSpec)
    cond = complement_condition(spec.condition) if args.complement else spec.condition
    _write(delay_language_to_control_game(cond), args.out)
    return OK


def cmd_roundtrip(args, out: Report) -> int:
    spec = _load(args.game, DelayGameSpec)
    result = roundtrip_check(spec.condition)
    out.add("method", result.method)
    if result.equal is None:
        out.add("equal", None, "inconclusive: no disagreement found by sampling")
        return INCONCLUSIVE
    out.add("equal", result.equal, "languages equal" if result.equal else "languages differ")
    if result.witness is not None:
        w = {"prefix": [serialize._letter_out(x) for x in result.witness.prefix],
             "cycle": [serialize._letter_out(x) for x in result.witness.cycle]}
        out.add("witness", w, f"witness: {' '.join(w['prefix'])} ({' '.join(w['cycle'])})^omega")
    return OK


def cmd_check_correspondence(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    r = check_correspondence(game, args.delay)
    out.add("delay", r.delay)
    out.add("controller_wins", r.controller_wins, f"controller wins under delay {r.delay}: {_yes(r.controller_wins)}")
    out.add("environment_wins", r.environment_wins, f"environment wins: {_yes(r.environment_wins)}")
    out.add("delay_game_winner", r.delay_game_winner, f"lookahead {r.delay // 2} counterpart: {r.delay_game_winner} wins")
    out.add("equivalence_holds", r.equivalence_holds, f"controller/Player I agreement: {_yes(r.equivalence_holds)}")
    out.add("environment_implication_holds", r.environment_implication_holds,
            f"environment win implies Player O win: {_yes(r.environment_implication_holds)}")
    if not r.holds:
        out.lines.append("correspondence falsified")
    return OK


def cmd_almost_sure(args, out: Report) -> int:
    game = _load(args.game, ControlGame)
    strat = _load(args.strategy, FiniteMixedStrategy)
    verdict = check_almost_sure(game, args.delay, strat, args.player)
    out.add("player", args.player)
    out.add("holds", verdict.holds, f"{args.player} wins almost surely: {_yes(verdict.holds)}")
    out.add("conclusive", verdict.conclusive)
    if not verdict.conclusive:
        out.lines.append("inconclusive: the adversary was modeled with full information")
        return INCONCLUSIVE
    return OK


def cmd_oracle(args, out: Report) -> int:
    obj = serialize.load(args.game)
    horizon = None if args.horizon == "auto" else int(args.horizon)
    if isinstance(obj, ControlGame):
        _load(args.game, ControlGame)
        won = brute_force_under_delay(obj, args.delay, horizon)
        out.add("controller_wins", won, f"controller wins under delay {args.delay}: {_yes(won)}")
    elif isinstance(obj, DelayGameSpec):
        spec = _load(args.game, DelayGameSpec)
        if args.lookahead is not None:
            spec = spec.with_lookahead(args.lookahead)
        winner = brute_force_delay_game(spec, horizon)
        out.add("winner", winner, f"lookahead {spec.lookahead}: {winner} wins")
    else:
        raise InvalidInput("oracle expects a control game or a delay game")
    out.add("horizon", args.horizon)
    return OK


def _params(pairs: list[str]) -> dict[str, int]:
    params = {}
    for p in pairs:
        key, sep, value = p.partition("=")
        if not sep:
            raise InvalidInput(f"parameter {p!r} must look like name=value")
        try:
            params[key] = int(value)
        except ValueError as exc:
            raise InvalidInput(f"parameter {key} must be an integer") from exc
    return params


def cmd_example(args, out: Report) -> int:
    params = _params(args.param)
    name = args.name
    try:
        if name == "ex2":
            obj = fixtures.ex2(params.get("k", 1))
        elif name in ("fig1", "fig2", "fig4"):
            obj = fixtures.builtin_instance(name)
        elif name == "exponential":
            obj = fixtures.exponential_family(params.get("n", 1))
        elif name == "random":
            obj = fixtures.random_instance(params.get("seed", 0), params.get("states", 4),
                                           condition_kind=args.condition)
        elif name == "random-delay":
            obj = fixtures.random_delay_spec(params.get("seed", 0), params.get("states", 3),
                                             args.condition, params.get("k", 1))
        else:
            raise InvalidInput(f"unknown example {name!r}")
    except TypeError as exc:
        raise InvalidInput(str(exc)) from exc
    _write(obj, args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="delaygames", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = command("validate", cmd_validate, "check a document against its invariants")
    p.add_argument("--game", required=True)

    p = command("solve", cmd_solve, "solve a control game under a delay")
    p.add_argument("--game", required=True)
    p.add_argument("--delay", type=int, default=0)
    p.add_argument("--strategy-out")

    p = command("solve-env", cmd_solve_env, "decide whether environment wins")
    p.add_argument("--game", required=True)

    p = command("max-delay", cmd_max_delay, "scan delays 0, 2, ... up to a cap")
    p.add_argument("--game", required=True)
    p.add_argument("--cap", type=int, required=True)

    p = command("solve-delay-game", cmd_solve_delay_game, "solve a delay game")
    p.add_argument("--game", required=True)
    p.add_argument("--lookahead", type=int)

    p = command("to-delay-game", cmd_to_delay_game, "translate a control game into a delay game")
    p.add_argument("--game", required=True)
    p.add_argument("--lookahead", type=int, default=0)
    p.add_argument("--complement", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out")

    p = command("to-control-game", cmd_to_control_game, "translate a delay game condition into a control game")
    p.add_argument("--game", required=True)
    p.add_argument("--complement", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out")

    p = command("roundtrip", cmd_roundtrip, "translate a delay-game condition there and back, compare")
    p.add_argument("--game", required=True)

    p = command("check-correspondence", cmd_check_correspondence, "compare a control game with its delay game")
    p.add_argument("--game", required=True)
    p.add_argument("--delay", type=int, default=0)

    p = command("almost-sure", cmd_almost_sure, "check almost-sure winning of a mixed strategy")
    p.add_argument("--game", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--delay", type=int, default=0)
    p.add_argument("--player", choices=[CONTROLLER, ENVIRONMENT], default=CONTROLLER)

    p = command("oracle", cmd_oracle, "bounded-horizon minimax cross-check")
    p.add_argument("--game", required=True)
    p.add_argument("--delay", type=int, default=0)
    p.add_argument("--lookahead", type=int)
    p.add_argument("--horizon", default="auto")

    p = command("example", cmd_example, "emit a built-in or generated instance")
    p.add_argument("--name", required=True,
                   choices=["fig1", "fig2", "fig4", "ex2", "exponential", "random", "random-delay"])
    p.add_argument("--param", action="append", default=[], help="name=value, e.g. k=2, n=3, seed=7")
    p.add_argument("--condition", default="safety", choices=["safety", "reachability", "parity"])
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Report(args.json)
    try:
        code = args.func(args, out)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    if out.lines or out.data:
        out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
