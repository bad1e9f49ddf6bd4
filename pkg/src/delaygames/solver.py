"""Exact solving of finite turn-based games with safety, reachability and
parity objectives.

Nodes are integers ``0..n-1``; each node keeps an arbitrary hashable label
for reporting.  Player 0 is always the protagonist whose objective is stored
on the game; player 1 plays the complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable

import networkx as nx

from delaygames.model import PARITY, REACHABILITY, SAFETY, InvalidInput


@dataclass(frozen=True)
class Objective:
    kind: str
    unsafe: frozenset = frozenset()
    target: frozenset = frozenset()
    colors: tuple[int, ...] | None = None


@dataclass(frozen=True, eq=False)
class TurnGame:
    labels: tuple
    owner: tuple[int, ...]
    edges: tuple[tuple[tuple[str, int], ...], ...]
    initial: int
    objective: Objective

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def predecessors(self) -> list[list[tuple[int, str]]]:
        preds: list[list[tuple[int, str]]] = [[] for _ in self.labels]
        for u, out in enumerate(self.edges):
            for a, v in out:
                preds[v].append((u, a))
        return preds

    def successor(self, node: int, action: str) -> int:
        for a, v in self.edges[node]:
            if a == action:
                return v
        raise InvalidInput(f"no edge {action!r} at node {self.labels[node]!r}")


class TurnGameBuilder:
    """Incremental construction of a TurnGame from hashable labels."""

    def __init__(self):
        self.index: dict[Hashable, int] = {}
        self.labels: list = []
        self.owner: list[int] = []
        self.edges: list[list[tuple[str, int]]] = []

    def node(self, label, owner: int) -> int:
        i = self.index.get(label)
        if i is None:
            i = len(self.labels)
            self.index[label] = i
            self.labels.append(label)
            self.owner.append(owner)
            self.edges.append([])
        return i

    def __contains__(self, label) -> bool:
        return label in self.index

    def edge(self, u: int, action: str, v: int) -> None:
        self.edges[u].append((action, v))

    def build(self, initial: int, objective: Objective) -> TurnGame:
        for i, out in enumerate(self.edges):
            if not out:
                raise InvalidInput(f"dead end at node {self.labels[i]!r}")
        return TurnGame(
            tuple(self.labels),
            tuple(self.owner),
            tuple(tuple(sorted(out)) for out in self.edges),
            initial,
            objective,
        )


@dataclass(frozen=True)
class PositionalStrategy:
    player: int
    choice: dict[int, str]

    def __getitem__(self, node: int) -> str:
        return self.choice[node]


@dataclass
class Solution:
    game: TurnGame
    regions: tuple[frozenset, frozenset]
    strategies: tuple[PositionalStrategy, PositionalStrategy]

    @property
    def winner(self) -> int:
        return 0 if self.game.initial in self.regions[0] else 1

    def strategy(self, player: int) -> PositionalStrategy:
        return self.strategies[player]


def _attract(g: TurnGame, player: int, target: Iterable[int], within=None):
    """Layered attractor; ``within`` restricts to a subgame (a set of nodes)."""
    inside = (lambda v: True) if within is None else within.__contains__
    region = {v for v in target if inside(v)}
    preds = g.predecessors
    pending = {}
    strategy: dict[int, str] = {}
    frontier = sorted(region)
    while frontier:
        offered: dict[int, list[str]] = {}
        forced: set[int] = set()
        for v in frontier:
            for u, a in preds[v]:
                if u in region or not inside(u):
                    continue
                if g.owner[u] == player:
                    offered.setdefault(u, []).append(a)
                else:
                    if u not in pending:
                        pending[u] = sum(1 for _, w in g.edges[u] if inside(w))
                    pending[u] -= 1
                    if pending[u] == 0:
                        forced.add(u)
        for u, labels in offered.items():
            strategy[u] = min(labels)
        frontier = sorted(set(offered) | forced)
        region.update(frontier)
    return region, strategy


def attractor(g: TurnGame, player: int, target: Iterable[int]):
    region, strategy = _attract(g, player, target)
    return frozenset(region), PositionalStrategy(player, strategy)


def _stay(g: TurnGame, node: int, allowed) -> str:
    for a, v in g.edges[node]:
        if v in allowed:
            return a
    raise InvalidInput(f"node {g.labels[node]!r} cannot stay in its region")


def _complete(g: TurnGame, player: int, choice: dict[int, str]) -> PositionalStrategy:
    full = {}
    for v in range(len(g)):
        if g.owner[v] == player:
            full[v] = choice.get(v, g.edges[v][0][0])
    return PositionalStrategy(player, full)


def _zielonka(g: TurnGame, nodes: set[int]):
    """Returns (W0, W1, choice0, choice1) restricted to ``nodes``."""
    if not nodes:
        return set(), set(), {}, {}
    colors = g.objective.colors
    d = max(colors[v] for v in nodes)
    p = d % 2
    top = [v for v in nodes if colors[v] == d]
    a_set, a_choice = _attract(g, p, top, nodes)
    sub = _zielonka(g, nodes - a_set)
    win = [sub[0], sub[1]]
    choice = [sub[2], sub[3]]
    if not win[1 - p]:
        own = dict(choice[p])
        own.update(a_choice)
        for v in top:
            if g.owner[v] == p:
                own[v] = _stay(g, v, nodes)
        res_win = [None, None]
        res_choice = [None, None]
        res_win[p], res_win[1 - p] = set(nodes), set()
        res_choice[p], res_choice[1 - p] = own, {}
        return res_win[0], res_win[1], res_choice[0], res_choice[1]
    b_set, b_choice = _attract(g, 1 - p, win[1 - p], nodes)
    rest = _zielonka(g, nodes - b_set)
    rwin = [rest[0], rest[1]]
    rchoice = [rest[2], rest[3]]
    opp = {v: a for v, a in choice[1 - p].items() if v in win[1 - p]}
    opp.update(b_choice)
    opp.update(rchoice[1 - p])
    out_win = [None, None]
    out_choice = [None, None]
    out_win[p] = rwin[p]
    out_win[1 - p] = rwin[1 - p] | b_set
    out_choice[p] = rchoice[p]
    out_choice[1 - p] = opp
    return out_win[0], out_win[1], out_choice[0], out_choice[1]


def solve_delay_free(g: TurnGame) -> Solution:
    obj = g.objective
    everything = set(range(len(g)))
    if obj.kind == SAFETY:
        lose, choice1 = _attract(g, 1, obj.unsafe)
        win0 = everything - lose
        choice0 = {v: _stay(g, v, win0) for v in win0 if g.owner[v] == 0}
        regions = (win0, lose)
    elif obj.kind == REACHABILITY:
        win0, choice0 = _attract(g, 0, obj.target)
        lose = everything - win0
        choice1 = {v: _stay(g, v, lose) for v in lose if g.owner[v] == 1}
        regions = (win0, lose)
    elif obj.kind == PARITY:
        w0, w1, choice0, choice1 = _zielonka(g, everything)
        regions = (w0, w1)
    else:
        raise InvalidInput(f"unknown objective {obj.kind!r}")
    return Solution(
        g,
        (frozenset(regions[0]), frozenset(regions[1])),
        (_complete(g, 0, choice0), _complete(g, 1, choice1)),
    )


def _restricted_successors(g: TurnGame, s: PositionalStrategy, player: int):
    succ = []
    for v in range(len(g)):
        if g.owner[v] == player:
            succ.append([g.successor(v, s.choice[v])] if v in s.choice else None)
        else:
            succ.append([w for _, w in g.edges[v]])
    return succ


def verify_positional_strategy(g: TurnGame, s: PositionalStrategy, player: int) -> bool:
    """Check that every play from the initial node consistent with ``s`` is won by ``player``."""
    succ = _restricted_successors(g, s, player)
    reach = {g.initial}
    stack = [g.initial]
    while stack:
        v = stack.pop()
        if succ[v] is None:
            raise InvalidInput(f"strategy undefined at reachable node {g.labels[v]!r}")
        for w in succ[v]:
            if w not in reach:
                reach.add(w)
                stack.append(w)
    obj = g.objective
    kind = obj.kind
    bad_nodes = obj.unsafe if kind == SAFETY else obj.target
    if kind in (SAFETY, REACHABILITY):
        # player 1 plays the dual objective
        avoid = (kind == SAFETY) == (player == 0)
        if avoid:
            return not (reach & bad_nodes)
        # every maximal path must hit the goal: goal attractor with all choices adversarial
        goal = set(bad_nodes)
        left = {v: len(succ[v]) for v in reach if v not in goal}
        preds: dict[int, list[int]] = {}
        for v in reach:
            for w in succ[v]:
                preds.setdefault(w, []).append(v)
        frontier = [v for v in reach if v in goal]
        covered = set(frontier)
        while frontier:
            w = frontier.pop()
            for v in preds.get(w, ()):
                if v in covered:
                    continue
                left[v] -= 1
                if left[v] == 0:
                    covered.add(v)
                    frontier.append(v)
        return g.initial in covered
    colors = obj.colors
    losing_parity = 1 - player
    graph = nx.DiGraph()
    graph.add_nodes_from(reach)
    graph.add_edges_from((v, w) for v in reach for w in succ[v])
    for c in sorted({colors[v] for v in reach}):
        if c % 2 != losing_parity:
            continue
        sub = graph.subgraph([v for v in reach if colors[v] <= c])
        for comp in nx.strongly_connected_components(sub):
            if not any(colors[v] == c for v in comp):
                continue
            if len(comp) > 1 or any(sub.has_edge(v, v) for v in comp):
                return False
    return True
