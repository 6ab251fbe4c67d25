"""JSON game files and report serialization helpers.

Game file layout::

    {
      "ground":    {"cells": {"c1": "1/2", ...}, "elements": {"s1": ["c1"], ...}},
      "agents":    [{"actions": [["s1"], ["s2", "s3"]]}, ...],
      "utilities": [{"kind": "marginal-contribution"},
                    {"kind": "tabular", "overrides": [{"profile": [["s1"], []], "value": "3/2"}]}],
      "graph":     {"n": 2, "edges": [[1, 2]]}      or  {"file": "graph.txt"}
    }

``utilities`` may also be a single object applied to every agent.  Rationals
are strings ``"p/q"``; a graph file path is resolved relative to the game file.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .errors import InputError
from .games import TABULAR, ActionProfile, Game, UtilitySpec
from .graphs import ConstraintGraph, read_graph
from .welfare import GroundSet, to_fraction


def rational(x: Fraction) -> dict:
    """Exact ``"p/q"`` string alongside a 6-decimal approximation."""
    x = Fraction(x)
    return {"exact": str(x), "decimal": round(float(x), 6)}


def _sorted_action(game: Game, action) -> list[str]:
    order = {e: k for k, e in enumerate(game.welfare.elements)}
    return sorted(action, key=order.__getitem__)


def profile_to_json(game: Game, x: ActionProfile) -> list[list[str]]:
    return [_sorted_action(game, a) for a in x]


def graph_to_dict(g: ConstraintGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def game_to_dict(game: Game) -> dict:
    ground = game.welfare.ground
    utilities = []
    for spec in game.utilities:
        if spec.kind == TABULAR:
            overrides = [
                {"profile": profile_to_json(game, x), "value": str(v)}
                for x, v in spec.overrides.items()
            ]
            overrides.sort(key=lambda o: json.dumps(o["profile"]))
            utilities.append({"kind": spec.kind, "overrides": overrides})
        else:
            utilities.append({"kind": spec.kind})
    return {
        "ground": {
            "cells": {c: str(ground.cell_weight[c]) for c in ground.cells},
            "elements": {e: sorted(ground.membership[e], key=ground.cells.index) for e in ground.elements},
        },
        "agents": [{"actions": [_sorted_action(game, a) for a in acts]} for acts in game.action_sets],
        "utilities": utilities,
        "graph": graph_to_dict(game.graph),
    }


def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"{where}: missing {key!r}")
    return d[key]


def game_from_dict(d: dict, base_dir: str | None = None) -> Game:
    ground_d = _require(d, "ground", "game")
    cells = _require(ground_d, "cells", "ground")
    elements = _require(ground_d, "elements", "ground")
    ground = GroundSet.build(elements, {c: to_fraction(w) for c, w in cells.items()})

    agents = _require(d, "agents", "game")
    action_sets = [[frozenset(a) for a in _require(agent, "actions", f"agent {i}")]
                   for i, agent in enumerate(agents, start=1)]

    graph_d = _require(d, "graph", "game")
    if "file" in graph_d:
        path = graph_d["file"]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        graph = read_graph(path)
    else:
        n = _require(graph_d, "n", "graph")
        edges = _require(graph_d, "edges", "graph")
        graph = ConstraintGraph(int(n), frozenset(tuple(e) for e in edges))

    raw = d.get("utilities", {"kind": "marginal-contribution"})
    if isinstance(raw, dict):
        raw = [raw] * len(action_sets)
    specs = []
    for i, u in enumerate(raw, start=1):
        kind = _require(u, "kind", f"utility {i}")
        overrides = {}
        for o in u.get("overrides", []):
            x = tuple(frozenset(a) for a in _require(o, "profile", f"utility {i} override"))
            overrides[x] = to_fraction(_require(o, "value", f"utility {i} override"))
        specs.append(UtilitySpec(kind, overrides))
    return Game.build(ground, action_sets, graph, specs)


def read_game(path) -> Game:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})", line=exc.lineno) from None
    return game_from_dict(d, base_dir=os.path.dirname(os.path.abspath(path)))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_game(game: Game, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(game_to_dict(game)))
