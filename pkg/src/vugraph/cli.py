"""Command-line front end.

Exit codes: 0 success, 1 bound violation or prediction mismatch, 2 input
error (including infeasible constructions), 3 size-cap error.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
from fractions import Fraction

from . import fileio
from .constructions import (
    DEFAULT_EPSILON,
    attack_graph,
    bound_report,
    build_prop3_instance,
    build_theorem1_instance,
    prop3_bound,
    theorem1_bound,
    theorem2_bound,
)
from .errors import ConstructionInfeasible, InputError, SizeLimitError
from .fileio import rational
from .games import (
    PROFILE_LIMIT,
    Game,
    analyze,
    check_consistency,
    check_valid_utility,
    is_equilibrium,
    random_coverage_game,
)
from .graphs import ConstraintGraph, information_groups, read_graph
from .welfare import to_fraction

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3


def _sets(sets) -> list[list[int]]:
    return [sorted(s) for s in sets]


def _graph_from_args(args) -> ConstraintGraph:
    if args.graph:
        return read_graph(args.graph)
    if args.complete is not None:
        if args.complete < 1:
            raise InputError("--complete needs n >= 1")
        return ConstraintGraph.complete(args.complete)
    if args.attack is not None:
        return attack_graph(args.attack)
    raise InputError("one of --graph, --complete or --attack is required")


def _certificate_json(game: Game, cert) -> dict:
    out = {"passed": cert.passed, "checked": cert.checked}
    if not cert.passed:
        out["condition"] = cert.condition
        w = {}
        for k, v in (cert.witness or {}).items():
            if isinstance(v, Fraction):
                w[k] = rational(v)
            elif k.startswith("profile"):
                w[k] = fileio.profile_to_json(game, v)
            elif isinstance(v, frozenset):
                w[k] = sorted(v, key=str)
            elif isinstance(v, tuple):
                w[k] = [sorted(s, key=str) for s in v]
            else:
                w[k] = v
        out["witness"] = w
    return out


# -- commands -----------------------------------------------------------------

def cmd_analyze_graph(args):
    g = _graph_from_args(args)
    rep = bound_report(g)
    part = information_groups(g)
    c = rep.certificates

    def lp_json(sol, by_node):
        if by_node:
            return {"value": rational(sol.value), "z": [rational(w) for w in sol.weights]}
        return {"value": rational(sol.value),
                "y": [{"clique": sorted(k), "weight": rational(w)} for k, w in zip(sol.cliques, sol.weights) if w]}

    report = {
        "command": "analyze-graph",
        "graph": fileio.graph_to_dict(g),
        "tau": rep.tau,
        "groups": _sets(part.groups),
        "common_in_neighbors": _sets(part.common_in_neighbors),
        "reciprocal_edges": [list(e) for e in c["Gbar"].sorted_edges()],
        "alpha_G": {"value": rep.alpha_of_G, "witness": sorted(rep.alpha_witness)},
        "alpha_Gbar": {"value": c["alpha_of_Gbar"][0], "witness": sorted(c["alpha_of_Gbar"][1])},
        "alpha_star_Gbar": lp_json(c["z_Gbar"], True),
        "k_star_Gbar": lp_json(c["y_Gbar"], False),
        "duality_exact_Gbar": c["duality_Gbar"],
        "alpha_star_G": lp_json(c["z_G"], True),
        "k_star_G": lp_json(c["y_G"], False),
        "duality_exact_G": c["duality_G"],
        "bounds": {
            "theorem1": rational(rep.thm1_bound),
            "theorem2": rational(rep.thm2_bound),
            "prop3": rational(rep.prop3_bound),
        },
        "theorem1_in_scope": rep.thm1_in_scope,
        "theorem1_tightness_available": rep.thm1_tightness_available,
    }
    if args.format == "csv":
        rows = [("quantity", "exact", "decimal"), ("tau", rep.tau, rep.tau),
                ("alpha_G", rep.alpha_of_G, rep.alpha_of_G)]
        for name, v in [("alpha_star_Gbar", rep.alpha_star_of_Gbar), ("theorem1", rep.thm1_bound),
                        ("theorem2", rep.thm2_bound), ("prop3", rep.prop3_bound)]:
            r = rational(v)
            rows.append((name, r["exact"], r["decimal"]))
        return _csv(rows), EXIT_OK
    return fileio.dumps(report), EXIT_OK


def _game_summary(game: Game, limit: int) -> dict:
    res = analyze(game, limit)
    return {
        "equilibria": [
            {"profile": fileio.profile_to_json(game, x), "welfare": rational(w)}
            for x, w in zip(res.equilibria, res.equilibrium_welfare)
        ],
        "no_pure_equilibrium": not res.equilibria,
        "optimum": {"profile": fileio.profile_to_json(game, res.optimum), "welfare": rational(res.optimal_welfare)},
        "empirical_poa": rational(res.poa) if res.poa is not None else None,
        "_poa": res.poa,
    }


def cmd_worst_case(args):
    g = _graph_from_args(args)
    eps = to_fraction(args.epsilon)
    if args.theorem == "1":
        inst = build_theorem1_instance(g, eps)
    else:
        inst = build_prop3_instance(g, eps)
    game = inst.game
    summary = _game_summary(game, args.profile_limit)
    poa = summary.pop("_poa")
    planted_ok, _ = is_equilibrium(game, inst.planted_equilibrium)
    report = {
        "command": "worst-case",
        "theorem": args.theorem,
        "epsilon": rational(eps),
        "graph": fileio.graph_to_dict(g),
        "tau": information_groups(g).tau,
        "representatives": list(inst.representatives),
        "notes": list(inst.notes),
        "planted_equilibrium": fileio.profile_to_json(game, inst.planted_equilibrium),
        "planted_is_equilibrium": planted_ok,
        "valid_utility": _certificate_json(game, check_valid_utility(game, args.profile_limit)),
        "consistency": _certificate_json(game, check_consistency(game, args.profile_limit)),
        **summary,
        "predicted_ratio": rational(inst.predicted_ratio),
        "prediction_matches": poa == inst.predicted_ratio,
        "game": fileio.game_to_dict(game),
    }
    if args.game_out:
        fileio.write_game(game, args.game_out)
    code = EXIT_OK if report["prediction_matches"] and planted_ok else EXIT_VIOLATION
    return fileio.dumps(report), code


def cmd_equilibria(args):
    if not args.game:
        raise InputError("--game is required")
    game = fileio.read_game(args.game)
    summary = _game_summary(game, args.profile_limit)
    summary.pop("_poa")
    report = {
        "command": "equilibria",
        "agents": game.n,
        "profiles": game.profile_count(),
        **summary,
        "valid_utility": _certificate_json(game, check_valid_utility(game, args.profile_limit)),
        "consistency": _certificate_json(game, check_consistency(game, args.profile_limit)),
    }
    return fileio.dumps(report), EXIT_OK


def run_verify(g: ConstraintGraph, count: int, seed: int, limit: int = PROFILE_LIMIT) -> dict:
    """Random marginal-contribution games on ``g``; every equilibrium is held
    against both lower bounds.  Marginal contribution is consistent, so the
    consistent-game bound applies too."""
    rng = random.Random(seed)
    b1, b2 = theorem1_bound(g), theorem2_bound(g)
    rep = bound_report(g)
    min_ratio = None
    without = 0
    violations = []
    for k in range(count):
        game = random_coverage_game(g, rng)
        res = analyze(game, limit)
        if not res.equilibria:
            without += 1
            continue
        worst = res.poa
        if min_ratio is None or worst < min_ratio:
            min_ratio = worst
        for name, bound in (("theorem1", b1), ("theorem2", b2)):
            if worst < bound:
                violations.append({"game_index": k, "bound": name, "ratio": rational(worst),
                                   "counterexample": fileio.game_to_dict(game)})
    return {
        "command": "verify",
        "graph": fileio.graph_to_dict(g),
        "count": count,
        "seed": seed,
        "games_without_pure_equilibrium": without,
        "duality_exact_Gbar": rep.certificates["duality_Gbar"],
        "bounds": {"theorem1": rational(b1), "theorem2": rational(b2)},
        "min_ratio": rational(min_ratio) if min_ratio is not None else None,
        "min_ratio_minus_bound": {
            "theorem1": rational(min_ratio - b1) if min_ratio is not None else None,
            "theorem2": rational(min_ratio - b2) if min_ratio is not None else None,
        },
        "violations": violations,
    }


def cmd_verify(args):
    g = _graph_from_args(args)
    report = run_verify(g, args.count, args.seed, args.profile_limit)
    code = EXIT_VIOLATION if report["violations"] or not report["duality_exact_Gbar"] else EXIT_OK
    return fileio.dumps(report), code


def sweep_rows(n_min: int, n_max: int, eps: Fraction, empirical_max: int, limit: int = PROFILE_LIMIT) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        g = attack_graph(n)
        row = {
            "n": n,
            "tau": information_groups(g).tau,
            "theorem1": theorem1_bound(g),
            "theorem2": theorem2_bound(g),
            "prop3": prop3_bound(g),
            "empirical_poa": None,
            "predicted": (1 + 2 * eps) / (1 + n + eps),
        }
        if n <= empirical_max:
            inst = build_theorem1_instance(g, eps)
            row["empirical_poa"] = analyze(inst.game, limit).poa
        rows.append(row)
    return rows


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_sweep(args):
    if args.n_min < 2 or args.n_max < args.n_min:
        raise InputError("sweep needs 2 <= --n-min <= --n-max")
    rows = sweep_rows(args.n_min, args.n_max, to_fraction(args.epsilon), args.empirical_max, args.profile_limit)
    cols = ["theorem1", "theorem2", "prop3", "empirical_poa", "predicted"]
    if args.format == "json":
        out = [{k: (rational(v) if isinstance(v, Fraction) else v) for k, v in r.items()} for r in rows]
        return fileio.dumps({"command": "sweep", "epsilon": rational(to_fraction(args.epsilon)), "rows": out}), EXIT_OK
    table = [["n", "tau"] + [c + suffix for c in cols for suffix in ("", "_decimal")]]
    for r in rows:
        line = [r["n"], r["tau"]]
        for c in cols:
            v = r[c]
            line += ["", ""] if v is None else [str(v), rational(v)["decimal"]]
        table.append(line)
    return _csv(table), EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vugraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, fmt="json"):
        if graph:
            src = sp.add_mutually_exclusive_group()
            src.add_argument("--graph", metavar="PATH", help="graph file: 'n m' then m lines 'j i'")
            src.add_argument("--complete", type=int, metavar="N", help="complete graph on N agents")
            src.add_argument("--attack", type=int, metavar="N", help="complete graph minus the n-1 attack edges")
        sp.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt)
        sp.add_argument("--profile-limit", type=int, default=PROFILE_LIMIT)

    sp = sub.add_parser("analyze-graph", help="information groups, alpha, alpha*, k* and all bounds")
    common(sp)
    sp.set_defaults(func=cmd_analyze_graph)

    sp = sub.add_parser("worst-case", help="generate a tight instance and check it exhaustively")
    common(sp)
    sp.add_argument("--theorem", choices=("1", "prop3"), default="1")
    sp.add_argument("--epsilon", default=str(DEFAULT_EPSILON), metavar="P/Q")
    sp.add_argument("--game-out", metavar="PATH", help="also write the generated game file")
    sp.set_defaults(func=cmd_worst_case)

    sp = sub.add_parser("equilibria", help="enumerate pure equilibria of a game file")
    common(sp, graph=False)
    sp.add_argument("--game", metavar="PATH")
    sp.set_defaults(func=cmd_equilibria)

    sp = sub.add_parser("verify", help="random-game sweep against the lower bounds")
    common(sp)
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="bounds along the attack-graph family")
    common(sp, graph=False, fmt="csv")
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=8)
    sp.add_argument("--epsilon", default=str(DEFAULT_EPSILON), metavar="P/Q")
    sp.add_argument("--empirical-max", type=int, default=10,
                    help="largest n for which the generated instance is solved exhaustively")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if hasattr(args, "epsilon"):
            eps = to_fraction(args.epsilon)
            if not 0 < eps < 1:
                raise InputError(f"--epsilon must lie in (0, 1), got {eps}")
        if args.profile_limit <= 0:
            raise InputError("--profile-limit must be positive")
        text, code = args.func(args)
    except (InputError, ConstructionInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
