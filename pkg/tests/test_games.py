import itertools
import random
from fractions import Fraction

import pytest

from vugraph.constructions import build_prop3_instance
from vugraph.errors import DegenerateGame, InputError, NoPureEquilibrium, SizeLimitError
from vugraph.games import (
    EMPTY,
    TABULAR,
    Game,
    UtilitySpec,
    analyze,
    as_profile,
    best_response_path,
    check_consistency,
    check_valid_utility,
    empirical_poa,
    enumerate_equilibria,
    is_equilibrium,
    marginal_contribution,
    masked_view,
    optimum,
    random_coverage_game,
    utility,
)
from vugraph.graphs import ConstraintGraph
from vugraph.welfare import GroundSet, evaluate

from conftest import EPS, ladder_graphs, random_digraph, ring


def covered(game, actions):
    return evaluate(game.welfare, set().union(*actions) if actions else set())


def mc_oracle(game, i, x):
    """f(x) - f(x with agent i removed), straight from the welfare function."""
    rest = [a for j, a in enumerate(x, start=1) if j != i]
    return covered(game, list(x)) - covered(game, rest)


def brute_equilibria(game):
    out = []
    for x in game.profiles():
        stable = True
        for i in game.agents:
            for a in game.action_sets[i - 1]:
                y = x[: i - 1] + (a,) + x[i:]
                if utility(game, i, y) > utility(game, i, x):
                    stable = False
        if stable:
            out.append(x)
    return out


def simple_ground(n_cells=3):
    return GroundSet.build({f"e{k}": [f"c{k}"] for k in range(n_cells)}, {f"c{k}": 1 for k in range(n_cells)})


@pytest.fixture
def pennies():
    """Matching pennies: agent 1 wants to match, agent 2 to differ."""
    ground = GroundSet.build({"h1": ["c"], "t1": ["c"], "h2": ["c"], "t2": ["c"]}, {"c": 2})
    h1, t1, h2, t2 = (frozenset({s}) for s in ("h1", "t1", "h2", "t2"))
    g = ConstraintGraph.complete(2)
    u1, u2 = {}, {}
    for a, b in itertools.product((h1, t1), (h2, t2)):
        match = (a == h1) == (b == h2)
        u1[(a, b)] = Fraction(1 if match else 0)
        u2[(a, b)] = Fraction(0 if match else 1)
    return Game.build(ground, [[h1, t1], [h2, t2]], g,
                      [UtilitySpec(TABULAR, u1), UtilitySpec(TABULAR, u2)])


# -- construction and validation ----------------------------------------------

def test_game_validation():
    ground = simple_ground()
    g = ConstraintGraph.complete(2)
    with pytest.raises(InputError):
        Game.build(ground, [[["e0"]]], g)
    with pytest.raises(InputError):
        Game.build(ground, [[["e0"]], []], g)
    with pytest.raises(InputError):
        Game.build(ground, [[["e0"], ["e0"]], [["e1"]]], g)
    with pytest.raises(InputError):
        Game.build(ground, [[["zz"]], [["e1"]]], g)
    bad = {as_profile([["e2"], ["e1"]]): Fraction(1)}
    with pytest.raises(InputError):
        Game.build(ground, [[["e0"]], [["e1"]]], g, [UtilitySpec(TABULAR, bad), UtilitySpec()])
    own_empty = {(EMPTY, frozenset({"e1"})): Fraction(1)}
    with pytest.raises(InputError):
        Game.build(ground, [[["e0"]], [["e1"]]], g, [UtilitySpec(TABULAR, own_empty), UtilitySpec()])
    with pytest.raises(InputError):
        UtilitySpec("linear")


def test_profile_limit():
    game = Game.build(simple_ground(), [[["e0"], ["e1"], ["e2"]]] * 3, ConstraintGraph.complete(3))
    assert game.profile_count() == 27
    with pytest.raises(SizeLimitError):
        list(game.profiles(limit=26))


def test_validate_profile():
    game = Game.build(simple_ground(), [[["e0"]], [["e1"]]], ConstraintGraph.complete(2))
    with pytest.raises(InputError):
        game.validate_profile(as_profile([["e0"]]))
    with pytest.raises(InputError):
        game.validate_profile(as_profile([["e1"], ["e1"]]))


# -- masking and utilities ----------------------------------------------------

def test_masked_view_hides_unobserved():
    g = ConstraintGraph(3, frozenset({(2, 1)}))
    game = Game.build(simple_ground(), [[["e0"]], [["e1"]], [["e2"]]], g)
    x = as_profile([["e0"], ["e1"], ["e2"]])
    assert masked_view(game, 1, x) == (x[0], x[1], EMPTY)
    assert masked_view(game, 3, x) == (EMPTY, EMPTY, x[2])


@pytest.mark.parametrize("seed", range(25))
def test_mask_idempotent_and_mc_matches_oracle(seed):
    rng = random.Random(seed)
    game = random_coverage_game(random_digraph(rng, 4, n_min=2), rng)
    for x in game.profiles():
        for i in game.agents:
            v = masked_view(game, i, x)
            assert masked_view(game, i, v) == v
            assert marginal_contribution(game, i, x) == mc_oracle(game, i, x)
            assert utility(game, i, x) == mc_oracle(game, i, v)


# -- certificates -------------------------------------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_mc_games_are_valid_and_consistent(seed):
    rng = random.Random(100 + seed)
    game = random_coverage_game(random_digraph(rng, 4, n_min=1), rng)
    cert = check_valid_utility(game)
    assert cert.passed and cert.checked == game.profile_count()
    assert check_consistency(game).passed


def test_planted_budget_violation():
    ground = simple_ground(2)
    g = ConstraintGraph.complete(2)
    x = as_profile([["e0"], ["e1"]])
    over = {x: Fraction(3)}  # f(x) + 1
    game = Game.build(ground, [[["e0"]], [["e1"]]], g, [UtilitySpec(TABULAR, over), UtilitySpec()])
    cert = check_valid_utility(game)
    assert not cert and cert.condition == "budget"
    assert cert.witness == {"profile": x, "utility_sum": Fraction(4), "welfare": Fraction(2)}


def test_planted_marginal_violation():
    ground = simple_ground(2)
    x = as_profile([["e0"], ["e1"]])
    game = Game.build(ground, [[["e0"]], [["e1"]]], ConstraintGraph.complete(2),
                      [UtilitySpec(TABULAR, {x: Fraction(1, 2)}), UtilitySpec()])
    cert = check_valid_utility(game)
    assert cert.condition == "marginal" and cert.witness["agent"] == 1


def test_planted_consistency_violation():
    # agent 1 earns more when it sees agent 2 than when it does not
    ground = simple_ground(2)
    x = as_profile([["e0"], ["e1"]])
    game = Game.build(ground, [[["e0"]], [["e1"]]], ConstraintGraph.complete(2),
                      [UtilitySpec(TABULAR, {x: Fraction(3, 2)}), UtilitySpec(TABULAR, {x: Fraction(1, 2)})])
    cert = check_consistency(game)
    assert not cert
    w = cert.witness
    assert w["agent"] == 1 and w["A"] == frozenset() and w["B"] == {2}
    assert w["utility_A"] < w["utility_B"]


def test_single_agent_is_vacuously_consistent():
    game = Game.build(simple_ground(), [[["e0"], ["e1"]]], ConstraintGraph.edgeless(1))
    cert = check_consistency(game)
    assert cert.passed and cert.checked == 0


def test_consistency_size_limit():
    game = Game.build(simple_ground(), [[["e0"], ["e1"]]] * 3, ConstraintGraph.complete(3))
    with pytest.raises(SizeLimitError):
        check_consistency(game, limit=5)


# -- equilibria ---------------------------------------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_enumeration_matches_brute_force(seed):
    rng = random.Random(200 + seed)
    game = random_coverage_game(random_digraph(rng, 4, n_min=2), rng)
    assert enumerate_equilibria(game) == brute_equilibria(game)
    opt_x, opt_w = optimum(game)
    assert opt_w == max(game.welfare_of(x) for x in game.profiles())
    result = analyze(game)
    assert result.optimal_welfare == opt_w
    if result.equilibria:
        assert result.poa == min(result.equilibrium_welfare) / opt_w


def test_ties_do_not_block_equilibrium():
    inst = build_prop3_instance(ring(5), EPS, independent_set={1, 4})
    ok, dev = is_equilibrium(inst.game, inst.planted_equilibrium)
    assert ok and dev is None


def test_deviation_reported(pennies):
    x = next(pennies.profiles())  # (h1, h2): agent 2 wants to switch
    ok, dev = is_equilibrium(pennies, x)
    assert not ok
    assert dev.agent == 2 and dev.action == frozenset({"t2"})
    assert (dev.current, dev.improved) == (0, 1)


def test_prop3_alternative_equilibrium():
    inst = build_prop3_instance(ring(5), EPS, independent_set={1, 4})
    x = list(inst.planted_equilibrium)
    x[3] = frozenset({"s_4"})
    assert is_equilibrium(inst.game, tuple(x))[0]
    assert inst.game.welfare_of(tuple(x)) == 2 + 3 * EPS


def test_matching_pennies(pennies):
    assert enumerate_equilibria(pennies) == []
    with pytest.raises(NoPureEquilibrium):
        empirical_poa(pennies)
    assert analyze(pennies).poa is None
    x0 = next(pennies.profiles())
    out = best_response_path(pennies, x0)
    assert out.status == "cycle"
    assert out.changes >= 4


def test_degenerate_game():
    ground = GroundSet.build({"z": ["c"]}, {"c": 0})
    game = Game.build(ground, [[["z"]]], ConstraintGraph.edgeless(1))
    with pytest.raises(DegenerateGame):
        empirical_poa(game)


def test_best_response_from_equilibrium_stays():
    inst = build_prop3_instance(ring(5), EPS, independent_set={1, 4})
    out = best_response_path(inst.game, inst.planted_equilibrium)
    assert out.status == "converged" and out.changes == 0 and out.sweeps == 1
    assert out.profile == inst.planted_equilibrium


@pytest.mark.parametrize("seed", range(20))
def test_best_response_converges_on_mc_games(seed):
    # marginal contribution on a complete graph is a potential game
    rng = random.Random(300 + seed)
    n = rng.randint(2, 4)
    game = random_coverage_game(ConstraintGraph.complete(n), rng)
    init = tuple(rng.choice(acts) for acts in game.action_sets)
    out = best_response_path(game, init)
    assert out.status == "converged"
    assert is_equilibrium(game, out.profile)[0]


def test_best_response_order_and_budget():
    g = ladder_graphs()[0]
    game = random_coverage_game(g, random.Random(1))
    init = next(game.profiles())
    out = best_response_path(game, init, order=[4, 3, 2, 1])
    assert out.status == "converged"
    assert best_response_path(game, init, max_sweeps=0).status == "budget"
