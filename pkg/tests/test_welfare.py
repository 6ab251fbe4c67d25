import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vugraph.constructions import build_theorem1_instance
from vugraph.errors import InputError, SizeLimitError
from vugraph.welfare import CoverageWelfare, GroundSet, check_properties, evaluate, marginal_gain

from conftest import EPS, ladder_graphs


def covered_weight(ground, subset):
    """Oracle: union the cell sets by hand and add up their weights."""
    cells = set()
    for e in subset:
        cells |= set(ground.membership[e])
    return sum((ground.cell_weight[c] for c in cells), Fraction(0))


@pytest.fixture
def boxes():
    # tau = 3 boxes instance
    return build_theorem1_instance(ladder_graphs()[2], EPS).game.welfare


def test_empty_set_is_zero(boxes):
    assert evaluate(boxes, []) == 0


def test_big_box_covers_small_box(boxes):
    assert evaluate(boxes, ["s_sm", "s_big"]) == 2
    assert evaluate(boxes, ["s_big"]) == 2
    assert evaluate(boxes, ["s_sm"]) == 1 + EPS
    assert evaluate(boxes, ["s_eps"]) == EPS


def test_disjoint_boxes_add(boxes):
    assert evaluate(boxes, ["s_eps", "s_2"]) == Fraction(1001, 1000)
    assert evaluate(boxes, ["s_eps", "s_2"]) == covered_weight(boxes.ground, ["s_eps", "s_2"])


def test_marginal_gain_examples(boxes):
    assert marginal_gain(boxes, ["s_sm"], ["s_big"]) == 0
    assert marginal_gain(boxes, ["s_big"], ["s_sm"]) == Fraction(999, 1000)
    assert marginal_gain(boxes, ["s_2", "s_sm"], []) == evaluate(boxes, ["s_2", "s_sm"])


def test_unknown_element_rejected(boxes):
    with pytest.raises(InputError):
        evaluate(boxes, ["nope"])
    with pytest.raises(InputError):
        marginal_gain(boxes, ["s_sm"], ["nope"])


@pytest.mark.parametrize(
    "membership,weights",
    [
        ({"a": []}, {"c": 1}),
        ({"a": ["x"]}, {"c": 1}),
        ({"a": ["c"]}, {"c": -1}),
    ],
)
def test_ground_set_invariants(membership, weights):
    with pytest.raises(InputError):
        GroundSet.build(membership, weights)


def test_floats_are_rejected():
    with pytest.raises(InputError):
        GroundSet.build({"a": ["c"]}, {"c": 0.5})


def test_boxes_instance_properties(boxes):
    verdict = check_properties(boxes)
    assert verdict.ok and verdict.witnesses == {}


class Corrupted:
    """Planted monotonicity violation: f({a, b}) < f({a})."""

    elements = ("a", "b")
    table = {frozenset(): 0, frozenset("a"): 3, frozenset("b"): 1, frozenset("ab"): 2}

    def evaluate(self, subset):
        return Fraction(self.table[frozenset(subset)])


def test_planted_monotonicity_violation():
    verdict = check_properties(Corrupted())
    assert verdict.normalized
    assert not verdict.monotone
    assert verdict.witnesses["monotone"] == (frozenset("a"), frozenset("ab"))


class Supermodular:
    elements = ("a", "b")

    def evaluate(self, subset):
        return Fraction(len(frozenset(subset)) ** 2)


def test_planted_submodularity_violation():
    verdict = check_properties(Supermodular())
    assert verdict.monotone and verdict.normalized and not verdict.submodular
    A, B, s = verdict.witnesses["submodular"]
    f = Supermodular().evaluate
    assert A <= B and s not in B
    assert f(A | {s}) - f(A) < f(B | {s}) - f(B)


def test_not_normalized():
    class Shifted(Corrupted):
        table = {k: v + 1 for k, v in Corrupted.table.items()}
    assert not check_properties(Shifted()).normalized


def test_size_limit():
    ground = GroundSet.build({f"e{k}": [f"c{k}"] for k in range(17)}, {f"c{k}": 1 for k in range(17)})
    with pytest.raises(SizeLimitError):
        check_properties(CoverageWelfare(ground))
    assert check_properties(CoverageWelfare(ground), limit=17).ok


@st.composite
def coverage(draw, max_elements=6, max_cells=6):
    n_cells = draw(st.integers(1, max_cells))
    weights = {f"c{k}": Fraction(draw(st.integers(0, 20)), draw(st.integers(1, 7))) for k in range(n_cells)}
    cells = list(weights)
    n_el = draw(st.integers(1, max_elements))
    membership = {
        f"e{k}": draw(st.lists(st.sampled_from(cells), min_size=1, max_size=n_cells, unique=True))
        for k in range(n_el)
    }
    return CoverageWelfare(GroundSet.build(membership, weights))


def subsets(elements):
    return [frozenset(c) for r in range(len(elements) + 1) for c in itertools.combinations(elements, r)]


@settings(max_examples=60, deadline=None)
@given(coverage())
def test_coverage_always_certifies(f):
    assert check_properties(f).ok


@settings(max_examples=40, deadline=None)
@given(coverage(max_elements=5))
def test_evaluate_matches_oracle_and_subadditive(f):
    all_sets = subsets(f.elements)
    for A in all_sets:
        assert evaluate(f, A) == covered_weight(f.ground, A)
    for A in all_sets:
        for B in all_sets:
            assert evaluate(f, A | B) <= evaluate(f, A) + evaluate(f, B)
            assert marginal_gain(f, A, B) == evaluate(f, A | B) - evaluate(f, B)
            assert marginal_gain(f, A, B) >= 0
