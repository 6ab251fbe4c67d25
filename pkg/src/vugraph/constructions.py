"""Closed-form bounds and worst-case instance generators.

Bounds for a constraint graph G:

* ``1/(1 + tau(G))`` for all valid utility games (tight when G has an edge),
* ``1/(1 + alpha*(Gbar))`` for consistent valid utility games, where Gbar
  keeps only reciprocated edges,
* ``1/alpha(G)`` as an upper bound for any fixed utility design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConstructionInfeasible, InputError
from .games import EMPTY, TABULAR, ActionProfile, Game, UtilitySpec, masked_view
from .graphs import (
    ConstraintGraph,
    InformationPartition,
    fractional_clique_cover,
    fractional_independence,
    independence_number,
    information_groups,
    is_independent,
    reciprocal_subgraph,
)
from .welfare import GroundSet, to_fraction

DEFAULT_EPSILON = Fraction(1, 1000)


def _epsilon(eps) -> Fraction:
    eps = to_fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def theorem1_bound(g: ConstraintGraph) -> Fraction:
    return Fraction(1, 1 + information_groups(g).tau)


def theorem2_bound(g: ConstraintGraph) -> Fraction:
    return 1 / (1 + fractional_independence(reciprocal_subgraph(g)).value)


def prop3_bound(g: ConstraintGraph) -> Fraction:
    return Fraction(1, independence_number(g)[0])


def attack_graph(n: int) -> ConstraintGraph:
    """Complete graph minus n-1 edges that isolate every information group.

    Removes (1, 2), (3, 1), then (k+1, k) for k = 3..n-1, so node 2 misses 1,
    node 1 misses 3 and node k misses k+1; node n keeps a full view.
    """
    if n < 2:
        raise InputError("attack graph needs n >= 2")
    removed = [(1, 2)] + ([(3, 1)] if n >= 3 else []) + [(k + 1, k) for k in range(3, n)]
    return ConstraintGraph.complete(n).without(*removed)


# -- bound report -------------------------------------------------------------

@dataclass
class BoundReport:
    tau: int
    groups: tuple
    alpha_of_G: int
    alpha_witness: frozenset
    alpha_star_of_Gbar: Fraction
    thm1_bound: Fraction
    thm2_bound: Fraction
    prop3_bound: Fraction
    thm1_in_scope: bool
    thm1_tightness_available: bool
    empirical_poa: Fraction | None = None
    certificates: dict = field(default_factory=dict)


def _tightness_available(g: ConstraintGraph, part: InformationPartition) -> bool:
    if not g.edges:
        return False
    return part.tau == 1 or any(part.common_in_neighbors)


def bound_report(g: ConstraintGraph) -> BoundReport:
    part = information_groups(g)
    gbar = reciprocal_subgraph(g)
    alpha, witness = independence_number(g)
    alpha_bar, witness_bar = independence_number(gbar)
    frac = fractional_independence(gbar)
    cover = fractional_clique_cover(gbar)
    frac_g = fractional_independence(g)
    cover_g = fractional_clique_cover(g)
    return BoundReport(
        tau=part.tau,
        groups=part.groups,
        alpha_of_G=alpha,
        alpha_witness=witness,
        alpha_star_of_Gbar=frac.value,
        thm1_bound=Fraction(1, 1 + part.tau),
        thm2_bound=1 / (1 + frac.value),
        prop3_bound=Fraction(1, alpha) if alpha else Fraction(0),
        thm1_in_scope=bool(g.edges),
        thm1_tightness_available=_tightness_available(g, part),
        certificates={
            "Gbar": gbar,
            "alpha_of_Gbar": (alpha_bar, witness_bar),
            "z_Gbar": frac,
            "y_Gbar": cover,
            "duality_Gbar": frac.value == cover.value,
            "z_G": frac_g,
            "y_G": cover_g,
            "duality_G": frac_g.value == cover_g.value,
        },
    )


# -- generators ---------------------------------------------------------------

@dataclass(frozen=True)
class WorstCaseInstance:
    game: Game
    planted_equilibrium: ActionProfile
    predicted_ratio: Fraction
    representatives: tuple[int, ...] = ()
    groups: tuple[frozenset[int], ...] = ()
    notes: tuple[str, ...] = ()


def _order_groups(g: ConstraintGraph, part: InformationPartition):
    """Pick T_1 and order the rest so that j_2 is observed by T_1.

    Returns (groups, reps, shadow).  Representatives are the lowest agent of
    each group, except j_2, which must be an agent T_1 actually observes.
    ``shadow`` says j_1's low action must also cover s_sm.  That is needed
    exactly when T_1 sees every agent and j_2 is the only s_sm holder; the
    budget condition fails at x^1 otherwise.
    """
    tau = part.tau
    candidates = [k for k in range(tau) if part.common_in_neighbors[k]]
    if not candidates:
        raise ConstructionInfeasible(
            "no information group observes an agent outside itself; the construction "
            "needs an inter-group edge (j, i) with j and i in different groups"
        )
    full = frozenset(g.nodes)

    def needs_shadow(k):
        return tau == 2 and (part.groups[k] | part.common_in_neighbors[k]) == full

    first = next((k for k in candidates if not needs_shadow(k)), candidates[0])
    j2 = min(part.common_in_neighbors[first])
    second = part.group_of(j2)
    rest = [k for k in range(tau) if k not in (first, second)]
    order = [part.groups[first], part.groups[second]] + [part.groups[k] for k in rest]
    reps = [min(t) for t in order]
    reps[1] = j2
    return order, tuple(reps), needs_shadow(first)


def _two_agent_boxes(g: ConstraintGraph) -> WorstCaseInstance:
    # tau = 1: agents 1 and 2 each hold a unit box covered by the other's big box
    ground = GroundSet.build(
        {"s_1": ["c_1"], "s_2": ["c_2"], "s_big_1": ["c_2", "c_big_1"], "s_big_2": ["c_1", "c_big_2"]},
        {"c_1": 1, "c_2": 1, "c_big_1": 1, "c_big_2": 1},
    )
    s1, s2 = frozenset({"s_1"}), frozenset({"s_2"})
    action_sets = [[s1, frozenset({"s_big_1"})], [s2, frozenset({"s_big_2"})]]
    action_sets += [[EMPTY] for _ in range(g.n - 2)]
    game = Game.build(ground, action_sets, g)
    x_eq = (s1, s2) + (EMPTY,) * (g.n - 2)
    return WorstCaseInstance(
        game, x_eq, Fraction(1, 2), representatives=(1,), groups=information_groups(g).groups,
        notes=("single information group: symmetric covered-boxes instance, ties keep the low profile",),
    )


def build_theorem1_instance(g: ConstraintGraph, eps=DEFAULT_EPSILON) -> WorstCaseInstance:
    """Boxes instance whose worst equilibrium ratio is (1+2e)/(1+tau+e).

    Ground set: s_eps (e), s_sm (1+e), s_big (2, covering s_sm) and unit
    boxes s_2..s_tau.  Representative j_1 chooses between {s_eps} and
    {s_big, s_eps}; j_t (t > 1) between {s_sm} and {s_t}; everyone else only
    has {s_eps}.  Utilities are marginal contribution except that j_t gets
    1+e at its masked view x^t of the planted profile.
    """
    eps = _epsilon(eps)
    if not g.edges:
        raise ConstructionInfeasible("the graph has no edge; the theorem needs at least one")
    part = information_groups(g)
    if part.tau == 1:
        return _two_agent_boxes(g)
    groups, reps, shadow = _order_groups(g, part)
    tau = len(groups)

    membership = {"s_eps": ["c_eps"], "s_sm": ["c_sm"], "s_big": ["c_sm", "c_big"]}
    weights = {"c_eps": eps, "c_sm": 1 + eps, "c_big": 1 - eps}
    for t in range(2, tau + 1):
        membership[f"s_{t}"] = [f"c_{t}"]
        weights[f"c_{t}"] = Fraction(1)
    ground = GroundSet.build(membership, weights)

    s_eps, s_sm = frozenset({"s_eps"}), frozenset({"s_sm"})
    low = frozenset({"s_eps", "s_sm"}) if shadow else s_eps
    high = frozenset({"s_big", "s_eps"})
    action_sets = [[s_eps] for _ in g.nodes]
    x_eq = [s_eps] * g.n
    action_sets[reps[0] - 1] = [low, high]
    x_eq[reps[0] - 1] = low
    for t in range(2, tau + 1):
        j = reps[t - 1]
        action_sets[j - 1] = [s_sm, frozenset({f"s_{t}"})]
        x_eq[j - 1] = s_sm
    x_eq = tuple(x_eq)

    plain = Game.build(ground, action_sets, g)
    specs = [UtilitySpec() for _ in g.nodes]
    for j in reps:
        specs[j - 1] = UtilitySpec(TABULAR, {masked_view(plain, j, x_eq): 1 + eps})
    game = Game.build(ground, action_sets, g, specs)

    notes = ["j_1's high action keeps s_eps so the optimum is 1+tau+e even when every agent is a representative"]
    if shadow:
        notes.append("j_1's low action also covers s_sm: T_1 sees all agents and j_2 is the only s_sm holder")
    return WorstCaseInstance(
        game, x_eq, (1 + 2 * eps) / (1 + tau + eps),
        representatives=reps, groups=tuple(groups), notes=tuple(notes),
    )


def build_prop3_instance(g: ConstraintGraph, eps=DEFAULT_EPSILON, independent_set=None) -> WorstCaseInstance:
    """Resource instance where a maximum independent set J crowds onto s_0.

    f(s_0) = 1, f(s_i) = 1 for i in J and e otherwise, all disjoint.  Agents
    in J choose between {s_0} and {s_i}; the others only have {s_i}.  With
    marginal contribution the J agents cannot see each other, so all of them
    on s_0 is a (tie) equilibrium worth 1 + (n - alpha) e against an optimum
    of alpha + (n - alpha) e.
    """
    eps = _epsilon(eps)
    alpha, witness = independence_number(g)
    if independent_set is None:
        J = witness
    else:
        J = frozenset(independent_set)
        if not J <= frozenset(g.nodes) or not is_independent(g, J):
            raise InputError(f"{sorted(J)} is not an independent set of the graph")
        if len(J) != alpha:
            raise InputError(f"{sorted(J)} is not maximum; alpha = {alpha}")
    membership = {f"s_{i}": [f"c_{i}"] for i in range(g.n + 1)}
    weights = {"c_0": Fraction(1)}
    for i in g.nodes:
        weights[f"c_{i}"] = Fraction(1) if i in J else eps
    ground = GroundSet.build(membership, weights)
    s0 = frozenset({"s_0"})
    action_sets = [[s0, frozenset({f"s_{i}"})] if i in J else [frozenset({f"s_{i}"})] for i in g.nodes]
    x_eq = tuple(s0 if i in J else frozenset({f"s_{i}"}) for i in g.nodes)
    game = Game.build(ground, action_sets, g)
    rest = g.n - alpha
    return WorstCaseInstance(
        game, x_eq, (1 + rest * eps) / (alpha + rest * eps),
        representatives=tuple(sorted(J)),
    )
