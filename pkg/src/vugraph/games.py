"""Games (N, f, {X_i}, {U_i}, G) under observation masking.

Agents are numbered ``1..n`` like graph nodes.  An action profile is a tuple
of frozensets, one per agent; position ``i - 1`` holds agent ``i``'s action.
The empty frozenset stands for an agent that is not observed.

Utilities are functions of the *whole* profile.  Under a constraint graph an
agent evaluates its utility on its masked view, where every agent it does
not observe is replaced by the empty set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegenerateGame, InputError, NoPureEquilibrium, SizeLimitError
from .graphs import ConstraintGraph
from .welfare import DEFAULT_PROPERTY_LIMIT, CoverageWelfare, GroundSet, check_properties

ActionProfile = tuple  # tuple[frozenset[str], ...]
EMPTY: frozenset[str] = frozenset()

MARGINAL_CONTRIBUTION = "marginal-contribution"
TABULAR = "tabular"
PROFILE_LIMIT = 2**20


@dataclass(frozen=True)
class UtilitySpec:
    kind: str = MARGINAL_CONTRIBUTION
    # masked profile -> utility; profiles not listed fall back to marginal contribution
    overrides: Mapping[ActionProfile, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (MARGINAL_CONTRIBUTION, TABULAR):
            raise InputError(f"unknown utility kind {self.kind!r}")
        if self.kind == MARGINAL_CONTRIBUTION and self.overrides:
            raise InputError("marginal-contribution utilities take no overrides")


def as_profile(actions: Iterable[Iterable[str]]) -> ActionProfile:
    return tuple(frozenset(a) for a in actions)


@dataclass(frozen=True, eq=False)
class Game:
    welfare: CoverageWelfare
    action_sets: tuple[tuple[frozenset[str], ...], ...]
    graph: ConstraintGraph
    utilities: tuple[UtilitySpec, ...] = ()

    def __post_init__(self):
        action_sets = tuple(tuple(frozenset(a) for a in acts) for acts in self.action_sets)
        object.__setattr__(self, "action_sets", action_sets)
        n = len(action_sets)
        if self.graph.n != n:
            raise InputError(f"graph has {self.graph.n} nodes but the game has {n} agents")
        if not self.utilities:
            object.__setattr__(self, "utilities", (UtilitySpec(),) * n)
        if len(self.utilities) != n:
            raise InputError(f"{len(self.utilities)} utility specs for {n} agents")
        for i, acts in enumerate(action_sets, start=1):
            if not acts:
                raise InputError(f"agent {i} has an empty action set")
            if len(set(acts)) != len(acts):
                raise InputError(f"agent {i} lists a duplicate action")
            for a in acts:
                self.welfare.cell_mask(a)
        for i, spec in enumerate(self.utilities, start=1):
            for x in spec.overrides:
                if len(x) != n or any(xj and xj not in action_sets[j] for j, xj in enumerate(x)):
                    raise InputError(f"override for agent {i} references an illegal profile")
                if not x[i - 1]:
                    raise InputError(f"override for agent {i} leaves its own action empty")

    @classmethod
    def build(cls, ground: GroundSet, action_sets: Sequence[Iterable[Iterable[str]]], graph: ConstraintGraph,
              utilities: Sequence[UtilitySpec] | None = None) -> "Game":
        return cls(
            welfare=CoverageWelfare(ground),
            action_sets=tuple(tuple(frozenset(a) for a in acts) for acts in action_sets),
            graph=graph,
            utilities=tuple(utilities or ()),
        )

    @property
    def n(self) -> int:
        return len(self.action_sets)

    @property
    def agents(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def _observed(self) -> tuple[frozenset[int], ...]:
        # zero-based indices of the agents each agent sees, itself included
        return tuple(frozenset(j - 1 for j in self.graph.closed_in_neighbors(i)) for i in self.agents)

    @cached_property
    def _masks(self) -> dict[frozenset[str], int]:
        masks = {EMPTY: 0}
        for acts in self.action_sets:
            for a in acts:
                masks[a] = self.welfare.cell_mask(a)
        for spec in self.utilities:
            for x in spec.overrides:
                for a in x:
                    masks.setdefault(a, self.welfare.cell_mask(a))
        return masks

    def mask(self, action: frozenset[str]) -> int:
        m = self._masks.get(action)
        if m is None:
            m = self._masks[action] = self.welfare.cell_mask(action)
        return m

    def profile_count(self) -> int:
        return prod(len(a) for a in self.action_sets)

    def profiles(self, limit: int = PROFILE_LIMIT) -> Iterator[ActionProfile]:
        """All full profiles in canonical (lexicographic action index) order."""
        count = self.profile_count()
        if count > limit:
            raise SizeLimitError(f"{count} profiles exceed the exhaustive limit of {limit}")
        return itertools.product(*self.action_sets)

    def welfare_of(self, x: ActionProfile) -> Fraction:
        """w(x) = f(union of all actions)."""
        m = 0
        for a in x:
            m |= self.mask(a)
        return self.welfare.value_of_mask(m)

    def validate_profile(self, x: ActionProfile) -> None:
        if len(x) != self.n:
            raise InputError(f"profile has {len(x)} entries for {self.n} agents")
        for i, (a, acts) in enumerate(zip(x, self.action_sets), start=1):
            if a not in acts:
                raise InputError(f"agent {i} action {sorted(a)} is not in its action set")


def masked_view(game: Game, i: int, x: ActionProfile) -> ActionProfile:
    seen = game._observed[i - 1]
    return tuple(a if j in seen else EMPTY for j, a in enumerate(x))


def marginal_contribution(game: Game, i: int, x: ActionProfile) -> Fraction:
    """f(x_i, x_-i) - f(x_-i) evaluated on ``x`` exactly as given (no masking)."""
    others = 0
    for j, a in enumerate(x):
        if j != i - 1:
            others |= game.mask(a)
    f = game.welfare.value_of_mask
    return f(others | game.mask(x[i - 1])) - f(others)


def raw_utility(game: Game, i: int, x: ActionProfile) -> Fraction:
    """U_i evaluated on ``x`` as given: tabular override if listed, else marginal contribution."""
    spec = game.utilities[i - 1]
    if spec.overrides:
        v = spec.overrides.get(x)
        if v is not None:
            return v
    return marginal_contribution(game, i, x)


def utility(game: Game, i: int, x: ActionProfile) -> Fraction:
    """Agent ``i``'s utility under its constraint-graph view of ``x``."""
    return raw_utility(game, i, masked_view(game, i, x))


def _replace(x: ActionProfile, i: int, a: frozenset[str]) -> ActionProfile:
    return x[: i - 1] + (a,) + x[i:]


# -- certification ------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    passed: bool
    checked: int
    condition: str | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.passed


def check_valid_utility(game: Game, limit: int = PROFILE_LIMIT,
                        property_limit: int = DEFAULT_PROPERTY_LIMIT) -> Certificate:
    """Certify the three valid-utility-game conditions on full profiles.

    The welfare conditions are checked exhaustively when the ground set is
    within ``property_limit``; larger coverage functions satisfy them by
    construction.  Utilities are evaluated without masking.
    """
    if len(game.welfare.elements) <= property_limit:
        verdict = check_properties(game.welfare, property_limit)
        if not verdict.ok:
            name = next(k for k in ("normalized", "monotone", "submodular") if not getattr(verdict, k))
            return Certificate(False, 0, name, {"welfare": verdict.witnesses[name]})
    checked = 0
    for x in game.profiles(limit):
        checked += 1
        total = Fraction(0)
        for i in game.agents:
            u = raw_utility(game, i, x)
            mc = marginal_contribution(game, i, x)
            if u < mc:
                return Certificate(False, checked, "marginal",
                                   {"agent": i, "profile": x, "utility": u, "marginal": mc})
            total += u
        w = game.welfare_of(x)
        if total > w:
            return Certificate(False, checked, "budget", {"profile": x, "utility_sum": total, "welfare": w})
    return Certificate(True, checked)


def check_consistency(game: Game, limit: int = PROFILE_LIMIT) -> Certificate:
    """Check U_i(x_i, x_A) >= U_i(x_i, x_B) for all A <= B <= N - {i}.

    Neighbour sets are hypothetical, so utilities are evaluated raw.  It is
    enough to compare B with B minus one agent: longer chains follow by
    transitivity.  Each x_B is enumerated as a profile over X_j + {empty}.
    """
    work = sum(
        len(game.action_sets[i]) * prod(len(a) + 1 for j, a in enumerate(game.action_sets) if j != i)
        for i in range(game.n)
    )
    if work > limit:
        raise SizeLimitError(f"{work} consistency configurations exceed the limit of {limit}")
    checked = 0
    for i in game.agents:
        others = [(EMPTY,) + game.action_sets[j] for j in range(game.n) if j != i - 1]
        for xi in game.action_sets[i - 1]:
            for rest in itertools.product(*others):
                x_b = rest[: i - 1] + (xi,) + rest[i - 1:]
                u_b = raw_utility(game, i, x_b)
                for j, a in enumerate(x_b, start=1):
                    if j == i or not a:
                        continue
                    checked += 1
                    x_a = _replace(x_b, j, EMPTY)
                    u_a = raw_utility(game, i, x_a)
                    if u_a < u_b:
                        b_set = frozenset(k for k, c in enumerate(x_b, start=1) if c and k != i)
                        return Certificate(False, checked, "consistency", {
                            "agent": i, "action": xi, "A": b_set - {j}, "B": b_set,
                            "profile_B": x_b, "utility_A": u_a, "utility_B": u_b,
                        })
    return Certificate(True, checked)


# -- equilibria ---------------------------------------------------------------

@dataclass(frozen=True)
class Deviation:
    agent: int
    action: frozenset[str]
    current: Fraction
    improved: Fraction


def is_equilibrium(game: Game, x: ActionProfile) -> tuple[bool, Deviation | None]:
    """Weak-inequality Nash test under graph masking; ties never block."""
    for i in game.agents:
        current = utility(game, i, x)
        for a in game.action_sets[i - 1]:
            if a == x[i - 1]:
                continue
            u = utility(game, i, _replace(x, i, a))
            if u > current:
                return False, Deviation(i, a, current, u)
    return True, None


def enumerate_equilibria(game: Game, limit: int = PROFILE_LIMIT) -> list[ActionProfile]:
    return [x for x in game.profiles(limit) if is_equilibrium(game, x)[0]]


def optimum(game: Game, limit: int = PROFILE_LIMIT) -> tuple[ActionProfile, Fraction]:
    best = None
    for x in game.profiles(limit):
        w = game.welfare_of(x)
        if best is None or w > best[1]:
            best = (x, w)
    return best


def empirical_poa(game: Game, limit: int = PROFILE_LIMIT) -> Fraction:
    """Worst equilibrium welfare over optimal welfare for this one game."""
    eqs = enumerate_equilibria(game, limit)
    if not eqs:
        raise NoPureEquilibrium("the game has no pure Nash equilibrium")
    _, best = optimum(game, limit)
    if best == 0:
        raise DegenerateGame("optimal welfare is zero")
    return min(game.welfare_of(x) for x in eqs) / best


@dataclass(frozen=True)
class BestResponseOutcome:
    status: str  # "converged" | "cycle" | "budget"
    profile: ActionProfile
    changes: int
    sweeps: int


def best_response_path(game: Game, init: ActionProfile, order: Sequence[int] | None = None,
                       max_sweeps: int = 1000) -> BestResponseOutcome:
    """Round-robin strict best-response dynamics.

    An agent moves only when some action strictly beats its current one; it
    then takes the best action, lowest index on ties.  A full sweep without
    a move means ``is_equilibrium`` holds.  Returning to an already visited
    (profile, turn) state after some move means the dynamics cycle forever.
    """
    game.validate_profile(init)
    order = list(order) if order is not None else list(game.agents)
    x = tuple(init)
    changes = 0
    seen = {}
    for sweep in range(1, max_sweeps + 1):
        moved = False
        for pos, i in enumerate(order):
            state = (x, pos)
            if state in seen:
                # a full lap with no move is a fixed point, not a cycle
                status = "converged" if seen[state] == changes else "cycle"
                return BestResponseOutcome(status, x, changes, sweep)
            seen[state] = changes
            current = utility(game, i, x)
            best_a, best_u = None, current
            for a in game.action_sets[i - 1]:
                u = utility(game, i, _replace(x, i, a))
                if u > best_u:
                    best_a, best_u = a, u
            if best_a is not None:
                x = _replace(x, i, best_a)
                changes += 1
                moved = True
        if not moved:
            return BestResponseOutcome("converged", x, changes, sweep)
    return BestResponseOutcome("budget", x, changes, max_sweeps)


@dataclass(frozen=True)
class GameAnalysis:
    equilibria: list
    equilibrium_welfare: list
    optimum: ActionProfile
    optimal_welfare: Fraction
    poa: Fraction | None


def analyze(game: Game, limit: int = PROFILE_LIMIT) -> GameAnalysis:
    eqs = enumerate_equilibria(game, limit)
    opt, best = optimum(game, limit)
    welfare = [game.welfare_of(x) for x in eqs]
    poa = min(welfare) / best if eqs and best else None
    return GameAnalysis(eqs, welfare, opt, best, poa)


# -- random instances ---------------------------------------------------------

def random_coverage_game(graph: ConstraintGraph, rng: random.Random,
                         actions: tuple[int, int] = (2, 3), cells_per_action: tuple[int, int] = (1, 2)) -> Game:
    """Marginal-contribution coverage game on ``graph``.

    A shared pool of ``2n`` cells with weights drawn from {1..100}/100; each
    agent gets 2-3 actions, each action its own element covering 1-2 cells.
    """
    n = graph.n
    cells = {f"c{k}": Fraction(rng.randint(1, 100), 100) for k in range(1, 2 * n + 1)}
    names = list(cells)
    membership = {}
    action_sets = []
    for i in range(1, n + 1):
        acts = []
        for k in range(1, rng.randint(*actions) + 1):
            e = f"a{i}_{k}"
            membership[e] = frozenset(rng.sample(names, rng.randint(*cells_per_action)))
            acts.append(frozenset({e}))
        action_sets.append(acts)
    ground = GroundSet(tuple(membership), tuple(cells), membership, cells)
    return Game.build(ground, action_sets, graph)
