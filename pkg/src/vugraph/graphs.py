"""Information-sharing constraint graphs and the quantities the bounds use.

Nodes are labelled ``1..n``.  An edge ``(j, i)`` means agent ``i`` observes
agent ``j``.  Cliques and independent sets follow the directed adaptation:
two nodes are adjacent when an edge exists in *either* direction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import lp
from .errors import InputError, SizeLimitError

DEFAULT_ALPHA_LIMIT = 24
DEFAULT_COVER_LIMIT = 10


@dataclass(frozen=True)
class ConstraintGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise InputError("node count must be nonnegative")
        edges = frozenset((int(j), int(i)) for j, i in self.edges)
        for j, i in edges:
            if not (1 <= j <= self.n and 1 <= i <= self.n):
                raise InputError(f"edge ({j}, {i}) has an endpoint outside 1..{self.n}")
            if j == i:
                raise InputError(f"self-loop on node {i}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def complete(cls, n: int) -> "ConstraintGraph":
        return cls(n, frozenset((j, i) for j in range(1, n + 1) for i in range(1, n + 1) if i != j))

    @classmethod
    def edgeless(cls, n: int) -> "ConstraintGraph":
        return cls(n, frozenset())

    @classmethod
    def undirected(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "ConstraintGraph":
        """Graph with both directions of every listed pair (mutual observation)."""
        edges = set()
        for a, b in pairs:
            edges.add((a, b))
            edges.add((b, a))
        return cls(n, frozenset(edges))

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, j: int, i: int) -> bool:
        return (j, i) in self.edges

    def in_neighbors(self, i: int) -> frozenset[int]:
        """N_i: the agents node ``i`` observes."""
        return frozenset(j for j, k in self.edges if k == i)

    def closed_in_neighbors(self, i: int) -> frozenset[int]:
        return self.in_neighbors(i) | {i}

    def adjacent(self, a: int, b: int) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def adjacency(self) -> dict[int, frozenset[int]]:
        adj = {v: set() for v in self.nodes}
        for j, i in self.edges:
            adj[j].add(i)
            adj[i].add(j)
        return {v: frozenset(s) for v, s in adj.items()}

    def without(self, *edges: tuple[int, int]) -> "ConstraintGraph":
        return ConstraintGraph(self.n, self.edges - set(edges))

    def relabel(self, perm: dict[int, int]) -> "ConstraintGraph":
        return ConstraintGraph(self.n, frozenset((perm[j], perm[i]) for j, i in self.edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


# -- text format --------------------------------------------------------------

def parse_graph(text: str) -> ConstraintGraph:
    """Parse ``n m`` followed by ``m`` lines ``j i``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise InputError("empty graph file")

    def ints(lineno, line):
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"expected two integers, got {line!r}", line=lineno)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"expected two integers, got {line!r}", line=lineno) from None

    n, m = ints(*rows[0])
    if len(rows) - 1 != m:
        raise InputError(f"header declares {m} edges, found {len(rows) - 1}", line=rows[0][0])
    edges = set()
    for lineno, line in rows[1:]:
        j, i = ints(lineno, line)
        if not (1 <= j <= n and 1 <= i <= n) or i == j:
            raise InputError(f"invalid edge ({j}, {i}) for n={n}", line=lineno)
        edges.add((j, i))
    return ConstraintGraph(n, frozenset(edges))


def read_graph(path) -> ConstraintGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g: ConstraintGraph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    lines += [f"{j} {i}" for j, i in g.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- information groups -------------------------------------------------------

@dataclass(frozen=True)
class InformationPartition:
    groups: tuple[frozenset[int], ...]
    # per group: in-neighbours common to the group that lie outside it
    common_in_neighbors: tuple[frozenset[int], ...]

    @property
    def tau(self) -> int:
        return len(self.groups)

    def group_of(self, node: int) -> int:
        for k, g in enumerate(self.groups):
            if node in g:
                return k
        raise KeyError(node)


def information_groups(g: ConstraintGraph) -> InformationPartition:
    by_row: dict[frozenset[int], list[int]] = {}
    for v in g.nodes:
        by_row.setdefault(g.closed_in_neighbors(v), []).append(v)
    groups = []
    outside = []
    for row, members in sorted(by_row.items(), key=lambda kv: min(kv[1])):
        group = frozenset(members)
        # equal closed rows already force mutual observation inside a group
        assert all(g.has_edge(a, b) for a in group for b in group if a != b)
        groups.append(group)
        outside.append(row - group)
    return InformationPartition(tuple(groups), tuple(outside))


def reciprocal_subgraph(g: ConstraintGraph) -> ConstraintGraph:
    return ConstraintGraph(g.n, frozenset(e for e in g.edges if (e[1], e[0]) in g.edges))


# -- cliques ------------------------------------------------------------------

@dataclass(frozen=True)
class CliqueSystem:
    n: int
    cliques: tuple[frozenset[int], ...]

    @property
    def incidence(self) -> list[list[int]]:
        """Q with Q[k][j-1] = 1 iff node j is in clique k."""
        return [[1 if v in c else 0 for v in range(1, self.n + 1)] for c in self.cliques]


def _canonical(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted(sets, key=lambda s: (sorted(s), len(s))))


def maximal_cliques(g: ConstraintGraph) -> CliqueSystem:
    """Bron-Kerbosch with Tomita pivoting on the symmetrized adjacency."""
    adj = g.adjacency()
    found = []

    def expand(r: frozenset, p: set, x: set):
        if not p and not x:
            found.append(r)
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), -u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    expand(frozenset(), set(g.nodes), set())
    return CliqueSystem(g.n, _canonical(found))


def all_cliques(g: ConstraintGraph) -> CliqueSystem:
    """Every nonempty clique, singletons included."""
    adj = g.adjacency()
    found = []

    def grow(clique: frozenset, candidates: list[int]):
        for k, v in enumerate(candidates):
            c = clique | {v}
            found.append(c)
            grow(c, [u for u in candidates[k + 1:] if u in adj[v]])

    grow(frozenset(), list(g.nodes))
    return CliqueSystem(g.n, _canonical(found))


def clique_census(g: ConstraintGraph) -> dict[int, int]:
    """Number of cliques (all of them, not only maximal) by size."""
    return dict(sorted(Counter(len(c) for c in all_cliques(g).cliques).items()))


# -- independence -------------------------------------------------------------

def _bitmask_adjacency(g: ConstraintGraph) -> list[int]:
    adj = [0] * g.n
    for j, i in g.edges:
        adj[j - 1] |= 1 << (i - 1)
        adj[i - 1] |= 1 << (j - 1)
    return adj


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def independence_number(g: ConstraintGraph, limit: int = DEFAULT_ALPHA_LIMIT) -> tuple[int, frozenset[int]]:
    """Maximum independent set by branch and bound.

    Lower bound from a min-degree greedy pass; the pruning bound is the size
    of a greedy clique cover of the remaining candidates.
    """
    if g.n > limit:
        raise SizeLimitError(f"independence number capped at n={limit}, got n={g.n}")
    adj = _bitmask_adjacency(g)
    everyone = (1 << g.n) - 1

    def greedy(cand: int) -> int:
        chosen = 0
        while cand:
            v = min(_bits(cand), key=lambda u: (bin(adj[u] & cand).count("1"), u))
            chosen |= 1 << v
            cand &= ~(adj[v] | 1 << v)
        return chosen

    def cover_bound(cand: int) -> int:
        count = 0
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique = 1 << v
            rest = cand & adj[v]
            while rest:
                u = (rest & -rest).bit_length() - 1
                clique |= 1 << u
                rest &= adj[u]
            cand &= ~clique
            count += 1
        return count

    best_mask = greedy(everyone)
    best = bin(best_mask).count("1")

    def search(cand: int, chosen: int, size: int):
        nonlocal best, best_mask
        if not cand:
            if size > best:
                best, best_mask = size, chosen
            return
        if size + bin(cand).count("1") <= best or size + cover_bound(cand) <= best:
            return
        v = max(_bits(cand), key=lambda u: (bin(adj[u] & cand).count("1"), -u))
        if not adj[v] & cand:
            search(0, chosen | cand, size + bin(cand).count("1"))
            return
        search(cand & ~(adj[v] | 1 << v), chosen | 1 << v, size + 1)
        search(cand & ~(1 << v), chosen, size)

    search(everyone, 0, 0)
    return best, frozenset(v + 1 for v in _bits(best_mask))


def is_independent(g: ConstraintGraph, nodes: Iterable[int]) -> bool:
    nodes = sorted(nodes)
    return not any(g.adjacent(a, b) for k, a in enumerate(nodes) for b in nodes[k + 1:])


def is_clique(g: ConstraintGraph, nodes: Iterable[int]) -> bool:
    nodes = sorted(nodes)
    return all(g.adjacent(a, b) for k, a in enumerate(nodes) for b in nodes[k + 1:])


# -- fractional graph theory --------------------------------------------------

class FractionalSolution(NamedTuple):
    value: Fraction
    weights: tuple[Fraction, ...]
    cliques: tuple[frozenset[int], ...]


def _clique_rows(g: ConstraintGraph, constraints: str) -> CliqueSystem:
    if constraints == "maximal":
        return maximal_cliques(g)
    if constraints == "all":
        return all_cliques(g)
    raise ValueError(f"constraints must be 'maximal' or 'all', got {constraints!r}")


def fractional_independence(g: ConstraintGraph, constraints: str = "maximal") -> FractionalSolution:
    """alpha*(G) = max sum(z) s.t. Qz <= 1, z >= 0; ``weights`` is z by node."""
    system = _clique_rows(g, constraints)
    if g.n == 0:
        return FractionalSolution(Fraction(0), (), system.cliques)
    Q = system.incidence
    sol = lp.maximize([1] * g.n, Q, [1] * len(Q))
    return FractionalSolution(sol.value, sol.x, system.cliques)


def fractional_clique_cover(g: ConstraintGraph, constraints: str = "maximal") -> FractionalSolution:
    """k*(G) = min sum(y) s.t. Q^T y >= 1, y >= 0; ``weights`` is y by clique.

    Solved as its own LP (phase one needed), not read off the primal tableau,
    so the duality check against ``fractional_independence`` is meaningful.
    """
    system = _clique_rows(g, constraints)
    if g.n == 0:
        return FractionalSolution(Fraction(0), (), system.cliques)
    Q = system.incidence
    # -Q^T y <= -1
    A = [[-Q[k][v] for k in range(len(Q))] for v in range(g.n)]
    sol = lp.minimize([1] * len(Q), A, [-1] * g.n)
    return FractionalSolution(sol.value, sol.x, system.cliques)


def check_packing(g: ConstraintGraph, sol: FractionalSolution) -> bool:
    """z >= 0 and every clique row sums to at most 1, exactly."""
    return all(w >= 0 for w in sol.weights) and all(
        sum(sol.weights[v - 1] for v in c) <= 1 for c in sol.cliques
    )


def check_cover(g: ConstraintGraph, sol: FractionalSolution) -> bool:
    """y >= 0 and every node is covered with total weight at least 1, exactly."""
    if any(w < 0 for w in sol.weights):
        return False
    return all(
        sum(w for w, c in zip(sol.weights, sol.cliques) if v in c) >= 1 for v in g.nodes
    )


def clique_cover_number(g: ConstraintGraph, limit: int = DEFAULT_COVER_LIMIT) -> tuple[int, tuple[frozenset[int], ...]]:
    """Minimum partition of the nodes into cliques, by exhaustive search."""
    if g.n > limit:
        raise SizeLimitError(f"clique cover number capped at n={limit}, got n={g.n}")
    if g.n == 0:
        return 0, ()
    adj = g.adjacency()
    best: list = [g.n + 1, None]

    def place(v: int, blocks: list[set[int]]):
        if len(blocks) >= best[0]:
            return
        if v > g.n:
            best[0] = len(blocks)
            best[1] = [set(b) for b in blocks]
            return
        for b in blocks:
            if b <= adj[v]:
                b.add(v)
                place(v + 1, blocks)
                b.discard(v)
        blocks.append({v})
        place(v + 1, blocks)
        blocks.pop()

    place(1, [])
    return best[0], _canonical(frozenset(b) for b in best[1])
