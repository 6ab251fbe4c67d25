"""Weighted-coverage welfare functions over a finite ground set.

A welfare function here is ``f(A) = sum of weights of the cells covered by
at least one element of A``.  Every such function with nonnegative weights is
normalized, nondecreasing and submodular, which is exactly the first
condition a valid utility game places on its welfare.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .errors import InputError, SizeLimitError

DEFAULT_PROPERTY_LIMIT = 16


def to_fraction(value) -> Fraction:
    """Parse an exact rational from int, Fraction or a ``"p/q"`` string.

    Floats are rejected: every quantity in the package is exact.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not a rational (floats are not accepted): {value!r}")


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[str, ...]
    cells: tuple[str, ...]
    membership: Mapping[str, frozenset[str]]
    cell_weight: Mapping[str, Fraction]
    _element_mask: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InputError("duplicate element identifiers")
        if len(set(self.cells)) != len(self.cells):
            raise InputError("duplicate cell identifiers")
        cell_index = {c: k for k, c in enumerate(self.cells)}
        for c in self.cells:
            if c not in self.cell_weight:
                raise InputError(f"cell {c!r} has no weight")
            if self.cell_weight[c] < 0:
                raise InputError(f"cell {c!r} has negative weight")
        masks = {}
        for e in self.elements:
            covered = self.membership.get(e)
            if not covered:
                raise InputError(f"element {e!r} covers no cell")
            mask = 0
            for c in covered:
                if c not in cell_index:
                    raise InputError(f"element {e!r} references unknown cell {c!r}")
                mask |= 1 << cell_index[c]
            masks[e] = mask
        object.__setattr__(self, "_element_mask", masks)

    @classmethod
    def build(cls, membership: Mapping[str, Iterable[str]], weights: Mapping[str, object]) -> "GroundSet":
        """Convenience constructor; element and cell order follow the mappings."""
        return cls(
            elements=tuple(membership),
            cells=tuple(weights),
            membership={e: frozenset(cs) for e, cs in membership.items()},
            cell_weight={c: to_fraction(w) for c, w in weights.items()},
        )

    def element_mask(self, element: str) -> int:
        try:
            return self._element_mask[element]
        except KeyError:
            raise InputError(f"unknown element {element!r}") from None


class SetFunction(Protocol):
    """Anything exposing a ground set and an exact set-function oracle."""

    elements: Sequence[str]

    def evaluate(self, subset: Iterable[str]) -> Fraction: ...


class CoverageWelfare:
    """f(A) = total weight of the cells covered by A."""

    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._weights = [ground.cell_weight[c] for c in ground.cells]
        self._cache: dict[int, Fraction] = {0: Fraction(0)}

    @property
    def elements(self) -> tuple[str, ...]:
        return self.ground.elements

    def __repr__(self):
        return f"CoverageWelfare({len(self.ground.elements)} elements, {len(self.ground.cells)} cells)"

    def cell_mask(self, subset: Iterable[str]) -> int:
        mask = 0
        for e in subset:
            mask |= self.ground.element_mask(e)
        return mask

    def value_of_mask(self, mask: int) -> Fraction:
        """Weight of a cell bitmask (memoized; cell masks come from ``cell_mask``)."""
        v = self._cache.get(mask)
        if v is None:
            v = Fraction(0)
            k = 0
            m = mask
            while m:
                if m & 1:
                    v += self._weights[k]
                m >>= 1
                k += 1
            self._cache[mask] = v
        return v

    def evaluate(self, subset: Iterable[str]) -> Fraction:
        return self.value_of_mask(self.cell_mask(subset))

    def marginal_gain(self, added: Iterable[str], base: Iterable[str]) -> Fraction:
        base_mask = self.cell_mask(base)
        return self.value_of_mask(base_mask | self.cell_mask(added)) - self.value_of_mask(base_mask)

    __call__ = evaluate


def evaluate(f: SetFunction, subset: Iterable[str]) -> Fraction:
    return f.evaluate(subset)


def marginal_gain(f: SetFunction, added: Iterable[str], base: Iterable[str]) -> Fraction:
    """Delta(added | base) = f(added U base) - f(base)."""
    if isinstance(f, CoverageWelfare):
        return f.marginal_gain(added, base)
    base = frozenset(base)
    return f.evaluate(base | frozenset(added)) - f.evaluate(base)


@dataclass(frozen=True)
class PropertyVerdict:
    normalized: bool
    monotone: bool
    submodular: bool
    # name -> witness; monotone: (A, B) with f(A) > f(B); submodular: (A, B, s)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.normalized and self.monotone and self.submodular


def _value_table(f: SetFunction, elements: Sequence[str]) -> list[Fraction]:
    m = len(elements)
    if isinstance(f, CoverageWelfare):
        emasks = [f.ground.element_mask(e) for e in elements]
        cells = [0] * (1 << m)
        for a in range(1, 1 << m):
            low = a & -a
            cells[a] = cells[a ^ low] | emasks[low.bit_length() - 1]
        return [f.value_of_mask(c) for c in cells]
    return [
        Fraction(f.evaluate(frozenset(elements[k] for k in range(m) if a >> k & 1)))
        for a in range(1 << m)
    ]


def _as_integer_array(values: list[Fraction]) -> np.ndarray:
    scale = reduce(lcm, (v.denominator for v in values), 1)
    ints = [v.numerator * (scale // v.denominator) for v in values]
    if max(map(abs, ints), default=0) < 2**60:
        return np.array(ints, dtype=np.int64)
    return np.array(ints, dtype=object)


def check_properties(f: SetFunction, limit: int = DEFAULT_PROPERTY_LIMIT) -> PropertyVerdict:
    """Exhaustively certify normalization, monotonicity and submodularity.

    Monotonicity is checked on single-element extensions and submodularity on
    the equivalent local form f(A+s) - f(A) >= f(A+t+s) - f(A+t); both imply the
    general statements by chaining.  Witnesses are the first violation in
    bitmask order of A, expressed as frozensets of element identifiers.
    """
    elements = tuple(f.elements)
    m = len(elements)
    if m > limit:
        raise SizeLimitError(f"ground set has {m} elements; exhaustive limit is {limit}")
    vals = _as_integer_array(_value_table(f, elements))
    idx = np.arange(1 << m, dtype=np.int64)

    def subset(mask) -> frozenset[str]:
        return frozenset(elements[k] for k in range(m) if int(mask) >> k & 1)

    witnesses = {}
    normalized = vals[0] == 0
    if not normalized:
        witnesses["normalized"] = (frozenset(),)

    mono_bad = []
    for s in range(m):
        bit = 1 << s
        a = idx[(idx & bit) == 0]
        bad = a[(vals[a] > vals[a | bit]).astype(bool)]
        if bad.size:
            mono_bad.append((int(bad[0]), s))
    if mono_bad:
        a, s = min(mono_bad)
        witnesses["monotone"] = (subset(a), subset(a | 1 << s))

    sub_bad = []
    for s in range(m):
        for t in range(m):
            if s == t:
                continue
            bs, bt = 1 << s, 1 << t
            a = idx[(idx & (bs | bt)) == 0]
            lhs = vals[a | bs] - vals[a]
            rhs = vals[a | bs | bt] - vals[a | bt]
            bad = a[(lhs < rhs).astype(bool)]
            if bad.size:
                sub_bad.append((int(bad[0]), s, t))
    if sub_bad:
        a, s, t = min(sub_bad)
        witnesses["submodular"] = (subset(a), subset(a | 1 << t), elements[s])

    return PropertyVerdict(
        normalized=bool(normalized),
        monotone=not mono_bad,
        submodular=not sub_bad,
        witnesses=witnesses,
    )
