"""Finite abelian groups written additively.

Elements are plain tuples of residues.  :class:`AbelianGroup` is the
product Z/m1 x ... x Z/mr; :class:`QuotientGroup` realizes G/<k> on
canonical coset representatives (the lexicographically smallest member of
each coset), so its elements are again tuples of the source group and
quotients can be stacked.

Every group enumerates its elements in lexicographic order and exposes
``index``/``element`` to move between tuples and dense integer labels;
the solver and strategy code work on the integer labels.
"""

from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupTooLarge, PreconditionError, ZeroK

Element = tuple[int, ...]

DEFAULT_ELEMENT_LIMIT = 10**6


class FiniteAbelianGroup:
    """Common interface; subclasses define ``order``, ``elements`` and ``add``."""

    order: int

    @property
    def zero(self) -> Element:
        raise NotImplementedError

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        raise NotImplementedError

    def add(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def neg(self, a: Element) -> Element:
        raise NotImplementedError

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def index(self, g: Element) -> int:
        return self._index[g]

    def element(self, i: int) -> Element:
        return self.elements[i]

    def __contains__(self, g: object) -> bool:
        return g in self._index

    def coerce(self, g: Element | Sequence[int] | int) -> Element:
        """Normalize user input (an int is accepted for one-coordinate groups)."""
        if isinstance(g, (int, np.integer)):
            g = (int(g),)
        t = tuple(int(x) for x in g)
        if t not in self._index:
            raise PreconditionError(f"{t} is not an element of {self}")
        return t

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def mul(self, m: int, a: Element) -> Element:
        """m*a for an integer m >= 0 by doubling."""
        result = self.zero
        base = a
        while m > 0:
            if m & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            m >>= 1
        return result

    @cached_property
    def add_table(self) -> np.ndarray:
        """Dense (n, n) table of element indices; only built on demand."""
        n = self.order
        els = self.elements
        table = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(els):
            for j in range(i, n):
                v = self._index[self.add(a, els[j])]
                table[i, j] = v
                table[j, i] = v
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self._index[self.neg(g)] for g in self.elements], dtype=np.int32)


class AbelianGroup(FiniteAbelianGroup):
    """Z/m1 x ... x Z/mr with lexicographic element order."""

    def __init__(self, factors: Sequence[int], *, limit: int = DEFAULT_ELEMENT_LIMIT):
        factors = tuple(int(m) for m in factors)
        if not factors:
            raise PreconditionError("at least one factor is required")
        if any(m < 1 for m in factors):
            raise PreconditionError(f"factors must be >= 1, got {factors}")
        order = math.prod(factors)
        if order > limit:
            raise GroupTooLarge(f"group order {order} exceeds element limit {limit}")
        self.factors = factors
        self.order = order
        strides = []
        acc = 1
        for m in reversed(factors):
            strides.append(acc)
            acc *= m
        self._strides = tuple(reversed(strides))

    def __repr__(self) -> str:
        return "AbelianGroup(" + " x ".join(f"Z/{m}" for m in self.factors) + ")"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AbelianGroup) and other.factors == self.factors

    def __hash__(self) -> int:
        return hash(("AbelianGroup", self.factors))

    @property
    def zero(self) -> Element:
        return (0,) * len(self.factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        import itertools

        return tuple(itertools.product(*(range(m) for m in self.factors)))

    def index(self, g: Element) -> int:
        return sum(c * s for c, s in zip(g, self._strides))

    def __contains__(self, g: object) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == len(self.factors)
            and all(isinstance(c, (int, np.integer)) and 0 <= c < m for c, m in zip(g, self.factors))
        )

    def coerce(self, g: Element | Sequence[int] | int) -> Element:
        if isinstance(g, (int, np.integer)):
            g = (int(g),)
        t = tuple(int(x) for x in g)
        if t not in self:
            raise PreconditionError(f"{t} is not an element of {self}")
        return t

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % m for x, m in zip(a, self.factors))

    def mul(self, m: int, a: Element) -> Element:
        return tuple((m * x) % f for x, f in zip(a, self.factors))

    @cached_property
    def add_table(self) -> np.ndarray:
        coords = np.array(self.elements, dtype=np.int64).reshape(self.order, len(self.factors))
        mods = np.array(self.factors, dtype=np.int64)
        strides = np.array(self._strides, dtype=np.int64)
        summed = (coords[:, None, :] + coords[None, :, :]) % mods
        return (summed @ strides).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        coords = np.array(self.elements, dtype=np.int64).reshape(self.order, len(self.factors))
        mods = np.array(self.factors, dtype=np.int64)
        return (((-coords) % mods) @ np.array(self._strides, dtype=np.int64)).astype(np.int32)


class QuotientGroup(FiniteAbelianGroup):
    """G/<k> on lexicographically smallest coset representatives."""

    def __init__(self, source: FiniteAbelianGroup, k: Element):
        self.source = source
        self.kernel_generator = k
        subgroup = cyclic_subgroup(source, k)
        rep: dict[Element, Element] = {}
        for g in source.elements:
            if g in rep:
                continue
            coset = [source.add(g, h) for h in subgroup]
            r = min(coset)
            for x in coset:
                rep[x] = r
        self._rep = rep
        self._elements = tuple(sorted(set(rep.values())))
        self.order = len(self._elements)

    def __repr__(self) -> str:
        return f"QuotientGroup({self.source!r} / <{self.kernel_generator}>)"

    @property
    def zero(self) -> Element:
        return self._rep[self.source.zero]

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return self._elements

    def project(self, g: Element) -> Element:
        return self._rep[g]

    def add(self, a: Element, b: Element) -> Element:
        return self._rep[self.source.add(a, b)]

    def neg(self, a: Element) -> Element:
        return self._rep[self.source.neg(a)]


class QuotientMap:
    """The canonical projection source -> source/<k>."""

    def __init__(self, source: FiniteAbelianGroup, kernel_generator: Element):
        self.source = source
        self.kernel_generator = kernel_generator
        self.target = QuotientGroup(source, kernel_generator)

    def __call__(self, g: Element) -> Element:
        return self.target.project(g)

    @property
    def projection(self) -> dict[Element, Element]:
        return dict(self.target._rep)

    def __repr__(self) -> str:
        return f"QuotientMap({self.source!r} -> {self.target.order} cosets of <{self.kernel_generator}>)"


def construct_group(factors: Sequence[int], *, limit: int = DEFAULT_ELEMENT_LIMIT) -> AbelianGroup:
    return AbelianGroup(factors, limit=limit)


def element_order(G: FiniteAbelianGroup, g: Element) -> int:
    if isinstance(G, AbelianGroup):
        d = 1
        for c, m in zip(g, G.factors):
            d = math.lcm(d, m // math.gcd(c, m))
        return d
    d, x = 1, g
    while x != G.zero:
        x = G.add(x, g)
        d += 1
    return d


def cyclic_subgroup(G: FiniteAbelianGroup, k: Element) -> tuple[Element, ...]:
    """Multiples 0, k, 2k, ... in generation order (so position = discrete log)."""
    out = [G.zero]
    x = k
    while x != G.zero:
        out.append(x)
        x = G.add(x, k)
    return tuple(out)


def discrete_log(G: FiniteAbelianGroup, k: Element, x: Element) -> int | None:
    """Smallest gamma >= 0 with gamma*k == x, or None when x is outside <k>."""
    for gamma, y in enumerate(cyclic_subgroup(G, k)):
        if y == x:
            return gamma
    return None


def quotient_by_cyclic(G: FiniteAbelianGroup, k: Element) -> QuotientMap:
    if k == G.zero:
        raise ZeroK("quotient by the trivial subgroup is not supported")
    return QuotientMap(G, k)


def generated_subgroup(G: FiniteAbelianGroup, S: Iterable[Element]) -> set[Element]:
    gens = list(S)
    seen = {G.zero}
    queue = deque([G.zero])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G.add(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_generating(G: FiniteAbelianGroup, S: Iterable[Element]) -> bool:
    return len(generated_subgroup(G, S)) == G.order


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        return n
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and smallest_prime_factor(n) == n
