"""Sidon-type generating sets over (Z/p)^2 with cop number of order sqrt(n).

S1 = {(x, x^3)} is symmetric; S2 = {(x, x^2)} is not.  A cop at
difference (a, b) from the robber can answer at most two robber moves of
S1 and at most one of S2, which forces ceil(p/2) and p cops respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cayley import GameInstance, GeneralGraph, build_instance
from .errors import NotPrime, PTooSmall, SizeMismatch, ZeroDifference
from .groups import AbelianGroup, is_prime

Kind = Literal["undirected_cubic", "directed_quadratic"]
EXPONENT = {"undirected_cubic": 3, "directed_quadratic": 2}
# cops needed, from the guard counts
CLAIMED = {"undirected_cubic": lambda p: math.ceil(p / 2), "directed_quadratic": lambda p: p}


@dataclass(frozen=True)
class ConstructionSpec:
    p: int
    kind: str

    @property
    def claimed_cop_number(self) -> int:
        return CLAIMED[self.kind](self.p)


def _check_p(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p <= 3:
        raise PTooSmall(f"p must exceed 3, got {p}")


def sidon_set(p: int, kind: Kind) -> list[tuple[int, int]]:
    """All p points (x, x^e), the identity included."""
    _check_p(p)
    e = EXPONENT[kind]
    return [(x, pow(x, e, p)) for x in range(p)]


def build_sidon(p: int, kind: Kind) -> GameInstance:
    S = sidon_set(p, kind)
    inst = build_instance(AbelianGroup([p, p]), S, S)
    assert inst.directed == (kind == "directed_quadratic")
    return inst


def guard_count(p: int, kind: Kind, a: int, b: int) -> int:
    """Number of x in Z/p solving the guard equation for a cop at difference (a, b)."""
    _check_p(p)
    a, b = a % p, b % p
    if a == 0 and b == 0:
        raise ZeroDifference("(a, b) = (0, 0) means the robber is already caught")
    x = np.arange(p, dtype=np.int64)
    if kind == "undirected_cubic":
        lhs = (a**3 - 3 * a * a * x + 3 * a * x * x) % p
    else:
        lhs = (a * a - 2 * a * x) % p
    return int(np.count_nonzero(lhs == b))


def guard_count_table(p: int, kind: Kind) -> np.ndarray:
    """(p, p) array of guard counts; entry [0, 0] is left at 0."""
    _check_p(p)
    a = np.arange(p, dtype=np.int64)[:, None, None]
    b = np.arange(p, dtype=np.int64)[None, :, None]
    x = np.arange(p, dtype=np.int64)[None, None, :]
    if kind == "undirected_cubic":
        lhs = (a**3 - 3 * a * a * x + 3 * a * x * x) % p
    else:
        lhs = (a * a - 2 * a * x) % p
    table = (lhs == b).sum(axis=2)
    table[0, 0] = 0
    return table


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(lo, hi + 1) if is_prime(q)]


@dataclass
class GuardBoundRow:
    p: int
    max_undirected: int
    max_directed: int
    lower_bound_undirected: int
    lower_bound_directed: int

    @property
    def ok(self) -> bool:
        return self.max_undirected == 2 and self.max_directed == 1


@dataclass
class GuardBoundReport:
    p_max: int
    rows: list[GuardBoundRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.ok for r in self.rows)


def verify_guard_bounds(p_max: int) -> GuardBoundReport:
    """Exhaustive check that one cop guards <= 2 (S1) or <= 1 (S2) robber moves.

    A row is ``ok`` only when the maxima are attained exactly, so the
    bounds are tight for every prime tested.
    """
    if p_max < 5:
        raise PTooSmall("p_max must be >= 5")
    report = GuardBoundReport(p_max)
    for p in primes_between(5, p_max):
        und = guard_count_table(p, "undirected_cubic")
        dire = guard_count_table(p, "directed_quadratic")
        report.rows.append(
            GuardBoundRow(p, int(und.max()), int(dire.max()), math.ceil(p / 2), p)
        )
    return report


def meyniel_extremal(n: int, p: int) -> GeneralGraph:
    """Directed S2 Cayley graph on p^2 vertices plus a two-way path out of (0, 0)."""
    _check_p(p)
    if n < p * p:
        raise SizeMismatch(f"n = {n} is smaller than p^2 = {p * p}")
    inst = build_sidon(p, "directed_quadratic")
    G = inst.group
    vertices: list = list(G.elements)
    arcs = [(i, G.index(G.add(u, s))) for i, u in enumerate(G.elements) for s in inst.S]
    prev = G.index(G.zero)
    for j in range(n - p * p):
        vertices.append(f"path{j + 1}")
        v = len(vertices) - 1
        arcs.append((prev, v))
        arcs.append((v, prev))
        prev = v
    graph = GeneralGraph(tuple(vertices), tuple(arcs), {"p": p, "core": p * p})
    if not graph.is_strongly_connected():
        raise AssertionError("attached graph lost strong connectivity")
    return graph


def largest_prime_square_at_most(n: int) -> int:
    """Largest prime p > 3 with p^2 <= n, by descending scan."""
    p = math.isqrt(n)
    while p > 3:
        if is_prime(p):
            return p
        p -= 1
    raise SizeMismatch(f"no prime p > 3 with p^2 <= {n}")


def contains_core_as_induced(graph: GeneralGraph, inst: GameInstance) -> bool:
    """True when the first |G| vertices induce exactly Cay(G, S)."""
    m = inst.n
    induced = {(u, v) for u, v in graph.arcs if u < m and v < m and u != v}
    G = inst.group
    expected = {(G.index(u), G.index(G.add(u, s))) for u in G.elements for s in inst.S}
    labels_match = tuple(graph.vertices[:m]) == tuple(G.elements)
    return labels_match and induced == expected
