from __future__ import annotations

import itertools

import pytest

from copnum.cayley import classify_boundary
from copnum.constructions import (
    ConstructionSpec,
    build_sidon,
    contains_core_as_induced,
    guard_count,
    guard_count_table,
    largest_prime_square_at_most,
    meyniel_extremal,
    primes_between,
    verify_guard_bounds,
)
from copnum.errors import NotPrime, PTooSmall, SizeMismatch, ZeroDifference
from copnum.groups import is_generating

PRIMES = primes_between(5, 31)


def test_sidon_p5_sets():
    und = build_sidon(5, "undirected_cubic")
    assert set(und.S) == {(1, 1), (2, 3), (3, 2), (4, 4)} and not und.directed
    dire = build_sidon(5, "directed_quadratic")
    assert set(dire.S) == {(1, 1), (2, 4), (3, 4), (4, 1)} and dire.directed
    with pytest.raises(NotPrime):
        build_sidon(4, "undirected_cubic")
    with pytest.raises(PTooSmall):
        build_sidon(3, "undirected_cubic")


@pytest.mark.parametrize("p", PRIMES)
def test_sidon_invariants(p):
    und = build_sidon(p, "undirected_cubic")
    dire = build_sidon(p, "directed_quadratic")
    G = und.group
    assert is_generating(G, und.S) and is_generating(G, dire.S)
    assert und.s == dire.s == p - 1
    assert {G.neg(s) for s in und.S} == set(und.S)
    assert {G.neg(s) for s in dire.S} != set(dire.S)
    # Sidon: all differences of distinct points of S2 (identity included) are distinct
    pts = list(dire.S) + [G.zero]
    diffs = [G.sub(a, b) for a, b in itertools.permutations(pts, 2)]
    assert len(diffs) == len(set(diffs))
    assert classify_boundary(und).value == "NotBoundary"


def test_guard_count_examples():
    assert guard_count(5, "undirected_cubic", 1, 1) == 2
    assert guard_count(5, "directed_quadratic", 2, 1) == 1
    for kind in ("undirected_cubic", "directed_quadratic"):
        for b in range(1, 5):
            assert guard_count(5, kind, 0, b) == 0
    with pytest.raises(ZeroDifference):
        guard_count(5, "undirected_cubic", 0, 0)


def test_guard_count_matches_group_arithmetic():
    """A cop at difference (a, b) guards robber move s when s - (a, b) is a cop step or stay."""
    for p in (5, 7):
        for kind in ("undirected_cubic", "directed_quadratic"):
            inst = build_sidon(p, kind)
            G = inst.group
            allowed = set(inst.S) | {G.zero}
            moves = list(inst.S) + [G.zero]
            for a in range(p):
                for b in range(p):
                    if a == b == 0:
                        continue
                    # robber move x guarded by a cop at -(a, b): x + (a, b) must be a cop step
                    direct = sum(1 for x in moves if G.add(x, (a, b)) in allowed)
                    assert guard_count(p, kind, a, b) == direct


def test_table_agrees_with_scalar():
    t = guard_count_table(7, "undirected_cubic")
    for a in range(7):
        for b in range(7):
            if (a, b) != (0, 0):
                assert t[a, b] == guard_count(7, "undirected_cubic", a, b)


def test_verify_guard_bounds():
    rep = verify_guard_bounds(31)
    assert rep.passed
    assert [r.p for r in rep.rows] == PRIMES
    first = rep.rows[0]
    assert (first.lower_bound_undirected, first.lower_bound_directed) == (3, 5)
    with pytest.raises(PTooSmall):
        verify_guard_bounds(3)


def test_claimed_counts():
    assert ConstructionSpec(5, "undirected_cubic").claimed_cop_number == 3
    assert ConstructionSpec(7, "undirected_cubic").claimed_cop_number == 4
    assert ConstructionSpec(5, "directed_quadratic").claimed_cop_number == 5


def test_meyniel_examples():
    bare = meyniel_extremal(25, 5)
    assert bare.n == 25
    g = meyniel_extremal(30, 5)
    assert g.n == 30 and g.is_strongly_connected()
    assert contains_core_as_induced(g, build_sidon(5, "directed_quadratic"))
    assert g.vertices[25:] == ("path1", "path2", "path3", "path4", "path5")
    with pytest.raises(SizeMismatch):
        meyniel_extremal(20, 5)


def test_largest_prime_square():
    assert largest_prime_square_at_most(30) == 5
    assert largest_prime_square_at_most(49) == 7
    assert largest_prime_square_at_most(120) == 7
    with pytest.raises(SizeMismatch):
        largest_prime_square_at_most(20)
