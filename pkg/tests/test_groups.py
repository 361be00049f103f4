from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copnum.errors import GroupTooLarge, PreconditionError, ZeroK
from copnum.groups import (
    AbelianGroup,
    QuotientGroup,
    construct_group,
    cyclic_subgroup,
    discrete_log,
    element_order,
    generated_subgroup,
    is_generating,
    is_prime,
    quotient_by_cyclic,
    smallest_prime_factor,
)

from oracles import add, all_elements, multiplicative_partitions, neg

SMALL_GROUPS = [f for n in range(2, 101) for f in multiplicative_partitions(n)]


def test_construct_group_basic():
    G = construct_group([6, 4])
    assert G.order == 24
    assert G.zero == (0, 0)
    assert len(set(G.elements)) == 24
    assert list(G.elements) == all_elements((6, 4))


def test_trivial_and_bad_factors():
    assert construct_group([1]).order == 1
    with pytest.raises(PreconditionError):
        construct_group([0])
    with pytest.raises(GroupTooLarge):
        construct_group([1000, 1000, 10])


def test_element_order_examples():
    G = construct_group([6, 4])
    assert element_order(G, (2, 1)) == 12
    assert element_order(G, (3, 2)) == 2
    assert element_order(G, (0, 0)) == 1


def test_cyclic_subgroup_and_log():
    G = construct_group([6, 4])
    H = cyclic_subgroup(G, (2, 1))
    assert len(H) == 12 and H[0] == (0, 0) and H[1] == (2, 1)
    for i, x in enumerate(H):
        assert discrete_log(G, (2, 1), x) == i
    assert discrete_log(G, (2, 1), (1, 0)) is None


def test_quotient_examples():
    G = construct_group([5, 5])
    q = quotient_by_cyclic(G, (1, 1))
    assert q.target.order == 5
    assert q((2, 2)) == q.target.zero
    assert q((1, 0)) != q((0, 1))
    with pytest.raises(ZeroK):
        quotient_by_cyclic(G, (0, 0))


def test_stacked_quotient():
    G = construct_group([4, 6])
    q1 = quotient_by_cyclic(G, (2, 0))
    Q = q1.target
    assert isinstance(Q, QuotientGroup) and Q.order == 12
    q2 = quotient_by_cyclic(Q, Q.coerce(q1((0, 1))))
    assert q2.target.order == 2
    for x in G.elements:
        for y in G.elements:
            assert q2(q1(G.add(x, y))) == q2.target.add(q2(q1(x)), q2(q1(y)))


def test_generation():
    assert is_generating(construct_group([5]), [(1,)])
    assert not is_generating(construct_group([4]), [(2,)])
    assert generated_subgroup(construct_group([4]), [(2,)]) == {(0,), (2,)}


def test_primes():
    assert [n for n in range(2, 40) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    assert smallest_prime_factor(49) == 7
    assert smallest_prime_factor(36) == 2
    assert smallest_prime_factor(45) == 3


@pytest.mark.parametrize("factors", SMALL_GROUPS, ids=lambda f: "x".join(map(str, f)))
def test_tables_match_tuple_arithmetic(factors):
    G = construct_group(factors)
    elems = G.elements
    A = G.add_table
    N = G.neg_table
    for i, x in enumerate(elems):
        assert elems[N[i]] == neg(factors, x)
        for j in range(0, len(elems), max(1, len(elems) // 13)):
            assert elems[A[i, j]] == add(factors, x, elems[j])


@pytest.mark.parametrize("factors", SMALL_GROUPS, ids=lambda f: "x".join(map(str, f)))
def test_quotient_homomorphism_exhaustive(factors):
    """projection(x+y) = projection(x)+projection(y) for every x, y and one k per group."""
    G = construct_group(factors)
    # the largest-order element keeps the quotient small, the last element is usually different
    ks = {max(G.elements[1:], key=lambda g: (element_order(G, g), g)), G.elements[-1]}
    for k in ks:
        q = quotient_by_cyclic(G, k)
        H = set(cyclic_subgroup(G, k))
        assert q.target.order * element_order(G, k) == G.order
        proj = {x: q(x) for x in G.elements}
        for x in G.elements:
            for y in G.elements:
                assert proj[G.add(x, y)] == q.target.add(proj[x], proj[y])
                assert (proj[x] == proj[y]) == (G.sub(x, y) in H)


group_and_elements = st.sampled_from(SMALL_GROUPS).flatmap(
    lambda f: st.tuples(
        st.just(f),
        *[st.tuples(*[st.integers(0, m - 1) for m in f]) for _ in range(3)],
    )
)


@settings(max_examples=300, deadline=None)
@given(group_and_elements)
def test_group_axioms(data):
    f, a, b, c = data
    G = construct_group(f)
    assert G.add(a, G.zero) == a
    assert G.add(a, G.neg(a)) == G.zero
    assert G.add(a, b) == G.add(b, a)
    assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))
    assert G.mul(element_order(G, a), a) == G.zero
    assert math.lcm(*f) % element_order(G, a) == 0


@settings(max_examples=200, deadline=None)
@given(group_and_elements)
def test_quotient_order_and_reps(data):
    f, k, x, _ = data
    G = construct_group(f)
    if k == G.zero:
        return
    q = quotient_by_cyclic(G, k)
    assert q.target.order == G.order // element_order(G, k)
    rep = q(x)
    # the representative is the smallest member of the coset
    coset = sorted(G.add(x, h) for h in cyclic_subgroup(G, k))
    assert tuple(rep) == coset[0]
