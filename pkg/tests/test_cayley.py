from __future__ import annotations

import json

import pytest

from copnum.cayley import (
    BoundaryClass,
    GeneralGraph,
    build_instance,
    cayley_as_general,
    classify_boundary,
    distances_to,
    export_graph,
    instance_from_json,
    instance_to_json,
    load_graph,
    out_neighbors,
)
from copnum.constructions import build_sidon
from copnum.errors import EmptyS, NonGenerating, PreconditionError, TNotSubset, UnknownFormat
from copnum.groups import construct_group

from oracles import bfs_dist, multiplicative_partitions, random_generating_sets

Z5 = construct_group([5])


def cycle5():
    return build_instance(Z5, [1, 4], [1, 4])


def test_build_instance_examples():
    c = cycle5()
    assert not c.directed and c.S == ((1,), (4,))
    d = build_sidon(5, "directed_quadratic")
    assert d.directed
    with pytest.raises(NonGenerating):
        build_instance(construct_group([4]), [2], [2])


def test_build_instance_errors_and_normalization():
    with pytest.raises(EmptyS):
        build_instance(Z5, [0])
    with pytest.raises(TNotSubset):
        build_instance(Z5, [1, 4], [2])
    with pytest.raises(PreconditionError):
        build_instance(Z5, [1, 4], directed_hint=True)
    inst = build_instance(Z5, [0, 1, 4])
    assert inst.S == ((1,), (4,)) and inst.T == inst.S
    # the trivial group is generated by nothing
    assert build_instance(construct_group([1]), []).n == 1


def test_classify_examples():
    assert classify_boundary(build_instance(Z5, [1, 4], [])) is BoundaryClass.EMPTY_T
    Z7 = construct_group([7])
    assert classify_boundary(build_instance(Z7, range(1, 7))) is BoundaryClass.COMPLETE_GRAPH
    assert classify_boundary(cycle5()) is BoundaryClass.INVERSE_PAIR
    assert classify_boundary(build_instance(Z7, [1, 6, 2, 5], [2])) is BoundaryClass.SINGLETON_T
    assert classify_boundary(build_instance(Z7, [1, 6, 2, 5])) is BoundaryClass.NOT_BOUNDARY
    # a directed singleton is not a boundary value
    assert classify_boundary(build_instance(Z7, [1, 2], [1])) is BoundaryClass.NOT_BOUNDARY


def test_tiny_group_is_shadowed_by_complete_graph():
    inst = build_instance(construct_group([2]), [1])
    assert classify_boundary(inst) is BoundaryClass.COMPLETE_GRAPH


def test_out_neighbors_examples():
    assert out_neighbors(cycle5(), (0,), "cop") == {(0,), (1,), (4,)}
    d = build_sidon(5, "directed_quadratic")
    nb = out_neighbors(d, (0, 0), "cop")
    # S2 has p = 5 points, one of them the identity, so 4 moves plus the stay
    assert nb == {(0, 0), (1, 1), (2, 4), (3, 4), (4, 1)}
    assert len(nb) == 5
    assert out_neighbors(build_instance(Z5, [1, 4], []), (3,), "robber") == {(3,)}


def _instances():
    out = []
    for n in range(2, 41):
        for f in multiplicative_partitions(n):
            for S, T in random_generating_sets(f, 3, seed=n):
                out.append(build_instance(construct_group(f), S, T))
    return out


INSTANCES = _instances()


def test_properties_on_many_instances():
    for inst in INSTANCES:
        G = inst.group
        for v in G.elements:
            nb = out_neighbors(inst, v, "cop")
            assert len(nb) == inst.s + 1
            if not inst.directed:
                for u in nb:
                    assert v in out_neighbors(inst, u, "cop")
        kind = classify_boundary(inst)
        if kind is BoundaryClass.NOT_BOUNDARY:
            assert inst.t >= 1 and inst.s < inst.n - 1 and inst.n >= 3
            # a directed |T| = 1 instance is recursed on, not a boundary value
            assert inst.t >= 2 or inst.directed
            if not inst.directed:
                assert not (inst.t == 2 and G.neg(inst.T[0]) == inst.T[1])
        if inst.directed:
            assert kind not in (BoundaryClass.INVERSE_PAIR, BoundaryClass.SINGLETON_T)


def test_distances_against_bfs():
    for inst in INSTANCES[::7]:
        G = inst.group
        dist = distances_to(inst, [G.zero])
        factors = G.factors
        for v in G.elements:
            assert dist[v] == bfs_dist(factors, inst.S, v)[G.zero]


def test_export_dot():
    dot = export_graph(cycle5(), "dot").decode()
    assert dot.count("--") == 5
    assert dot.count(";") == 1 + 5 + 5  # graph attribute, nodes, edges
    assert "reflexive=true" in dot
    assert export_graph(cycle5(), "dot") == export_graph(cycle5(), "dot")
    d = export_graph(build_sidon(5, "directed_quadratic"), "dot").decode()
    assert d.startswith("digraph") and d.count("->") == 25 * 4
    with pytest.raises(UnknownFormat):
        export_graph(cycle5(), "png")


def test_json_round_trip():
    for inst in INSTANCES[::5] + [build_sidon(7, "undirected_cubic")]:
        text = export_graph(inst, "json")
        back = instance_from_json(text)
        assert back == inst
        assert export_graph(back, "json") == text
        assert set(json.loads(text)) == {"factors", "S", "T"}


def test_general_graph_round_trip_and_loader():
    g = cayley_as_general(cycle5())
    assert g.is_strongly_connected()
    again = GeneralGraph.from_json(g.to_json())
    assert again.vertices == g.vertices and again.arcs == g.arcs
    assert isinstance(load_graph(g.to_json()), GeneralGraph)
    assert load_graph(instance_to_json(cycle5())) == cycle5()
    with pytest.raises(UnknownFormat):
        load_graph("{}")
    one_way = GeneralGraph((0, 1), ((0, 1),))
    assert not one_way.is_strongly_connected()
