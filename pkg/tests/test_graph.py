import networkx as nx
import pytest

from conftest import from_nx, to_nx
from suncat.families import SunshineSpec, gen_sunshine
from suncat.graph import (
    CardClass,
    Graph,
    GraphError,
    PreconditionError,
    Recognized,
    VertexClass,
    caterpillar_card_class,
    classify_vertex,
    components,
    cycle_order,
    delete_vertices,
    diameter,
    is_d_leaf,
    non_d_leaves,
    predict_sunshine_card,
    recognize,
    skeleton,
    tau,
)

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(k):
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


C6_LEAF = gen_sunshine(SunshineSpec(6, (1, 0, 0, 0, 0, 0)))


def test_adjacency_is_symmetric_and_loopless():
    g = from_nx(nx.gnp_random_graph(12, 0.3, seed=3))
    for v in range(g.n):
        assert v not in g.adj[v]
        for u in g.adj[v]:
            assert v in g.adj[u] and u < g.n


def test_bad_edges_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])


def test_delete_vertices_examples():
    g, _ = delete_vertices(K3, {2})
    assert g == path(2)
    g, _ = delete_vertices(P3, {1})
    assert g.n == 2 and g.m == 0
    card, _ = delete_vertices(C6_LEAF, {3})
    assert recognize(card) is Recognized.CATERPILLAR
    assert diameter(card) == 4
    assert not any(card.degree(v) == 0 for v in range(card.n))


def test_delete_vertices_relabels_densely():
    g, m = delete_vertices(cycle(6), {0, 3})
    assert sorted(m) == [1, 2, 4, 5] and sorted(m.values()) == [0, 1, 2, 3]
    assert g.m == 2


def test_delete_unknown_vertex():
    with pytest.raises(GraphError):
        delete_vertices(K3, {5})


def test_skeleton_examples():
    assert skeleton(cycle(6))[0] == cycle(6)
    s, _ = skeleton(star(3))
    assert s.n == 1
    cat = Graph.from_edges(6, [(0, 1), (1, 2), (0, 3), (1, 4), (2, 5)])
    s, m = skeleton(cat)
    assert s == path(3) and sorted(m) == [0, 1, 2]


def test_diameter_examples():
    assert diameter(path(4)) == 3
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3)])
    assert diameter(g) == 3
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert diameter(two_triangles) is None


def test_diameter_matches_networkx_on_trees():
    for seed in range(30):
        t = nx.random_labeled_tree(10, seed=seed)
        assert diameter(from_nx(t)) == nx.diameter(t)


def test_tau_examples():
    assert all(tau(cycle(6), v) == 2 for v in range(6))
    assert tau(star(3), 0) == 0
    assert tau(C6_LEAF, 1) == 1


def test_classify_vertex_examples():
    assert classify_vertex(path(2), 0) is VertexClass.LEAF
    assert classify_vertex(star(3), 1) is VertexClass.D_LEAF
    assert classify_vertex(path(5), 0) is VertexClass.PERIPHERAL_LEAF
    assert classify_vertex(Graph.empty(1), 0) is VertexClass.ISOLATED
    assert classify_vertex(path(5), 2) is VertexClass.CUT_SKELETON
    assert classify_vertex(cycle(5), 2) is VertexClass.INTERNAL


def test_d_leaf_needs_component_of_order_three():
    g = Graph.from_edges(5, [(0, 1), (2, 3), (2, 4)])
    assert not is_d_leaf(g, 0)
    assert not is_d_leaf(g, 3)


def test_recognize_examples():
    assert recognize(C6_LEAF) is Recognized.SUNSHINE
    p5 = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7)])
    assert recognize(p5) is Recognized.CATERPILLAR
    spider = Graph.from_edges(10, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8), (8, 9)])
    assert recognize(spider) is Recognized.OTHER
    assert recognize(cycle(5)) is Recognized.SUNSHINE
    assert recognize(Graph.from_edges(4, [(0, 1), (2, 3)])) is Recognized.OTHER


def test_recognize_against_networkx_trees():
    # a tree is a caterpillar iff removing its leaves leaves a path (or nothing)
    for n in range(1, 11):
        for t in nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]:
            core = t.subgraph([v for v in t if t.degree(v) > 1])
            is_cat = core.number_of_nodes() == 0 or (
                nx.is_connected(core) and max((d for _, d in core.degree()), default=0) <= 2
            )
            assert (recognize(from_nx(t)) is Recognized.CATERPILLAR) == is_cat


def test_cycle_order_is_a_cycle():
    g = gen_sunshine(SunshineSpec(7, (0, 2, 0, 1, 0, 0, 3)))
    order = cycle_order(g)
    assert len(order) == 7
    for i in range(7):
        assert g.has_edge(order[i], order[(i + 1) % 7])
    with pytest.raises(PreconditionError):
        cycle_order(path(4))


def test_predict_sunshine_card_examples():
    s = gen_sunshine(SunshineSpec(8, (1,) * 8))
    p = predict_sunshine_card(s, 0, list(range(8)))
    assert (p.case, p.diameter, p.isolated_count) == ("a", 8, 1)
    p = predict_sunshine_card(C6_LEAF, 3, list(range(6)))
    assert (p.case, p.diameter, p.isolated_count) == ("d", 4, 0)
    s = gen_sunshine(SunshineSpec(6, (1, 0, 1, 0, 0, 0)))
    p = predict_sunshine_card(s, 1, list(range(6)))
    assert (p.case, p.skeleton_start, p.skeleton_end, p.diameter, p.isolated_count) == ("a", 2, 0, 6, 0)


def test_predict_rejects_non_sunshine():
    with pytest.raises(PreconditionError):
        predict_sunshine_card(path(5), 0)


def test_caterpillar_card_classes():
    cat = Graph.from_edges(7, [(0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (2, 6)])
    assert caterpillar_card_class(cat, 0) is CardClass.SINGLE_NONTRIVIAL
    assert caterpillar_card_class(cat, 1) is CardClass.MULTI_COMPONENT
    assert caterpillar_card_class(cat, 3) is CardClass.SINGLE_NONTRIVIAL
    assert caterpillar_card_class(star(2), 0) is CardClass.TRIVIAL


def test_non_d_leaves_of_caterpillar():
    assert sorted(non_d_leaves(path(5))) == [0, 4]
    assert non_d_leaves(star(4)) == []


def test_components_match_networkx():
    g = from_nx(nx.gnp_random_graph(15, 0.12, seed=7))
    ours = sorted(sorted(c) for c in components(g))
    theirs = sorted(sorted(c) for c in nx.connected_components(to_nx(g)))
    assert ours == theirs
