import random

import pytest

from conftest import shuffled
from suncat import canon
from suncat.canon import identity
from suncat.deck import common_cards, witnesses
from suncat.families import (
    CaterpillarSpec,
    StructureKind,
    StructureSpec,
    SunshineSpec,
    enumerate_family,
    gen_caterpillar,
    gen_structure,
    gen_sunshine,
)
from suncat.graph import Graph, GraphError, PreconditionError, Recognized, delete_vertices, recognize
from suncat.io import from_graph6
from suncat.saturating import SaturatingElement, sunshine_optimum
from suncat.supercard import (
    HypothesisNotMet,
    all_sunshine_supercards,
    best_supercard,
    construct_supercard,
    rebase_supercard,
    sunshine_candidates,
    sunshine_supercard,
    supercard_key,
)

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def has_cards(gp, g, h):
    cards = [delete_vertices(gp, [x])[0] for x in range(gp.n)]
    return any(canon.are_isomorphic(c, g) for c in cards) and any(canon.are_isomorphic(c, h) for c in cards)


def test_construct_p3_k3():
    for wit in witnesses(P3, K3):
        gp = construct_supercard(P3, K3, wit)
        assert gp.n == 4 and has_cards(gp, P3, K3)


def test_construct_rejects_bad_witness():
    wit = witnesses(P3, K3)[0]
    bad = type(wit)(wit.v, wit.t, wit.iso, (-1, 0, 0))
    with pytest.raises(GraphError):
        construct_supercard(P3, K3, bad)


def test_no_witness_when_b_is_zero():
    g = gen_sunshine(SunshineSpec(5, (0,) * 5))
    h = gen_caterpillar(CaterpillarSpec(1, (4,)))
    assert common_cards(g, h) == 0 and witnesses(g, h) == []


def test_s1b_supercard_matches_structure():
    sc0, u, t = gen_structure(StructureSpec(StructureKind.S1b, 19))
    sc = sunshine_supercard(u, t)
    assert sc.graph.n == 20
    assert canon.are_isomorphic(sc.graph, sc0.graph)
    best, chi = best_supercard(u, t)
    assert chi == 8 and common_cards(u, t) <= 2 * chi + 5
    assert canon.are_isomorphic(best.graph, sc0.graph)


def test_s0a_best_supercard():
    _, u, t = gen_structure(StructureSpec(StructureKind.S0a, 17))
    _, chi = best_supercard(u, t)
    b = common_cards(u, t)
    assert (chi, b) == (6, 8) and b <= chi + 4


def test_small_sunshine_supercard():
    u = gen_sunshine(SunshineSpec(6, (1, 0, 0, 0, 0, 0)))
    for t in enumerate_family("caterpillar", 7):
        try:
            sc = sunshine_supercard(u, t)
        except HypothesisNotMet:
            continue
        assert sc.graph.n == 8 and recognize(sc.graph) is Recognized.SUNSHINE
        assert has_cards(sc.graph, u, t)
        return
    pytest.fail("no caterpillar of order 7 gave a sunshine supercard")


def test_p3_k3_hypothesis_not_met():
    with pytest.raises(HypothesisNotMet):
        sunshine_supercard(P3, K3)
    with pytest.raises(HypothesisNotMet):
        best_supercard(P3, K3)


def test_candidates_are_supercards_of_the_pair():
    rng = random.Random(7)
    suns = list(enumerate_family("sunshine", 8))
    cats = list(enumerate_family("caterpillar", 8))
    checked = 0
    for _ in range(60):
        u, t = rng.choice(suns), rng.choice(cats)
        for gp, v, w in sunshine_candidates(u, t):
            assert canon.are_isomorphic(delete_vertices(gp, [w])[0], u)
            assert canon.are_isomorphic(delete_vertices(gp, [v])[0], t)
            checked += 1
    assert checked > 0


def test_all_supercards_are_label_invariant(rng):
    _, u, t = gen_structure(StructureSpec(StructureKind.S1a, 15))
    a = [supercard_key(s) for s in all_sunshine_supercards(u, t)]
    b = [supercard_key(s) for s in all_sunshine_supercards(shuffled(u, rng)[0], shuffled(t, rng)[0])]
    assert a == b and a == sorted(a)


def test_unique_supercard_is_returned():
    u, t = from_graph6("ElCO"), from_graph6("EqP?")
    scs = all_sunshine_supercards(u, t)
    if len(scs) == 1:
        assert supercard_key(best_supercard(u, t)[0]) == supercard_key(scs[0])
    else:
        best, chi = best_supercard(u, t)
        assert chi == max(sunshine_optimum(s)[0] for s in scs)


def test_rebase_identity():
    sc, _, _ = gen_structure(StructureSpec(StructureKind.S1b, 19))
    e = SaturatingElement(identity(sc.graph.n), sc.v, sc.w, True)
    new, ctx = rebase_supercard(sc, e)
    assert ctx.eta == 0
    assert canon.are_isomorphic(new.graph, sc.graph)


def test_rebase_s1b_nontrivial():
    sc, _, _ = gen_structure(StructureSpec(StructureKind.S1b, 19))
    _, x = sunshine_optimum(sc)
    moved = [e for e in x.elements if e.in_tilde and e.b != sc.w]
    assert moved
    for e in moved:
        new, _ = rebase_supercard(sc, e)
        assert canon.are_isomorphic(new.graph, sc.graph)


def test_rebase_asymmetric_changes_supercard():
    u, t = from_graph6("ElCO"), from_graph6("EqP?")
    found = False
    for sc in all_sunshine_supercards(u, t):
        _, x = sunshine_optimum(sc)
        for e in x.elements:
            if not e.in_tilde or canon.is_isomorphism(sc.graph, sc.graph, e.lam):
                continue
            new, ctx = rebase_supercard(sc, e)
            assert canon.are_isomorphic(new.U(), u) and canon.are_isomorphic(new.T(), t)
            if ctx.eta != 0 and not canon.are_isomorphic(new.graph, sc.graph):
                found = True
    assert found


def test_rebase_rejects_non_tilde():
    sc, _, _ = gen_structure(StructureSpec(StructureKind.S0a, 17))
    _, x = sunshine_optimum(sc)
    e = next(e for e in x.elements if not e.in_tilde)
    with pytest.raises(PreconditionError):
        rebase_supercard(sc, e)
