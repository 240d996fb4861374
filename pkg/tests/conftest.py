import itertools
import random

import networkx as nx
import pytest

from suncat.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(idx), [(idx[a], idx[b]) for a, b in h.edges()])


def atlas(n: int) -> list[Graph]:
    """All graphs on exactly n vertices up to isomorphism (n <= 7)."""
    return [from_nx(h) for h in nx.graph_atlas_g() if h.number_of_nodes() == n]


def brute_iso(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    he = {frozenset(e) for e in h.edges()}
    ge = g.edges()
    return any(all(frozenset((p[a], p[b])) in he for a, b in ge) for p in itertools.permutations(range(g.n)))


def brute_deck_common(g: Graph, h: Graph) -> int:
    """Multiset intersection of decks using networkx isomorphism only."""
    if g.n != h.n:
        return 0
    gc = [to_nx(g).subgraph([x for x in range(g.n) if x != v]) for v in range(g.n)]
    hc = [to_nx(h).subgraph([x for x in range(h.n) if x != v]) for v in range(h.n)]
    used = [False] * len(hc)
    k = 0
    for a in gc:
        for j, b in enumerate(hc):
            if not used[j] and nx.is_isomorphic(a, b):
                used[j] = True
                k += 1
                break
    return k


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def shuffled(g: Graph, rng: random.Random) -> tuple[Graph, list[int]]:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm


@pytest.fixture
def rng():
    return random.Random(12345)
