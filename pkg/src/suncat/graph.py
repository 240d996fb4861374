"""Graph carrier and the structural vocabulary for sunshine graphs and caterpillars.

Vertices are the integers ``0..n-1``.  Graphs are immutable; every operation
returns a new graph.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Bad input to a graph operation (out-of-range vertex, malformed edges)."""


class PreconditionError(ValueError):
    """An operation was called outside the graph class it is defined for."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]
    _masks: tuple[int, ...] = field(default=(), repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for order {self.n}")
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"neighbour {u} of {v} out of range")
                if u == v:
                    raise GraphError(f"loop at {v}")
                if v not in self.adj[u]:
                    raise GraphError(f"asymmetric adjacency {v}-{u}")
        masks = tuple(sum(1 << u for u in nbrs) for nbrs in self.adj)
        object.__setattr__(self, "_masks", masks)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at {u}")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n, tuple(frozenset(r) for r in rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(frozenset() for _ in range(n)))

    @property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as bitmasks (bit ``u`` of ``masks[v]`` set iff ``uv`` is an edge)."""
        return self._masks

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the image graph: vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation of the vertex set")
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges()) + [tuple(e) for e in edges])

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {tuple(sorted(e)) for e in edges}
        return Graph.from_edges(self.n, [e for e in self.edges() if e not in drop])

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise GraphError(f"vertex {v!r} not in graph of order {self.n}")


def delete_vertices(g: Graph, z: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Delete ``z`` and renumber the survivors densely, preserving their order.

    Returns the smaller graph and the old-to-new vertex map.
    """
    zs = set(z)
    for v in zs:
        g._check_vertex(v)
    keep = [v for v in range(g.n) if v not in zs]
    relabel = {old: new for new, old in enumerate(keep)}
    rows = tuple(frozenset(relabel[u] for u in g.adj[v] if u not in zs) for v in keep)
    return Graph(len(keep), rows), relabel


def induced(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    vs = set(vertices)
    return delete_vertices(g, [v for v in range(g.n) if v not in vs])


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(components(g)) == 1


def degree_counts(g: Graph) -> dict[int, int]:
    """``d_k(G)``: number of vertices of each degree ``k``."""
    out: dict[int, int] = {}
    for d in g.degrees():
        out[d] = out.get(d, 0) + 1
    return out


def skeleton(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Remove all leaves and isolated vertices in a single pass."""
    return delete_vertices(g, [v for v in range(g.n) if g.degree(v) <= 1])


def _bfs_far(g: Graph, s: int) -> tuple[int, int]:
    dist = {s: 0}
    queue = deque([s])
    far = s
    while queue:
        v = queue.popleft()
        if dist[v] > dist[far]:
            far = v
        for u in g.adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return far, dist[far]


def _is_forest(g: Graph) -> bool:
    return g.m == g.n - len(components(g))


def _longest_path_dfs(g: Graph, comp: Sequence[int]) -> tuple[int, set[int]]:
    """Exact longest simple path in one component; returns (length, endpoint set)."""
    best = 0
    ends: set[int] = set(comp) if len(comp) == 1 else set()

    def walk(v: int, visited: int, length: int, start: int) -> None:
        nonlocal best, ends
        if length > best:
            best = length
            ends = {start, v}
        elif length == best and length > 0:
            ends.update((start, v))
        for u in g.adj[v]:
            if not visited >> u & 1:
                walk(u, visited | 1 << u, length + 1, start)

    for s in comp:
        walk(s, 1 << s, 0, s)
    return best, ends


def _tree_longest(g: Graph, comp: Sequence[int]) -> tuple[int, set[int]]:
    a, _ = _bfs_far(g, comp[0])
    b, length = _bfs_far(g, a)
    if length == 0:
        return 0, {a}
    # a vertex ends a longest path iff its eccentricity equals the diameter
    ends = set()
    for v in comp:
        _, ecc = _bfs_far(g, v)
        if ecc == length:
            ends.add(v)
    return length, ends


def diameter(g: Graph) -> int | None:
    """Length of a longest path.

    Defined for connected graphs and for a tree plus isolated vertices (where the
    tree's value is used); ``None`` otherwise.
    """
    comps = components(g)
    if not comps:
        return None
    big = [c for c in comps if len(c) > 1]
    if len(comps) > 1 and (len(big) > 1 or not _is_forest(g)):
        return None
    comp = big[0] if big else comps[0]
    if _is_forest(g):
        return _tree_longest(g, comp)[0]
    return _longest_path_dfs(g, comp)[0]


def peripheral_vertices(g: Graph, comp: Sequence[int]) -> set[int]:
    """Vertices of ``comp`` that end some longest path of that component."""
    sub, relabel = induced(g, comp)
    back = {new: old for old, new in relabel.items()}
    allv = list(range(sub.n))
    if sub.m == sub.n - 1:
        _, ends = _tree_longest(sub, allv)
    else:
        _, ends = _longest_path_dfs(sub, allv)
    return {back[v] for v in ends}


def tau(g: Graph, v: int) -> int:
    """Number of neighbours of ``v`` that have degree 2."""
    g._check_vertex(v)
    return sum(1 for u in g.adj[v] if g.degree(u) == 2)


class VertexClass(enum.Enum):
    ISOLATED = "isolated"
    LEAF = "leaf"
    D_LEAF = "d_leaf"
    PERIPHERAL_LEAF = "peripheral_leaf"
    INTERNAL = "internal"
    CUT_SKELETON = "cut_skeleton"


def _component_of(g: Graph, v: int) -> list[int]:
    for comp in components(g):
        if v in comp:
            return comp
    raise AssertionError("unreachable")


def is_d_leaf(g: Graph, v: int) -> bool:
    g._check_vertex(v)
    if g.degree(v) != 1:
        return False
    (u,) = g.adj[v]
    return g.degree(u) >= 3


def is_cut_vertex(g: Graph, v: int) -> bool:
    g._check_vertex(v)
    before = len(components(g))
    after = len(components(delete_vertices(g, [v])[0]))
    return after > before


def classify_vertex(g: Graph, v: int) -> VertexClass:
    """Tag ``v``; a leaf that is both a d-leaf and peripheral reports ``D_LEAF``."""
    g._check_vertex(v)
    d = g.degree(v)
    if d == 0:
        return VertexClass.ISOLATED
    if d == 1:
        comp = _component_of(g, v)
        if len(comp) < 3:
            return VertexClass.LEAF
        if is_d_leaf(g, v):
            return VertexClass.D_LEAF
        if v in peripheral_vertices(g, comp):
            return VertexClass.PERIPHERAL_LEAF
        return VertexClass.LEAF
    return VertexClass.CUT_SKELETON if is_cut_vertex(g, v) else VertexClass.INTERNAL


def is_peripheral_leaf(g: Graph, v: int) -> bool:
    if g.degree(v) != 1:
        return False
    comp = _component_of(g, v)
    return len(comp) >= 3 and v in peripheral_vertices(g, comp)


class Recognized(enum.Enum):
    SUNSHINE = "sunshine"
    CATERPILLAR = "caterpillar"
    OTHER = "other"


def _is_cycle(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and all(d == 2 for d in g.degrees())


def _is_path(g: Graph) -> bool:
    if g.n == 0:
        return True
    return is_connected(g) and g.m == g.n - 1 and max(g.degrees(), default=0) <= 2


def recognize(g: Graph) -> Recognized:
    """Sunshine (skeleton a cycle), caterpillar (skeleton a path), or other.

    A connected graph of order at most 2 has an empty skeleton and counts as a
    caterpillar; a bare cycle is its own skeleton and counts as sunshine.
    """
    if not is_connected(g):
        return Recognized.OTHER
    skel, _ = skeleton(g)
    if _is_cycle(skel):
        return Recognized.SUNSHINE
    if _is_path(skel) and g.m == g.n - 1:
        return Recognized.CATERPILLAR
    return Recognized.OTHER


def is_degenerate(g: Graph) -> bool:
    """True for the edge cases the sunshine machinery does not handle (order <= 2, leafless cycle)."""
    if g.n <= 2:
        return True
    return _is_cycle(g)


def cycle_order(g: Graph) -> list[int]:
    """Vertices of the unique cycle of a unicyclic connected graph, in cyclic order.

    The traversal starts at the smallest cycle vertex and steps to its smaller
    cycle neighbour, so the output is deterministic.
    """
    # peel leaves repeatedly to get the 2-core
    deg = g.degrees()
    alive = [True] * g.n
    queue = deque(v for v in range(g.n) if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for u in g.adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] == 1:
                    queue.append(u)
    core = [v for v in range(g.n) if alive[v]]
    if not core or any(sum(1 for u in g.adj[v] if alive[u]) != 2 for v in core):
        raise PreconditionError("graph is not unicyclic")
    start = core[0]
    nxt = min(u for u in g.adj[start] if alive[u])
    order = [start]
    prev, cur = start, nxt
    while cur != start:
        order.append(cur)
        cur, prev = next(u for u in g.adj[cur] if alive[u] and u != prev), cur
    if len(order) != len(core):
        raise PreconditionError("2-core is not a single cycle")
    return order


@dataclass(frozen=True)
class CardPrediction:
    """Predicted shape of the card ``S - x_i`` of a sunshine graph.

    ``skeleton_start`` and ``skeleton_end`` are cycle indices: the caterpillar's
    skeleton is the cycle path running forward from start to end.
    """

    case: str
    skeleton_start: int
    skeleton_end: int
    diameter: int
    isolated_count: int


def predict_sunshine_card(s: Graph, i: int, cycle: Sequence[int] | None = None) -> CardPrediction:
    if recognize(s) is not Recognized.SUNSHINE:
        raise PreconditionError("predict_sunshine_card needs a sunshine graph")
    cyc = list(cycle) if cycle is not None else cycle_order(s)
    c = len(cyc)
    if not 0 <= i < c:
        raise GraphError(f"cycle index {i} out of range for cycle length {c}")
    nxt_deg = s.degree(cyc[(i + 1) % c])
    prv_deg = s.degree(cyc[(i - 1) % c])
    start = i + 1 if nxt_deg >= 3 else i + 2
    end = i - 1 if prv_deg >= 3 else i - 2
    case = {(True, True): "a", (True, False): "b", (False, True): "c", (False, False): "d"}[
        (nxt_deg >= 3, prv_deg >= 3)
    ]
    t = tau(s, cyc[i])
    return CardPrediction(case, start % c, end % c, c - t, s.degree(cyc[i]) - 2)


class CardClass(enum.Enum):
    SINGLE_NONTRIVIAL = "single_nontrivial_component"
    MULTI_COMPONENT = "multi_component"
    TRIVIAL = "trivial"


def caterpillar_card_class(t: Graph, y: int) -> CardClass:
    if recognize(t) is not Recognized.CATERPILLAR:
        raise PreconditionError("caterpillar_card_class needs a caterpillar")
    t._check_vertex(y)
    card, _ = delete_vertices(t, [y])
    big = sum(1 for comp in components(card) if len(comp) > 1)
    if big == 0:
        return CardClass.TRIVIAL
    return CardClass.SINGLE_NONTRIVIAL if big == 1 else CardClass.MULTI_COMPONENT


def non_d_leaves(t: Graph) -> list[int]:
    """Leaves of ``t`` that are not d-leaves (at most two for a caterpillar)."""
    return [v for v in range(t.n) if t.degree(v) == 1 and not is_d_leaf(t, v)]
