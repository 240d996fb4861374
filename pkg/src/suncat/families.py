"""Sunshine graphs, caterpillars and the six extremal supercard structures."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import canon
from .canon import ResourceError
from .graph import Graph, GraphError, PreconditionError, cycle_order, delete_vertices, recognize, Recognized


@dataclass(frozen=True)
class SunshineSpec:
    c: int
    leaf_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.c < 3:
            raise GraphError(f"cycle length must be at least 3, got {self.c}")
        if len(self.leaf_counts) != self.c:
            raise GraphError(f"need {self.c} leaf counts, got {len(self.leaf_counts)}")
        if any(k < 0 for k in self.leaf_counts):
            raise GraphError("leaf counts must be non-negative")

    @property
    def n(self) -> int:
        return self.c + sum(self.leaf_counts)

    @property
    def degenerate(self) -> bool:
        """Leafless cycle: generable, but outside the b >= 5 regime."""
        return sum(self.leaf_counts) == 0


@dataclass(frozen=True)
class CaterpillarSpec:
    p: int
    leaf_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.p < 1:
            raise GraphError(f"spine length must be at least 1, got {self.p}")
        if len(self.leaf_counts) != self.p:
            raise GraphError(f"need {self.p} leaf counts, got {len(self.leaf_counts)}")
        if any(k < 0 for k in self.leaf_counts):
            raise GraphError("leaf counts must be non-negative")

    @property
    def n(self) -> int:
        return self.p + sum(self.leaf_counts)


def _attach_leaves(base: int, counts: Sequence[int], edges: list) -> int:
    nxt = base
    for i, k in enumerate(counts):
        for _ in range(k):
            edges.append((i, nxt))
            nxt += 1
    return nxt


def gen_sunshine(spec: SunshineSpec) -> Graph:
    """Cycle vertices are 0..c-1 in cyclic order; leaves follow, grouped by anchor."""
    c = spec.c
    edges = [(i, (i + 1) % c) for i in range(c)]
    n = _attach_leaves(c, spec.leaf_counts, edges)
    return Graph.from_edges(n, edges)


def gen_caterpillar(spec: CaterpillarSpec) -> Graph:
    """Spine vertices are 0..p-1; leaves follow, grouped by anchor.

    The spine must be the realized skeleton, so both ends of a spine with p >= 2
    need a leaf, and a single spine vertex needs at least two.
    """
    p, lc = spec.p, spec.leaf_counts
    if p == 1 and lc[0] < 2:
        raise GraphError("a one-vertex spine needs at least 2 leaves to be the skeleton")
    if p >= 2:
        if lc[0] == 0:
            raise GraphError("spine start y_1 has no leaf, so it would itself be a leaf")
        if lc[-1] == 0:
            raise GraphError(f"spine end y_{p} has no leaf, so it would itself be a leaf")
    edges = [(i, i + 1) for i in range(p - 1)]
    n = _attach_leaves(p, lc, edges)
    return Graph.from_edges(n, edges)


@dataclass(frozen=True)
class SunshineSupercard:
    """A sunshine supercard in normal form.

    Cycle vertex ``x_i`` is ``cycle[i]``; ``w`` is a leaf at ``x_0`` and the
    deleted vertex ``v = x_nu`` has degree 2 with ``d(x_{nu-1}) >= d(x_{nu+1})``.
    """

    graph: Graph
    cycle: tuple[int, ...]
    nu: int
    w: int
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(self.cycle)})
        g, c = self.graph, self.c
        if self.w not in g.adj[self.cycle[0]] or g.degree(self.w) != 1:
            raise PreconditionError("w must be a leaf adjacent to x_0")
        if g.degree(self.v) != 2:
            raise PreconditionError(f"x_nu (nu={self.nu}) must have degree 2")
        if g.degree(self.x(self.nu - 1)) < g.degree(self.x(self.nu + 1)):
            raise PreconditionError("labeling violates d(x_{nu-1}) >= d(x_{nu+1})")
        for i in range(c):
            if not g.has_edge(self.cycle[i], self.cycle[(i + 1) % c]):
                raise PreconditionError("cycle order does not follow edges")

    @property
    def c(self) -> int:
        return len(self.cycle)

    @property
    def n(self) -> int:
        """Order of U and T (one less than the supercard)."""
        return self.graph.n - 1

    @property
    def v(self) -> int:
        return self.cycle[self.nu]

    def x(self, i: int) -> int:
        return self.cycle[i % self.c]

    def index(self, vertex: int) -> int | None:
        return self._pos.get(vertex)

    def degree_at(self, i: int) -> int:
        return self.graph.degree(self.x(i))

    def leaves_at(self, i: int) -> list[int]:
        """Leaves ``x_i^1, x_i^2, ...`` (w first at ``x_0``, then ascending id)."""
        xi = self.x(i)
        ls = sorted(u for u in self.graph.adj[xi] if u not in self._pos)
        if i % self.c == 0:
            ls.remove(self.w)
            ls.insert(0, self.w)
        return ls

    def anchor(self, leaf: int) -> int:
        (a,) = self.graph.adj[leaf]
        return self._pos[a]

    def U(self) -> Graph:
        return delete_vertices(self.graph, [self.w])[0]

    def T(self) -> Graph:
        return delete_vertices(self.graph, [self.v])[0]

    def sidecar(self) -> dict:
        return {"c": self.c, "cycle_order": list(self.cycle), "nu": self.nu, "w": self.w}


def normal_form_supercard(g: Graph, v: int, w: int) -> SunshineSupercard:
    """Relabel a sunshine supercard so that x_i = i, w = c, leaves grouped by anchor.

    Orientation is fixed by the degree condition at x_nu; when both directions
    satisfy it the smaller nu wins, then the smaller degree sequence.
    """
    if recognize(g) is not Recognized.SUNSHINE:
        raise PreconditionError("supercard is not a sunshine graph")
    if g.degree(w) != 1:
        raise PreconditionError("w is not a leaf")
    cyc = cycle_order(g)
    (anchor,) = g.adj[w]
    if anchor not in cyc or v not in cyc:
        raise PreconditionError("w must hang off the cycle and v must lie on it")
    c = len(cyc)
    k = cyc.index(anchor)
    options = []
    for direction in (1, -1):
        order = [cyc[(k + direction * i) % c] for i in range(c)]
        nu = order.index(v)
        if g.degree(order[(nu - 1) % c]) >= g.degree(order[(nu + 1) % c]):
            options.append((nu, [g.degree(x) for x in order], direction, order))
    if not options:
        raise PreconditionError("no orientation satisfies the degree convention")
    nu, _, _, order = min(options, key=lambda o: (o[0], o[1], -o[2]))
    perm = [-1] * g.n
    for i, x in enumerate(order):
        perm[x] = i
    perm[w] = c
    nxt = c + 1
    for x in order:
        for u in sorted(g.adj[x]):
            if perm[u] == -1:
                perm[u] = nxt
                nxt += 1
    g2 = g.relabel(perm)
    return SunshineSupercard(g2, tuple(range(c)), nu, c)


class StructureKind(str, enum.Enum):
    S0a = "S0a"
    S0b = "S0b"
    S1a = "S1a"
    S1b = "S1b"
    S2a = "S2a"
    S2b = "S2b"


# kind -> (modulus, residue, period, degree at each offset, nu modulus, nu residues, cycle numerator, denominator)
_STRUCTURES = {
    "S0a": (3, 2, 2, {0: 3}, 2, (1,), 2, 3),
    "S0b": (7, 6, 4, {0: 4, 2: 3}, 4, (1,), 4, 7),
    "S1a": (4, 3, 3, {0: 3}, 3, (1,), 3, 4),
    "S1b": (5, 4, 3, {0: 4}, 3, (1,), 3, 5),
    "S2a": (5, 4, 4, {0: 3}, 4, (2,), 4, 5),
    "S2b": (7, 6, 5, {0: 4}, 5, (2, 3), 5, 7),
}


@dataclass(frozen=True)
class StructureSpec:
    kind: StructureKind
    n: int
    nu_variant: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", StructureKind(self.kind))
        mod, res = _STRUCTURES[self.kind.value][:2]
        if self.n % mod != res:
            raise GraphError(f"{self.kind.value} needs n = {res} (mod {mod}); got n = {self.n}")

    @property
    def c(self) -> int:
        num, den = _STRUCTURES[self.kind.value][6:8]
        return num * (self.n + 1) // den


def structure_cycle_length(kind: str, n: int) -> int:
    return StructureSpec(StructureKind(kind), n).c


def gen_structure(spec: StructureSpec) -> tuple[SunshineSupercard, Graph, Graph]:
    """Build U+ for a structure kind, and U = U+ - w, T = U+ - x_nu."""
    _, _, period, degs, nmod, nres, _, _ = _STRUCTURES[spec.kind.value]
    c = spec.c
    if c < 6:
        raise GraphError(f"n={spec.n} gives cycle length {c} < 6")
    counts = [degs.get(i % period, 2) - 2 for i in range(c)]
    residue = nres[0]
    if spec.nu_variant is not None:
        if spec.nu_variant not in nres:
            raise GraphError(f"{spec.kind.value} allows nu = {nres} (mod {nmod}), not {spec.nu_variant}")
        residue = spec.nu_variant
    nu = next(i for i in range(1, c) if i % nmod == residue)
    g = gen_sunshine(SunshineSpec(c, tuple(counts)))
    if g.n != spec.n + 1:
        raise AssertionError(f"{spec.kind.value}: built order {g.n}, expected {spec.n + 1}")
    sc = SunshineSupercard(g, tuple(range(c)), nu, c)
    return sc, sc.U(), sc.T()


def _dihedral_min(seq: Sequence[int]) -> tuple[int, ...]:
    c = len(seq)
    rots = [tuple(seq[i:]) + tuple(seq[:i]) for i in range(c)]
    rev = tuple(reversed(seq))
    rots += [rev[i:] + rev[:i] for i in range(c)]
    return min(rots)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars + (total + parts - 1,):
            out.append(b - prev - 1)
            prev = b
        yield tuple(out)


def _sunshine_specs(n: int) -> Iterator[SunshineSpec]:
    for c in range(3, n + 1):
        seen = set()
        for lc in _compositions(n - c, c):
            key = _dihedral_min(lc)
            if key in seen:
                continue
            seen.add(key)
            yield SunshineSpec(c, key)


def _caterpillar_specs(n: int) -> Iterator[CaterpillarSpec]:
    if n <= 2:
        return
    for p in range(1, n - 1):
        rest = n - p
        if p == 1:
            yield CaterpillarSpec(1, (rest,))
            continue
        seen = set()
        # ends need at least one leaf each
        for lc in _compositions(rest - 2, p):
            lc = (lc[0] + 1,) + lc[1:-1] + (lc[-1] + 1,)
            key = min(lc, tuple(reversed(lc)))
            if key in seen:
                continue
            seen.add(key)
            yield CaterpillarSpec(p, key)


ENUM_CAP = 16


def enumerate_family(kind: str, n: int, cap: int = ENUM_CAP) -> Iterator[Graph]:
    """One graph per isomorphism class of sunshine graphs or caterpillars of order n."""
    if kind not in ("sunshine", "caterpillar"):
        raise GraphError(f"unknown family {kind!r}")
    if n < 1:
        raise GraphError("order must be positive")
    if n > cap:
        raise ResourceError(f"exhaustive enumeration capped at n={cap}", cap)
    if kind == "caterpillar" and n <= 2:
        yield Graph.from_edges(n, [(0, 1)] if n == 2 else [])
        return
    specs = _sunshine_specs(n) if kind == "sunshine" else _caterpillar_specs(n)
    gen = gen_sunshine if kind == "sunshine" else gen_caterpillar
    seen = set()
    for spec in specs:
        g = gen(spec)
        f = canon.canonical_form(g)
        if f not in seen:
            seen.add(f)
            yield g


def spec_from_json(text: str) -> SunshineSpec | StructureSpec:
    obj = json.loads(text)
    if "kind" in obj:
        return StructureSpec(StructureKind(obj["kind"]), int(obj["n"]), obj.get("nu_variant"))
    return SunshineSpec(int(obj["c"]), tuple(obj["leaf_counts"]))


def _random_counts(rng, total: int, parts: int) -> list[int]:
    counts = [0] * parts
    for _ in range(total):
        counts[rng.randrange(parts)] += 1
    return counts


def random_sunshine(rng, c: int, leaves: int) -> Graph:
    """Cycle of length c with ``leaves`` leaves dropped on uniformly random anchors."""
    return gen_sunshine(SunshineSpec(c, tuple(_random_counts(rng, leaves, c))))


def random_caterpillar(rng, n: int) -> Graph:
    """Random caterpillar of order n >= 3 (spine ends always get a leaf)."""
    if n < 3:
        raise GraphError("random caterpillars need n >= 3")
    p = rng.randint(1, n - 2)
    if p == 1:
        return gen_caterpillar(CaterpillarSpec(1, (n - 1,)))
    lc = _random_counts(rng, n - p - 2, p)
    lc[0] += 1
    lc[-1] += 1
    return gen_caterpillar(CaterpillarSpec(p, tuple(lc)))
