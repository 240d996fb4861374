"""Active permutations, maximum saturating sets and the optimum objective chi.

An active permutation of a supercard ``G+`` (with distinguished ``v`` and ``w``)
is never materialised from the full symmetric group.  It is represented by the
pair ``a = lam^-1(v)``, ``b = lam(w)`` together with one isomorphism of the
cards ``(G+ - w) - a`` and ``(G+ - v) - b``; the two remaining images are
forced.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import canon
from .canon import CanonicalForm, Permutation, compose, identity, invert
from .families import SunshineSupercard
from .graph import Graph, GraphError, PreconditionError, delete_vertices, is_d_leaf, is_peripheral_leaf


class UnsupportedRegime(PreconditionError):
    """The two cards G+ - w and G+ - v are isomorphic."""


class InvariantViolation(AssertionError):
    """A construction that should always succeed produced an invalid result."""


@dataclass(frozen=True)
class CycleAction:
    kind: str  # rotation, reflection or none
    alpha: int | None = None

    def __str__(self) -> str:
        return "none" if self.kind == "none" else f"{self.kind}({self.alpha})"


NO_ACTION = CycleAction("none")


@dataclass(frozen=True)
class SaturatingElement:
    lam: Permutation
    a: int
    b: int
    in_BG: bool
    cycle_action: CycleAction | None = None
    in_tilde: bool | None = None
    w_image_class: str | None = None

    def to_obj(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "in_BG": self.in_BG,
            "cycle_action": None if self.cycle_action is None else str(self.cycle_action),
            "in_tilde": self.in_tilde,
            "w_image_class": self.w_image_class,
        }


@dataclass(frozen=True)
class SaturatingSet:
    elements: tuple[SaturatingElement, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def contains_identity(self) -> bool:
        return any(e.lam == identity(len(e.lam)) for e in self.elements)

    @property
    def chi(self) -> int:
        return sum(1 for e in self.elements if e.in_BG)

    def pairs(self) -> set[tuple[int, int]]:
        return {(e.a, e.b) for e in self.elements}


def _maps_edges(src: Graph, skip_src: set, dst: Graph, skip_dst: set, lam: Sequence[int]) -> bool:
    """lam maps src minus skip_src edge-bijectively onto dst minus skip_dst."""
    count = 0
    for x, y in src.edges():
        if x in skip_src or y in skip_src:
            continue
        if lam[x] in skip_dst or lam[y] in skip_dst or not dst.has_edge(lam[x], lam[y]):
            return False
        count += 1
    dst_count = sum(1 for x, y in dst.edges() if x not in skip_dst and y not in skip_dst)
    return count == dst_count


def is_active(gp: Graph, v: int, w: int, lam: Sequence[int]) -> bool:
    """The card equation lam((G+ - w) - a) = (G+ - v) - b."""
    inv = invert(lam)
    a, b = inv[v], lam[w]
    return _maps_edges(gp, {w, a}, gp, {v, b}, lam)


def in_BG(gp: Graph, w: int, lam: Sequence[int]) -> bool:
    """lam(G+ - w) = G+ - lam(w)."""
    return _maps_edges(gp, {w}, gp, {lam[w]}, lam)


class Compatibility:
    """The relation {(a, b) : (G+ - w) - a isomorphic to (G+ - v) - b}, a != w, b != v."""

    def __init__(self, gp: Graph, v: int, w: int, check_regime: bool = True) -> None:
        if v == w:
            raise GraphError("v and w must be distinct")
        gp._check_vertex(v)
        gp._check_vertex(w)
        self.gp, self.v, self.w = gp, v, w
        self.ghat, self.ghat_map = delete_vertices(gp, [w])
        self.hhat, self.hhat_map = delete_vertices(gp, [v])
        if check_regime and canon.are_isomorphic(self.ghat, self.hhat):
            raise UnsupportedRegime("G+ - w and G+ - v are isomorphic")
        n1 = gp.n
        self.left = [a for a in range(n1) if a != w]
        self.right = [b for b in range(n1) if b != v]
        self.form_a = {a: canon.canonical_form(delete_vertices(gp, [w, a])[0]) for a in self.left}
        self.form_b = {b: canon.canonical_form(delete_vertices(gp, [v, b])[0]) for b in self.right}
        blocks: dict[CanonicalForm, tuple[list, list]] = defaultdict(lambda: ([], []))
        for a in self.left:
            blocks[self.form_a[a]][0].append(a)
        for b in self.right:
            blocks[self.form_b[b]][1].append(b)
        self.blocks = {f: ab for f, ab in blocks.items() if ab[0] and ab[1]}

    def __contains__(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return a in self.form_a and b in self.form_b and self.form_a[a] == self.form_b[b]

    def pairs(self) -> list[tuple[int, int]]:
        return sorted((a, b) for A, B in self.blocks.values() for a in A for b in B)

    def neighbours(self, a: int) -> list[int]:
        f = self.form_a.get(a)
        return list(self.blocks[f][1]) if f in self.blocks else []

    @cached_property
    def _bg_forms(self) -> tuple[dict, dict]:
        # (G+ - w, a marked) against (G+ - b, v marked)
        fa = {}
        for a in self.left:
            cols = [0] * self.ghat.n
            cols[self.ghat_map[a]] = 1
            fa[a] = canon.canonical_form(self.ghat, cols)
        fb = {}
        for b in self.right:
            g_b, m_b = delete_vertices(self.gp, [b])
            cols = [0] * g_b.n
            cols[m_b[self.v]] = 1
            fb[b] = canon.canonical_form(g_b, cols)
        return fa, fb

    def bg_realizable(self, a: int, b: int) -> bool:
        """Some isomorphism G+ - w -> G+ - b sends a to v."""
        if (a, b) not in self:
            return False
        fa, fb = self._bg_forms
        return fa[a] == fb[b]

    def card_iso(self, a: int, b: int) -> dict[int, int]:
        """Least isomorphism (G+ - w) - a -> (G+ - v) - b on original vertex ids."""
        g1, m1 = delete_vertices(self.gp, [self.w, a])
        g2, m2 = delete_vertices(self.gp, [self.v, b])
        iso = canon.find_isomorphism(g1, g2)
        if iso is None:
            raise GraphError(f"pair ({a}, {b}) is not compatible")
        back = {new: old for old, new in m2.items()}
        return {old: back[iso[new]] for old, new in m1.items()}

    def realize(self, a: int, b: int, prefer_bg: bool = True) -> Permutation:
        """Concrete permutation for the pair: lam(a) = v, lam(w) = b, an isomorphism elsewhere.

        For B^G-realizable pairs the least isomorphism G+ - w -> G+ - b with
        a -> v is used, so the result lies in B^G.
        """
        lam = [-1] * self.gp.n
        lam[self.w] = b
        if prefer_bg and self.bg_realizable(a, b):
            g_b, m_b = delete_vertices(self.gp, [b])
            psi = canon.find_isomorphism_mapping(self.ghat, self.ghat_map[a], g_b, m_b[self.v])
            back = {new: old for old, new in m_b.items()}
            for old, new in self.ghat_map.items():
                lam[old] = back[psi[new]]
        else:
            lam[a] = self.v
            for x, y in self.card_iso(a, b).items():
                lam[x] = y
        out = tuple(lam)
        if not is_active(self.gp, self.v, self.w, out):
            raise InvariantViolation(f"realized permutation for ({a}, {b}) fails the card equation")
        return out

    def element(self, a: int, b: int, lam: Permutation | None = None) -> SaturatingElement:
        lam = lam if lam is not None else self.realize(a, b)
        return SaturatingElement(lam, a, b, in_BG(self.gp, self.w, lam))


def build_compatibility(gp: Graph, v: int, w: int) -> Compatibility:
    return Compatibility(gp, v, w)


def _kuhn(left: Sequence[int], adj: dict[int, list[int]], taken_right: set[int]) -> dict[int, int]:
    match_r: dict[int, int] = {}

    def augment(a: int, seen: set[int]) -> bool:
        for b in adj.get(a, []):
            if b in taken_right or b in seen:
                continue
            seen.add(b)
            if b not in match_r or augment(match_r[b], seen):
                match_r[b] = a
                return True
        return False

    for a in left:
        augment(a, set())
    return {a: b for b, a in match_r.items()}


def maximum_saturating_set(gp: Graph, v: int, w: int, comp: Compatibility | None = None) -> SaturatingSet:
    """Maximum matching of the compatibility relation with (v, w) forced, by augmenting paths."""
    comp = comp or Compatibility(gp, v, w)
    left = [a for a in comp.left if a != v]
    adj = {a: [b for b in comp.neighbours(a) if b != w] for a in left}
    m = _kuhn(left, adj, set())
    m[v] = w
    elems = [comp.element(a, b) if (a, b) != (v, w) else _identity_element(gp.n, v, w) for a, b in sorted(m.items())]
    return SaturatingSet(tuple(elems))


def _identity_element(n: int, v: int, w: int) -> SaturatingElement:
    return SaturatingElement(identity(n), v, w, True)


def _optimum_pairs(comp: Compatibility, fixed: dict[int, int]) -> dict[int, int]:
    """Maximum matching extending ``fixed`` that maximises the number of B^G pairs.

    The relation is a disjoint union of complete bipartite blocks, so any
    assignment inside a block has full cardinality; maximising B^G weight per
    block with a rectangular assignment solves the two-level objective exactly.
    """
    used_r = set(fixed.values())
    out = dict(fixed)
    for A, B in comp.blocks.values():
        rows = [a for a in A if a not in fixed]
        cols = [b for b in B if b not in used_r]
        if not rows or not cols:
            continue
        weight = np.array([[1.0 if comp.bg_realizable(a, b) else 0.0 for b in cols] for a in rows])
        ri, ci = linear_sum_assignment(weight, maximize=True)
        for i, j in zip(ri, ci):
            out[rows[i]] = cols[j]
    return out


def chi_and_optimum(gp: Graph, v: int, w: int, comp: Compatibility | None = None) -> tuple[int, SaturatingSet]:
    comp = comp or Compatibility(gp, v, w)
    pairs = _optimum_pairs(comp, {v: w})
    elems = []
    for a, b in sorted(pairs.items()):
        elems.append(_identity_element(gp.n, v, w) if (a, b) == (v, w) else comp.element(a, b))
    x = SaturatingSet(tuple(elems))
    return x.chi, x


def is_saturating(gp: Graph, v: int, w: int, elems: Iterable[SaturatingElement]) -> bool:
    """Identity present, a-values and b-values pairwise distinct, every element active."""
    elems = list(elems)
    avals = [e.a for e in elems]
    bvals = [e.b for e in elems]
    return (
        any(e.lam == identity(gp.n) for e in elems)
        and len(set(avals)) == len(avals)
        and len(set(bvals)) == len(bvals)
        and all(is_active(gp, v, w, e.lam) for e in elems)
    )


def extend_saturating(comp: Compatibility, partial: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Extend a partial saturating set (given as (a, b) pairs) to a maximum one."""
    fixed = dict(partial)
    fixed.setdefault(comp.v, comp.w)
    return _optimum_pairs(comp, fixed)


# ---- sunshine supercards -------------------------------------------------


def cycle_action(sc: SunshineSupercard, lam: Sequence[int]) -> CycleAction:
    c = sc.c
    alpha = sc.index(lam[sc.x(0)])
    if alpha is None:
        return NO_ACTION
    if all(lam[sc.x(i)] == sc.x(alpha + i) for i in range(c)):
        return CycleAction("rotation", alpha)
    if all(lam[sc.x(i)] == sc.x(alpha - i) for i in range(c)):
        return CycleAction("reflection", alpha)
    return NO_ACTION


class _TView:
    """T = U+ - v with vertex properties looked up on supercard ids."""

    def __init__(self, sc: SunshineSupercard) -> None:
        self.t, self.m = delete_vertices(sc.graph, [sc.v])

    def is_leaf(self, u: int) -> bool:
        return self.t.degree(self.m[u]) == 1

    def is_d_leaf(self, u: int) -> bool:
        return is_d_leaf(self.t, self.m[u])

    def is_peripheral_leaf(self, u: int) -> bool:
        return is_peripheral_leaf(self.t, self.m[u])

    def w_image_class(self, u: int) -> str:
        if self.is_d_leaf(u):
            return "d_leaf"
        if self.is_leaf(u) and self.is_peripheral_leaf(u):
            return "peripheral_non_d_leaf"
        if any(is_peripheral_leaf(self.t, y) for y in self.t.adj[self.m[u]]):
            return "adjacent_to_peripheral"
        return "unclassified"


def classify_element(sc: SunshineSupercard, e: SaturatingElement, tview: _TView | None = None) -> SaturatingElement:
    gp = sc.graph
    if len(e.lam) != gp.n or not is_active(gp, sc.v, sc.w, e.lam):
        raise GraphError("element is not an active permutation of this supercard")
    tv = tview or _TView(sc)
    b = e.lam[sc.w]
    return replace(
        e,
        in_BG=in_BG(gp, sc.w, e.lam),
        cycle_action=cycle_action(sc, e.lam),
        in_tilde=gp.degree(b) == 1 and tv.is_d_leaf(b),
        w_image_class=tv.w_image_class(b),
    )


def classify_set(sc: SunshineSupercard, x: SaturatingSet) -> SaturatingSet:
    tv = _TView(sc)
    return SaturatingSet(tuple(classify_element(sc, e, tv) for e in x.elements))


def sunshine_optimum(sc: SunshineSupercard) -> tuple[int, SaturatingSet]:
    chi, x = chi_and_optimum(sc.graph, sc.v, sc.w)
    return chi, classify_set(sc, x)


def promote_to_BU(sc: SunshineSupercard, e: SaturatingElement) -> SaturatingElement | None:
    """Leaf-transposition repair of an element of X-tilde into B^U with the same a and b.

    Returns None when the element is not in X-tilde or lam(x_{mu+2}) is not
    x_{nu+2} or x_{nu-2}.
    """
    gp, lam = sc.graph, e.lam
    if e.in_tilde is None:
        e = classify_element(sc, e)
    if not e.in_tilde:
        return None
    mu = sc.index(e.a)
    if mu is None:
        return None
    nu = sc.nu
    target = lam[sc.x(mu + 2)]
    if target == sc.x(nu + 2):
        sign = 1
    elif target == sc.x(nu - 2):
        sign = -1
    else:
        return None
    theta = list(range(gp.n))
    p, q = lam[sc.x(mu + 1)], sc.x(nu + sign)
    theta[p], theta[q] = q, p
    theta2 = list(range(gp.n))
    p2, q2 = lam[sc.x(mu - 1)], sc.x(nu - sign)
    theta2[p2], theta2[q2] = q2, p2
    hat = list(compose(theta2, compose(theta, lam)))
    hat[e.a] = sc.v
    hat[sc.w] = e.b
    hat_t = tuple(hat)
    if sorted(hat_t) != list(range(gp.n)) or not is_active(gp, sc.v, sc.w, hat_t) or not in_BG(gp, sc.w, hat_t):
        raise InvariantViolation("promoted permutation is not in B^U")
    return classify_element(sc, SaturatingElement(hat_t, e.a, e.b, True))


# ---- rotations, Phi and the optimum automorphism set ------------------------


@dataclass(frozen=True)
class PhiSubgroup:
    delta: int
    generator: Permutation
    order: int

    def elements(self) -> list[Permutation]:
        out = [identity(len(self.generator))]
        for _ in range(self.order - 1):
            out.append(compose(self.generator, out[-1]))
        return out


def _degree_shift_ok(sc: SunshineSupercard, s: int) -> bool:
    return all(sc.degree_at(i) == sc.degree_at(i + s) for i in range(sc.c))


def _reflection_ok(sc: SunshineSupercard, beta: int) -> bool:
    return all(sc.degree_at(i) == sc.degree_at(beta - i) for i in range(sc.c))


def cycle_map(sc: SunshineSupercard, alpha: int, reflect: bool) -> Permutation:
    """x_i -> x_{alpha +- i} and x_i^j -> x_{alpha +- i}^j."""
    perm = list(range(sc.graph.n))
    for i in range(sc.c):
        k = alpha - i if reflect else alpha + i
        perm[sc.x(i)] = sc.x(k)
        for src, dst in zip(sc.leaves_at(i), sc.leaves_at(k)):
            perm[src] = dst
    return tuple(perm)


def delta_and_phi(sc: SunshineSupercard) -> PhiSubgroup | None:
    c = sc.c
    delta = next((s for s in range(1, c) if _degree_shift_ok(sc, s)), None)
    if delta is None:
        return None
    phi = cycle_map(sc, delta, False)
    if not canon.is_isomorphism(sc.graph, sc.graph, phi):
        raise InvariantViolation("degree-preserving shift did not give an automorphism")
    return PhiSubgroup(delta, phi, c // delta)


class GroupKind(str, enum.Enum):
    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    NOT_A_GROUP = "not_a_group"
    OTHER_GROUP = "other_group"


@dataclass(frozen=True)
class GroupTag:
    kind: GroupKind
    order: int

    def __str__(self) -> str:
        if self.kind in (GroupKind.CYCLIC, GroupKind.DIHEDRAL):
            return f"{self.kind.value}({self.order})"
        return self.kind.value


def _power(p: Permutation, k: int) -> Permutation:
    out = identity(len(p))
    for _ in range(k):
        out = compose(p, out)
    return out


def recognize_group(perms: Sequence[Permutation], phi: Permutation | None = None, pi: Permutation | None = None) -> GroupTag:
    """Tag a set of permutations by explicit relation checks."""
    s = set(perms)
    n = len(next(iter(s)))
    closed = identity(n) in s and all(compose(p, q) in s for p in s for q in s)
    if not closed:
        return GroupTag(GroupKind.NOT_A_GROUP, len(s))
    if phi is not None:
        k = next((j for j in range(1, len(s) + 1) if _power(phi, j) == identity(n)), None)
        if k is not None and k == len(s) and {_power(phi, j) for j in range(k)} == s:
            return GroupTag(GroupKind.CYCLIC, k)
        if (
            k is not None
            and pi is not None
            and 2 * k == len(s)
            and compose(pi, pi) == identity(n)
            and compose(pi, compose(phi, pi)) == invert(phi)
            and {_power(phi, j) for j in range(k)} | {compose(_power(phi, j), pi) for j in range(k)} == s
        ):
            return GroupTag(GroupKind.DIHEDRAL, 2 * k)
    return GroupTag(GroupKind.OTHER_GROUP, len(s))


@dataclass(frozen=True)
class AutOptimum:
    x: SaturatingSet
    kind: GroupTag
    phi: PhiSubgroup
    pi: Permutation | None
    aut_part: tuple[Permutation, ...]
    case_i: bool
    case_ii: bool
    leaf_adjusted: bool


def valid_reflections(sc: SunshineSupercard) -> list[int]:
    return [beta for beta in range(sc.c) if _reflection_ok(sc, beta)]


def optimum_aut_set(sc: SunshineSupercard) -> AutOptimum | None:
    """Build X with X_Aut equal to Phi (cyclic) or Phi with a reflection coset (dihedral).

    When the chosen reflection sigma fixes the orbit of x_0, the leaves
    x_{k delta}^1 and x_{k delta}^2 are swapped at every anchor in that orbit,
    which sends w to x_alpha^2 while keeping the result a group.
    """
    phi = delta_and_phi(sc)
    if phi is None:
        return None
    d, nu = phi.delta, sc.nu
    betas = valid_reflections(sc)
    case_i = all((beta - 2 * nu) % d == 0 for beta in betas)
    case_ii = sc.degree_at(0) == 3 and all(beta % d == 0 for beta in betas)
    rot = phi.elements()
    pi = None
    adjusted = False
    if case_i or case_ii:
        aut = rot
    else:
        beta = next(b for b in betas if (b - 2 * nu) % d != 0)
        sigma = cycle_map(sc, beta, True)
        if beta % d != 0:
            pi = sigma
        else:
            if sc.degree_at(0) < 4:
                raise InvariantViolation("leaf adjustment needs d(x_0) >= 4")
            tau = list(range(sc.graph.n))
            for k in range(0, sc.c, d):
                l1, l2 = sc.leaves_at(k)[:2]
                tau[l1], tau[l2] = l2, l1
            pi = compose(tuple(tau), sigma)
            adjusted = True
        aut = rot + [compose(r, pi) for r in rot]
    for p in aut:
        if not canon.is_isomorphism(sc.graph, sc.graph, p):
            raise InvariantViolation("constructed element is not an automorphism")
    comp = Compatibility(sc.graph, sc.v, sc.w)
    inv = [invert(p) for p in aut]
    fixed = {q[sc.v]: p[sc.w] for p, q in zip(aut, inv)}
    if len(fixed) != len(aut) or len(set(fixed.values())) != len(aut):
        raise InvariantViolation("automorphism part is not saturating")
    pairs = _optimum_pairs(comp, fixed)
    by_pair = {(q[sc.v], p[sc.w]): p for p, q in zip(aut, inv)}
    elems = []
    for a, b in sorted(pairs.items()):
        lam = by_pair.get((a, b))
        elems.append(comp.element(a, b, lam))
    x = classify_set(sc, SaturatingSet(tuple(elems)))
    tag = recognize_group(aut, phi.generator, pi)
    return AutOptimum(x, tag, phi, pi, tuple(aut), case_i, case_ii, adjusted)


def orbit(perms: Iterable[Permutation], u: int) -> set[int]:
    return {p[u] for p in perms}


def saturating_set_json(x: SaturatingSet, kind: GroupTag | None = None) -> str:
    obj = {
        "elements": [e.to_obj() for e in sorted(x.elements, key=lambda e: (e.a, e.b))],
        "size": len(x),
        "chi": x.chi,
        "group_kind": None if kind is None else str(kind),
    }
    return json.dumps(obj, sort_keys=True)
