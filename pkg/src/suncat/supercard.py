"""Supercard construction, sunshine normal form, rebasing and chi-maximal selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import canon
from .canon import CanonicalForm, Permutation, invert
from .deck import Witness, card_forms, witnesses
from .families import SunshineSupercard, normal_form_supercard
from .graph import (
    Graph,
    GraphError,
    PreconditionError,
    Recognized,
    delete_vertices,
    is_d_leaf,
    recognize,
)
from .saturating import SaturatingElement, classify_element, is_active, sunshine_optimum


class HypothesisNotMet(PreconditionError):
    def __init__(self, message: str, witnesses: Sequence[Witness] = ()) -> None:
        super().__init__(message)
        self.witnesses = list(witnesses)


def construct_supercard(g: Graph, h: Graph, wit: Witness) -> Graph:
    """Add a vertex ``w = n`` joined to every x != v whose image is adjacent to t."""
    n = g.n
    if h.n != n or len(wit.iso_full) != n:
        raise GraphError("witness does not match the graph orders")
    gamma = wit.iso_full
    imgs = [gamma[x] for x in range(n) if x != wit.v]
    if sorted(imgs) != sorted(y for y in range(n) if y != wit.t):
        raise GraphError("witness map is not a bijection between the cards")
    for x, y in g.edges():
        if wit.v in (x, y):
            continue
        if not h.has_edge(gamma[x], gamma[y]):
            raise GraphError("witness map does not preserve edges")
    if g.m - g.degree(wit.v) != h.m - h.degree(wit.t):
        raise GraphError("witness cards have different edge counts")
    new_edges = [(x, n) for x in range(n) if x != wit.v and h.has_edge(gamma[x], wit.t)]
    gs = Graph.from_edges(n + 1, list(g.edges()) + new_edges)
    # G* - w is G itself; G* - v must be isomorphic to H
    if delete_vertices(gs, [n])[0] != g:
        raise AssertionError("supercard minus w differs from G")
    if not canon.are_isomorphic(delete_vertices(gs, [wit.v])[0], h):
        raise AssertionError("supercard minus v is not isomorphic to H")
    return gs


def _rooted_form(g: Graph, r: int) -> CanonicalForm:
    cols = [0] * g.n
    cols[r] = 1
    return canon.canonical_form(g, cols)


def sunshine_candidates(u: Graph, t: Graph, d_leaf_only: bool = False) -> list[tuple[Graph, int, int]]:
    """All sunshine supercards ``(G*, v, w)`` obtainable from witnesses with t a leaf.

    Every isomorphism of the cards is taken into account, not only the least
    one: the construction depends on gamma only through the preimage of t's
    neighbour, so each anchor that some isomorphism can produce is tried.
    """
    if u.n != t.n:
        return []
    fu, ft = card_forms(u), card_forms(t)
    n = u.n
    out = []
    for tv in range(n):
        if t.degree(tv) != 1:
            continue
        if d_leaf_only and not is_d_leaf(t, tv):
            continue
        (s,) = t.adj[tv]
        tc, tm = delete_vertices(t, [tv])
        target = _rooted_form(tc, tm[s])
        for v in range(n):
            if fu[v] != ft[tv]:
                continue
            uc, um = delete_vertices(u, [v])
            back = {new: old for old, new in um.items()}
            for x in range(uc.n):
                if _rooted_form(uc, x) == target:
                    anchor = back[x]
                    gs = Graph.from_edges(n + 1, list(u.edges()) + [(anchor, n)])
                    if recognize(gs) is Recognized.SUNSHINE:
                        out.append((gs, v, n))
    return out


def sunshine_supercard(u: Graph, t: Graph) -> SunshineSupercard:
    """First sunshine supercard from a witness whose t is a d-leaf, in normal form."""
    if recognize(u) is not Recognized.SUNSHINE or recognize(t) is not Recognized.CATERPILLAR:
        raise HypothesisNotMet("needs a sunshine graph and a caterpillar")
    ws = witnesses(u, t)
    for wit in ws:
        if not is_d_leaf(t, wit.t):
            continue
        gs = construct_supercard(u, t, wit)
        if recognize(gs) is Recognized.SUNSHINE:
            return normal_form_supercard(gs, wit.v, u.n)
    raise HypothesisNotMet("no witness with a d-leaf of T yields a sunshine supercard", ws)


def supercard_key(sc: SunshineSupercard) -> CanonicalForm:
    """Form of the supercard with v and w coloured, the identity of (G+, v, w)."""
    cols = [0] * sc.graph.n
    cols[sc.v] = 1
    cols[sc.w] = 2
    return canon.canonical_form(sc.graph, cols)


def all_sunshine_supercards(u: Graph, t: Graph) -> list[SunshineSupercard]:
    """Witness-reachable sunshine supercards up to isomorphism fixing v and w, sorted by form."""
    seen: dict[CanonicalForm, SunshineSupercard] = {}
    for gs, v, w in sunshine_candidates(u, t):
        sc = normal_form_supercard(gs, v, w)
        key = supercard_key(sc)
        if key not in seen:
            seen[key] = sc
    return [seen[k] for k in sorted(seen)]


def best_supercard(u: Graph, t: Graph) -> tuple[SunshineSupercard, int]:
    """Sunshine supercard of (u, t) with the largest chi; ties go to the least form."""
    if recognize(u) is not Recognized.SUNSHINE or recognize(t) is not Recognized.CATERPILLAR:
        raise HypothesisNotMet("needs a sunshine graph and a caterpillar")
    cands = all_sunshine_supercards(u, t)
    if not cands:
        raise HypothesisNotMet("no witness yields a sunshine supercard", witnesses(u, t))
    best, best_chi = None, -1
    for sc in cands:
        chi, _ = sunshine_optimum(sc)
        if chi > best_chi:
            best, best_chi = sc, chi
    return best, best_chi


@dataclass(frozen=True)
class RebaseContext:
    eta: int
    xi: int
    zeta: int
    theta: Permutation
    reversed: bool


def rebase_supercard(sc: SunshineSupercard, sigma: SaturatingElement | Sequence[int]) -> tuple[SunshineSupercard, RebaseContext]:
    """Move w from x_0 to x_eta = sigma^-1(u), u the neighbour of sigma(w), and relabel."""
    gp = sc.graph
    lam = tuple(sigma.lam if isinstance(sigma, SaturatingElement) else sigma)
    if not is_active(gp, sc.v, sc.w, lam):
        raise PreconditionError("sigma fails the card equation")
    e = classify_element(sc, SaturatingElement(lam, invert(lam)[sc.v], lam[sc.w], False))
    if not e.in_tilde:
        raise PreconditionError("sigma is not in X-tilde: sigma(w) must be a leaf of U+ and a d-leaf of T")
    inv = invert(lam)
    (u,) = gp.adj[lam[sc.w]]
    eta = sc.index(inv[u])
    xi = sc.index(inv[sc.v])
    if eta is None or xi is None:
        raise PreconditionError("sigma pulls the anchor or v off the cycle")
    c = sc.c
    raw = gp.remove_edges([(sc.x(0), sc.w)]).add_edges([(sc.x(eta), sc.w)])

    def deg(i: int) -> int:
        return raw.degree(sc.x(i))

    rev = False
    zeta = (xi - eta) % c
    if deg(xi - 1) < deg(xi + 1):
        rev = True
        zeta = (eta - xi) % c
    theta = [-1] * gp.n
    for k in range(c):
        src = eta - k if rev else eta + k
        theta[sc.x(src)] = k
    theta[sc.w] = c
    nxt = c + 1
    for k in range(c):
        src = sc.x(eta - k if rev else eta + k)
        for leaf in sorted(raw.adj[src]):
            if theta[leaf] == -1:
                theta[leaf] = nxt
                nxt += 1
    theta_t = tuple(theta)
    new = SunshineSupercard(raw.relabel(theta_t), tuple(range(c)), zeta, c)
    ctx = RebaseContext(eta, xi, zeta, theta_t, rev)
    _check_rebase(sc, new, lam, ctx)
    return new, ctx


def _check_rebase(sc: SunshineSupercard, new: SunshineSupercard, lam: Permutation, ctx: RebaseContext) -> None:
    th_inv = invert(ctx.theta)
    u_sigma = {frozenset((th_inv[x], th_inv[y])) for x, y in new.graph.edges() if new.w not in (x, y)}
    u_orig = {frozenset(e) for e in sc.graph.edges() if sc.w not in e}
    if u_sigma != u_orig:
        raise AssertionError("rebase changed U")
    t_sigma = {
        frozenset((lam[th_inv[x]], lam[th_inv[y]])) for x, y in new.graph.edges() if new.v not in (x, y)
    }
    t_orig = {frozenset(e) for e in sc.graph.edges() if sc.v not in e}
    if t_sigma != t_orig:
        raise AssertionError("rebase changed T")
