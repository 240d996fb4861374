"""Canonical forms, isomorphism witnesses and automorphism groups.

The search itself lives in a compiled extension (``_kernel``) when it was
built, otherwise in ``_pure``.  Set ``SUNCAT_BACKEND=python`` to force the
fallback.  Both backends produce identical forms and identical witnesses.

Canonical forms are stable within a major version: graph6 of the canonically
relabeled graph, followed by the colour sequence for coloured forms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import total_ordering
from typing import Sequence

from .. import io as _io
from ..graph import Graph, GraphError
from . import _pure


class ResourceError(RuntimeError):
    """An explicit enumeration would exceed its configured cap."""

    def __init__(self, message: str, cap: int) -> None:
        super().__init__(message)
        self.cap = cap


def _load_backend():
    if os.environ.get("SUNCAT_BACKEND", "").lower() == "python":
        return _pure
    try:
        from . import _kernel
    except ImportError:
        return _pure
    return _kernel


_backend = _load_backend()
_KERNEL_MAXN = 64


def backend_name() -> str:
    return _backend.BACKEND


def _impl(n: int):
    return _backend if n <= _KERNEL_MAXN else _pure


Permutation = tuple[int, ...]


@total_ordering
@dataclass(frozen=True)
class CanonicalForm:
    data: bytes

    def __lt__(self, other: "CanonicalForm") -> bool:
        return self.data < other.data

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, s: str) -> "CanonicalForm":
        return cls(bytes.fromhex(s))

    def __repr__(self) -> str:
        return f"CanonicalForm({self.hex()})"


def _colors(g: Graph, colors: Sequence[int] | None) -> list[int]:
    if colors is None:
        return [0] * g.n
    if len(colors) != g.n:
        raise GraphError(f"colour sequence has length {len(colors)}, graph has {g.n} vertices")
    return list(colors)


def canonical_labeling(g: Graph, colors: Sequence[int] | None = None) -> list[int]:
    """``lab[i]`` is the original vertex placed at canonical position ``i``."""
    cols = _colors(g, colors)
    lab, _ = _impl(g.n).canonical_labeling(g.n, list(g.masks), cols)
    return list(lab)


def canonical_graph(g: Graph, colors: Sequence[int] | None = None) -> Graph:
    lab = canonical_labeling(g, colors)
    perm = [0] * g.n
    for i, v in enumerate(lab):
        perm[v] = i
    return g.relabel(perm)


def canonical_form(g: Graph, colors: Sequence[int] | None = None) -> CanonicalForm:
    cols = _colors(g, colors)
    lab = canonical_labeling(g, cols)
    perm = [0] * g.n
    for i, v in enumerate(lab):
        perm[v] = i
    data = _io.to_graph6(g.relabel(perm)).encode("ascii")
    if colors is not None:
        data += b"|" + ",".join(str(cols[v]) for v in lab).encode("ascii")
    return CanonicalForm(data)


def is_isomorphism(g: Graph, h: Graph, perm: Sequence[int]) -> bool:
    if g.n != h.n or len(perm) != g.n or sorted(perm) != list(range(g.n)):
        return False
    if g.m != h.m:
        return False
    return all(h.has_edge(perm[u], perm[v]) for u, v in g.edges())


def _search(g: Graph, h: Graph, cg, ch, first_only: bool, limit: int) -> list[Permutation]:
    if g.n != h.n or g.m != h.m:
        return []
    out = _impl(g.n).isomorphisms(g.n, list(g.masks), _colors(g, cg), list(h.masks), _colors(h, ch), first_only, limit)
    return [tuple(p) for p in out]


def find_isomorphism(
    g: Graph,
    h: Graph,
    colors_g: Sequence[int] | None = None,
    colors_h: Sequence[int] | None = None,
) -> Permutation | None:
    """Lexicographically least colour-preserving isomorphism ``g -> h``, or None.

    Entry ``i`` of the result is the image of vertex ``i``.  The witness is
    checked edge by edge before it is returned.
    """
    found = _search(g, h, colors_g, colors_h, True, 1)
    if not found:
        return None
    perm = found[0]
    if not is_isomorphism(g, h, perm):
        raise AssertionError("isomorphism search returned an invalid witness")
    return perm


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


def find_isomorphism_mapping(g: Graph, a: int, h: Graph, b: int) -> Permutation | None:
    """Least isomorphism ``g -> h`` that sends vertex ``a`` to vertex ``b``."""
    cg = [0] * g.n
    ch = [0] * h.n
    cg[a] = 1
    ch[b] = 1
    return find_isomorphism(g, h, cg, ch)


def automorphism_group(
    g: Graph,
    colors: Sequence[int] | None = None,
    max_n: int = 20,
    max_size: int = 10**6,
) -> list[Permutation]:
    """Every automorphism of ``g``, in lexicographic order of image sequences."""
    if g.n > max_n:
        raise ResourceError(f"automorphism listing capped at {max_n} vertices (graph has {g.n})", max_n)
    out = _search(g, g, colors, colors, False, max_size + 1)
    if len(out) > max_size:
        raise ResourceError(f"automorphism group exceeds {max_size} elements", max_size)
    return out


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p`` after ``q``."""
    return tuple(p[x] for x in q)


def invert(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def identity(n: int) -> Permutation:
    return tuple(range(n))


def check_neighborhood_extension(g: Graph, h: Graph, v: int, gamma: Sequence[int]) -> bool:
    """True iff gamma maps ``g - v`` onto ``h - gamma(v)`` and ``N_g(v)`` onto ``N_h(gamma(v))``."""
    if g.n != h.n:
        raise GraphError(f"order mismatch: {g.n} vs {h.n}")
    if len(gamma) != g.n or sorted(gamma) != list(range(g.n)):
        raise GraphError("gamma is not a bijection on the vertex set")
    gv = gamma[v]
    card_ok = True
    for x, y in g.edges():
        if v in (x, y):
            continue
        if not h.has_edge(gamma[x], gamma[y]):
            card_ok = False
            break
    m_card_g = g.m - g.degree(v)
    m_card_h = h.m - h.degree(gv)
    card_ok = card_ok and m_card_g == m_card_h
    nb_ok = {gamma[x] for x in g.adj[v]} == set(h.adj[gv])
    return card_ok and nb_ok
