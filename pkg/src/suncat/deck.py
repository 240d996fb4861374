"""Decks, common-card counts and explicit card witnesses."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from . import canon
from .canon import CanonicalForm
from .graph import Graph, GraphError, delete_vertices


@dataclass(frozen=True)
class Deck:
    cards: tuple[CanonicalForm, ...]

    def __len__(self) -> int:
        return len(self.cards)

    def counter(self) -> Counter:
        return Counter(self.cards)

    def to_json(self) -> str:
        return json.dumps([c.hex() for c in self.cards])

    @classmethod
    def from_json(cls, text: str) -> "Deck":
        return cls(tuple(sorted(CanonicalForm.from_hex(h) for h in json.loads(text))))


def card(g: Graph, v: int) -> Graph:
    return delete_vertices(g, [v])[0]


def card_forms(g: Graph) -> list[CanonicalForm]:
    """Canonical form of ``g - v`` for each v, indexed by v."""
    return [canon.canonical_form(card(g, v)) for v in range(g.n)]


def deck(g: Graph) -> Deck:
    if g.n < 1:
        raise GraphError("the deck of the empty graph is undefined")
    return Deck(tuple(sorted(card_forms(g))))


def _merge_count(a: Sequence, b: Sequence) -> int:
    i = j = k = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            k += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return k


def common_from_decks(d1: Deck, d2: Deck, method: str = "merge") -> int:
    if method == "merge":
        return _merge_count(d1.cards, d2.cards)
    if method == "counter":
        return sum((d1.counter() & d2.counter()).values())
    raise ValueError(f"unknown method {method!r}")


def common_cards(g: Graph, h: Graph, method: str = "merge") -> int:
    """b(g, h).  Graphs of different orders share no cards and give 0."""
    if g.n != h.n or g.n == 0:
        return 0
    return common_from_decks(deck(g), deck(h), method)


@dataclass(frozen=True)
class CommonResult:
    b: int
    status: str  # "ok" or "order_mismatch"


def common_cards_status(g: Graph, h: Graph) -> CommonResult:
    if g.n != h.n:
        return CommonResult(0, "order_mismatch")
    return CommonResult(common_cards(g, h), "ok")


@dataclass(frozen=True)
class Witness:
    """``iso`` maps the card ``g - v`` onto ``h - t``, both densely relabeled.

    ``iso_full`` gives the same map on original vertex ids (``-1`` at ``v``).
    """

    v: int
    t: int
    iso: tuple[int, ...]
    iso_full: tuple[int, ...]

    def to_obj(self) -> dict:
        return {"v": self.v, "t": self.t, "iso": list(self.iso_full)}


def witness_for(g: Graph, v: int, h: Graph, t: int) -> Witness | None:
    cg, mg = delete_vertices(g, [v])
    ch, mh = delete_vertices(h, [t])
    iso = canon.find_isomorphism(cg, ch)
    if iso is None:
        return None
    back_h = {new: old for old, new in mh.items()}
    full = [-1] * g.n
    for old, new in mg.items():
        full[old] = back_h[iso[new]]
    return Witness(v, t, iso, tuple(full))


def witnesses(g: Graph, h: Graph) -> list[Witness]:
    """One lex-least witness per ordered pair (v, t) with ``g - v`` isomorphic to ``h - t``."""
    if g.n != h.n:
        return []
    fg, fh = card_forms(g), card_forms(h)
    out = []
    for v in range(g.n):
        for t in range(h.n):
            if fg[v] == fh[t]:
                w = witness_for(g, v, h, t)
                assert w is not None
                out.append(w)
    return out


def witnesses_json(ws: list[Witness]) -> str:
    return json.dumps([w.to_obj() for w in ws], sort_keys=True)
