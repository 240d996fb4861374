"""graph6, JSON edge-list and DOT serialization."""

from __future__ import annotations

import json
from typing import Sequence

from .graph import Graph, GraphError


def _size_bytes(n: int) -> list[int]:
    if n <= 62:
        return [n]
    if n <= 258047:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]


def to_graph6(g: Graph) -> str:
    """graph6 string without header or trailing newline."""
    bits = []
    for j in range(1, g.n):
        mj = g.masks[j]
        for i in range(j):
            bits.append((mj >> i) & 1)
    while len(bits) % 6:
        bits.append(0)
    groups = [int("".join(map(str, bits[k : k + 6])), 2) for k in range(0, len(bits), 6)]
    return "".join(chr(b + 63) for b in _size_bytes(g.n) + groups)


def from_graph6(s: str | bytes) -> Graph:
    if isinstance(s, bytes):
        s = s.decode("ascii")
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphError("empty graph6 string")
    vals = [ord(ch) - 63 for ch in s]
    if any(v < 0 or v > 63 for v in vals):
        raise GraphError(f"invalid graph6 character in {s!r}")
    if vals[0] != 63:
        n, body = vals[0], vals[1:]
    elif len(vals) > 1 and vals[1] == 63:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        body = vals[8:]
    else:
        n = 0
        for v in vals[1:4]:
            n = (n << 6) | v
        body = vals[4:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise GraphError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    bits = []
    for v in body:
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def to_json_obj(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def from_json_obj(obj: dict) -> Graph:
    try:
        n = int(obj["n"])
        edges = [tuple(e) for e in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed edge-list object: {exc}") from exc
    return Graph.from_edges(n, edges)


def to_json(g: Graph) -> str:
    return json.dumps(to_json_obj(g), sort_keys=True)


def to_dot(g: Graph, order: Sequence[int] | None = None, name: str = "G") -> str:
    """DOT text; ``order`` lists vertices to emit first (e.g. the cycle)."""
    seen = list(order or [])
    rest = [v for v in range(g.n) if v not in set(seen)]
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in seen + rest]
    lines += [f"  {u} -- {v};" for u, v in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    """Parse either a JSON edge-list object or a graph6 line."""
    t = text.strip()
    if t.startswith("{"):
        return from_json_obj(json.loads(t))
    return from_graph6(t.splitlines()[0])
