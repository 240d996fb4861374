"""Pure-Python partition-refinement kernel.

This is the fallback for the compiled ``_kernel`` extension and must stay
behaviourally identical to it: same refinement, same target-cell rule, same
leaf encoding.  Graphs arrive as neighbourhood bitmasks.

Ordered partitions are held nauty-style: ``lab`` lists the vertices, ``ptn[i]``
is 0 when position ``i`` closes a cell.
"""

from __future__ import annotations

BACKEND = "python"


def _initial(n: int, colors: list[int]) -> tuple[list[int], list[int]]:
    lab = sorted(range(n), key=lambda v: (colors[v], v))
    ptn = [1] * n
    for i in range(n):
        if i == n - 1 or colors[lab[i]] != colors[lab[i + 1]]:
            ptn[i] = 0
    return lab, ptn


def _refine(n: int, masks: list[int], lab: list[int], ptn: list[int], trace: list[int] | None) -> None:
    """Refine to an equitable partition in place.

    Every cell is tried as a splitter in position order; after any split the scan
    restarts from the first cell.  Split fragments are ordered by ascending
    neighbour count, which keeps the result label-invariant.
    """
    while True:
        changed = False
        s = 0
        while s < n:
            e = s
            while ptn[e]:
                e += 1
            smask = 0
            for k in range(s, e + 1):
                smask |= 1 << lab[k]
            i = 0
            while i < n:
                j = i
                while ptn[j]:
                    j += 1
                if j > i:
                    cnt = [bin(masks[lab[k]] & smask).count("1") for k in range(i, j + 1)]
                    first = cnt[0]
                    if any(c != first for c in cnt):
                        order = sorted(range(j - i + 1), key=lambda k: cnt[k])
                        seg = [lab[i + k] for k in order]
                        scnt = [cnt[k] for k in order]
                        lab[i : j + 1] = seg
                        for k in range(i, j):
                            ptn[k] = 0 if scnt[k - i] != scnt[k - i + 1] else 1
                        if trace is not None:
                            trace.append(s)
                            trace.append(i)
                            trace.extend(scnt)
                        changed = True
                i = j + 1
            if changed:
                break
            s = e + 1
        if not changed:
            return


def _target(n: int, ptn: list[int]) -> int:
    """Start of the first smallest non-singleton cell, or -1 if discrete."""
    best, best_size = -1, n + 1
    i = 0
    while i < n:
        j = i
        while ptn[j]:
            j += 1
        size = j - i + 1
        if 1 < size < best_size:
            best, best_size = i, size
        i = j + 1
    return best


def _individualize(lab: list[int], ptn: list[int], start: int, v: int) -> None:
    k = lab.index(v, start)
    lab[start], lab[k] = lab[k], lab[start]
    # keep the remainder of the cell in ascending order for determinism
    j = start
    while ptn[j]:
        j += 1
    lab[start + 1 : j + 1] = sorted(lab[start + 1 : j + 1])
    ptn[start] = 0


def _encode(n: int, masks: list[int], lab: list[int]) -> tuple[int, ...]:
    pos = [0] * n
    for i, v in enumerate(lab):
        pos[v] = i
    rows = []
    for v in lab:
        row = 0
        m = masks[v]
        while m:
            low = m & -m
            u = low.bit_length() - 1
            row |= 1 << (n - 1 - pos[u])
            m ^= low
        rows.append(row)
    return tuple(rows)


def _twins(n: int, masks: list[int], colors: list[int]) -> list[list[int]]:
    """Generators swapping same-coloured twins (equal open or closed neighbourhoods)."""
    gens = []
    for u in range(n):
        for v in range(u + 1, n):
            if colors[u] != colors[v]:
                continue
            mu, mv = masks[u] & ~(1 << v), masks[v] & ~(1 << u)
            if mu == mv:
                perm = list(range(n))
                perm[u], perm[v] = v, u
                gens.append(perm)
    return gens


def _orbit_roots(n: int, gens: list[list[int]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def canonical_labeling(n: int, masks: list[int], colors: list[int]) -> tuple[list[int], tuple[int, ...]]:
    """Return ``(lab, enc)``: the canonical vertex order and its adjacency encoding.

    ``enc`` is the lexicographically least row encoding over all leaves of the
    individualization-refinement tree; branches equivalent under a known
    automorphism fixing the current prefix are skipped.
    """
    if n == 0:
        return [], ()
    lab, ptn = _initial(n, colors)
    _refine(n, masks, lab, ptn, None)
    best: list = [None, None]
    autos = _twins(n, masks, colors)

    def search(lab: list[int], ptn: list[int], prefix: list[int]) -> None:
        t = _target(n, ptn)
        if t < 0:
            enc = _encode(n, masks, lab)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, list(lab)
            elif enc == best[0]:
                perm = [0] * n
                for a, b in zip(best[1], lab):
                    perm[a] = b
                autos.append(perm)
            return
        j = t
        while ptn[j]:
            j += 1
        cell = sorted(lab[t : j + 1])
        tried: list[int] = []
        for v in cell:
            if tried:
                fixing = [g for g in autos if all(g[p] == p for p in prefix)]
                if fixing:
                    roots = _orbit_roots(n, fixing)
                    if any(roots[v] == roots[u] for u in tried):
                        continue
            lab2, ptn2 = list(lab), list(ptn)
            _individualize(lab2, ptn2, t, v)
            _refine(n, masks, lab2, ptn2, None)
            search(lab2, ptn2, prefix + [v])
            tried.append(v)

    search(lab, ptn, [])
    return best[1], best[0]


def isomorphisms(
    n: int,
    masks_g: list[int],
    colors_g: list[int],
    masks_h: list[int],
    colors_h: list[int],
    first_only: bool,
    limit: int,
) -> list[list[int]]:
    """Colour-preserving isomorphisms ``G -> H`` as image lists.

    Branching always happens on the smallest ``G`` vertex whose image is still
    open, with candidates in ascending order, so the first isomorphism found is
    the one with the lexicographically least image sequence.  At most ``limit``
    are returned.
    """
    if sorted(colors_g) != sorted(colors_h):
        return []
    if n == 0:
        return [[]]
    lab_g, ptn_g = _initial(n, colors_g)
    lab_h, ptn_h = _initial(n, colors_h)
    if ptn_g != ptn_h:
        return []
    tg: list[int] = []
    th: list[int] = []
    _refine(n, masks_g, lab_g, ptn_g, tg)
    _refine(n, masks_h, lab_h, ptn_h, th)
    if tg != th or ptn_g != ptn_h:
        return []
    twins_h = _twins(n, masks_h, colors_h) if first_only else []
    out: list[list[int]] = []

    def search(lab_g: list[int], ptn_g: list[int], lab_h: list[int], ptn_h: list[int]) -> bool:
        # returns True when the caller should stop
        singles = {}
        i = 0
        open_start = {}
        while i < n:
            j = i
            while ptn_g[j]:
                j += 1
            if j == i:
                singles[lab_g[i]] = lab_h[i]
            else:
                for k in range(i, j + 1):
                    open_start[lab_g[k]] = i
            i = j + 1
        if not open_start:
            perm = [singles[v] for v in range(n)]
            for v in range(n):
                img = 0
                m = masks_g[v]
                while m:
                    low = m & -m
                    img |= 1 << perm[low.bit_length() - 1]
                    m ^= low
                if img != masks_h[perm[v]]:
                    return False
            out.append(perm)
            return first_only or len(out) >= limit
        x = min(open_start)
        t = open_start[x]
        j = t
        while ptn_h[j]:
            j += 1
        cands = sorted(lab_h[t : j + 1])
        failed: list[int] = []
        for y in cands:
            if failed and twins_h:
                if any(g[y] in failed for g in twins_h if g[y] != y):
                    continue
            lg, pg, lh, ph = list(lab_g), list(ptn_g), list(lab_h), list(ptn_h)
            _individualize(lg, pg, t, x)
            _individualize(lh, ph, t, y)
            tg2: list[int] = []
            th2: list[int] = []
            _refine(n, masks_g, lg, pg, tg2)
            _refine(n, masks_h, lh, ph, th2)
            before = len(out)
            if tg2 == th2 and pg == ph:
                if search(lg, pg, lh, ph):
                    return True
            if len(out) == before:
                failed.append(y)
        return False

    search(lab_g, ptn_g, lab_h, ptn_h)
    return out
