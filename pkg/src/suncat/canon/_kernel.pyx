# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled partition-refinement kernel (n <= 64).

Mirrors ``_pure`` step for step; graphs are uint64 neighbourhood masks.
"""

from libc.stdint cimport uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND = "cython"
MAXN = 64

cdef enum:
    CMAXN = 64


cdef inline int _cell_end(const int* ptn, int i) noexcept nogil:
    while ptn[i]:
        i += 1
    return i


cdef uint64_t _refine(int n, const uint64_t* masks, int* lab, int* ptn) noexcept nogil:
    # returns a hash of the split trace; lockstep callers compare hashes and
    # rely on leaf verification to catch collisions
    cdef uint64_t h = 1469598103934665603ULL
    cdef uint64_t smask
    cdef int s, e, i, j, k, a, b, tmpc, tmpv, changed, diff
    cdef int cnt[CMAXN]
    cdef int vs[CMAXN]
    while True:
        changed = 0
        s = 0
        while s < n:
            e = _cell_end(ptn, s)
            smask = 0
            for k in range(s, e + 1):
                smask |= (<uint64_t>1) << lab[k]
            i = 0
            while i < n:
                j = _cell_end(ptn, i)
                if j > i:
                    diff = 0
                    for k in range(i, j + 1):
                        cnt[k - i] = __builtin_popcountll(masks[lab[k]] & smask)
                        vs[k - i] = lab[k]
                        if cnt[k - i] != cnt[0]:
                            diff = 1
                    if diff:
                        for a in range(1, j - i + 1):
                            tmpc = cnt[a]
                            tmpv = vs[a]
                            b = a - 1
                            while b >= 0 and cnt[b] > tmpc:
                                cnt[b + 1] = cnt[b]
                                vs[b + 1] = vs[b]
                                b -= 1
                            cnt[b + 1] = tmpc
                            vs[b + 1] = tmpv
                        for k in range(i, j + 1):
                            lab[k] = vs[k - i]
                        for k in range(i, j):
                            ptn[k] = 1 if cnt[k - i] == cnt[k - i + 1] else 0
                        h = (h ^ <uint64_t>(s + 1)) * 1099511628211ULL
                        h = (h ^ <uint64_t>(i + 1)) * 1099511628211ULL
                        for k in range(j - i + 1):
                            h = (h ^ <uint64_t>(cnt[k] + 7)) * 1099511628211ULL
                        changed = 1
                i = j + 1
            if changed:
                break
            s = e + 1
        if not changed:
            return h


cdef int _target(int n, const int* ptn) noexcept nogil:
    cdef int best = -1, best_size = n + 1, i = 0, j, size
    while i < n:
        j = _cell_end(ptn, i)
        size = j - i + 1
        if 1 < size < best_size:
            best = i
            best_size = size
        i = j + 1
    return best


cdef void _individualize(int* lab, int* ptn, int start, int v) noexcept nogil:
    cdef int k = start, j, a, b, tmp
    while lab[k] != v:
        k += 1
    lab[k] = lab[start]
    lab[start] = v
    j = _cell_end(ptn, start)
    for a in range(start + 2, j + 1):
        tmp = lab[a]
        b = a - 1
        while b > start and lab[b] > tmp:
            lab[b + 1] = lab[b]
            b -= 1
        lab[b + 1] = tmp
    ptn[start] = 0


cdef void _encode(int n, const uint64_t* masks, const int* lab, uint64_t* rows) noexcept nogil:
    cdef int pos[CMAXN]
    cdef int i, u
    cdef uint64_t m, row
    for i in range(n):
        pos[lab[i]] = i
    for i in range(n):
        row = 0
        m = masks[lab[i]]
        u = 0
        while m:
            if m & 1:
                row |= (<uint64_t>1) << (n - 1 - pos[u])
            m >>= 1
            u += 1
        rows[i] = row


cdef list _twins(int n, const uint64_t* masks, list colors):
    cdef list gens = []
    cdef int u, v
    cdef uint64_t mu, mv
    for u in range(n):
        for v in range(u + 1, n):
            if colors[u] != colors[v]:
                continue
            mu = masks[u] & ~((<uint64_t>1) << v)
            mv = masks[v] & ~((<uint64_t>1) << u)
            if mu == mv:
                perm = list(range(n))
                perm[u] = v
                perm[v] = u
                gens.append(perm)
    return gens


cdef list _orbit_roots(int n, list gens):
    parent = list(range(n))

    def find(x):
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


cdef void _initial(int n, list colors, int* lab, int* ptn):
    order = sorted(range(n), key=lambda v: (colors[v], v))
    cdef int i
    for i in range(n):
        lab[i] = order[i]
    for i in range(n):
        ptn[i] = 0 if (i == n - 1 or colors[order[i]] != colors[order[i + 1]]) else 1


cdef class _Canon:
    cdef int n
    cdef uint64_t masks[CMAXN]
    cdef uint64_t best_enc[CMAXN]
    cdef int best_lab[CMAXN]
    cdef bint have_best
    cdef list autos

    cdef void search(self, int* lab, int* ptn, int* prefix, int plen):
        cdef int n = self.n
        cdef int t = _target(n, ptn)
        cdef uint64_t enc[CMAXN]
        cdef int lab2[CMAXN]
        cdef int ptn2[CMAXN]
        cdef int tried[CMAXN]
        cdef int cell[CMAXN]
        cdef int ntried = 0, i, j, k, cmp, csize, v
        if t < 0:
            _encode(n, self.masks, lab, enc)
            cmp = 0
            if self.have_best:
                for i in range(n):
                    if enc[i] != self.best_enc[i]:
                        cmp = -1 if enc[i] < self.best_enc[i] else 1
                        break
            if not self.have_best or cmp < 0:
                for i in range(n):
                    self.best_enc[i] = enc[i]
                    self.best_lab[i] = lab[i]
                self.have_best = True
            elif cmp == 0:
                perm = [0] * n
                for i in range(n):
                    perm[self.best_lab[i]] = lab[i]
                self.autos.append(perm)
            return
        j = _cell_end(ptn, t)
        csize = j - t + 1
        for i in range(csize):
            cell[i] = lab[t + i]
        # ascending insertion sort
        for i in range(1, csize):
            v = cell[i]
            k = i - 1
            while k >= 0 and cell[k] > v:
                cell[k + 1] = cell[k]
                k -= 1
            cell[k + 1] = v
        for i in range(csize):
            v = cell[i]
            if ntried and self._pruned(v, tried, ntried, prefix, plen):
                continue
            for k in range(n):
                lab2[k] = lab[k]
                ptn2[k] = ptn[k]
            _individualize(lab2, ptn2, t, v)
            _refine(n, self.masks, lab2, ptn2)
            prefix[plen] = v
            self.search(lab2, ptn2, prefix, plen + 1)
            tried[ntried] = v
            ntried += 1

    cdef bint _pruned(self, int v, int* tried, int ntried, int* prefix, int plen):
        cdef int k, p
        fixing = []
        for g in self.autos:
            ok = True
            for k in range(plen):
                p = prefix[k]
                if g[p] != p:
                    ok = False
                    break
            if ok:
                fixing.append(g)
        if not fixing:
            return False
        roots = _orbit_roots(self.n, fixing)
        for k in range(ntried):
            if roots[v] == roots[tried[k]]:
                return True
        return False


def canonical_labeling(int n, masks, colors):
    if n > CMAXN:
        raise ValueError("compiled kernel supports at most 64 vertices")
    if n == 0:
        return [], ()
    cdef _Canon c = _Canon()
    cdef int lab[CMAXN]
    cdef int ptn[CMAXN]
    cdef int prefix[CMAXN]
    cdef int i
    colors = list(colors)
    c.n = n
    for i in range(n):
        c.masks[i] = masks[i]
    c.have_best = False
    c.autos = _twins(n, c.masks, colors)
    _initial(n, colors, lab, ptn)
    _refine(n, c.masks, lab, ptn)
    c.search(lab, ptn, prefix, 0)
    return [c.best_lab[i] for i in range(n)], tuple(c.best_enc[i] for i in range(n))


cdef class _Iso:
    cdef int n
    cdef uint64_t mg[CMAXN]
    cdef uint64_t mh[CMAXN]
    cdef list twins_h
    cdef list out
    cdef bint first_only
    cdef long limit

    cdef bint search(self, int* lab_g, int* ptn_g, int* lab_h, int* ptn_h):
        cdef int n = self.n
        cdef int i, j, k, x = CMAXN, t = -1, y, csize, before
        cdef int perm[CMAXN]
        cdef int cands[CMAXN]
        cdef int lg[CMAXN]
        cdef int pg[CMAXN]
        cdef int lh[CMAXN]
        cdef int ph[CMAXN]
        cdef uint64_t img, m, hg, hh
        cdef bint same
        i = 0
        while i < n:
            j = _cell_end(ptn_g, i)
            if j == i:
                perm[lab_g[i]] = lab_h[i]
            else:
                for k in range(i, j + 1):
                    if lab_g[k] < x:
                        x = lab_g[k]
                        t = i
            i = j + 1
        if t < 0:
            for i in range(n):
                img = 0
                m = self.mg[i]
                k = 0
                while m:
                    if m & 1:
                        img |= (<uint64_t>1) << perm[k]
                    m >>= 1
                    k += 1
                if img != self.mh[perm[i]]:
                    return False
            self.out.append([perm[i] for i in range(n)])
            return self.first_only or len(self.out) >= self.limit
        j = _cell_end(ptn_h, t)
        csize = j - t + 1
        for i in range(csize):
            cands[i] = lab_h[t + i]
        for i in range(1, csize):
            y = cands[i]
            k = i - 1
            while k >= 0 and cands[k] > y:
                cands[k + 1] = cands[k]
                k -= 1
            cands[k + 1] = y
        failed = []
        for i in range(csize):
            y = cands[i]
            if failed and self.twins_h:
                skip = False
                for g in self.twins_h:
                    if g[y] != y and g[y] in failed:
                        skip = True
                        break
                if skip:
                    continue
            for k in range(n):
                lg[k] = lab_g[k]
                pg[k] = ptn_g[k]
                lh[k] = lab_h[k]
                ph[k] = ptn_h[k]
            _individualize(lg, pg, t, x)
            _individualize(lh, ph, t, y)
            hg = _refine(n, self.mg, lg, pg)
            hh = _refine(n, self.mh, lh, ph)
            before = len(self.out)
            same = hg == hh
            if same:
                for k in range(n):
                    if pg[k] != ph[k]:
                        same = False
                        break
            if same and self.search(lg, pg, lh, ph):
                return True
            if len(self.out) == before:
                failed.append(y)
        return False


def isomorphisms(int n, masks_g, colors_g, masks_h, colors_h, bint first_only, long limit):
    if n > CMAXN:
        raise ValueError("compiled kernel supports at most 64 vertices")
    colors_g = list(colors_g)
    colors_h = list(colors_h)
    if sorted(colors_g) != sorted(colors_h):
        return []
    if n == 0:
        return [[]]
    cdef _Iso s = _Iso()
    cdef int lab_g[CMAXN]
    cdef int ptn_g[CMAXN]
    cdef int lab_h[CMAXN]
    cdef int ptn_h[CMAXN]
    cdef int i
    s.n = n
    for i in range(n):
        s.mg[i] = masks_g[i]
        s.mh[i] = masks_h[i]
    _initial(n, colors_g, lab_g, ptn_g)
    _initial(n, colors_h, lab_h, ptn_h)
    for i in range(n):
        if ptn_g[i] != ptn_h[i]:
            return []
    if _refine(n, s.mg, lab_g, ptn_g) != _refine(n, s.mh, lab_h, ptn_h):
        return []
    for i in range(n):
        if ptn_g[i] != ptn_h[i]:
            return []
    s.first_only = first_only
    s.limit = limit
    s.out = []
    s.twins_h = _twins(n, s.mh, colors_h) if first_only else []
    s.search(lab_g, ptn_g, lab_h, ptn_h)
    return s.out
