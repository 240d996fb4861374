"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import random
import time

import networkx as nx
import numpy as np

from conftest import atlas, from_nx, random_graph, to_nx
from suncat import canon
from suncat.canon import compose, identity, invert
from suncat.deck import card_forms, deck, witnesses
from suncat.families import (
    StructureKind,
    StructureSpec,
    enumerate_family,
    gen_structure,
    random_caterpillar,
    random_sunshine,
)
from suncat.graph import (
    Graph,
    Recognized,
    components,
    cycle_order,
    delete_vertices,
    diameter,
    predict_sunshine_card,
    recognize,
    tau,
)
from suncat.saturating import GroupKind, maximum_saturating_set, optimum_aut_set, orbit
from suncat.supercard import all_sunshine_supercards, construct_supercard
from suncat.verify import check_attainment, compare_golden, sweep

CONGRUENCE = {"S0a": (3, 2), "S0b": (7, 6), "S1a": (4, 3), "S1b": (5, 4), "S2a": (5, 4), "S2b": (7, 6)}


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")


def multiset_b(g, h):
    return sum((deck(g).counter() & deck(h).counter()).values()) if g.n == h.n else 0


# 1 ----------------------------------------------------------------------------

EXAMPLES = {"S0a": (17, 8), "S0b": (20, 7), "S1a": (15, 5), "S1b": (19, 8), "S2a": (14, 3), "S2b": (20, 6)}


def test_criterion_1_structure_values(capsys):
    rows, ok = [], True
    for kind, (n, want) in EXAMPLES.items():
        t0 = time.perf_counter()
        _, u, t = gen_structure(StructureSpec(StructureKind(kind), n))
        b = multiset_b(u, t)
        dt = time.perf_counter() - t0
        ok &= b == want and dt < 10
        rows.append(f"{kind} n={n} b={b} {dt:.2f}s")
    report(capsys, 1, ok, "; ".join(rows))
    assert ok


# 2 ----------------------------------------------------------------------------


def test_criterion_2_extremal_attainment(capsys):
    t0 = time.perf_counter()
    rep = check_attainment((14, 19, 24, 29))
    dt = time.perf_counter() - t0
    ok = rep.passes == 4 and rep.ok and dt < 60
    rows = [f"n={d['n']} b={d['b']} {d['kind']} delta={d['delta']}" for d in rep.details]
    report(capsys, 2, ok, "; ".join(rows) + f"; {dt:.1f}s")
    assert ok


# 3 ----------------------------------------------------------------------------


def _supercards(u, t):
    """Every supercard from a witness, plus every sunshine supercard, deduplicated on (G+, v, w)."""
    seen, out = set(), []

    def add(gp, v, w):
        cols = [0] * gp.n
        cols[v], cols[w] = 1, 2
        key = canon.canonical_form(gp, cols)
        if key not in seen:
            seen.add(key)
            out.append((gp, v, w))

    for wit in witnesses(u, t):
        add(construct_supercard(u, t, wit), wit.v, u.n)
    for sc in all_sunshine_supercards(u, t):
        add(sc.graph, sc.v, sc.w)
    return out


def test_criterion_3_matching_equals_deck(capsys):
    t0 = time.perf_counter()
    bad, count, pairs = [], 0, 0
    for n in range(3, 10):
        suns = list(enumerate_family("sunshine", n))
        cats = list(enumerate_family("caterpillar", n))
        for u, t in itertools.product(suns, cats):
            b = multiset_b(u, t)
            if b == 0:
                continue
            pairs += 1
            for gp, v, w in _supercards(u, t):
                count += 1
                if len(maximum_saturating_set(gp, v, w)) != b:
                    bad.append((n, u, t))
    rng = random.Random(2024)
    sampled = tries = 0
    while sampled < 200:
        tries += 1
        n = rng.randint(6, 12)
        c = rng.randint(3, n)
        u, t = random_sunshine(rng, c, n - c), random_caterpillar(rng, n)
        b = multiset_b(u, t)
        if b == 0:
            continue
        sampled += 1
        for gp, v, w in _supercards(u, t):
            count += 1
            if len(maximum_saturating_set(gp, v, w)) != b:
                bad.append((n, u, t))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 600
    report(capsys, 3, ok, f"{count} supercards from {pairs} exhaustive + 200 random pairs ({tries} drawn), "
                          f"{len(bad)} mismatches, {dt:.0f}s")
    assert ok


# 4 ----------------------------------------------------------------------------


def brute_certificate(g):
    """Least upper-triangle bit string over all vertex orders; equal iff isomorphic."""
    n = g.n
    if n <= 1:
        return (n, 0)
    a = np.zeros((n, n), dtype=np.int64)
    for x, y in g.edges():
        a[x, y] = a[y, x] = 1
    perms = np.array(list(itertools.permutations(range(n))))
    rows, cols = np.triu_indices(n, 1)
    bits = a[perms[:, rows], perms[:, cols]]
    weights = 1 << np.arange(len(rows), dtype=np.int64)
    return (n, int((bits @ weights).min()))


def test_criterion_4_canonical_form_oracle(capsys):
    t0 = time.perf_counter()
    rng = random.Random(7)
    mismatches = pairs = 0
    for n in range(1, 8):
        gs = atlas(n)
        relabeled = []
        for g in gs:
            perm = list(range(n))
            rng.shuffle(perm)
            relabeled.append(g.relabel(perm))
        forms = [canon.canonical_form(g) for g in gs]
        forms2 = [canon.canonical_form(h) for h in relabeled]
        certs = [brute_certificate(g) for g in gs]
        certs2 = [brute_certificate(h) for h in relabeled]
        for i in range(len(gs)):
            for j in range(len(gs)):
                pairs += 1
                if (forms[i] == forms2[j]) != (certs[i] == certs2[j]):
                    mismatches += 1
    for k in range(500):
        n = rng.randint(2, 10)
        g = random_graph(rng, n, rng.uniform(0.2, 0.7))
        if k % 2 == 0:
            perm = list(range(n))
            rng.shuffle(perm)
            h = g.relabel(perm)
        else:
            hx = to_nx(g)
            if hx.number_of_edges() >= 2:
                try:
                    nx.double_edge_swap(hx, nswap=1, max_tries=100, seed=rng.randint(0, 10**6))
                except nx.NetworkXException:
                    pass
            h = from_nx(hx)
        truth = brute_certificate(g) == brute_certificate(h) if n <= 8 else nx.is_isomorphic(to_nx(g), to_nx(h))
        pairs += 1
        if (canon.canonical_form(g) == canon.canonical_form(h)) != truth:
            mismatches += 1
        iso = canon.find_isomorphism(g, h)
        if (iso is not None) != truth or (iso is not None and not canon.is_isomorphism(g, h, iso)):
            mismatches += 1
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < 300
    report(capsys, 4, ok, f"{pairs} pairs, {mismatches} disagreements, {dt:.0f}s")
    assert ok


# 5 ----------------------------------------------------------------------------


def test_criterion_5_card_structure(capsys):
    rng = random.Random(55)
    failures, cards = [], 0
    for _ in range(200):
        c = rng.randint(6, 12)
        s = random_sunshine(rng, c, rng.randint(0, 2 * c))
        cyc = cycle_order(s)
        for i, x in enumerate(cyc):
            cards += 1
            pred = predict_sunshine_card(s, i, cyc)
            card, m = delete_vertices(s, [x])
            comps = components(card)
            big = [comp for comp in comps if len(comp) > 1]
            isolated = len(comps) - len(big)
            ok = len(big) == 1 and isolated == s.degree(x) - 2 == pred.isolated_count
            if ok:
                sub = to_nx(card).subgraph(big[0])
                main, _ = delete_vertices(card, [v for v in range(card.n) if v not in big[0]])
                ok = recognize(main) is Recognized.CATERPILLAR
                ok = ok and nx.diameter(sub) == c - tau(s, x) == pred.diameter == diameter(card)
                # skeleton runs along the cycle from start to end
                span = (pred.skeleton_end - pred.skeleton_start) % c + 1
                want = {m[cyc[(pred.skeleton_start + k) % c]] for k in range(span)}
                core = {v for v in sub if sub.degree(v) > 1}
                ok = ok and core == want
            if not ok:
                failures.append((s.edges(), i))
    ok = not failures
    report(capsys, 5, ok, f"200 sunshine graphs, {cards} cycle-vertex cards, {len(failures)} failures")
    assert ok


# 6 ----------------------------------------------------------------------------


def _card_pairs_of_order(order, smaller):
    """Unordered pairs of card forms occurring together in some graph of the given order."""
    pairs, seen = set(), set()
    for g in smaller:
        k = g.n
        for mask in range(1 << k):
            h = Graph.from_edges(k + 1, list(g.edges()) + [(i, k) for i in range(k) if mask >> i & 1])
            f = canon.canonical_form(h)
            if f in seen:
                continue
            seen.add(f)
            cf = sorted(set(card_forms(h)))
            for a, b in itertools.combinations_with_replacement(cf, 2):
                pairs.add((a, b))
    assert len(seen) == (1, 2, 4, 11, 34, 156, 1044, 12346)[order - 1]
    return pairs


def test_criterion_6_supercard_existence(capsys):
    t0 = time.perf_counter()
    rng = random.Random(6)
    disagreements = constructed = total = 0
    for n in range(1, 8):
        gs = atlas(n)
        exists = _card_pairs_of_order(n + 1, gs)
        forms = [canon.canonical_form(g) for g in gs]
        counters = [deck(g).counter() for g in gs]
        for i, j in itertools.combinations_with_replacement(range(len(gs)), 2):
            total += 1
            b = sum((counters[i] & counters[j]).values())
            key = tuple(sorted((forms[i], forms[j])))
            if (key in exists) != (b >= 1):
                disagreements += 1
            if b >= 1 and (n <= 6 or rng.random() < 0.01):
                g, h = gs[i], gs[j]
                gp = construct_supercard(g, h, rng.choice(witnesses(g, h)))
                cf = set(card_forms(gp))
                constructed += 1
                if not {forms[i], forms[j]} <= cf:
                    disagreements += 1
    dt = time.perf_counter() - t0
    ok = disagreements == 0
    report(capsys, 6, ok, f"{total} pairs n<=7, {constructed} explicit constructions, "
                          f"{disagreements} disagreements, {dt:.0f}s")
    assert ok


# 7 ----------------------------------------------------------------------------


def _power(p, k):
    out = identity(len(p))
    for _ in range(k):
        out = compose(p, out)
    return out


def test_criterion_7_group_identities(capsys):
    failures, instances = [], 0
    for kind, (mod, res) in CONGRUENCE.items():
        for n in range(14, 56):
            if n % mod != res:
                continue
            instances += 1
            sc, _, _ = gen_structure(StructureSpec(StructureKind(kind), n))
            ao = optimum_aut_set(sc)
            gp = sc.graph
            d1 = sum(1 for x in range(gp.n) if gp.degree(x) == 1)
            checks = {
                "counting": n + 1 == ao.phi.delta * ao.phi.order + d1,
                "phi_order": ao.phi.order == sc.c // ao.phi.delta
                and _power(ao.phi.generator, ao.phi.order) == identity(gp.n),
                "automorphisms": all(canon.is_isomorphism(gp, gp, p) for p in ao.aut_part),
                "orbits": len(orbit(ao.aut_part, sc.v)) == len(orbit(ao.aut_part, sc.w)) == len(ao.aut_part),
            }
            if ao.kind.kind is GroupKind.DIHEDRAL:
                pi, phi = ao.pi, ao.phi.generator
                checks["dihedral"] = (
                    compose(pi, pi) == identity(gp.n)
                    and compose(pi, compose(phi, pi)) == invert(phi)
                    and len(ao.aut_part) == 2 * ao.phi.order
                )
            else:
                checks["cyclic"] = ao.kind.kind is GroupKind.CYCLIC and len(ao.aut_part) == ao.phi.order
            for name, passed in checks.items():
                if not passed:
                    failures.append((kind, n, name))
    ok = not failures
    report(capsys, 7, ok, f"{instances} structure instances n in 14..55, failures {failures[:5]}")
    assert ok


# 8 ----------------------------------------------------------------------------


def test_criterion_8_sweep_and_golden(capsys):
    t0 = time.perf_counter()
    rep, table = sweep(range(1, 12))
    diffs = compare_golden(table)
    dt = time.perf_counter() - t0
    ok = rep.ok and not diffs and dt < 1800
    maxima = ", ".join(f"{n}:{table[n]['max_b']}" for n in sorted(table, key=int))
    report(capsys, 8, ok, f"max b {maxima}; {rep.passes} pairs checked, {len(rep.failures)} violations, "
                          f"{len(diffs)} golden diffs, {dt:.0f}s")
    assert ok
