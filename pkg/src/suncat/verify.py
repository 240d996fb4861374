"""Replaying counts, bounds and structural claims on concrete instances.

Every check reports one of three outcomes per instance: pass, fail (with a
counterexample descriptor) or hypothesis_not_met when the claim's own
preconditions do not hold for the instance.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterable

from . import canon
from .deck import common_cards, common_from_decks, deck
from .families import (
    SunshineSupercard,
    StructureKind,
    StructureSpec,
    _STRUCTURES,
    enumerate_family,
    gen_structure,
)
from .graph import cycle_order, delete_vertices, tau
from .io import to_graph6
from .saturating import (
    delta_and_phi,
    maximum_saturating_set,
    optimum_aut_set,
    orbit,
    sunshine_optimum,
    _TView,
)

PASS, FAIL, HNM = "pass", "fail", "hypothesis_not_met"


@dataclass
class CheckReport:
    check_id: str
    instances: int = 0
    passes: int = 0
    hypothesis_not_met: int = 0
    failures: list[dict] = field(default_factory=list)
    details: list[dict] = field(default_factory=list)

    def record(self, status: str, **info) -> None:
        self.instances += 1
        if status == PASS:
            self.passes += 1
        elif status == HNM:
            self.hypothesis_not_met += 1
        else:
            self.failures.append(info)
        self.details.append({"status": status, **info})

    def check(self, name: str, applicable: bool, ok: bool, **info) -> None:
        if not applicable:
            self.record(HNM, check=name, **info)
        else:
            self.record(PASS if ok else FAIL, check=name, **info)

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.instances += other.instances
        self.passes += other.passes
        self.hypothesis_not_met += other.hypothesis_not_met
        self.failures += other.failures
        self.details += other.details
        return self

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def status_code(self) -> int:
        """0 ok, 1 failure, 3 when nothing was applicable."""
        if self.failures:
            return 1
        if self.instances and self.passes == 0:
            return 3
        return 0

    def to_obj(self) -> dict:
        return {
            "check_id": self.check_id,
            "instances": self.instances,
            "passes": self.passes,
            "hypothesis_not_met": self.hypothesis_not_met,
            "failures": self.failures,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, default=str)


# closed forms for b(U, T) per structure kind
STRUCTURE_VALUE: dict[str, Callable[[int], Fraction]] = {
    "S0a": lambda n: Fraction(n + 1, 3) + 2,
    "S0b": lambda n: Fraction(2 * (n + 1), 7) + 1,
    "S1a": lambda n: Fraction(n + 1, 4) + 1,
    "S1b": lambda n: Fraction(2 * (n + 1), 5),
    "S2a": lambda n: Fraction(n + 1, 5),
    "S2b": lambda n: Fraction(2 * (n + 1), 7),
}

EXAMPLE_SIZES = {"S0a": 17, "S0b": 20, "S1a": 15, "S1b": 19, "S2a": 14, "S2b": 20}
STRUCTURE_N_FLOOR = 14


def check_structure_values(n_by_kind: dict[str, Iterable[int]] | None = None) -> CheckReport:
    rep = CheckReport("structure_values")
    n_by_kind = n_by_kind or {k: [n] for k, n in EXAMPLE_SIZES.items()}
    for kind, ns in sorted(n_by_kind.items()):
        mod, res = _STRUCTURES[kind][:2]
        for n in ns:
            if n % mod != res or n < STRUCTURE_N_FLOOR:
                rep.record(HNM, kind=kind, n=n, reason=f"needs n = {res} (mod {mod}) and n >= {STRUCTURE_N_FLOOR}")
                continue
            sc, u, t = gen_structure(StructureSpec(StructureKind(kind), n))
            b = common_cards(u, t)
            want = STRUCTURE_VALUE[kind](n)
            info = dict(kind=kind, n=n, b=b, expected=str(want), graph6=to_graph6(sc.graph))
            rep.record(PASS if b == want else FAIL, **info)
    return rep


def check_attainment(ns: Iterable[int] = (14, 19, 24, 29)) -> CheckReport:
    """S1b attains 2(n+1)/5 and its optimum automorphism part is dihedral of order 2c/delta, delta = 3."""
    rep = CheckReport("s1b_attainment")
    for n in ns:
        sc, u, t = gen_structure(StructureSpec(StructureKind.S1b, n))
        b = common_cards(u, t)
        ao = optimum_aut_set(sc)
        ok = (
            b == Fraction(2 * (n + 1), 5)
            and ao is not None
            and ao.phi.delta == 3
            and ao.kind.kind.value == "dihedral"
            and ao.kind.order == 2 * sc.c // 3
        )
        rep.record(PASS if ok else FAIL, n=n, b=b, kind=str(ao.kind) if ao else None, delta=ao.phi.delta if ao else None)
    return rep


def b_u_equals_aut(sc: SunshineSupercard) -> bool:
    """Every lam in B^U is an automorphism.

    lam in B^U is an isomorphism psi: G+ - w -> G+ - b extended by w -> b, and
    it is an automorphism exactly when psi(x_0) is adjacent to b.
    """
    gp, w, x0 = sc.graph, sc.w, sc.x(0)
    ghat, gm = delete_vertices(gp, [w])
    cols = [0] * ghat.n
    cols[gm[x0]] = 1
    root = canon.canonical_form(ghat, cols)
    plain = canon.canonical_form(ghat)
    for b in range(gp.n):
        if b == sc.v:
            continue
        gb, bm = delete_vertices(gp, [b])
        if canon.canonical_form(gb) != plain:
            continue
        for y in range(gp.n):
            if y == b or gp.has_edge(y, b):
                continue
            c2 = [0] * gb.n
            c2[bm[y]] = 1
            if canon.canonical_form(gb, c2) == root:
                return False
    return True


def _fixed_leaf_anchor_set(phi_elems, leaves: list[int]) -> list[int]:
    out, covered = [], set()
    for leaf in sorted(leaves):
        orb = orbit(phi_elems, leaf)
        if not orb & covered:
            out.append(leaf)
            covered |= orb
    return out


def check_bounds(sc: SunshineSupercard, chi_max: int | None = None) -> CheckReport:
    """b <= c, b <= 2 chi + 5, the square-root bound and the counting identity.

    ``chi_max`` is the largest chi over sunshine supercards of (U, T); the
    2 chi + 5 bound is only claimed for that value.  When it is not supplied
    it is computed.
    """
    from .supercard import best_supercard

    rep = CheckReport("bounds")
    u, t = sc.U(), sc.T()
    b = common_cards(u, t)
    n, c = sc.n, sc.c
    regime = b >= 5
    rep.check("b_le_c", regime, b <= c, b=b, c=c)
    if regime:
        if chi_max is None:
            _, chi_max = best_supercard(u, t)
        rep.check("b_le_2chi_plus_5", True, b <= 2 * chi_max + 5, b=b, chi_max=chi_max)
    else:
        # chi >= 0, so b <= 4 < 2 chi + 5 needs no hypothesis
        rep.check("b_le_2chi_plus_5", True, True, b=b, trivial=True)
    not_aut = not b_u_equals_aut(sc)
    bound = 2 * math.isqrt(2 * n + 1) + 3
    rep.check("sqrt_bound", not_aut and n >= 12, b <= bound, b=b, bound=bound, bu_ne_aut=not_aut, n=n)
    phi = delta_and_phi(sc)
    d1 = sum(1 for x in range(sc.graph.n) if sc.graph.degree(x) == 1)
    if phi is None:
        rep.check("counting_identity", False, False)
    else:
        rep.check("counting_identity", True, n + 1 == phi.delta * phi.order + d1, delta=phi.delta, order=phi.order, d1=d1)
    return rep


def _is_cut_vertex_of(tv: _TView, u: int) -> bool:
    from .graph import is_cut_vertex

    return is_cut_vertex(tv.t, tv.m[u])


def check_lemma_replays(sc: SunshineSupercard, chi_maximal: bool | None = None) -> CheckReport:
    """Per-element classification claims of the optimum saturating set.

    Claims assuming the b >= 5 regime are reported as hypothesis_not_met
    outside it, but their observed values are still recorded.
    """
    rep = CheckReport("lemma_replays")
    gp = sc.graph
    u, t = sc.U(), sc.T()
    b_ut = common_cards(u, t)
    regime = b_ut >= 5
    chi, x = sunshine_optimum(sc)
    tv = _TView(sc)
    nu = sc.nu
    tau_nu = tau(gp, sc.v)
    d = gp.degree

    def leaf_at(bv: int, i: int) -> bool:
        return d(bv) == 1 and sc.x(i) in gp.adj[bv]

    for e in x.elements:
        rep.check("w_image_trichotomy", regime, e.w_image_class != "unclassified", a=e.a, b=e.b, cls=e.w_image_class)
    non_tilde = [e for e in x.elements if not e.in_tilde]
    for e in non_tilde:
        bv = e.b
        if tau_nu == 0:
            ok = not tv.is_d_leaf(bv)
            if ok and tv.is_leaf(bv):
                ok = (leaf_at(bv, nu + 1) and sc.degree_at(nu + 1) == 3) or (
                    leaf_at(bv, nu - 1) and sc.degree_at(nu - 1) == 3
                )
            elif ok and _is_cut_vertex_of(tv, bv):
                ok = bv in (sc.x(nu + 1), sc.x(nu - 1))
        elif tau_nu == 1:
            if tv.is_d_leaf(bv):
                ok = bv == sc.x(nu + 1) and sc.degree_at(nu + 2) >= 3
            elif tv.is_leaf(bv):
                ok = (bv == sc.x(nu + 1) and sc.degree_at(nu + 2) == 2) or (
                    leaf_at(bv, nu - 1) and sc.degree_at(nu - 1) == 3
                )
            elif _is_cut_vertex_of(tv, bv):
                ok = bv in (sc.x(nu + 2), sc.x(nu - 1))
            else:
                ok = True
        else:
            ok = tv.is_d_leaf(bv) and bv in (sc.x(nu + 1), sc.x(nu - 1))
        rep.check("non_tilde_classification", regime, ok, a=e.a, b=e.b, tau=tau_nu)
    limit = 2 if tau_nu == 2 else 4
    rep.check("non_tilde_count", regime, len(non_tilde) <= limit, observed=len(non_tilde), limit=limit, tau=tau_nu)
    for e in x.elements:
        if not e.in_BG:
            continue
        mu = sc.index(e.a)
        act = e.cycle_action
        ok = (
            d(e.b) == 1
            and d(next(iter(gp.adj[e.b]))) == sc.degree_at(0)
            and mu is not None
            and u.degree(delete_vertices(gp, [sc.w])[1][e.a]) == 2
            and act is not None
            and (
                (act.kind == "rotation" and act.alpha == (nu - mu) % sc.c)
                or (act.kind == "reflection" and act.alpha == (nu + mu) % sc.c)
            )
        )
        rep.check("bu_rotation_or_reflection", regime, ok, a=e.a, b=e.b, action=str(act))
    ao = optimum_aut_set(sc)
    has_rot = ao is not None
    if has_rot:
        xa = ao.aut_part
        o_nu = orbit(xa, sc.v)
        o_w = orbit(xa, sc.w)
        ok_a = len(o_nu) == len(xa) and all(d(y) == 2 and tau(gp, y) == tau_nu for y in o_nu)
        ok_b = len(o_w) == len(xa) and all(
            d(y) == 1 and d(next(iter(gp.adj[y]))) == sc.degree_at(0) for y in o_w
        )
        aut_pairs = {(invert_at(p, sc.v), p[sc.w]) for p in xa}
        rest = [e for e in ao.x.elements if (e.a, e.b) not in aut_pairs]
        ok_c = all(e.a not in o_nu and e.b not in o_w for e in rest)
        rep.check("orbit_sizes_and_degrees", True, ok_a and ok_b, orbit_v=len(o_nu), orbit_w=len(o_w), aut=len(xa))
        rep.check("non_aut_outside_orbits", True, ok_c)
        phi_elems = ao.phi.elements()
        leaves = [e.b for e in rest if d(e.b) == 1]
        A = _fixed_leaf_anchor_set(phi_elems, leaves)
        npl = sc.n + 1
        if ao.kind.kind.value == "cyclic":
            bound = npl // (ao.phi.delta + 1 + len(A))
        else:
            bound = 2 * (npl // (ao.phi.delta + 2 + len(A)))
        rep.check("aut_cardinality_bound", True, len(xa) <= bound, size=len(xa), bound=bound, A=len(A))
        small_delta = ao.phi.delta <= (sc.c - 3) / 2
        tilde_rest = [e for e in rest if e.in_tilde]
        for e in tilde_rest:
            ok = sc.x(nu + 2) in gp.adj[e.b] and e.a in (sc.x(2), sc.x(sc.c - 2))
            rep.check(
                "tilde_non_aut_position",
                regime and small_delta and bool(chi_maximal),
                ok,
                a=e.a,
                b=e.b,
                delta=ao.phi.delta,
            )
    else:
        rep.check("orbit_sizes_and_degrees", False, False, reason="no non-trivial rotation")
    return rep


def invert_at(p, y: int) -> int:
    return p.index(y)


# ---- exhaustive sweep -----------------------------------------------------


def _sweep_n(n: int, b_min: int, heavy: bool) -> dict:
    from .supercard import all_sunshine_supercards

    suns = list(enumerate_family("sunshine", n))
    cats = list(enumerate_family("caterpillar", n))
    sdecks = [deck(g) for g in suns]
    cdecks = [deck(g) for g in cats]
    best_b, argmax = None, []
    failures = []
    checked = hnm = failed = 0
    retained = 0
    for i, u in enumerate(suns):
        c_u = len(cycle_order(u))
        leaves_u = sum(1 for x in range(u.n) if u.degree(x) == 1)
        for j, t in enumerate(cats):
            b = common_from_decks(sdecks[i], cdecks[j])
            if best_b is None or b > best_b:
                best_b, argmax = b, []
            if b == best_b:
                argmax.append([to_graph6(u), to_graph6(t)])
            if b < b_min:
                continue
            retained += 1
            desc = {"n": n, "U": to_graph6(u), "T": to_graph6(t), "b": b}
            applicable = False
            bad = []
            if b >= 5:
                applicable = True
                if c_u < 6 or leaves_u < 1:
                    bad.append({"check": "regime_filter", "c": c_u, "leaves": leaves_u})
                if b > c_u:
                    bad.append({"check": "b_le_c", "c": c_u})
            if heavy and b >= 1:
                scs = all_sunshine_supercards(u, t)
                for s in scs:
                    size = len(maximum_saturating_set(s.graph, s.v, s.w))
                    if size != b:
                        bad.append({"check": "matching_equals_deck", "size": size})
                if scs:
                    applicable = True
                if b >= 5:
                    chi = max(sunshine_optimum(s)[0] for s in scs) if scs else None
                    if chi is None or b > 2 * chi + 5:
                        bad.append({"check": "b_le_2chi_plus_5", "chi": chi})
            if bad:
                failures += [{**desc, **f} for f in bad]
                failed += 1
            elif applicable:
                checked += 1
            else:
                hnm += 1
    return {
        "n": n,
        "max_b": best_b,
        "argmax": sorted(argmax),
        "sunshine": len(suns),
        "caterpillar": len(cats),
        "retained": retained,
        "checked": checked,
        "failed": failed,
        "hypothesis_not_met": hnm,
        "failures": failures,
    }


SWEEP_MAX_N = 11


def _cache_path(cache_dir: str, n: int, b_min: int, heavy: bool) -> str:
    from . import __version__

    return os.path.join(cache_dir, f"sweep-{__version__}-{canon.backend_name()}-n{n}-b{b_min}-{int(heavy)}.json")


def _cache_get(cache_dir, n, b_min, heavy):
    if not cache_dir:
        return None
    try:
        with open(_cache_path(cache_dir, n, b_min, heavy)) as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def _cache_put(cache_dir, row, b_min, heavy) -> None:
    if not cache_dir:
        return
    os.makedirs(cache_dir, exist_ok=True)
    with open(_cache_path(cache_dir, row["n"], b_min, heavy), "w") as fh:
        json.dump(row, fh, sort_keys=True)


def sweep(
    n_values: Iterable[int],
    b_min: int = 0,
    heavy: bool = True,
    jobs: int = 1,
    max_n: int = SWEEP_MAX_N,
    cache_dir: str | None = None,
) -> tuple[CheckReport, dict]:
    """Exhaustive (sunshine, caterpillar) sweep.  Output does not depend on ``jobs``.

    Per-order rows are cached as JSON under ``cache_dir`` (default: the
    SUNCAT_CACHE_DIR environment variable, no caching when unset).
    """
    ns = sorted(set(n_values))
    if ns and ns[-1] > max_n:
        raise canon.ResourceError(f"sweep order {ns[-1]} exceeds the cap {max_n}", max_n)
    cache_dir = cache_dir or os.environ.get("SUNCAT_CACHE_DIR")
    rows_by_n = {}
    todo = []
    for n in ns:
        row = _cache_get(cache_dir, n, b_min, heavy)
        if row is None:
            todo.append(n)
        else:
            rows_by_n[n] = row
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            fresh = list(ex.map(_sweep_n, todo, [b_min] * len(todo), [heavy] * len(todo)))
    else:
        fresh = [_sweep_n(n, b_min, heavy) for n in todo]
    for row in fresh:
        _cache_put(cache_dir, row, b_min, heavy)
        rows_by_n[row["n"]] = row
    rows = [rows_by_n[n] for n in ns]
    rep = CheckReport("sweep")
    table = {}
    for row in rows:
        rep.failures += row["failures"]
        rep.instances += row["checked"] + row["hypothesis_not_met"] + row["failed"]
        rep.passes += row["checked"]
        rep.hypothesis_not_met += row["hypothesis_not_met"]
        table[str(row["n"])] = {k: row[k] for k in ("max_b", "argmax", "sunshine", "caterpillar", "retained")}
    return rep, table


def load_golden() -> dict:
    text = resources.files("suncat").joinpath("data/maxb_golden.json").read_text()
    return json.loads(text)


def compare_golden(table: dict, golden: dict | None = None) -> list[str]:
    golden = golden or load_golden()
    diffs = []
    for n, row in table.items():
        want = golden["table"].get(n)
        if want is None:
            continue
        for k in ("max_b", "argmax", "sunshine", "caterpillar"):
            if row[k] != want[k]:
                diffs.append(f"n={n} {k}: {row[k]!r} != golden {want[k]!r}")
    return diffs


def instance_report(sc: SunshineSupercard) -> CheckReport:
    """All per-supercard checks together."""
    from .supercard import best_supercard

    rep = CheckReport("instance")
    u, t = sc.U(), sc.T()
    b = common_cards(u, t)
    chi_max = None
    maximal = None
    if b >= 5:
        _, chi_max = best_supercard(u, t)
        maximal = sunshine_optimum(sc)[0] == chi_max
    rep.merge(check_bounds(sc, chi_max))
    rep.merge(check_lemma_replays(sc, maximal))
    return rep
