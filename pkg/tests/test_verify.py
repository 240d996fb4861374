import json

import pytest

from suncat.canon import ResourceError
from suncat.deck import common_cards
from suncat.families import StructureKind, StructureSpec, SunshineSupercard, gen_structure
from suncat.graph import Graph, cycle_order
from suncat.io import from_graph6
from suncat.saturating import optimum_aut_set, sunshine_optimum
from suncat.verify import (
    EXAMPLE_SIZES,
    CheckReport,
    b_u_equals_aut,
    check_attainment,
    check_bounds,
    check_lemma_replays,
    check_structure_values,
    compare_golden,
    instance_report,
    load_golden,
    sweep,
)


def structure(kind, n):
    return gen_structure(StructureSpec(StructureKind(kind), n))[0]


def by_check(rep, name):
    return [d for d in rep.details if d.get("check") == name]


def test_report_counts_add_up():
    rep = CheckReport("x")
    rep.record("pass")
    rep.record("hypothesis_not_met")
    rep.record("fail", why="demo")
    assert rep.instances == 3 and rep.passes == 1 and rep.hypothesis_not_met == 1
    assert rep.failures == [{"why": "demo"}] and rep.status_code == 1
    empty = CheckReport("y")
    empty.record("hypothesis_not_met")
    assert empty.status_code == 3


def test_structure_values_at_reference_sizes():
    rep = check_structure_values()
    got = {d["kind"]: d["b"] for d in rep.details}
    assert got == {"S0a": 8, "S0b": 7, "S1a": 5, "S1b": 8, "S2a": 3, "S2b": 6}
    assert rep.passes == 6 and rep.ok


def test_structure_values_more_orders():
    rep = check_structure_values({"S0a": [14, 20, 23], "S2b": [27], "S1a": [19]})
    assert rep.passes == 5 and rep.ok


def test_structure_value_floor_and_congruence():
    rep = check_structure_values({"S0a": [11, 16], "S1b": [9]})
    assert rep.instances == 3 and rep.hypothesis_not_met == 3 and rep.passes == 0


def test_attainment():
    rep = check_attainment()
    assert rep.passes == 4 and rep.ok
    for d in rep.details:
        assert d["delta"] == 3


def test_bounds_s1b():
    sc = structure("S1b", 19)
    rep = check_bounds(sc)
    assert rep.ok
    (c,) = by_check(rep, "b_le_c")
    assert (c["status"], c["b"], c["c"]) == ("pass", 8, 12)
    (k,) = by_check(rep, "b_le_2chi_plus_5")
    assert (k["status"], k["chi_max"]) == ("pass", 8)
    (e,) = by_check(rep, "counting_identity")
    assert e["status"] == "pass" and 20 == e["delta"] * e["order"] + e["d1"] == 3 * 4 + 8


def test_bounds_b_one_is_trivial():
    g = Graph.from_edges(13, [(i, (i + 1) % 12) for i in range(12)] + [(0, 12)])
    sc = SunshineSupercard(g, tuple(range(12)), 5, 12)
    assert common_cards(sc.U(), sc.T()) == 1
    rep = check_bounds(sc)
    (k,) = by_check(rep, "b_le_2chi_plus_5")
    assert k["status"] == "pass" and k["trivial"]
    (c,) = by_check(rep, "b_le_c")
    assert c["status"] == "hypothesis_not_met"


def test_sqrt_bound_on_rigid_supercard():
    g = from_graph6("LhCGGC@_K??_?C")
    c = len(cycle_order(g))
    sc = SunshineSupercard(g, tuple(range(c)), 1, c)
    assert sc.n == 12 and not b_u_equals_aut(sc)
    rep = check_bounds(sc)
    (s,) = by_check(rep, "sqrt_bound")
    assert s["status"] == "pass" and s["bound"] == 13 and s["b"] == common_cards(sc.U(), sc.T()) == 4


def test_structures_have_bu_equal_aut():
    for kind, n in EXAMPLE_SIZES.items():
        sc = structure(kind, n)
        assert b_u_equals_aut(sc)
        (s,) = by_check(check_bounds(sc), "sqrt_bound")
        assert s["status"] == "hypothesis_not_met"


def test_lemma_replays_s2a_observed():
    rep = check_lemma_replays(structure("S2a", 14))
    (d,) = by_check(rep, "non_tilde_count")
    assert d["tau"] == 2 and d["observed"] <= 2 and d["limit"] == 2
    assert d["status"] == "hypothesis_not_met"  # b = 3, outside the b >= 5 regime
    assert rep.ok


def test_lemma_replays_s1b():
    sc = structure("S1b", 19)
    rep = check_lemma_replays(sc, chi_maximal=True)
    assert rep.ok
    _, x = sunshine_optimum(sc)
    ao = optimum_aut_set(sc)
    tilde = {(e.a, e.b) for e in x.elements if e.in_tilde}
    aut = {(e.a, e.b) for e in ao.x.elements if e.in_tilde}
    assert len(tilde) == len(x) == 8 and aut == {(e.a, e.b) for e in ao.x.elements}


def test_lemma_replays_tau_zero_case():
    sc = structure("S0a", 17)
    rep = check_lemma_replays(sc, chi_maximal=True)
    rows = by_check(rep, "non_tilde_classification")
    assert rows and all(r["tau"] == 0 and r["status"] == "pass" for r in rows)


@pytest.mark.parametrize("kind", sorted(EXAMPLE_SIZES))
def test_instance_reports_clean(kind):
    rep = instance_report(structure(kind, EXAMPLE_SIZES[kind]))
    assert rep.ok and rep.passes > 0


def test_sweep_matches_golden():
    rep, table = sweep(range(7, 10))
    assert rep.ok
    assert compare_golden(table) == []
    assert sorted(table) == ["7", "8", "9"]


def test_golden_provenance():
    g = load_golden()
    assert set(g["provenance"]) >= {"generated_by", "version", "date"}
    assert sorted(g["table"], key=int) == [str(n) for n in range(1, 12)]


def test_sweep_b_min_filter():
    rep, table = sweep([10, 11], b_min=5, heavy=False)
    assert rep.ok
    assert table["10"]["retained"] == 0 and table["11"]["retained"] >= 1


def test_sweep_empty_range():
    rep, table = sweep([])
    assert rep.instances == 0 and table == {}


def test_sweep_cap():
    with pytest.raises(ResourceError):
        sweep([12])


def test_sweep_independent_of_jobs():
    a = sweep([5, 6, 7], jobs=1)
    b = sweep([5, 6, 7], jobs=2)
    assert a[1] == b[1] and a[0].to_json() == b[0].to_json()


def test_sweep_cache(tmp_path):
    a = sweep([6, 7], cache_dir=str(tmp_path))
    assert len(list(tmp_path.iterdir())) == 2
    b = sweep([6, 7], cache_dir=str(tmp_path))
    assert a[1] == b[1]


def test_report_is_reproducible():
    a = instance_report(structure("S1a", 15)).to_json()
    b = instance_report(structure("S1a", 15)).to_json()
    assert a == b
    json.loads(a)
