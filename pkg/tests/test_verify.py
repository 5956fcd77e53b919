import dataclasses

import pytest

from reebreal.graphcore import betti1, is_isomorphic, subdivide_edge
from reebreal.surf import SurfaceDescriptor as S
from reebreal.synth import Block, Tube, synthesize
from reebreal.verify import expected_census, orientability_of, sweep, sweep_reeb, verify_plan
from reebreal.zoo import double_diamond, random_corpus, torus_graph


@pytest.fixture
def torus_plan():
    return synthesize(torus_graph(), S(True, 1), "morse")


def replace_block(plan, bid, **changes):
    blocks = tuple(dataclasses.replace(b, **changes) if b.id == bid else b for b in plan.blocks)
    return plan.replace(blocks=blocks)


def interior_id(plan):
    return next(b.id for b in plan.blocks if b.kind == "interior")


def test_good_plan_passes(torus_plan):
    report = verify_plan(torus_plan, torus_graph())
    assert report.passed, report.details
    assert is_isomorphic(report.reconstructed, torus_graph()) is not None
    assert report.to_json_obj()["passed"] is True
    assert report.reconstructed_dot().startswith("digraph")


def test_sweep_events(torus_plan):
    state = sweep(torus_plan)
    assert [e[2] for e in state.event_log] == ["birth", "1->2", "2->1", "death"]
    assert not state.live


def test_wrong_expected_graph(torus_plan):
    report = verify_plan(torus_plan, double_diamond())
    assert report.iso is None and not report.passed


def test_tampered_census(torus_plan):
    bid = interior_id(torus_plan)
    report = verify_plan(replace_block(torus_plan, bid, critical_points=((1, 2),)), torus_graph())
    assert not report.census_ok and not report.passed


def test_tampered_chi(torus_plan):
    bid = interior_id(torus_plan)
    report = verify_plan(replace_block(torus_plan, bid, chi=0), torus_graph())
    assert not report.chi_ok and not report.passed


def test_tampered_handles(torus_plan):
    # an extra handle pair changes the surface and the required census
    bid = interior_id(torus_plan)
    report = verify_plan(replace_block(torus_plan, bid, t=1), torus_graph())
    assert not report.passed


def test_tampered_sign(torus_plan):
    tubes = list(torus_plan.tubes)
    tubes[1] = tubes[1]._replace(sign=-1)
    report = verify_plan(torus_plan.replace(tubes=tuple(tubes)), torus_graph())
    assert not report.surface_ok and not report.passed


def test_tampered_target(torus_plan):
    report = verify_plan(torus_plan.replace(target=S(True, 2)), torus_graph())
    assert not report.surface_ok


def test_missing_tube(torus_plan):
    report = verify_plan(torus_plan.replace(tubes=torus_plan.tubes[:-1]), torus_graph())
    assert not report.passed and "sweep failed" in report.details[0]


def test_rewired_tube_changes_graph(torus_plan):
    # send the first arc straight from the minimum to the maximum's block
    tubes = list(torus_plan.tubes)
    blocks = torus_plan.block_map
    low = next(t for t in tubes if blocks[t.lower.split("/")[0]].kind == "cap-min")
    top = next(t for t in tubes if blocks[t.upper.split("/")[0]].kind == "cap-max")
    swapped = [
        t._replace(upper=top.upper) if t is low else t._replace(upper=low.upper) if t is top else t
        for t in tubes
    ]
    report = verify_plan(torus_plan.replace(tubes=tuple(swapped)), torus_graph())
    assert not report.passed


def test_value_ordering_violation(torus_plan):
    bid = interior_id(torus_plan)
    top = max(b.critical_value for b in torus_plan.blocks)
    report = verify_plan(replace_block(torus_plan, bid, critical_value=top + 10), torus_graph())
    assert not report.passed and "sweep failed" in report.details[0]


def test_unknown_kind(torus_plan):
    bid = interior_id(torus_plan)
    report = verify_plan(replace_block(torus_plan, bid, kind="wormhole"), torus_graph())
    assert not report.passed


def test_expected_census_replay():
    blk = Block("N[x]", "interior", "x", 0.0, ("a", "b"), ("c", "d", "e"), 2, 3, t=1)
    assert expected_census(blk, 2) == {1: 5}
    assert expected_census(blk, 3) == {2: 3, 1: 2}
    # (1, 1) with no handles cannot be an interior block
    bad = Block("N[y]", "interior", "y", 0.0, ("a",), ("b",), 1, 1)
    assert expected_census(bad, 2) is None


def test_odd_dimension_chi_zero():
    p = synthesize(torus_graph(), 3, "any-n")
    assert verify_plan(p, torus_graph()).passed
    bid = interior_id(p)
    tampered = replace_block(p, bid, critical_points=((1, 5), (2, 2)))
    report = verify_plan(tampered, torus_graph())
    assert not report.chi_ok


def test_orientability_needs_surface():
    with pytest.raises(ValueError):
        orientability_of(synthesize(torus_graph(), 3, "any-n"))


def test_corpus_round_trip_smoke():
    for g in random_corpus(21, 40):
        b = betti1(g)
        g2 = subdivide_edge(g, g.edges[0].id)
        for h in (g, g2):
            for s in (S(True, b + 1), S(False, 2 * b + 1)):
                p = synthesize(h, s, "finite")
                assert verify_plan(p, h).passed
                assert betti1(sweep_reeb(p)) == b
