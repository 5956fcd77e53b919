"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and by running this file directly.
"""

from __future__ import annotations

import time

from conftest import ACCEPTANCE_LINES, CORPUS_SEED, CORPUS_SIZE
from oracles import brute_good_orientations, connected_multigraphs, cycle_rank, nx_is_good

from reebreal.graphcore import betti1, degree_profile, delta2, is_isomorphic
from reebreal.meshes import genus2_slab, klein_bottle, octahedron, torus
from reebreal.meshreeb import check_surface_laws, mesh_reeb, mesh_reeb_full
from reebreal.orient import check_good, find_good_orientation, resolve_simple
from reebreal.realize import decide_finite, decide_morse
from reebreal.surf import SurfaceDescriptor, chi_block, euler_characteristic, reeb_number
from reebreal.synth import CAP_MAX, CAP_MIN, DEGENERATE, INTERIOR, plan_summary, synthesize
from reebreal.verify import sweep_reeb
from reebreal.zoo import gamma0, random_corpus, theta, torus_graph


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def surface_targets(b1: int):
    targets = [SurfaceDescriptor(True, g) for g in range(b1, b1 + 3)]
    targets += [SurfaceDescriptor(False, g) for g in range(max(1, 2 * b1), 2 * b1 + 3)]
    return targets


def synthesized_plans(corpus):
    """Every (graph, plan, target) the round-trip criterion exercises."""
    for g in corpus:
        for s in surface_targets(betti1(g)):
            if decide_finite(g, s).realizable:
                yield g, synthesize(g, s, "finite"), s
            if decide_morse(g, s).realizable:
                yield g, synthesize(g, s, "morse"), s
        for n in (2, 3, 5):
            yield g, synthesize(g, n, "any-n"), None


# -- 1 ---------------------------------------------------------------------


def check_reeb_table():
    start = time.perf_counter()
    orientable = [reeb_number(SurfaceDescriptor(True, g)) for g in range(0, 11)]
    nonorientable = [reeb_number(SurfaceDescriptor(False, g)) for g in range(1, 11)]
    elapsed = time.perf_counter() - start
    ok = (
        orientable == list(range(0, 11))
        and nonorientable == [g // 2 for g in range(1, 11)]
        and elapsed < 1e-3
    )
    return ok, f"Reeb-number table g <= 10 in {elapsed * 1e6:.0f} us"


def test_criterion_1_reeb_number_table():
    ok, detail = check_reeb_table()
    record(1, ok, detail)
    assert ok, detail


# -- 2 ---------------------------------------------------------------------


def check_round_trip(corpus):
    assert len(corpus) >= 200
    assert all(len(g.vertices) <= 20 and betti1(g) <= 5 and check_good(g).good for g in corpus)
    start = time.perf_counter()
    cases = failures = 0
    modes = set()
    for g, plan, s in synthesized_plans(corpus):
        cases += 1
        modes.add(plan.mode)
        rebuilt = sweep_reeb(plan)
        if is_isomorphic(rebuilt, g) is None:
            failures += 1
            continue
        if s is not None and plan_summary(plan).surface != s:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30 and modes == {"finite", "morse", "any-n"}
    return ok, f"{len(corpus)} graphs, {cases} plans, {failures} failures, {elapsed:.1f} s"


def test_criterion_2_round_trip(corpus):
    ok, detail = check_round_trip(corpus)
    record(2, ok, detail)
    assert ok, detail


# -- 3 ---------------------------------------------------------------------


def check_morse_sharpness(corpus):
    checked = bad = 0
    for g in corpus:
        b1, d2 = betti1(g), delta2(g)
        if d2 < 1:
            continue
        g_or = b1 + d2
        checked += 1
        if decide_morse(g, SurfaceDescriptor(True, g_or - 1)).realizable:
            bad += 1
        if not decide_morse(g, SurfaceDescriptor(True, g_or)).realizable:
            bad += 1
        g_no = 2 * b1 + d2
        if g_no - 1 >= 1 and decide_morse(g, SurfaceDescriptor(False, g_no - 1)).realizable:
            bad += 1
        if not decide_morse(g, SurfaceDescriptor(False, g_no)).realizable:
            bad += 1
    ok = bad == 0 and checked > 0
    return ok, f"{checked} graphs with degree-2 vertices, {bad} wrong verdicts at the genus threshold"


def test_criterion_3_morse_sharpness(corpus):
    ok, detail = check_morse_sharpness(corpus)
    record(3, ok, detail)
    assert ok, detail


# -- 4 ---------------------------------------------------------------------


def block_chi(b) -> int:
    if b.kind in (CAP_MIN, CAP_MAX):
        return 1
    if b.kind == DEGENERATE:
        return 0
    assert b.kind == INTERIOR
    return chi_block(b.k_minus, b.k_plus, b.t, b.r)


def check_chi_identities(corpus):
    plans = bad = 0
    for _, plan, s in synthesized_plans(corpus):
        if plan.dimension != 2:
            continue
        plans += 1
        total = sum(block_chi(b) for b in plan.blocks)
        expected = euler_characteristic(s) if s is not None else euler_characteristic(plan_summary(plan).surface)
        if total != expected:
            bad += 1
        if plan.mode in ("morse", "any-n"):
            k = [sum(b.census.get(i, 0) for b in plan.blocks) for i in (0, 1, 2)]
            if k[0] - k[1] + k[2] != total:
                bad += 1
    ok = bad == 0 and plans > 0
    return ok, f"{plans} surface plans, {bad} identity failures"


def test_criterion_4_chi_identities(corpus):
    ok, detail = check_chi_identities(corpus)
    record(4, ok, detail)
    assert ok, detail


# -- 5 ---------------------------------------------------------------------


def check_orientation_oracle():
    start = time.perf_counter()
    graphs = connected_multigraphs(6)
    disagreements = 0
    with_good = 0
    for g in graphs:
        brute = brute_good_orientations(g)
        found = find_good_orientation(g)
        if (found is None) != (not brute):
            disagreements += 1
            continue
        if found is None:
            continue
        with_good += 1
        same_graph = all(
            {e.src, e.dst} == {f.src, f.dst} for e, f in zip(g.edges, found.edges)
        ) and [e.id for e in g.edges] == [f.id for f in found.edges]
        if not (same_graph and nx_is_good(found)):
            disagreements += 1
    theta_absent = find_good_orientation(theta(3)) is None and not brute_good_orientations(theta(3))
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and theta_absent and elapsed < 10
    return ok, (f"{len(graphs)} iso classes (<= 6 edges), {with_good} with a good orientation, "
                f"{disagreements} disagreements, theta absent={theta_absent}, {elapsed:.1f} s")


def test_criterion_5_orientation_oracle():
    ok, detail = check_orientation_oracle()
    record(5, ok, detail)
    assert ok, detail


# -- 6 ---------------------------------------------------------------------


def check_mesh_laws():
    start = time.perf_counter()
    problems = []
    t_mesh = torus()
    t_graph = mesh_reeb(t_mesh)
    if betti1(t_graph) != 1 or cycle_rank(t_graph) != 1:
        problems.append("torus beta1")
    if is_isomorphic(t_graph, torus_graph()) is None:
        problems.append("torus graph not T")
    if betti1(mesh_reeb(genus2_slab())) != 2:
        problems.append("genus-2 beta1")
    if betti1(mesh_reeb(octahedron())) != 0:
        problems.append("octahedron beta1")
    k_mesh = klein_bottle()
    report = check_surface_laws(k_mesh)
    k_graph = mesh_reeb_full(k_mesh).graph
    if k_mesh.surface() != SurfaceDescriptor(False, 2):
        problems.append("klein bottle surface")
    if betti1(k_graph) > 1:
        problems.append("klein beta1")
    if not set(report["saddle_degrees"]) <= {2, 3}:
        problems.append("klein saddle degrees")
    if report["k0+3k1+k2"] < 2 * len(k_graph.edges):
        problems.append("klein handshake bound")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 5
    return ok, f"torus/genus-2/octahedron/Klein meshes, problems={problems or 'none'}, {elapsed:.2f} s"


def test_criterion_6_mesh_laws():
    ok, detail = check_mesh_laws()
    record(6, ok, detail)
    assert ok, detail


# -- 7 ---------------------------------------------------------------------


def check_degree_law(corpus):
    plans = bad = 0
    for g in corpus:
        if betti1(g) == 0 and len(g.edges) == 1:
            continue
        h = resolve_simple(g, orientable_target=True)
        for genus in range(betti1(h), betti1(h) + 3):
            s = SurfaceDescriptor(True, genus)
            if not decide_morse(h, s).realizable:
                continue
            plan = synthesize(h, s, "morse")
            plans += 1
            blocks = plan.block_map
            rebuilt = sweep_reeb(plan)
            for v in rebuilt.vertices:
                d = degree_profile(rebuilt, v).deg
                extremum = blocks[v].kind in (CAP_MIN, CAP_MAX)
                if extremum and d != 1:
                    bad += 1
                if not extremum and (d != 3 or blocks[v].census.get(1, 0) < 1):
                    bad += 1
        hn = resolve_simple(g, orientable_target=False)
        need = 2 * betti1(hn) + delta2(hn)
        for genus in range(max(1, need), need + 3):
            s = SurfaceDescriptor(False, genus)
            if not decide_morse(hn, s).realizable:
                continue
            plan = synthesize(hn, s, "morse")
            plans += 1
            blocks = plan.block_map
            rebuilt = sweep_reeb(plan)
            for v in rebuilt.vertices:
                d = degree_profile(rebuilt, v).deg
                extremum = blocks[v].kind in (CAP_MIN, CAP_MAX)
                if extremum and d != 1:
                    bad += 1
                if not extremum and d not in (2, 3):
                    bad += 1
                if d == 2 and blocks[v].r < 1:
                    bad += 1
    ok = bad == 0 and plans > 0
    return ok, f"{plans} simple-resolved Morse plans, {bad} degree-law violations"


def test_criterion_7_degree_law(corpus):
    ok, detail = check_degree_law(corpus)
    record(7, ok, detail)
    assert ok, detail


# -- 8 ---------------------------------------------------------------------


def check_gamma0_gate():
    g0 = gamma0()
    wrong = []
    surfaces = [SurfaceDescriptor(True, g) for g in range(0, 6)] + [SurfaceDescriptor(False, g) for g in range(1, 6)]
    for s in surfaces:
        if decide_finite(g0, s).realizable != (s == SurfaceDescriptor(True, 0)):
            wrong.append(str(s))
    ok = not wrong
    return ok, f"{len(surfaces)} surfaces, wrong verdicts: {wrong or 'none'}"


def test_criterion_8_gamma0_gate():
    ok, detail = check_gamma0_gate()
    record(8, ok, detail)
    assert ok, detail


# -- 9 ---------------------------------------------------------------------


def check_resolve_simple(corpus):
    bad = 0
    for g in corpus:
        h = resolve_simple(g)
        degrees = {degree_profile(h, v).deg for v in h.vertices}
        if betti1(h) != betti1(g) or not degrees <= {1, 3} or not check_good(h).good:
            bad += 1
    ok = bad == 0
    return ok, f"{len(corpus)} graphs, {bad} violations"


def test_criterion_9_resolve_simple(corpus):
    ok, detail = check_resolve_simple(corpus)
    record(9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    graphs = random_corpus(CORPUS_SEED, CORPUS_SIZE)
    checks = [
        (1, check_reeb_table, ()),
        (2, check_round_trip, (graphs,)),
        (3, check_morse_sharpness, (graphs,)),
        (4, check_chi_identities, (graphs,)),
        (5, check_orientation_oracle, ()),
        (6, check_mesh_laws, ()),
        (7, check_degree_law, (graphs,)),
        (8, check_gamma0_gate, ()),
        (9, check_resolve_simple, (graphs,)),
    ]
    for number, fn, fn_args in checks:
        record(number, *fn(*fn_args))
