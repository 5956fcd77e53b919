"""Replay a surface plan as level-set events and check what it builds.

The sweep knows nothing about the source graph: it follows circle lifelines
from port to port through tubes, in increasing critical value, and emits one
Reeb vertex per block. The reconstructed graph is then compared with the
expected one, and the plan's Euler characteristic, surface type, per-block
critical point counts and degree laws are recomputed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .graphcore import Edge, OrientedMultigraph, id_key, is_isomorphic, to_dot, to_json_obj
from .surf import chi_block
from .synth import (
    CAP_MAX,
    CAP_MIN,
    DEGENERATE,
    INTERIOR,
    KINDS,
    ONE_SIDED,
    PlanError,
    SurfacePlan,
    plan_summary,
)

log = logging.getLogger(__name__)

_TOL = 1e-9


@dataclass
class SweepState:
    live: Dict[int, str] = field(default_factory=dict)  # tube index -> Reeb vertex it left
    event_log: List[Tuple[float, str, str]] = field(default_factory=list)
    shared_values: List[str] = field(default_factory=list)
    graph: Optional[OrientedMultigraph] = None


def _check_structure(p: SurfacePlan) -> Tuple[Dict[str, int], Dict[str, int]]:
    """Validate ports and tubes; return port -> tube index maps for each side."""
    ids = [b.id for b in p.blocks]
    if len(set(ids)) != len(ids):
        raise PlanError("duplicate block id")
    if p.dimension < 2:
        raise PlanError("dimension must be >= 2")
    upper_owner: Dict[str, str] = {}
    lower_owner: Dict[str, str] = {}
    for b in p.blocks:
        if b.kind not in KINDS:
            raise PlanError(f"block {b.id}: unknown kind {b.kind!r}")
        n_lo, n_up = len(b.lower_ports), len(b.upper_ports)
        shape_ok = {
            CAP_MIN: n_lo == 0 and n_up == 1,
            CAP_MAX: n_lo == 1 and n_up == 0,
            INTERIOR: n_lo >= 1 and n_up >= 1,
            DEGENERATE: n_lo == 1 and n_up == 1 and p.dimension == 2,
            ONE_SIDED: (n_lo == 0) != (n_up == 0) and n_lo + n_up >= 2 and p.dimension == 2,
        }[b.kind]
        if not shape_ok:
            raise PlanError(f"block {b.id}: port counts {n_lo}/{n_up} do not fit kind {b.kind}")
        for port in b.lower_ports:
            if port in lower_owner or port in upper_owner:
                raise PlanError(f"port {port} declared twice")
            lower_owner[port] = b.id
        for port in b.upper_ports:
            if port in lower_owner or port in upper_owner:
                raise PlanError(f"port {port} declared twice")
            upper_owner[port] = b.id

    by_lower: Dict[str, int] = {}
    by_upper: Dict[str, int] = {}
    blocks = p.block_map
    for i, t in enumerate(p.tubes):
        if t.lower not in upper_owner:
            raise PlanError(f"tube {t.edge}: lower end {t.lower} is not an upper port")
        if t.upper not in lower_owner:
            raise PlanError(f"tube {t.edge}: upper end {t.upper} is not a lower port")
        if t.lower in by_lower or t.upper in by_upper:
            raise PlanError(f"tube {t.edge}: port already used by another tube")
        if t.sign not in (1, -1):
            raise PlanError(f"tube {t.edge}: sign must be +1 or -1")
        if t.sign == -1 and p.dimension != 2:
            raise PlanError(f"tube {t.edge}: orientation-reversing tubes need n = 2")
        by_lower[t.lower] = i
        by_upper[t.upper] = i
        lo = blocks[upper_owner[t.lower]].critical_value + p.epsilon
        hi = blocks[lower_owner[t.upper]].critical_value - p.epsilon
        if lo > hi + _TOL:
            raise PlanError(f"tube {t.edge}: value-ordering violation ({lo} > {hi})")
    unused = (set(upper_owner) - set(by_lower)) | (set(lower_owner) - set(by_upper))
    if unused:
        raise PlanError(f"ports without a tube: {sorted(unused, key=id_key)}")
    return by_lower, by_upper


def sweep(p: SurfacePlan) -> SweepState:
    by_lower, by_upper = _check_structure(p)
    state = SweepState()
    vertices: List[str] = []
    edges: List[Edge] = []
    order = sorted(p.blocks, key=lambda b: (b.critical_value, id_key(b.id)))
    for prev, b in zip(order, order[1:]):
        if abs(prev.critical_value - b.critical_value) <= _TOL:
            # disjoint level components; tube-joined blocks were rejected above
            state.shared_values.append(
                f"blocks {prev.id} and {b.id} share critical value {b.critical_value}"
            )
    for b in order:
        before = len(state.live)
        incoming = []
        for port in b.lower_ports:
            i = by_upper[port]
            if i not in state.live:
                raise PlanError(f"block {b.id}: circle through {port} is not alive yet")
            incoming.append(state.live.pop(i))
        vertices.append(b.id)
        for origin in incoming:
            edges.append(Edge(f"L{len(edges)}", origin, b.id))
        for port in b.upper_ports:
            state.live[by_lower[port]] = b.id
        k_in, k_out = len(b.lower_ports), len(b.upper_ports)
        if len(state.live) != before - k_in + k_out:
            raise PlanError(f"block {b.id}: circle count not conserved")
        if b.kind == CAP_MIN:
            transition = "birth"
        elif b.kind == CAP_MAX:
            transition = "death"
        elif b.kind == DEGENERATE:
            transition = "pass (degenerate)"
        elif b.kind == ONE_SIDED:
            transition = f"{k_in}->{k_out} (infinite)"
        else:
            transition = f"{k_in}->{k_out}"
        state.event_log.append((b.critical_value, b.id, transition))
    if state.live:
        raise PlanError("circles still alive after the last block")
    for note in state.shared_values:
        log.debug(note)
    state.graph = OrientedMultigraph(tuple(vertices), tuple(edges))
    return state


def sweep_reeb(p: SurfacePlan) -> OrientedMultigraph:
    """Reconstruct the Reeb graph of the function a plan describes."""
    return sweep(p).graph


def orientability_of(p: SurfacePlan) -> bool:
    """Orientability by two-colouring block orientations along the tubes."""
    if p.dimension != 2:
        raise ValueError("orientability is only computed for surfaces (n = 2)")
    if any(b.r > 0 for b in p.blocks):
        return False
    owner = {}
    for b in p.blocks:
        for port in b.lower_ports + b.upper_ports:
            owner[port] = b.id
    parent = {b.id: b.id for b in p.blocks}
    parity = {b.id: 0 for b in p.blocks}  # relative to parent, 0 = same orientation

    def find(x: str) -> Tuple[str, int]:
        acc = 0
        while parent[x] != x:
            acc ^= parity[x]
            x = parent[x]
        return x, acc

    for t in p.tubes:
        a, b = owner[t.lower], owner[t.upper]
        flip = 0 if t.sign == 1 else 1
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            if pa ^ pb != flip:
                return False
        else:
            parent[rb] = ra
            parity[rb] = pa ^ pb ^ flip
    return True


# -- report ----------------------------------------------------------------


@dataclass
class VerifyReport:
    reconstructed: Optional[OrientedMultigraph]
    iso: Optional[Dict[str, str]]
    chi_ok: bool
    surface_ok: bool
    census_ok: bool
    degree_law_ok: bool
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.iso is not None and self.chi_ok and self.surface_ok and self.census_ok and self.degree_law_ok

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "iso": self.iso,
            "chi_ok": self.chi_ok,
            "surface_ok": self.surface_ok,
            "census_ok": self.census_ok,
            "degree_law_ok": self.degree_law_ok,
            "details": list(self.details),
            "reconstructed": None if self.reconstructed is None else to_json_obj(self.reconstructed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def reconstructed_dot(self) -> str:
        return to_dot(self.reconstructed, "reconstructed") if self.reconstructed else ""


def expected_census(b, n: int) -> Optional[Dict[int, int]]:
    """Critical points a block must carry, by replaying its handle attachments.

    Interior blocks start from ``k_minus`` collars. Each index ``n-1`` handle
    splits one boundary sphere, each joining 1-handle merges two, and each
    cross handle (surfaces) passes a circle through itself. Returns ``None``
    if the attachments cannot produce the block's upper boundary.
    """
    if b.kind == CAP_MIN:
        return {0: 1}
    if b.kind == CAP_MAX:
        return {n: 1}
    if b.kind in (DEGENERATE, ONE_SIDED):
        return {}
    k_lo, k_up = len(b.lower_ports), len(b.upper_ports)
    splits = k_up + b.t - 1
    joins = k_lo + b.t - 1
    if splits < 0 or joins < 0 or (b.t == 0 and b.r == 0 and max(k_lo, k_up) < 2):
        return None
    spheres = k_lo
    for _ in range(splits):
        spheres += 1
    # joins must first connect the k_lo collars into one piece
    pieces = k_lo
    for _ in range(joins):
        if spheres < 2:
            return None
        spheres -= 1
        pieces = max(1, pieces - 1)
    if spheres != k_up or pieces != 1:
        return None
    census: Dict[int, int] = {}
    census[n - 1] = census.get(n - 1, 0) + splits
    census[1] = census.get(1, 0) + joins + b.r
    return {i: c for i, c in census.items() if c}


def _block_chi(b) -> int:
    if b.kind in (CAP_MIN, CAP_MAX):
        return 1
    if b.kind == DEGENERATE:
        return 0
    if b.kind == ONE_SIDED:
        return 2 - len(b.lower_ports) - len(b.upper_ports)
    return chi_block(len(b.lower_ports), len(b.upper_ports), b.t, b.r)


def verify_plan(p: SurfacePlan, expected: OrientedMultigraph) -> VerifyReport:
    details: List[str] = []
    try:
        state = sweep(p)
    except PlanError as exc:
        return VerifyReport(None, None, False, False, False, False, [f"sweep failed: {exc}"])
    g = state.graph
    iso = is_isomorphic(g, expected)
    if iso is None:
        details.append("reconstructed graph is not isomorphic to the expected graph")

    n = p.dimension
    blocks = p.block_map
    has_infinite = any(b.infinite for b in p.blocks)
    is_morse = not has_infinite and all(b.degenerate == 0 for b in p.blocks)
    census: Dict[int, int] = {}
    for b in p.blocks:
        for i, c in b.critical_points:
            census[i] = census.get(i, 0) + c
    alternating = sum((-1) ** i * c for i, c in census.items())

    # per-block census
    census_ok = True
    for b in p.blocks:
        if (b.k_minus, b.k_plus) != (len(b.lower_ports), len(b.upper_ports)):
            census_ok = False
            details.append(f"{b.id}: declared (k-, k+) does not match its ports")
        if b.r and (n != 2 or b.t or b.kind != INTERIOR):
            census_ok = False
            details.append(f"{b.id}: cross handles only on n = 2, t = 0 interior blocks")
        want = expected_census(b, n)
        if want is None:
            census_ok = False
            details.append(f"{b.id}: handle parameters cannot build this block")
        elif b.census != want:
            census_ok = False
            details.append(f"{b.id}: census {b.census} != expected {want}")
        if b.kind == DEGENERATE and b.degenerate != 1:
            census_ok = False
            details.append(f"{b.id}: degenerate block must carry one degenerate point")
        if b.kind == ONE_SIDED and not b.infinite:
            census_ok = False
            details.append(f"{b.id}: one-sided block must be marked infinite")

    summary = None
    chi_ok = True
    if n == 2:
        block_sum = sum(_block_chi(b) for b in p.blocks)
        stored = [b.chi for b in p.blocks]
        if None in stored or sum(stored) != block_sum:
            chi_ok = False
            details.append("stored block χ values disagree with the block formulas")
        try:
            summary = plan_summary(p)
        except ValueError as exc:
            chi_ok = False
            details.append(f"summary failed: {exc}")
        if summary is not None and summary.chi != block_sum:
            chi_ok = False
            details.append(f"block-sum χ {block_sum} != summary χ {summary.chi}")
        if is_morse and alternating != block_sum:
            chi_ok = False
            details.append(f"Morse census gives χ {alternating}, blocks give {block_sum}")
        if has_infinite:
            details.append("χ unchecked (infinite block)")
    elif n % 2 == 1:
        if alternating != 0:
            chi_ok = False
            details.append(f"odd-dimensional closed manifold needs χ = 0, census gives {alternating}")

    surface_ok = True
    if n == 2:
        if summary is None:
            surface_ok = False
        else:
            if summary.orientable != orientability_of(p):
                surface_ok = False
                details.append("cycle-sign and two-colouring orientability disagree")
            if p.target is None:
                details.append(f"no surface target; plan builds {summary.surface}")
            elif summary.surface != p.target:
                surface_ok = False
                details.append(f"plan builds {summary.surface}, target is {p.target}")

    degree_law_ok = True
    deg = {v: 0 for v in g.vertices}
    for e in g.edges:
        deg[e.src] += 1
        deg[e.dst] += 1
    for bid, d in deg.items():
        b = blocks[bid]
        if b.kind in (CAP_MIN, CAP_MAX) and d != 1:
            degree_law_ok = False
            details.append(f"{bid}: extremum with degree {d}")
    simple = is_morse and all(b.n_critical == 1 for b in p.blocks)
    if n == 2 and simple:
        orientable = orientability_of(p)
        for bid, d in deg.items():
            b = blocks[bid]
            if b.kind != INTERIOR:
                continue
            if orientable and d != 3:
                degree_law_ok = False
                details.append(f"{bid}: saddle of degree {d} on an orientable surface")
            if not orientable and (d not in (2, 3) or (d == 2 and b.r == 0)):
                degree_law_ok = False
                details.append(f"{bid}: saddle of degree {d} (r = {b.r}) on a non-orientable surface")
        k = [census.get(i, 0) for i in range(3)]
        weighted = k[0] + 3 * k[1] + k[2]
        two_e = 2 * len(g.edges)
        if (orientable and two_e != weighted) or (not orientable and two_e > weighted):
            degree_law_ok = False
            details.append(f"2|E| = {two_e} vs k0 + 3k1 + k2 = {weighted}")
    elif n == 2 and is_morse:
        details.append("plan is not simple; saddle degree law not applicable")

    return VerifyReport(g, iso, chi_ok, surface_ok, census_ok, degree_law_ok, details)
