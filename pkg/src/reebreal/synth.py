"""Build handle-decomposition witnesses (surface plans) for realizable graphs.

A plan has one block per vertex of the graph, a neighbourhood of the
vertex's critical level, and one tube (a cylinder ``S^{n-1} x I``) per edge.
Blocks record their handle parameters, critical point census and critical
value; tubes record which ports they join and whether the gluing reverses
orientation.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from .graphcore import (
    OrientedMultigraph,
    degree_profile,
    from_json_obj,
    id_key,
    is_gamma0,
    subdivide_edge,
    to_json_obj,
)
from .orient import LevelFunction, check_good, layered_level_function
from .realize import (
    RealizabilityVerdict,
    decide_acyclic_orientation,
    decide_finite,
    decide_morse,
    has_mixed_vertex,
)
from .surf import SurfaceDescriptor, chi_block, parse_surface, surface_from_chi

CAP_MIN = "cap-min"
CAP_MAX = "cap-max"
INTERIOR = "interior"
DEGENERATE = "degenerate-deg2"
ONE_SIDED = "saeki-c"
KINDS = (CAP_MIN, CAP_MAX, INTERIOR, DEGENERATE, ONE_SIDED)

MODES = ("finite", "morse", "any-n", "acyclic")


class SynthesisError(ValueError):
    def __init__(self, message: str, verdict: Optional[RealizabilityVerdict] = None):
        super().__init__(message)
        self.verdict = verdict


class PlanError(ValueError):
    """A plan violates its structural invariants."""


@dataclass(frozen=True)
class Block:
    id: str
    kind: str
    vertex: str
    critical_value: float
    lower_ports: Tuple[str, ...]
    upper_ports: Tuple[str, ...]
    k_minus: int = 0
    k_plus: int = 0
    t: int = 0
    r: int = 0
    side: Optional[str] = None
    critical_points: Tuple[Tuple[int, int], ...] = ()
    degenerate: int = 0
    infinite: bool = False
    chi: Optional[int] = None

    @property
    def census(self) -> Dict[int, int]:
        return dict(self.critical_points)

    @property
    def n_critical(self) -> Optional[int]:
        if self.infinite:
            return None
        return sum(self.census.values()) + self.degenerate

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "vertex": self.vertex,
            "critical_value": self.critical_value,
            "lower_ports": list(self.lower_ports),
            "upper_ports": list(self.upper_ports),
            "k_minus": self.k_minus,
            "k_plus": self.k_plus,
            "t": self.t,
            "r": self.r,
            "side": self.side,
            "critical_points": {str(i): c for i, c in self.critical_points},
            "degenerate": self.degenerate,
            "infinite": self.infinite,
            "chi": self.chi,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Block":
        cps = tuple(sorted((int(i), int(c)) for i, c in obj.get("critical_points", {}).items()))
        return cls(
            id=str(obj["id"]),
            kind=str(obj["kind"]),
            vertex=str(obj["vertex"]),
            critical_value=float(obj["critical_value"]),
            lower_ports=tuple(obj.get("lower_ports", ())),
            upper_ports=tuple(obj.get("upper_ports", ())),
            k_minus=int(obj.get("k_minus", 0)),
            k_plus=int(obj.get("k_plus", 0)),
            t=int(obj.get("t", 0)),
            r=int(obj.get("r", 0)),
            side=obj.get("side"),
            critical_points=cps,
            degenerate=int(obj.get("degenerate", 0)),
            infinite=bool(obj.get("infinite", False)),
            chi=None if obj.get("chi") is None else int(obj["chi"]),
        )


class Tube(NamedTuple):
    edge: str
    lower: str
    upper: str
    sign: int = 1


@dataclass(frozen=True)
class SurfacePlan:
    dimension: int
    mode: str
    blocks: Tuple[Block, ...]
    tubes: Tuple[Tube, ...]
    level_function: LevelFunction
    source_graph: OrientedMultigraph
    target: Optional[SurfaceDescriptor] = None

    @property
    def block_map(self) -> Dict[str, Block]:
        return {b.id: b for b in self.blocks}

    @property
    def epsilon(self) -> float:
        return self.level_function.epsilon

    def replace(self, **changes) -> "SurfacePlan":
        fields = dict(
            dimension=self.dimension,
            mode=self.mode,
            blocks=self.blocks,
            tubes=self.tubes,
            level_function=self.level_function,
            source_graph=self.source_graph,
            target=self.target,
        )
        fields.update(changes)
        return SurfacePlan(**fields)

    def to_json_obj(self) -> dict:
        return {
            "dimension": self.dimension,
            "mode": self.mode,
            "target": None if self.target is None else self.target.spelling(),
            "epsilon": self.epsilon,
            "level_function": self.level_function.to_json_obj(),
            "source_graph": to_json_obj(self.source_graph),
            "blocks": [b.to_json_obj() for b in sorted(self.blocks, key=lambda b: id_key(b.id))],
            "tubes": [t._asdict() for t in sorted(self.tubes, key=lambda t: id_key(t.edge))],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SurfacePlan":
        if not isinstance(obj, dict):
            raise PlanError("malformed plan JSON: top level must be an object")
        try:
            target = obj.get("target")
            return cls(
                dimension=int(obj["dimension"]),
                mode=str(obj.get("mode", "finite")),
                blocks=tuple(Block.from_json_obj(b) for b in obj["blocks"]),
                tubes=tuple(
                    Tube(str(t["edge"]), str(t["lower"]), str(t["upper"]), int(t.get("sign", 1)))
                    for t in obj["tubes"]
                ),
                level_function=LevelFunction.from_json_obj(obj["level_function"]),
                source_graph=from_json_obj(obj["source_graph"]),
                target=None if target is None else parse_surface(target),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise PlanError(f"malformed plan JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SurfacePlan":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PlanError(f"invalid JSON: {exc}") from exc
        return cls.from_json_obj(obj)


# -- construction ----------------------------------------------------------


class _Spec(NamedTuple):
    kind: str
    t: int = 0
    r: int = 0
    side: Optional[str] = None


def handle_census(n: int, k_minus: int, k_plus: int, t: int, r: int = 0) -> Dict[int, int]:
    """Critical points of an interior block: splitting handles, then joining ones.

    ``k_plus + t - 1`` handles of index ``n - 1`` and ``k_minus + t - 1``
    of index 1, plus ``r`` orientation-reversing 1-handles (surfaces only).
    """
    census: Dict[int, int] = {}
    for index, count in ((n - 1, k_plus + t - 1), (1, k_minus + t - 1 + r)):
        if count:
            census[index] = census.get(index, 0) + count
    return census


def _block(
    g: OrientedMultigraph, v: str, spec: _Spec, n: int, value: float
) -> Block:
    p = degree_profile(g, v)
    bid = f"N[{v}]"
    lower = tuple(f"{bid}/in{i}" for i in range(p.deg_in))
    upper = tuple(f"{bid}/out{i}" for i in range(p.deg_out))
    kind = spec.kind
    census: Dict[int, int] = {}
    degenerate, infinite, chi = 0, False, None
    if kind == CAP_MIN:
        census = {0: 1}
        chi = 1
    elif kind == CAP_MAX:
        census = {n: 1}
        chi = 1
    elif kind == INTERIOR:
        if spec.r and (n != 2 or spec.t):
            raise SynthesisError("cross handles need n = 2 and t = 0")
        if spec.t == 0 and spec.r == 0 and max(p.deg_in, p.deg_out) < 2:
            raise SynthesisError(f"vertex {v}: t = 0 needs k_minus or k_plus >= 2")
        census = handle_census(n, p.deg_in, p.deg_out, spec.t, spec.r)
        chi = chi_block(p.deg_in, p.deg_out, spec.t, spec.r) if n == 2 else None
    elif kind == DEGENERATE:
        degenerate = 1
        chi = 0
    elif kind == ONE_SIDED:
        infinite = True
        chi = 2 - p.deg
    return Block(
        id=bid,
        kind=kind,
        vertex=v,
        critical_value=value,
        lower_ports=lower,
        upper_ports=upper,
        k_minus=p.deg_in,
        k_plus=p.deg_out,
        t=spec.t,
        r=spec.r,
        side=spec.side,
        critical_points=tuple(sorted(census.items())),
        degenerate=degenerate,
        infinite=infinite,
        chi=chi if n == 2 else None,
    )


def _cap_spec(g: OrientedMultigraph, v: str) -> _Spec:
    return _Spec(CAP_MIN if degree_profile(g, v).deg_out else CAP_MAX)


def first_cotree_edge(g: OrientedMultigraph) -> Optional[str]:
    """First edge (by id) outside the BFS spanning tree rooted at the first vertex."""
    tree = set()
    seen = {g.vertices[0]}
    queue = deque([g.vertices[0]])
    while queue:
        v = queue.popleft()
        for e in g.incident(v):
            w = e.dst if e.src == v else e.src
            if w not in seen:
                seen.add(w)
                tree.add(e.id)
                queue.append(w)
    for e in g.edges:
        if e.id not in tree:
            return e.id
    return None


def _surface_specs(
    g: OrientedMultigraph, verdict: RealizabilityVerdict, mode: str, s: SurfaceDescriptor
) -> Tuple[Dict[str, _Spec], bool]:
    """Per-vertex block choices for a surface target, plus whether to flip a tube."""
    specs: Dict[str, _Spec] = {}
    pad_t = verdict.padding.get("t0", 0)
    pad_r = verdict.padding.get("r0", 0)
    deg2 = [v for v in g.vertices if degree_profile(g, v).deg == 2]

    if mode == "morse" and deg2:
        # every pass-through vertex needs a Morse saddle pair or a cross handle
        first = deg2[0]
        for v in g.vertices:
            p = degree_profile(g, v)
            if p.deg == 1:
                specs[v] = _cap_spec(g, v)
            elif p.deg == 2:
                extra = 1
                if v == first:
                    extra = pad_t or pad_r or 1
                specs[v] = _Spec(INTERIOR, t=extra) if s.orientable else _Spec(INTERIOR, r=extra)
            else:
                specs[v] = _Spec(INTERIOR)
        return specs, False

    site = next((v for v in g.vertices if degree_profile(g, v).deg >= 2), None)
    for v in g.vertices:
        p = degree_profile(g, v)
        if p.deg == 1:
            specs[v] = _cap_spec(g, v)
        elif v == site and (pad_t or pad_r):
            specs[v] = _Spec(INTERIOR, t=pad_t, r=pad_r)
        elif (p.deg_in, p.deg_out) == (1, 1):
            specs[v] = _Spec(DEGENERATE)
        else:
            specs[v] = _Spec(INTERIOR)
    flip = not s.orientable and not pad_r
    return specs, flip


def _acyclic_specs(
    g: OrientedMultigraph, verdict: RealizabilityVerdict, s: SurfaceDescriptor
) -> Tuple[Dict[str, _Spec], bool]:
    pad_t = verdict.padding.get("t0", 0)
    pad_r = verdict.padding.get("r0", 0)
    site = next(
        (v for v in g.vertices if degree_profile(g, v).deg_in and degree_profile(g, v).deg_out),
        None,
    )
    specs: Dict[str, _Spec] = {}
    for v in g.vertices:
        p = degree_profile(g, v)
        if p.deg == 1:
            specs[v] = _cap_spec(g, v)
        elif p.deg_in == 0:
            specs[v] = _Spec(ONE_SIDED, side="min")
        elif p.deg_out == 0:
            specs[v] = _Spec(ONE_SIDED, side="max")
        elif v == site and (pad_t or pad_r):
            specs[v] = _Spec(INTERIOR, t=pad_t, r=pad_r)
        elif (p.deg_in, p.deg_out) == (1, 1):
            specs[v] = _Spec(DEGENERATE)
        else:
            specs[v] = _Spec(INTERIOR)
    return specs, not s.orientable and not pad_r


def synthesize(
    g: OrientedMultigraph,
    target: Union[SurfaceDescriptor, int],
    mode: str = "finite",
) -> SurfacePlan:
    """Construct a surface plan realizing ``g``.

    ``mode`` is ``finite`` or ``morse`` for a surface target, ``any-n`` for a
    target dimension ``n >= 2`` (every interior vertex gets one handle pair),
    or ``acyclic`` for orientations that are acyclic but not good. In
    ``acyclic`` mode, when padding is needed and no vertex has both in- and
    out-edges, the first edge is subdivided first; the plan's source graph is
    then the subdivided graph.
    """
    if mode not in MODES:
        raise SynthesisError(f"unknown mode {mode!r}")

    if mode == "any-n":
        if not isinstance(target, int) or isinstance(target, bool) or target < 2:
            raise SynthesisError("any-n mode needs an integer dimension n >= 2")
        verdict_check = check_good(g)
        if not g.is_connected() or not verdict_check.good or len(g.vertices) < 2:
            raise SynthesisError(f"graph has no good orientation: {verdict_check.status}")
        n = target
        specs = {
            v: _cap_spec(g, v) if degree_profile(g, v).deg == 1 else _Spec(INTERIOR, t=1)
            for v in g.vertices
        }
        return _assemble(g, specs, n, mode, None, flip=False)

    if not isinstance(target, SurfaceDescriptor):
        raise SynthesisError(f"{mode} mode needs a surface target")
    s = target
    decide = {"finite": decide_finite, "morse": decide_morse, "acyclic": decide_acyclic_orientation}[mode]
    verdict = decide(g, s)
    if not verdict.realizable:
        raise SynthesisError(f"not realizable on {s}: {verdict.obstruction}", verdict)

    if is_gamma0(g):
        return _assemble(g, {v: _cap_spec(g, v) for v in g.vertices}, 2, mode, s, flip=False)

    if mode == "acyclic":
        if check_good(g).good:
            specs, flip = _surface_specs(g, verdict, "finite", s)
        else:
            if verdict.padding and not has_mixed_vertex(g):
                g = subdivide_edge(g, g.edges[0].id)
            specs, flip = _acyclic_specs(g, verdict, s)
    else:
        specs, flip = _surface_specs(g, verdict, mode, s)
    return _assemble(g, specs, 2, mode, s, flip)


def _assemble(
    g: OrientedMultigraph,
    specs: Dict[str, _Spec],
    n: int,
    mode: str,
    target: Optional[SurfaceDescriptor],
    flip: bool,
) -> SurfacePlan:
    lf = layered_level_function(g)
    blocks = {v: _block(g, v, specs[v], n, lf.values[v]) for v in g.vertices}
    flipped = first_cotree_edge(g) if flip else None
    if flip and flipped is None:
        raise SynthesisError("non-orientable gluing needs a cycle")
    tubes = []
    for e in g.edges:
        out_idx = [x.id for x in g.out_edges(e.src)].index(e.id)
        in_idx = [x.id for x in g.in_edges(e.dst)].index(e.id)
        tubes.append(
            Tube(
                e.id,
                blocks[e.src].upper_ports[out_idx],
                blocks[e.dst].lower_ports[in_idx],
                -1 if e.id == flipped else 1,
            )
        )
    return SurfacePlan(
        dimension=n,
        mode=mode,
        blocks=tuple(blocks[v] for v in g.vertices),
        tubes=tuple(tubes),
        level_function=lf,
        source_graph=g,
        target=target,
    )


# -- summary ---------------------------------------------------------------


@dataclass(frozen=True)
class PlanSummary:
    chi: Optional[int]
    surface: Optional[SurfaceDescriptor]
    census: Optional[Dict[int, int]]
    degenerate_count: int
    has_infinite: bool
    orientable: Optional[bool]
    notes: Tuple[str, ...] = field(default=())

    def to_json_obj(self) -> dict:
        return {
            "chi": self.chi,
            "surface": None if self.surface is None else self.surface.spelling(),
            "census": None if self.census is None else {str(k): v for k, v in sorted(self.census.items())},
            "degenerate_count": self.degenerate_count,
            "has_infinite": self.has_infinite,
            "orientable": self.orientable,
            "notes": list(self.notes),
        }


def _port_owner(p: SurfacePlan) -> Dict[str, str]:
    owner = {}
    for b in p.blocks:
        for port in b.lower_ports + b.upper_ports:
            owner[port] = b.id
    return owner


def cotree_orientable(p: SurfacePlan) -> bool:
    """Orientability from sign products around the fundamental cycles.

    Assumes blocks without cross handles are orientable with a fixed
    boundary orientation, so only the tube gluings matter.
    """
    if any(b.r > 0 for b in p.blocks):
        return False
    owner = _port_owner(p)
    adj: Dict[str, List[Tuple[str, int, int]]] = {b.id: [] for b in p.blocks}
    for i, t in enumerate(p.tubes):
        a, b = owner[t.lower], owner[t.upper]
        adj[a].append((b, t.sign, i))
        adj[b].append((a, t.sign, i))
    root = p.blocks[0].id
    # parity[x] = product of signs along the tree path root -> x
    parity = {root: 1}
    tree = set()
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y, sign, i in adj[x]:
            if y not in parity:
                parity[y] = parity[x] * sign
                tree.add(i)
                queue.append(y)
    for i, t in enumerate(p.tubes):
        if i in tree:
            continue
        a, b = owner[t.lower], owner[t.upper]
        if parity[a] * parity[b] * t.sign == -1:
            return False
    return True


def plan_summary(p: SurfacePlan) -> PlanSummary:
    has_infinite = any(b.infinite for b in p.blocks)
    degenerate = sum(b.degenerate for b in p.blocks)
    notes = []
    census: Optional[Dict[int, int]] = None
    chi: Optional[int]
    if has_infinite:
        notes.append("χ unchecked (infinite block)")
        chi = sum(b.chi for b in p.blocks) if p.dimension == 2 else None
    else:
        census = {}
        for b in p.blocks:
            for i, c in b.critical_points:
                census[i] = census.get(i, 0) + c
        # degenerate pass-through blocks are cylinders and add 0
        chi = sum((-1) ** i * c for i, c in census.items())
    if p.dimension != 2:
        return PlanSummary(chi, None, census, degenerate, has_infinite, None, tuple(notes))
    orientable = cotree_orientable(p)
    surface = surface_from_chi(chi, orientable)
    return PlanSummary(chi, surface, census, degenerate, has_infinite, orientable, tuple(notes))
