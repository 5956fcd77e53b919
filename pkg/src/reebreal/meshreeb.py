"""PL Reeb graphs of scalar fields on closed triangulated surfaces.

Vertices are swept in (value, index) order, which acts as a symbolic
perturbation making the field simple. The level set just above the sweep
position is tracked as components of crossing mesh edges (two crossing
edges are connected when they bound a common triangle), and each component
carries the id of the Reeb arc it belongs to.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .graphcore import Edge, OrientedMultigraph, betti1, degree_profile
from .surf import SurfaceDescriptor, reeb_number, surface_from_chi

log = logging.getLogger(__name__)


class MeshError(ValueError):
    pass


class NonTriangleFaceError(MeshError):
    pass


class BoundaryEdgeError(MeshError):
    pass


class NonManifoldError(MeshError):
    pass


class DisconnectedMeshError(MeshError):
    pass


EdgeKey = Tuple[int, int]


def _ek(a: int, b: int) -> EdgeKey:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class TriMesh:
    """A validated closed, connected, manifold triangle mesh with a field."""

    vertices: Tuple[Tuple[float, float, float], ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    field: Tuple[float, ...]

    def __post_init__(self) -> None:
        validate(self.vertices, self.triangles)
        if len(self.field) != len(self.vertices):
            raise MeshError("field needs one value per vertex")

    @property
    def edges(self) -> List[EdgeKey]:
        return sorted({_ek(a, b) for t in self.triangles for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))})

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def is_orientable(self) -> bool:
        return mesh_orientable(self.triangles)

    def surface(self) -> SurfaceDescriptor:
        return surface_from_chi(self.euler_characteristic(), self.is_orientable())

    def with_field(self, values: Sequence[float]) -> "TriMesh":
        return TriMesh(self.vertices, self.triangles, tuple(float(x) for x in values))


def _links(n_vertices: int, triangles) -> Dict[int, List[EdgeKey]]:
    links: Dict[int, List[EdgeKey]] = defaultdict(list)
    for a, b, c in triangles:
        links[a].append(_ek(b, c))
        links[b].append(_ek(c, a))
        links[c].append(_ek(a, b))
    return links


def validate(vertices, triangles) -> None:
    n = len(vertices)
    if n == 0 or not triangles:
        raise MeshError("empty mesh")
    seen_faces = set()
    edge_faces: Dict[EdgeKey, int] = defaultdict(int)
    for t in triangles:
        if len(t) != 3:
            raise NonTriangleFaceError("non-triangle face")
        if len(set(t)) != 3 or any(not 0 <= v < n for v in t):
            raise MeshError(f"degenerate or out-of-range triangle {tuple(t)}")
        key = frozenset(t)
        if key in seen_faces:
            raise NonManifoldError(f"non-manifold: duplicate triangle {tuple(t)}")
        seen_faces.add(key)
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            edge_faces[_ek(a, b)] += 1
    for e, count in sorted(edge_faces.items()):
        if count == 1:
            raise BoundaryEdgeError(f"boundary edge {e}")
        if count > 2:
            raise NonManifoldError(f"non-manifold edge {e} in {count} triangles")
    for v, link in _links(n, triangles).items():
        if not _is_single_cycle(link):
            raise NonManifoldError(f"non-manifold vertex {v}: link is not a single cycle")
    used = {v for t in triangles for v in t}
    if len(used) != n:
        raise MeshError("mesh has unused vertices")
    # connectivity over edges
    adj = defaultdict(set)
    for a, b in edge_faces:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise DisconnectedMeshError("mesh is not connected")


def _is_single_cycle(link: List[EdgeKey]) -> bool:
    if len(link) < 3 or len(set(link)) != len(link):
        return False
    adj = defaultdict(list)
    for a, b in link:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(ns) != 2 for ns in adj.values()):
        return False
    start = link[0][0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def cyclic_link(m: TriMesh, v: int) -> List[int]:
    """Link vertices of ``v`` in cyclic order."""
    link = [_ek(b, c) for (a, b, c) in _rotations(m.triangles, v)]
    adj = defaultdict(list)
    for a, b in link:
        adj[a].append(b)
        adj[b].append(a)
    start = min(adj)
    cycle = [start]
    prev, cur = None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    return cycle


def _rotations(triangles, v):
    for t in triangles:
        if v in t:
            i = t.index(v)
            yield (t[i], t[(i + 1) % 3], t[(i + 2) % 3])


def mesh_orientable(triangles) -> bool:
    """Propagate a coherent orientation over the triangles; fail on conflict."""
    by_edge: Dict[EdgeKey, List[int]] = defaultdict(list)
    for i, t in enumerate(triangles):
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            by_edge[_ek(a, b)].append(i)
    flip: Dict[int, bool] = {0: False}
    stack = [0]

    def directed(i: int, f: bool) -> Set[Tuple[int, int]]:
        a, b, c = triangles[i]
        es = {(a, b), (b, c), (c, a)}
        return {(y, x) for x, y in es} if f else es

    while stack:
        i = stack.pop()
        di = directed(i, flip[i])
        for x, y in di:
            for j in by_edge[_ek(x, y)]:
                if j == i:
                    continue
                # coherent neighbours traverse the shared edge in opposite directions
                need = (y, x) not in directed(j, False)
                if j in flip:
                    if flip[j] != need:
                        return False
                else:
                    flip[j] = need
                    stack.append(j)
    return True


# -- perturbation and classification ---------------------------------------


def sweep_order(m: TriMesh) -> List[int]:
    return sorted(range(len(m.vertices)), key=lambda v: (m.field[v], v))


def perturb_simple(m: TriMesh) -> TriMesh:
    """Make field values pairwise distinct, preserving (value, index) order."""
    if len(set(m.field)) == len(m.field):
        return m
    distinct = sorted(set(m.field))
    gaps = [b - a for a, b in zip(distinct, distinct[1:])]
    step = min(gaps) if gaps else 1.0
    groups: Dict[float, List[int]] = defaultdict(list)
    for v in range(len(m.vertices)):
        groups[m.field[v]].append(v)
    values = list(m.field)
    for value, members in groups.items():
        members.sort()
        for j, v in enumerate(members):
            values[v] = value + step * j / (len(members) + 1)
    out = m.with_field(values)
    assert len(set(out.field)) == len(out.field)
    return out


REGULAR = "regular"
MINIMUM = "minimum"
MAXIMUM = "maximum"
SADDLE = "saddle"


@dataclass(frozen=True)
class VertexClass:
    kind: str
    multiplicity: int = 0  # number of simple saddles a saddle unfolds into


def classify(m: TriMesh) -> Dict[int, VertexClass]:
    """Classify vertices from the arcs of their lower and upper links."""
    rank = {v: i for i, v in enumerate(sweep_order(m))}
    out: Dict[int, VertexClass] = {}
    for v in range(len(m.vertices)):
        ring = cyclic_link(m, v)
        lower = [rank[w] < rank[v] for w in ring]
        if not any(lower):
            out[v] = VertexClass(MINIMUM)
            continue
        if all(lower):
            out[v] = VertexClass(MAXIMUM)
            continue
        runs = sum(1 for i in range(len(lower)) if lower[i] and not lower[i - 1])
        if runs == 1:
            out[v] = VertexClass(REGULAR)
        else:
            out[v] = VertexClass(SADDLE, runs - 1)
    return out


# -- the sweep -------------------------------------------------------------


@dataclass
class MeshReebResult:
    graph: OrientedMultigraph
    classes: Dict[int, VertexClass]
    node_vertex: Dict[str, int]
    raw_saddle_degrees: Dict[int, int] = field(default_factory=dict)
    log: List[str] = field(default_factory=list)


def mesh_reeb_full(m: TriMesh, raw: bool = False) -> MeshReebResult:
    """Sweep the mesh and build its Reeb graph.

    With ``raw`` every regular vertex also becomes a degree-2 node.
    """
    order = sweep_order(m)
    rank = {v: i for i, v in enumerate(order)}
    classes = classify(m)

    tris_of_edge: Dict[EdgeKey, List[Tuple[int, int, int]]] = defaultdict(list)
    vert_edges: Dict[int, List[EdgeKey]] = defaultdict(list)
    for t in m.triangles:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            tris_of_edge[_ek(a, b)].append(t)
    for e in tris_of_edge:
        vert_edges[e[0]].append(e)
        vert_edges[e[1]].append(e)

    def crossing(e: EdgeKey, pos: int) -> bool:
        ra, rb = rank[e[0]], rank[e[1]]
        return min(ra, rb) < pos <= max(ra, rb)

    def component(seeds: List[EdgeKey], pos: int) -> List[List[EdgeKey]]:
        """Level-set components at sweep position ``pos`` containing the seeds."""
        comps = []
        seen: Set[EdgeKey] = set()
        for s in seeds:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                e = stack.pop()
                for t in tris_of_edge[e]:
                    for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                        f = _ek(a, b)
                        if f != e and f not in seen and crossing(f, pos):
                            seen.add(f)
                            comp.append(f)
                            stack.append(f)
            comps.append(comp)
        return comps

    label: Dict[EdgeKey, int] = {}  # crossing edge -> arc id
    arc_origin: Dict[int, str] = {}
    edges: List[Edge] = []
    nodes: List[str] = []
    node_vertex: Dict[str, int] = {}
    raw_degrees: Dict[int, int] = {}
    notes: List[str] = []

    def new_arc(origin: str) -> int:
        i = len(arc_origin)
        arc_origin[i] = origin
        return i

    def end_arc(arc: int, node: str) -> None:
        edges.append(Edge(f"a{len(edges)}", arc_origin[arc], node))

    def add_node(name: str, v: int) -> str:
        nodes.append(name)
        node_vertex[name] = v
        return name

    for pos, v in enumerate(order):
        lower = [e for e in vert_edges[v] if rank[e[0] if e[1] == v else e[1]] < pos]
        upper = [e for e in vert_edges[v] if rank[e[0] if e[1] == v else e[1]] > pos]
        in_arcs = sorted({label[e] for e in lower})
        cls = classes[v]
        if cls.kind == REGULAR and not raw:
            arc = in_arcs[0]
            for e in lower:
                del label[e]
            for e in upper:
                label[e] = arc
            continue

        for e in lower:
            del label[e]
        after = component(upper, pos + 1)
        k_in, k_out = len(in_arcs), len(after)
        name = f"v{v}"
        if cls.kind != SADDLE or cls.multiplicity == 1:
            node = add_node(name, v)
            for arc in in_arcs:
                end_arc(arc, node)
            outs = [node] * k_out
        else:
            raw_degrees[v] = k_in + k_out
            outs = _unfold(v, cls.multiplicity, in_arcs, k_out, add_node, end_arc, edges, notes)
        for comp, origin in zip(after, outs):
            arc = new_arc(origin)
            for e in comp:
                label[e] = arc
        if cls.kind == SADDLE and cls.multiplicity == 1:
            raw_degrees[v] = k_in + k_out

    if label:
        raise MeshError("sweep ended with live level-set components")
    g = OrientedMultigraph(tuple(nodes), tuple(edges))
    for n in notes:
        log.info(n)
    return MeshReebResult(g, classes, node_vertex, raw_degrees, notes)


def _unfold(v, mult, in_arcs, k_out, add_node, end_arc, edges, notes) -> List[str]:
    """Split a multi-saddle into ``mult`` simple saddles on a chain.

    Merges first, then split/merge pairs for any excess (local genus), one
    pass-through node if the excess is odd, then splits.
    """
    k_in = len(in_arcs)
    excess = mult - (k_in - 1) - (k_out - 1)
    if excess < 0 or k_in < 1 or k_out < 1:
        raise MeshError(f"vertex {v}: inconsistent saddle ({k_in} in, {k_out} out, multiplicity {mult})")
    notes.append(f"vertex {v}: multi-saddle of multiplicity {mult} unfolded ({k_in} in, {k_out} out)")
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return add_node(f"v{v}.{counter[0]}", v)

    def link(a: str, b: str) -> None:
        edges.append(Edge(f"a{len(edges)}", a, b))

    acc: Optional[str] = None
    for j, arc in enumerate(in_arcs):
        if j == 0:
            continue
        node = fresh()
        if acc is None:
            end_arc(in_arcs[0], node)
        else:
            link(acc, node)
        end_arc(arc, node)
        acc = node

    def step() -> str:
        nonlocal acc
        node = fresh()
        if acc is None:
            end_arc(in_arcs[0], node)
        else:
            link(acc, node)
        acc = node
        return node

    for _ in range(excess // 2):
        s = step()
        m_ = fresh()
        link(s, m_)
        link(s, m_)
        acc = m_
    if excess % 2:
        step()
    outs: List[str] = []
    for _ in range(k_out - 1):
        outs.append(step())
    if acc is None:
        raise MeshError(f"vertex {v}: unfolding produced no node")
    outs.append(acc)
    return outs


def mesh_reeb(m: TriMesh, raw: bool = False) -> OrientedMultigraph:
    return mesh_reeb_full(m, raw=raw).graph


# -- law report ------------------------------------------------------------


def check_surface_laws(m: TriMesh, g: Optional[OrientedMultigraph] = None) -> dict:
    """Check the surface laws a Reeb graph of a simple field must obey."""
    result = mesh_reeb_full(m)
    if g is None:
        g = result.graph
    violations: List[str] = []
    surface = m.surface()
    b1 = betti1(g)
    if surface.orientable and b1 != surface.genus:
        violations.append(f"β1 = {b1} != genus {surface.genus}")
    if not surface.orientable and b1 > surface.genus // 2:
        violations.append(f"β1 = {b1} > floor({surface.genus}/2)")
    if b1 > reeb_number(surface):
        violations.append("β1 exceeds the Reeb number")

    degrees: Dict[str, int] = {v: degree_profile(g, v).deg for v in g.vertices}
    classes = result.classes
    k0 = sum(1 for c in classes.values() if c.kind == MINIMUM)
    k2 = sum(1 for c in classes.values() if c.kind == MAXIMUM)
    k1 = sum(c.multiplicity for c in classes.values() if c.kind == SADDLE)
    saddle_degrees = []
    for node, d in degrees.items():
        kind = classes[result.node_vertex[node]].kind
        if kind in (MINIMUM, MAXIMUM):
            if d != 1:
                violations.append(f"extremum {node} has degree {d}")
        else:
            saddle_degrees.append(d)
    allowed = {3} if surface.orientable else {2, 3}
    bad = sorted(set(saddle_degrees) - allowed)
    if bad:
        violations.append(f"saddle degrees {bad} outside {sorted(allowed)}")
    two_e = 2 * len(g.edges)
    if sum(degrees.values()) != two_e:
        violations.append("handshake identity fails")
    weighted = k0 + 3 * k1 + k2
    if surface.orientable and weighted != two_e:
        violations.append(f"k0 + 3k1 + k2 = {weighted} != 2|E| = {two_e}")
    if not surface.orientable and weighted < two_e:
        violations.append(f"k0 + 3k1 + k2 = {weighted} < 2|E| = {two_e}")
    chi = m.euler_characteristic()
    if k0 - k1 + k2 != chi:
        violations.append(f"critical census gives χ = {k0 - k1 + k2}, mesh has {chi}")

    return {
        "surface": surface.spelling(),
        "orientable": surface.orientable,
        "genus": surface.genus,
        "chi": chi,
        "betti1": b1,
        "reeb_number": reeb_number(surface),
        "census": {"0": k0, "1": k1, "2": k2},
        "saddle_degrees": sorted(saddle_degrees),
        "raw_saddle_degrees": sorted(result.raw_saddle_degrees.values()),
        "edges": len(g.edges),
        "k0+3k1+k2": weighted,
        "unfolded": list(result.log),
        "violations": violations,
        "ok": not violations,
    }


# -- OFF -------------------------------------------------------------------


def parse_off(text: str, field: Union[str, Sequence[float], None] = "z") -> TriMesh:
    """Parse ASCII OFF. ``field`` is an axis name or one value per vertex."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise MeshError("empty OFF input")
    head = lines[0].split()
    if head[0] != "OFF":
        raise MeshError("OFF header missing")
    rest = head[1:]
    idx = 1
    if not rest:
        rest = lines[1].split()
        idx = 2
    try:
        nv, nf = int(rest[0]), int(rest[1])
    except (IndexError, ValueError) as exc:
        raise MeshError("bad OFF counts line") from exc
    if len(lines) < idx + nv + nf:
        raise MeshError("OFF input is truncated")
    verts = []
    for line in lines[idx:idx + nv]:
        xs = line.split()
        try:
            verts.append((float(xs[0]), float(xs[1]), float(xs[2])))
        except (IndexError, ValueError) as exc:
            raise MeshError(f"bad vertex line {line!r}") from exc
    tris = []
    for line in lines[idx + nv:idx + nv + nf]:
        xs = line.split()
        try:
            k = int(xs[0])
            face = [int(x) for x in xs[1:1 + k]]
        except (IndexError, ValueError) as exc:
            raise MeshError(f"bad face line {line!r}") from exc
        if k != 3 or len(face) != 3:
            raise NonTriangleFaceError("non-triangle face")
        tris.append(tuple(face))
    if field is None or isinstance(field, str):
        axis = {"x": 0, "y": 1, "z": 2}.get(field or "z")
        if axis is None:
            raise MeshError(f"unknown field axis {field!r}")
        values = tuple(p[axis] for p in verts)
    else:
        values = tuple(float(x) for x in field)
    return TriMesh(tuple(verts), tuple(tris), values)


def parse_field(text: str) -> List[float]:
    """Sidecar field file: one real per non-empty line."""
    try:
        return [float(line.split()[0]) for line in text.splitlines() if line.strip()]
    except ValueError as exc:
        raise MeshError(f"bad field file: {exc}") from exc


def to_off(m: TriMesh) -> str:
    out = ["OFF", f"{len(m.vertices)} {len(m.triangles)} {len(m.edges)}"]
    out += [" ".join(repr(float(c)) for c in p) for p in m.vertices]
    out += [f"3 {a} {b} {c}" for a, b, c in m.triangles]
    return "\n".join(out) + "\n"
