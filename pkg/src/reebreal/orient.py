"""Good orientations, level functions and simple-form resolution."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .graphcore import (
    Edge,
    GraphError,
    OrientedMultigraph,
    degree_profile,
    id_key,
    sort_ids,
)

GOOD = "good"
ORIENTED_CYCLE = "oriented-cycle"
BAD_VERTEX = "bad-vertex"


@dataclass(frozen=True)
class OrientationVerdict:
    status: str
    cycle: Tuple[str, ...] = ()
    vertex: Optional[str] = None

    @property
    def good(self) -> bool:
        return self.status == GOOD

    def to_json_obj(self) -> dict:
        obj: dict = {"status": self.status}
        if self.cycle:
            obj["cycle"] = list(self.cycle)
        if self.vertex is not None:
            obj["vertex"] = self.vertex
        return obj


class NotGoodError(ValueError):
    """The operation needs a good orientation and did not get one."""

    def __init__(self, verdict: OrientationVerdict):
        self.verdict = verdict
        detail = verdict.vertex if verdict.vertex is not None else ",".join(verdict.cycle)
        super().__init__(f"orientation is not good: {verdict.status} ({detail})")


@dataclass(frozen=True)
class LevelFunction:
    """Vertex values inducing the orientation, plus the collar width."""

    values: Dict[str, float]
    epsilon: float

    def to_json_obj(self) -> dict:
        return {"values": {v: self.values[v] for v in sort_ids(self.values)}, "epsilon": self.epsilon}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LevelFunction":
        return cls({str(k): float(v) for k, v in obj["values"].items()}, float(obj["epsilon"]))


def find_directed_cycle(g: OrientedMultigraph) -> Optional[List[str]]:
    """Return the edge ids of some directed cycle, or ``None`` for a DAG."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in g.vertices}
    for root in g.vertices:
        if colour[root] != WHITE:
            continue
        colour[root] = GREY
        # stack of (vertex, out-edges, next index); path_edges[i] enters stack[i+1]
        stack = [(root, g.out_edges(root), 0)]
        path_edges: List[Edge] = []
        while stack:
            v, outs, idx = stack[-1]
            if idx == len(outs):
                colour[v] = BLACK
                stack.pop()
                if path_edges:
                    path_edges.pop()
                continue
            stack[-1] = (v, outs, idx + 1)
            e = outs[idx]
            w = e.dst
            if colour[w] == GREY:
                start = next(i for i, (x, _, _) in enumerate(stack) if x == w)
                return [pe.id for pe in path_edges[start:]] + [e.id]
            if colour[w] == WHITE:
                colour[w] = GREY
                path_edges.append(e)
                stack.append((w, g.out_edges(w), 0))
    return None


def _first_bad_vertex(g: OrientedMultigraph) -> Optional[str]:
    for v in g.vertices:
        p = degree_profile(g, v)
        # an isolated vertex is an extremum that is not of degree one
        if p.deg == 0 or (p.deg >= 2 and (p.deg_in == 0 or p.deg_out == 0)):
            return v
    return None


def check_good(g: OrientedMultigraph) -> OrientationVerdict:
    cycle = find_directed_cycle(g)
    if cycle is not None:
        return OrientationVerdict(ORIENTED_CYCLE, cycle=tuple(cycle))
    bad = _first_bad_vertex(g)
    if bad is not None:
        return OrientationVerdict(BAD_VERTEX, vertex=bad)
    return OrientationVerdict(GOOD)


def find_good_orientation(
    g: OrientedMultigraph, ignore_directions: bool = True
) -> Optional[OrientedMultigraph]:
    """Search reorientations of ``g`` for a good one.

    Edges are decided in sorted id order, "as given" before "reversed", so
    the first hit is the lexicographically smallest good orientation. With
    ``ignore_directions`` the reference direction of each edge is from the
    smaller endpoint id to the larger; otherwise it is the stored direction.
    """
    if not g.vertices:
        return None
    if any(degree_profile(g, v).deg == 0 for v in g.vertices):
        return None

    base: List[Edge] = []
    for e in g.edges:
        if ignore_directions and id_key(e.dst) < id_key(e.src):
            e = e.reversed()
        base.append(e)
    n = len(base)
    inc: Dict[str, List[int]] = defaultdict(list)
    for i, e in enumerate(base):
        inc[e.src].append(i)
        inc[e.dst].append(i)
    deg = {v: len(inc[v]) for v in g.vertices}

    choice: List[Optional[int]] = [None] * n
    succ: Dict[str, List[str]] = defaultdict(list)
    n_in = {v: 0 for v in g.vertices}
    n_out = {v: 0 for v in g.vertices}
    left = dict(deg)

    def head_tail(i: int, bit: int) -> Tuple[str, str]:
        e = base[i]
        return (e.src, e.dst) if bit == 0 else (e.dst, e.src)

    def reaches(a: str, b: str) -> bool:
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                return True
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def assign(i: int, bit: int, trail: List[int]) -> bool:
        u, v = head_tail(i, bit)
        if reaches(v, u):
            return False
        choice[i] = bit
        succ[u].append(v)
        n_out[u] += 1
        n_in[v] += 1
        left[u] -= 1
        left[v] -= 1
        trail.append(i)
        for x in (u, v):
            if deg[x] >= 2 and left[x] == 0 and (n_in[x] == 0 or n_out[x] == 0):
                return False
        return True

    def undo(trail: List[int]) -> None:
        while trail:
            i = trail.pop()
            u, v = head_tail(i, choice[i])
            succ[u].remove(v)
            n_out[u] -= 1
            n_in[v] -= 1
            left[u] += 1
            left[v] += 1
            choice[i] = None

    def propagate(trail: List[int]) -> bool:
        # a vertex with one undecided edge and no in (out) edge forces that edge
        changed = True
        while changed:
            changed = False
            for x in g.vertices:
                if deg[x] < 2 or left[x] != 1 or (n_in[x] and n_out[x]):
                    continue
                i = next(j for j in inc[x] if choice[j] is None)
                want_in = n_in[x] == 0
                e = base[i]
                bit = 0 if (e.dst == x) == want_in else 1
                if not assign(i, bit, trail):
                    return False
                changed = True
        return True

    def search(pos: int) -> bool:
        while pos < n and choice[pos] is not None:
            pos += 1
        if pos == n:
            return True
        for bit in (0, 1):
            trail: List[int] = []
            if assign(pos, bit, trail) and propagate(trail) and search(pos + 1):
                return True
            undo(trail)
        return False

    if not search(0):
        return None
    edges = [base[i] if choice[i] == 0 else base[i].reversed() for i in range(n)]
    return g.with_edges(edges)


def dag_layers(g: OrientedMultigraph) -> Dict[str, int]:
    """Longest-path distance from the sources; requires an acyclic graph."""
    indeg = {v: len(g.in_edges(v)) for v in g.vertices}
    layer = {v: 0 for v in g.vertices}
    ready = [v for v in g.vertices if indeg[v] == 0]
    done = 0
    while ready:
        ready.sort(key=id_key)
        v = ready.pop(0)
        done += 1
        for e in g.out_edges(v):
            layer[e.dst] = max(layer[e.dst], layer[v] + 1)
            indeg[e.dst] -= 1
            if indeg[e.dst] == 0:
                ready.append(e.dst)
    if done != len(g.vertices):
        raise GraphError("graph has a directed cycle")
    return layer


def layered_level_function(g: OrientedMultigraph) -> LevelFunction:
    """Level function from longest-path layers; any DAG with an edge."""
    layers = dag_layers(g)
    values = {v: float(layers[v]) for v in g.vertices}
    if not g.edges:
        return LevelFunction(values, 1.0 / 3.0)
    gap = min(abs(values[e.dst] - values[e.src]) for e in g.edges)
    return LevelFunction(values, gap / 3.0)


def level_function(g: OrientedMultigraph) -> LevelFunction:
    verdict = check_good(g)
    if not verdict.good:
        raise NotGoodError(verdict)
    return layered_level_function(g)


def resolve_simple(g: OrientedMultigraph, orientable_target: bool = True) -> OrientedMultigraph:
    """Replace every non-simple vertex by a local tree of simple ones.

    A vertex with ``k_in`` incoming and ``k_out`` outgoing edges becomes a
    chain of ``k_in - 1`` merges (2 in, 1 out) followed by ``k_out - 1``
    splits (1 in, 2 out). Adds as many vertices as edges, so the cycle count
    is unchanged. Pass-through vertices (1 in, 1 out) are smoothed away for
    orientable targets; for non-orientable ones they are kept, since a single
    orientation-reversing handle realizes them.
    """
    verdict = check_good(g)
    if not verdict.good:
        raise NotGoodError(verdict)

    verts = list(g.vertices)
    edges: Dict[str, Edge] = dict(g.edge_map)
    taken_v = set(verts)
    taken_e = set(edges)

    def fresh(base: str, taken: set) -> str:
        name, i = base, 0
        while name in taken:
            i += 1
            name = f"{base}~{i}"
        taken.add(name)
        return name

    for v in list(g.vertices):
        ins = sorted((e for e in edges.values() if e.dst == v), key=lambda e: id_key(e.id))
        outs = sorted((e for e in edges.values() if e.src == v), key=lambda e: id_key(e.id))
        k_in, k_out = len(ins), len(outs)
        if k_in + k_out == 1 or (k_in, k_out) in ((1, 2), (2, 1)):
            continue
        if (k_in, k_out) == (1, 1):
            if not orientable_target:
                continue
            a, b = ins[0], outs[0]
            edges[a.id] = Edge(a.id, a.src, b.dst)
            del edges[b.id]
            verts.remove(v)
            continue

        verts.remove(v)
        chain: List[str] = []
        # merges: accumulate the incoming edges one at a time
        acc: Optional[str] = None
        for j, e in enumerate(ins[1:], start=1):
            node = fresh(f"{v}#m{j}", taken_v)
            chain.append(node)
            if j == 1:
                edges[ins[0].id] = Edge(ins[0].id, ins[0].src, node)
            else:
                link = fresh(f"{node}.in", taken_e)
                edges[link] = Edge(link, acc, node)
            edges[e.id] = Edge(e.id, e.src, node)
            acc = node

        for j, e in enumerate(outs[:-1]):
            node = fresh(f"{v}#s{j + 1}", taken_v)
            chain.append(node)
            if acc is None:
                edges[ins[0].id] = Edge(ins[0].id, ins[0].src, node)
            else:
                link = fresh(f"{node}.in", taken_e)
                edges[link] = Edge(link, acc, node)
            edges[e.id] = Edge(e.id, node, e.dst)
            acc = node
        last = outs[-1]
        edges[last.id] = Edge(last.id, acc, last.dst)
        verts.extend(chain)

    return OrientedMultigraph(tuple(verts), tuple(edges.values()))
