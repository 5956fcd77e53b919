"""Finite oriented multigraphs: the combinatorial side of a Reeb graph.

Graphs are immutable. Vertex and edge ids are opaque strings and every
iteration happens in a fixed (natural) sort order, so all outputs are
reproducible.
"""

from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple


class GraphError(ValueError):
    """Raised for malformed graphs or invalid graph operations."""


_DIGITS = re.compile(r"(\d+)")


def id_key(ident: str) -> tuple:
    """Natural sort key: ``e2`` sorts before ``e10``."""
    parts = _DIGITS.split(ident)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def sort_ids(ids: Iterable[str]) -> List[str]:
    return sorted(ids, key=id_key)


class Edge(NamedTuple):
    id: str
    src: str
    dst: str

    def reversed(self) -> "Edge":
        return Edge(self.id, self.dst, self.src)


class DegreeProfile(NamedTuple):
    deg_in: int
    deg_out: int

    @property
    def deg(self) -> int:
        return self.deg_in + self.deg_out


@dataclass(frozen=True)
class OrientedMultigraph:
    """A finite multigraph with a direction on every edge.

    Parallel edges are allowed; self-loops are rejected because a function
    strictly monotone on edges cannot have one. Connectedness is not enforced
    here (operations that need it check it), so that disconnected input can
    be reported instead of failing at construction.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = field(default=())

    def __post_init__(self) -> None:
        verts = [str(v) for v in self.vertices]
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex id")
        vset = set(verts)
        edges = []
        for e in self.edges:
            e = Edge(*(str(x) for x in e))
            if e.src not in vset or e.dst not in vset:
                raise GraphError(f"edge {e.id!r} has an unknown endpoint")
            if e.src == e.dst:
                raise GraphError(f"edge {e.id!r} is a self-loop")
            edges.append(e)
        if len({e.id for e in edges}) != len(edges):
            raise GraphError("duplicate edge id")
        object.__setattr__(self, "vertices", tuple(sort_ids(verts)))
        object.__setattr__(self, "edges", tuple(sorted(edges, key=lambda e: id_key(e.id))))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[Tuple[str, str]], vertices: Iterable[str] = (), prefix: str = "e"
    ) -> "OrientedMultigraph":
        """Build a graph from ``(src, dst)`` pairs, naming edges ``e0, e1, ...``."""
        pairs = [(str(s), str(d)) for s, d in pairs]
        verts = dict.fromkeys(str(v) for v in vertices)
        for s, d in pairs:
            verts.setdefault(s)
            verts.setdefault(d)
        edges = [Edge(f"{prefix}{i}", s, d) for i, (s, d) in enumerate(pairs)]
        return cls(tuple(verts), tuple(edges))

    # -- lookups -------------------------------------------------------

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> Dict[str, Tuple[List[Edge], List[Edge]]]:
        inc: Dict[str, Tuple[List[Edge], List[Edge]]] = {v: ([], []) for v in self.vertices}
        for e in self.edges:
            inc[e.dst][0].append(e)
            inc[e.src][1].append(e)
        return inc

    @cached_property
    def multiplicity(self) -> Counter:
        return Counter((e.src, e.dst) for e in self.edges)

    def in_edges(self, v: str) -> List[Edge]:
        return list(self._incidence[v][0])

    def out_edges(self, v: str) -> List[Edge]:
        return list(self._incidence[v][1])

    def incident(self, v: str) -> List[Edge]:
        ins, outs = self._incidence[v]
        return sorted(ins + outs, key=lambda e: id_key(e.id))

    def __contains__(self, v: object) -> bool:
        return v in self._incidence

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = defaultdict(set)
        for e in self.edges:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def reversed(self) -> "OrientedMultigraph":
        return OrientedMultigraph(self.vertices, tuple(e.reversed() for e in self.edges))

    def with_edges(self, edges: Iterable[Edge]) -> "OrientedMultigraph":
        return OrientedMultigraph(self.vertices, tuple(edges))

    def __repr__(self) -> str:
        body = ", ".join(f"{e.src}->{e.dst}" for e in self.edges)
        return f"OrientedMultigraph(|V|={len(self.vertices)}, [{body}])"


# -- census ----------------------------------------------------------------


def betti1(g: OrientedMultigraph) -> int:
    """Number of independent cycles, ``|E| - |V| + 1``."""
    if not g.is_connected():
        raise GraphError("not connected")
    return len(g.edges) - len(g.vertices) + 1


def degree_profile(g: OrientedMultigraph, v: str) -> DegreeProfile:
    if v not in g:
        raise GraphError(f"unknown vertex {v!r}")
    ins, outs = g._incidence[v]
    return DegreeProfile(len(ins), len(outs))


def delta2(g: OrientedMultigraph) -> int:
    """Count of vertices of degree exactly two."""
    return sum(1 for v in g.vertices if degree_profile(g, v).deg == 2)


def is_gamma0(g: OrientedMultigraph) -> bool:
    """True for the graph with two vertices joined by a single edge."""
    return len(g.vertices) == 2 and len(g.edges) == 1


def subdivide_edge(
    g: OrientedMultigraph, e: str, new_vertex: Optional[str] = None
) -> OrientedMultigraph:
    """Replace edge ``e`` by a path of two edges through a fresh vertex."""
    if e not in g.edge_map:
        raise GraphError(f"unknown edge {e!r}")
    old = g.edge_map[e]
    mid = new_vertex or _fresh(f"{e}.mid", set(g.vertices))
    if mid in g:
        raise GraphError(f"vertex {mid!r} already exists")
    taken = set(g.edge_map)
    first = _fresh(f"{e}.0", taken)
    taken.add(first)
    second = _fresh(f"{e}.1", taken)
    edges = [x for x in g.edges if x.id != e]
    edges += [Edge(first, old.src, mid), Edge(second, mid, old.dst)]
    return OrientedMultigraph(g.vertices + (mid,), tuple(edges))


def _fresh(base: str, taken: set) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


# -- isomorphism -----------------------------------------------------------


def _refine(graphs: List[OrientedMultigraph]) -> List[Dict[str, int]]:
    """Joint colour refinement seeded by (deg_in, deg_out).

    Colours are shared across the input graphs so that equal colours mean
    equal refined neighbourhoods in either graph.
    """
    colours = [
        {v: hash(degree_profile(g, v)) for v in g.vertices} for g in graphs
    ]
    counts = [len(set(c.values())) for c in colours]
    while True:
        table: Dict[tuple, int] = {}
        new = []
        for g, col in zip(graphs, colours):
            nc = {}
            for v in g.vertices:
                outs = Counter(col[e.dst] for e in g.out_edges(v))
                ins = Counter(col[e.src] for e in g.in_edges(v))
                sig = (col[v], tuple(sorted(outs.items())), tuple(sorted(ins.items())))
                nc[v] = table.setdefault(sig, len(table))
            new.append(nc)
        new_counts = [len(set(c.values())) for c in new]
        colours = new
        if new_counts == counts:
            return colours
        counts = new_counts


def is_isomorphic(
    g1: OrientedMultigraph, g2: OrientedMultigraph
) -> Optional[Dict[str, str]]:
    """Find a vertex bijection preserving oriented edge multiplicities.

    Backtracking over colour classes from joint refinement. Returns the
    mapping ``g1 vertex -> g2 vertex`` or ``None``.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if not g1.vertices:
        return {}
    c1, c2 = _refine([g1, g2])
    if Counter(c1.values()) != Counter(c2.values()):
        return None

    by_colour: Dict[int, List[str]] = defaultdict(list)
    for v in g2.vertices:
        by_colour[c2[v]].append(v)
    class_size = {c: len(vs) for c, vs in by_colour.items()}

    nbrs1 = {v: set() for v in g1.vertices}
    for e in g1.edges:
        nbrs1[e.src].add(e.dst)
        nbrs1[e.dst].add(e.src)

    # Matching order: connected growth from the most constrained vertex.
    order: List[str] = []
    placed = set()
    while len(order) < len(g1.vertices):
        frontier = [v for v in g1.vertices if v not in placed]
        v = min(
            frontier,
            key=lambda x: (
                -len(nbrs1[x] & placed),
                class_size[c1[x]],
                id_key(x),
            ),
        )
        order.append(v)
        placed.add(v)

    m1, m2 = g1.multiplicity, g2.multiplicity
    mapping: Dict[str, str] = {}
    used = set()

    def consistent(v: str, w: str) -> bool:
        for u, x in mapping.items():
            if m1.get((v, u), 0) != m2.get((w, x), 0):
                return False
            if m1.get((u, v), 0) != m2.get((x, w), 0):
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_colour[c1[v]]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return {v: mapping[v] for v in g1.vertices}
    return None


# -- serialization ---------------------------------------------------------


_BARE_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$|^-?(\.[0-9]+|[0-9]+(\.[0-9]*)?)$")


def _quote(ident: str) -> str:
    if _BARE_ID.match(ident):
        return ident
    return '"' + ident.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: OrientedMultigraph, name: str = "G") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    for v in g.vertices:
        lines.append(f"  {_quote(v)};")
    for e in g.edges:
        lines.append(f"  {_quote(e.src)} -> {_quote(e.dst)} [id={_quote(e.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<arrow>->)
  | (?P<undirected>--)
  | (?P<punct>[{}\[\];,=])
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<ident>[A-Za-z_0-9.\-]+)
    """,
    re.VERBOSE | re.DOTALL,
)


def _tokenize(text: str) -> Iterator[Tuple[str, str]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GraphError(f"DOT: unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        value = m.group()
        if kind == "quoted":
            value = re.sub(r"\\(.)", r"\1", value[1:-1])
            kind = "ident"
        yield kind, value


def parse_dot(text: str) -> OrientedMultigraph:
    """Parse the supported DOT subset.

    ``digraph name { a; a -> b [id=e1]; ... }`` with one edge per statement.
    Attribute lists are accepted and ignored except ``id``/``key`` on edges.
    Subgraphs, edge chains and undirected graphs are rejected.
    """
    toks = list(_tokenize(text))
    i = 0

    def expect(kind: str, value: Optional[str] = None) -> str:
        nonlocal i
        if i >= len(toks):
            raise GraphError("DOT: unexpected end of input")
        k, v = toks[i]
        if k != kind or (value is not None and v != value):
            raise GraphError(f"DOT: expected {value or kind}, got {v!r}")
        i += 1
        return v

    def peek() -> Tuple[str, str]:
        return toks[i] if i < len(toks) else ("eof", "")

    if peek() == ("ident", "strict"):
        i += 1
    head = expect("ident")
    if head != "digraph":
        raise GraphError("DOT: only 'digraph' is supported")
    if peek()[0] == "ident":
        i += 1
    expect("punct", "{")

    verts: Dict[str, None] = {}
    edges: List[Edge] = []

    def attrs() -> Dict[str, str]:
        nonlocal i
        out: Dict[str, str] = {}
        if peek() != ("punct", "["):
            return out
        i += 1
        while peek() != ("punct", "]"):
            key = expect("ident")
            value = ""
            if peek() == ("punct", "="):
                i += 1
                value = expect("ident")
            out[key] = value
            if peek()[1] in (",", ";"):
                i += 1
        expect("punct", "]")
        return out

    while peek() != ("punct", "}"):
        kind, value = peek()
        if kind == "eof":
            raise GraphError("DOT: missing closing brace")
        if kind == "punct" and value == ";":
            i += 1
            continue
        if kind == "undirected":
            raise GraphError("DOT: undirected edges are not supported")
        name = expect("ident")
        if name in ("subgraph", "graph", "node", "edge") and peek()[0] != "arrow":
            if name == "subgraph" or peek() == ("punct", "{"):
                raise GraphError("DOT: subgraphs are not supported")
            attrs()
            continue
        if peek()[0] == "arrow":
            i += 1
            dst = expect("ident")
            if peek()[0] == "arrow":
                raise GraphError("DOT: one edge per statement (no chains)")
            a = attrs()
            eid = a.get("id") or a.get("key") or f"e{len(edges)}"
            verts.setdefault(name)
            verts.setdefault(dst)
            edges.append(Edge(eid, name, dst))
        elif peek()[0] == "undirected":
            raise GraphError("DOT: undirected edges are not supported")
        elif peek() == ("punct", "="):
            i += 1
            expect("ident")
        else:
            attrs()
            verts.setdefault(name)
    expect("punct", "}")
    return OrientedMultigraph(tuple(verts), tuple(edges))


def to_json_obj(g: OrientedMultigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in g.edges],
    }


def to_json(g: OrientedMultigraph) -> str:
    return json.dumps(to_json_obj(g), indent=2, sort_keys=True)


def from_json_obj(obj: dict) -> OrientedMultigraph:
    try:
        verts = [str(v) for v in obj["vertices"]]
        edges = [Edge(str(e["id"]), str(e["src"]), str(e["dst"])) for e in obj["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    return OrientedMultigraph(tuple(verts), tuple(edges))


def from_json(text: str) -> OrientedMultigraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from exc
    return from_json_obj(obj)


def load_graph(text: str) -> OrientedMultigraph:
    """Parse either JSON or DOT, sniffed from the first character."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return parse_dot(text)

