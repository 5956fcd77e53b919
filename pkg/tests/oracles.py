"""Brute-force reference implementations used only by the tests.

Each one goes a different route from the library code it checks.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from reebreal.graphcore import Edge, OrientedMultigraph


def gf2_rank(rows: List[int]) -> int:
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def cycle_rank(g: OrientedMultigraph) -> int:
    """|E| minus the GF(2) rank of the vertex-edge incidence matrix."""
    index = {v: i for i, v in enumerate(g.vertices)}
    rows = [(1 << index[e.src]) | (1 << index[e.dst]) for e in g.edges]
    return len(g.edges) - gf2_rank(rows)


def to_nx(g: OrientedMultigraph) -> nx.MultiDiGraph:
    h = nx.MultiDiGraph()
    h.add_nodes_from(g.vertices)
    for e in g.edges:
        h.add_edge(e.src, e.dst, key=e.id)
    return h


def nx_is_good(g: OrientedMultigraph) -> bool:
    h = to_nx(g)
    if not nx.is_directed_acyclic_graph(h):
        return False
    for v in h.nodes:
        i, o = h.in_degree(v), h.out_degree(v)
        if i + o == 0:
            return False
        if i + o >= 2 and (i == 0 or o == 0):
            return False
    return True


def all_orientations(g: OrientedMultigraph) -> Iterator[Tuple[Tuple[int, ...], OrientedMultigraph]]:
    """Every reorientation; bit 1 means 'from the larger-id endpoint'."""
    from reebreal.graphcore import id_key

    base = [e if id_key(e.src) <= id_key(e.dst) else e.reversed() for e in g.edges]
    for bits in itertools.product((0, 1), repeat=len(base)):
        edges = tuple(e.reversed() if b else e for e, b in zip(base, bits))
        yield bits, OrientedMultigraph(g.vertices, edges)


def brute_good_orientations(g: OrientedMultigraph) -> List[Tuple[Tuple[int, ...], OrientedMultigraph]]:
    return [(bits, h) for bits, h in all_orientations(g) if nx_is_good(h)]


def brute_isomorphism(g: OrientedMultigraph, h: OrientedMultigraph) -> Optional[Dict[str, str]]:
    """Try every vertex bijection; fine for up to about eight vertices."""
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    mult_g = Counter((e.src, e.dst) for e in g.edges)
    mult_h = Counter((e.src, e.dst) for e in h.edges)
    for perm in itertools.permutations(h.vertices):
        m = dict(zip(g.vertices, perm))
        if all(mult_h[(m[a], m[b])] == k for (a, b), k in mult_g.items()):
            return m
    return None


def is_valid_isomorphism(m: Dict[str, str], g: OrientedMultigraph, h: OrientedMultigraph) -> bool:
    if sorted(m) != sorted(g.vertices) or sorted(m.values()) != sorted(h.vertices):
        return False
    mult_g = Counter((m[e.src], m[e.dst]) for e in g.edges)
    mult_h = Counter((e.src, e.dst) for e in h.edges)
    return mult_g == mult_h


def connected_multigraphs(max_edges: int) -> List[OrientedMultigraph]:
    """Connected loopless multigraphs with 1..max_edges edges, one per iso class.

    Grown an edge at a time (every connected multigraph loses an edge and
    stays connected, dropping a leaf if the edge was a pendant one), with
    networkx's multigraph matcher deduplicating each generation.
    """
    level: List[nx.MultiGraph] = []
    g0 = nx.MultiGraph()
    g0.add_nodes_from([0])
    level = [g0]
    found: List[nx.MultiGraph] = []
    for _ in range(max_edges):
        buckets: Dict[tuple, List[nx.MultiGraph]] = {}
        for g in level:
            n = g.number_of_nodes()
            candidates = [(a, b) for a in range(n) for b in range(a + 1, n)] + [(a, n) for a in range(n)]
            for a, b in candidates:
                h = nx.MultiGraph(g)
                h.add_edge(a, b)
                key = (h.number_of_nodes(), tuple(sorted(d for _, d in h.degree())),
                       tuple(sorted(Counter(tuple(sorted(e)) for e in h.edges()).values())))
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(h, other) for other in bucket):
                    bucket.append(h)
        level = [h for bucket in buckets.values() for h in bucket]
        found.extend(level)
    out = []
    for h in found:
        edges = tuple(Edge(f"e{k}", f"n{a}", f"n{b}") for k, (a, b) in enumerate(sorted(h.edges())))
        out.append(OrientedMultigraph(tuple(f"n{v}" for v in h.nodes), edges))
    return out
