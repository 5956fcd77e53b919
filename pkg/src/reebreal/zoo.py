"""Named small graphs and a seeded generator of good-oriented graphs."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .graphcore import Edge, OrientedMultigraph, degree_profile


def gamma0() -> OrientedMultigraph:
    return OrientedMultigraph.from_pairs([("s", "t")])


def theta(k: int = 3) -> OrientedMultigraph:
    return OrientedMultigraph.from_pairs([("v", "w")] * k)


def torus_graph() -> OrientedMultigraph:
    """min -> split -> (two arcs) -> merge -> max: Reeb graph of an upright torus."""
    return OrientedMultigraph.from_pairs([("m", "a"), ("a", "b"), ("a", "b"), ("b", "M")])


def double_diamond() -> OrientedMultigraph:
    pairs = [
        ("s", "u"), ("u", "p"), ("u", "q"), ("p", "m"), ("q", "m"),
        ("m", "r"), ("m", "z"), ("r", "w"), ("z", "w"), ("w", "t"),
    ]
    return OrientedMultigraph.from_pairs(pairs)


def chain(k: int) -> OrientedMultigraph:
    return OrientedMultigraph.from_pairs([(f"p{i}", f"p{i + 1}") for i in range(k)])


def directed_cycle(k: int) -> OrientedMultigraph:
    return OrientedMultigraph.from_pairs([(f"c{i}", f"c{(i + 1) % k}") for i in range(k)])


def star_out(k: int = 3) -> OrientedMultigraph:
    return OrientedMultigraph.from_pairs([("o", f"x{i}") for i in range(k)])


NAMED = {
    "gamma0": gamma0,
    "theta": theta,
    "torus": torus_graph,
    "double-diamond": double_diamond,
}


def random_good_graph(
    rng: random.Random,
    max_core: int = 10,
    max_betti: int = 5,
    betti: Optional[int] = None,
) -> OrientedMultigraph:
    """A random connected multigraph with a good orientation.

    A random core DAG (a tree plus ``betti`` extra edges, parallel edges
    allowed) is repaired by hanging a source leaf on every vertex without
    incoming edges and a sink leaf on every vertex without outgoing ones.
    Leaves do not change the cycle count, and the result has at most
    ``2 * max_core`` vertices.
    """
    n = rng.randint(2, max_core)
    b = rng.randint(0, max_betti) if betti is None else betti
    pairs: List[Tuple[int, int]] = []
    for i in range(1, n):
        pairs.append((rng.randrange(i), i))
    for _ in range(b):
        i, j = sorted(rng.sample(range(n), 2))
        pairs.append((i, j))
    names = [f"v{k}" for k in range(n)]
    rng.shuffle(names)
    core = OrientedMultigraph.from_pairs([(names[i], names[j]) for i, j in pairs], names)
    edges = list(core.edges)
    verts = list(core.vertices)
    extra = 0
    for v in core.vertices:
        p = degree_profile(core, v)
        if p.deg >= 2 and p.deg_in == 0:
            leaf = f"src{extra}"
            verts.append(leaf)
            edges.append(Edge(f"x{extra}", leaf, v))
            extra += 1
        elif p.deg >= 2 and p.deg_out == 0:
            leaf = f"snk{extra}"
            verts.append(leaf)
            edges.append(Edge(f"x{extra}", v, leaf))
            extra += 1
    order = list(range(len(edges)))
    rng.shuffle(order)
    relabelled = [Edge(f"e{order[k]}", e.src, e.dst) for k, e in enumerate(edges)]
    return OrientedMultigraph(tuple(verts), tuple(relabelled))


def random_corpus(seed: int, count: int, **kwargs) -> List[OrientedMultigraph]:
    rng = random.Random(seed)
    return [random_good_graph(rng, **kwargs) for _ in range(count)]
