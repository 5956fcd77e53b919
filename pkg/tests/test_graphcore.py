import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_isomorphism, cycle_rank, is_valid_isomorphism
from strategies import connected_multigraphs, relabelled

from reebreal.graphcore import (
    Edge,
    GraphError,
    OrientedMultigraph,
    betti1,
    degree_profile,
    delta2,
    from_json,
    id_key,
    is_gamma0,
    is_isomorphic,
    load_graph,
    parse_dot,
    sort_ids,
    subdivide_edge,
    to_dot,
    to_json,
)
from reebreal.zoo import double_diamond, gamma0, theta, torus_graph


def test_natural_sort():
    assert sort_ids(["e10", "e2", "e1", "a", "e"]) == ["a", "e", "e1", "e2", "e10"]
    assert id_key("v2") < id_key("v10")


def test_constructor_normalises_order():
    g = OrientedMultigraph(("b", "a"), (Edge("e10", "a", "b"), Edge("e2", "b", "a")))
    assert g.vertices == ("a", "b")
    assert [e.id for e in g.edges] == ["e2", "e10"]


@pytest.mark.parametrize(
    "verts, edges",
    [
        (("a", "a"), ()),
        (("a", "b"), (Edge("e", "a", "c"),)),
        (("a",), (Edge("e", "a", "a"),)),
        (("a", "b"), (Edge("e", "a", "b"), Edge("e", "b", "a"))),
    ],
)
def test_constructor_rejects(verts, edges):
    with pytest.raises(GraphError):
        OrientedMultigraph(verts, edges)


def test_betti_examples():
    assert betti1(gamma0()) == 0
    assert betti1(theta(3)) == 2
    assert betti1(torus_graph()) == 1
    assert betti1(double_diamond()) == 2


def test_betti_needs_connected():
    g = OrientedMultigraph.from_pairs([("a", "b"), ("c", "d")])
    with pytest.raises(GraphError, match="not connected"):
        betti1(g)


def test_degree_profile_and_delta2():
    g = torus_graph()
    assert degree_profile(g, "a") == (1, 2)
    assert degree_profile(g, "a").deg == 3
    assert delta2(g) == 0
    h = subdivide_edge(g, "e0")
    assert delta2(h) == 1
    assert is_gamma0(gamma0()) and not is_gamma0(g)


def test_subdivide_preserves_betti():
    g = torus_graph()
    h = subdivide_edge(g, "e1")
    assert betti1(h) == betti1(g)
    assert len(h.vertices) == len(g.vertices) + 1
    assert "e1.mid" in h
    with pytest.raises(GraphError):
        subdivide_edge(g, "nope")


@settings(max_examples=150, deadline=None)
@given(connected_multigraphs(max_vertices=7, max_extra=6))
def test_betti_matches_cycle_space_rank(g):
    assert betti1(g) == cycle_rank(g)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_isomorphic_to_relabelled_copy(data):
    g = data.draw(connected_multigraphs())
    h, _ = data.draw(relabelled(g))
    m = is_isomorphic(g, h)
    assert m is not None and is_valid_isomorphism(m, g, h)


@settings(max_examples=200, deadline=None)
@given(connected_multigraphs(max_vertices=5, max_extra=3), connected_multigraphs(max_vertices=5, max_extra=3))
def test_isomorphism_agrees_with_brute_force(g, h):
    fast = is_isomorphic(g, h)
    slow = brute_isomorphism(g, h)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert is_valid_isomorphism(fast, g, h)


def test_isomorphism_respects_direction_and_multiplicity():
    g = OrientedMultigraph.from_pairs([("a", "b"), ("a", "b"), ("b", "c")])
    h = OrientedMultigraph.from_pairs([("a", "b"), ("b", "c"), ("b", "c")])
    assert is_isomorphic(g, h) is None
    assert is_isomorphic(g.reversed(), h) is not None


def test_isomorphism_regular_hard_case():
    # two 3-regular directed graphs with equal colour refinement
    cube = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
    twisted = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 7), (3, 6)]
    undirected = lambda pairs: OrientedMultigraph.from_pairs(
        [(f"n{a}", f"n{b}") for a, b in pairs] + [(f"n{b}", f"n{a}") for a, b in pairs]
    )
    g, h = undirected(cube), undirected(twisted)
    assert (is_isomorphic(g, h) is None) == (brute_isomorphism(g, h) is None)
    assert is_isomorphic(g, undirected(cube)) is not None


@settings(max_examples=100, deadline=None)
@given(connected_multigraphs())
def test_dot_and_json_round_trip(g):
    assert parse_dot(to_dot(g)) == g
    assert from_json(to_json(g)) == g
    assert load_graph(to_dot(g)) == g
    assert load_graph(to_json(g)) == g


def test_dot_subset():
    g = parse_dot(
        """
        strict digraph T {
          node [shape=circle];
          m; "weird id";
          m -> a [id=x1];
          a -> b [label="left", key=x2];
          a -> b;  // comment
          b -> "weird id";
        }
        """
    )
    assert set(g.vertices) == {"m", "a", "b", "weird id"}
    assert {e.id for e in g.edges} >= {"x1", "x2"}
    assert g.multiplicity[("a", "b")] == 2
    assert parse_dot(to_dot(g)) == g


@pytest.mark.parametrize(
    "text",
    [
        "graph G { a -- b; }",
        "digraph G { a -> b -> c; }",
        "digraph G { subgraph s { a; } }",
        "digraph G { a -- b; }",
        "digraph G { a -> b;",
        "digraph G { a -> a; }",
    ],
)
def test_dot_rejects(text):
    with pytest.raises(GraphError):
        parse_dot(text)


def test_json_rejects():
    with pytest.raises(GraphError):
        from_json("{not json")
    with pytest.raises(GraphError):
        from_json('{"vertices": ["a"]}')
