"""Qualification graphs, separator graphs, vertex merging, minimum cuts."""

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from groupident.graphs import (
    SINK,
    SOURCE,
    DiGraph,
    Infeasible,
    SeedTargetConflict,
    csr_aux_graph,
    lsr_aux_graph,
    merge_vertices,
    min_vertex_separator,
    qualification_graph,
)
from groupident.model import make_society

EX1 = make_society([
    [1, 1, 1, 1, -1, -1],
    [1, 1, -1, 1, -1, -1],
    [1, 1, -1, -1, -1, -1],
    [1, 1, -1, 1, 1, -1],
    [1, 1, 1, -1, 1, -1],
    [1, 1, 1, -1, -1, 1],
])

EX2 = make_society([
    [1, -1, -1, 1, 1, -1],
    [1, 1, -1, 1, 1, -1],
    [1, 1, 1, 1, 1, -1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, -1],
])


def test_qualification_graph_matches_the_profile():
    g = qualification_graph(EX1)
    assert g.out_neighbors(2) == (0, 1)        # a3 backs only a1 and a2
    assert g.has_arc(0, 0)                     # self-loop for a self-qualifier
    assert not g.has_arc(2, 2)


def test_qualification_graph_trivial_profiles():
    assert list(qualification_graph(make_society([[-1] * 3] * 3)).arcs()) == []
    g = qualification_graph(make_society([[1, 1], [1, 1]]))
    assert sorted(g.arcs()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_lsr_aux_graph_wires_source_and_sink():
    soc = make_society([[1, -1], [1, -1]])     # only a0 self-qualifies
    g = lsr_aux_graph(soc, {1})
    assert g.has_arc(SOURCE, 0)
    assert not g.has_arc(SOURCE, 1)
    assert g.has_arc(1, SINK)
    assert not g.has_arc(0, SINK)


def test_lsr_aux_graph_on_the_worked_example():
    g = lsr_aux_graph(EX1, {2})
    assert g.out_neighbors(SOURCE) == (0, 1, 3, 4, 5)   # the self-qualifiers
    g = lsr_aux_graph(EX1, set(range(6)))
    assert all(g.has_arc(a, SINK) for a in range(6))
    with pytest.raises(ValueError):
        lsr_aux_graph(EX1, set())


def test_csr_aux_graph_source_feeds_the_unanimously_qualified():
    g = csr_aux_graph(EX2, {5})
    assert g.out_neighbors(SOURCE) == (0,)     # only a1 is backed by everyone
    # after a1 leaves, a2 is backed by all remaining individuals
    sub = make_society([row[1:] for row in EX2.phi[1:]])
    g = csr_aux_graph(sub, {4})
    assert g.out_neighbors(SOURCE) == (0,)


def test_csr_aux_graph_rejects_protected_seed_members():
    with pytest.raises(SeedTargetConflict):
        csr_aux_graph(EX2, {0})                # a1 is qualified by everyone


def test_csr_aux_graph_merged_versus_diagnostic():
    merged = csr_aux_graph(EX2, {4, 5})
    assert 4 not in merged.labels and 5 not in merged.labels
    plain = csr_aux_graph(EX2, {4, 5}, merge=False)
    assert plain.has_arc(4, SINK) and plain.has_arc(5, SINK)


def test_merge_two_cycle_creates_no_self_loop():
    g = DiGraph(["x", "u", "v"], [("x", "u"), ("u", "v"), ("v", "u")])
    m = merge_vertices(g, {"u", "v"}, "w")
    assert sorted(m.arcs()) == [("x", "w")]


def test_merge_singleton_is_isomorphic():
    g = DiGraph([0, 1], [(0, 1), (1, 0)])
    m = merge_vertices(g, {1}, "w")
    assert set(m.arcs()) == {(0, "w"), ("w", 0)}


def test_merge_on_the_worked_example():
    g = qualification_graph(EX2)
    m = merge_vertices(g, {3, 4}, "w")
    assert m.out_neighbors("w") == (0, 1, 2, 5)


def test_separator_on_the_worked_example():
    g = csr_aux_graph(EX2, {5})
    assert min_vertex_separator(g) == frozenset({0})


def test_separator_disconnected_graph_is_empty():
    g = DiGraph([SOURCE, SINK, 0], [(SOURCE, 0)])
    assert min_vertex_separator(g) == frozenset()


def test_separator_direct_arc_is_infeasible():
    g = DiGraph([SOURCE, SINK, 0], [(SOURCE, SINK)])
    with pytest.raises(Infeasible):
        min_vertex_separator(g)


def test_separator_respects_forbidden_vertices():
    g = DiGraph([SOURCE, SINK, 0, 1],
                [(SOURCE, 0), (0, SINK), (SOURCE, 1), (1, SINK)])
    assert min_vertex_separator(g) == frozenset({0, 1})
    with pytest.raises(Infeasible):
        min_vertex_separator(g, forbidden={0})


def brute_min_separator(g, forbidden=()):
    """Smallest removable vertex set disconnecting v* from w, by sweep."""
    pool = [v for v in g.labels
            if v not in (SOURCE, SINK) and v not in set(forbidden)]
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            if SINK not in g.reachable(SOURCE, removed=combo):
                return frozenset(combo)
    return None


@st.composite
def separator_graphs(draw):
    n = draw(st.integers(1, 6))
    verts = list(range(n))
    candidates = [(u, v)
                  for u in verts + [SOURCE]
                  for v in verts + [SINK]
                  if u != v]
    arcs = draw(st.lists(st.sampled_from(candidates), max_size=24))
    return DiGraph(verts + [SOURCE, SINK], arcs)


@given(separator_graphs())
@settings(max_examples=120, deadline=None)
def test_separator_matches_exhaustive_search(g):
    oracle = brute_min_separator(g)
    if oracle is None:
        with pytest.raises(Infeasible):
            min_vertex_separator(g)
        return
    cut = min_vertex_separator(g)
    assert len(cut) == len(oracle)
    # removing the cut really disconnects
    assert SINK not in g.reachable(SOURCE, removed=cut)
    # and it is tight: dropping any single vertex reopens a path
    for v in cut:
        assert SINK in g.reachable(SOURCE, removed=cut - {v})


@given(separator_graphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_separator_with_forbidden_matches_exhaustive_search(g, data):
    verts = [v for v in g.labels if v not in (SOURCE, SINK)]
    forbidden = data.draw(st.sets(st.sampled_from(verts), max_size=2)
                          if verts else st.just(set()))
    oracle = brute_min_separator(g, forbidden)
    if oracle is None:
        with pytest.raises(Infeasible):
            min_vertex_separator(g, forbidden=forbidden)
        return
    cut = min_vertex_separator(g, forbidden=forbidden)
    assert len(cut) == len(oracle)
    assert not (cut & set(forbidden))
    assert SINK not in g.reachable(SOURCE, removed=cut)


def test_duplicate_labels_are_rejected():
    with pytest.raises(ValueError):
        DiGraph([0, 0], [])
