import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fogames.catalog import GRAPH_COUNTS, all_graphs, canonical_code, load_graph, named_graph
from fogames.graph import (Graph, GraphFormatError, automorphisms, complement, complete,
                           connected_components, cycle, disjoint_union, distance, empty,
                           find_isomorphism, induced_subgraph, is_connected, is_isomorphic,
                           is_isomorphism, is_regular, parse_edge_list, parse_graph6, path,
                           permute, write_edge_list, write_graph6)

from oracles import automorphism_set, graph6_by_hand


@st.composite
def graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


def test_graph6_hand_decoded_examples():
    # order 5 has 10 triangle bits, so two data bytes follow the order byte
    assert parse_graph6("D??") == empty(5)
    assert parse_graph6("A_") == complete(2)
    assert write_graph6(complete(2)) == "A_"
    assert write_graph6(empty(5)) == "D??"


@given(graphs(max_n=9))
def test_graph6_matches_hand_encoder_and_round_trips(g):
    text = write_graph6(g)
    assert text == graph6_by_hand(g.n, tuple(g.edges()))
    assert parse_graph6(text) == g


@pytest.mark.parametrize("bad", ["", "A", "A~~", "B\x7f", "Ab", "D?"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphFormatError):
        parse_graph6(bad)


def test_edge_list_round_trip_and_errors():
    g = cycle(5)
    assert parse_edge_list(write_edge_list(g)) == g
    with pytest.raises(GraphFormatError):
        parse_edge_list("3\n0 0\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("3\n0 1 2\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("")


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))  # asymmetric
    with pytest.raises(ValueError):
        Graph(1, (1,))  # loop


def test_complement_of_path_on_three():
    # a-b-c: only {a, c} is a non-edge
    assert complement(path(3)).edges() == [(0, 2)]


@given(graphs())
def test_complement_is_an_involution(g):
    assert complement(complement(g)) == g
    assert g.num_edges() + complement(g).num_edges() == g.n * (g.n - 1) // 2


def test_induced_subgraph_of_p4():
    # a-b-c-d restricted to {a, c, d} keeps only c-d
    assert induced_subgraph(path(4), [0, 2, 3]).edges() == [(1, 2)]


def test_components_distance_and_regularity():
    g = disjoint_union(cycle(3), path(2))
    assert sorted(map(sorted, connected_components(g))) == [[0, 1, 2], [3, 4]]
    assert not is_connected(g)
    assert distance(path(4), 0, 3) == 3
    assert distance(g, 0, 4) is None
    assert is_regular(cycle(6)) == 2
    assert is_regular(path(3)) is None


@settings(max_examples=60)
@given(graphs(max_n=6), st.randoms(use_true_random=False))
def test_isomorphism_search_finds_random_relabelling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = permute(g, perm)
    mapping = find_isomorphism(g, h)
    assert mapping is not None and is_isomorphism(g, h, mapping)


@settings(max_examples=40)
@given(graphs(max_n=5))
def test_automorphisms_match_permutation_scan(g):
    assert set(automorphisms(g)) == automorphism_set(g)


def test_catalogue_counts_and_canonical_forms():
    for n in range(6):
        gs = all_graphs(n)
        assert len(gs) == GRAPH_COUNTS[n]
        assert len({canonical_code(g) for g in gs}) == len(gs)
    assert len(all_graphs(7)) == 1044
    assert not is_isomorphic(all_graphs(4)[3], all_graphs(4)[4])


def test_load_graph_accepts_names_files_and_graph6(tmp_path):
    assert load_graph("K2+E2") == disjoint_union(complete(2), empty(2))
    assert load_graph("A_") == complete(2)
    f = tmp_path / "p3.g6"
    f.write_text(write_graph6(path(3)) + "\n")
    assert load_graph(str(f)) == path(3)
    assert load_graph("@" + str(f)) == path(3)
    e = tmp_path / "c4.txt"
    e.write_text(write_edge_list(cycle(4)))
    assert load_graph("@" + str(e)) == cycle(4)
    assert named_graph("K3,3").num_edges() == 9
    with pytest.raises(GraphFormatError):
        load_graph("not a graph!")
