import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fogames.catalog import all_graphs, named_graph
from fogames.graph import complement, complete, empty, is_isomorphic, path, star
from fogames.similarity import (Membership, classify, defining_rank_report,
                                exact_pair_rank_special, is_clique, is_independent,
                                is_maximal_homogeneous, oplus, sigma, sigma_of,
                                similarity_partition, transposition_is_automorphism)

from oracles import similarity_classes_bruteforce
from test_graph import graphs


def classes(g):
    return sorted(similarity_partition(g).classes, key=min)


def test_small_partitions():
    assert classes(complete(4)) == [frozenset(range(4))]
    assert classes(path(3)) == [frozenset({0, 2}), frozenset({1})]
    assert classes(path(4)) == [frozenset({v}) for v in range(4)]
    assert sigma(empty(5)) == 5
    assert sigma(path(4)) == 1
    assert sigma_of(star(4), 1) == 4


def test_sigma_needs_a_vertex():
    with pytest.raises(ValueError):
        sigma(empty(0))


def test_partition_matches_automorphism_scan():
    for n in range(1, 7):
        for g in all_graphs(n):
            assert classes(g) == similarity_classes_bruteforce(g)


def test_transposition_check():
    assert transposition_is_automorphism(path(3), 0, 2)
    assert not transposition_is_automorphism(path(3), 0, 1)


def test_classification_examples():
    r = classify(empty(5))
    assert r.membership is Membership.S1 and r.sigma == 5 and r.maximal_homogeneous
    r = classify(named_graph("E4+K2"))
    assert r.membership is Membership.S2 and r.sigma == 4 and not r.maximal_homogeneous
    assert classify(path(4)).membership is Membership.NONE


def test_threshold_is_strict():
    # order 7 with sigma 5 = (7+3)/2 is not above the first threshold, but
    # is above (7+1)/2 = 4; the class K5 inside K5+E2 is maximal, so S2
    # needs a non-maximal candidate and the graph stays outside both.
    g = named_graph("K5+E2")
    r = classify(g)
    assert r.sigma == 5 and not r.in_s
    assert r.membership is Membership.NONE


def test_oplus_examples():
    assert oplus(empty(4), 2, 1) == empty(5)
    assert oplus(complete(3), 0, 2) == complete(5)
    assert oplus(path(4), 0, 0) == path(4)
    with pytest.raises(ValueError):
        oplus(path(4), 0, 1)
    # extending a leaf of a star gives a bigger star
    assert is_isomorphic(oplus(star(3), 1, 2), star(5))


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_oplus_grows_the_class(g, l, rnd):
    candidates = [v for v in range(g.n) if sigma_of(g, v) >= 2]
    if not candidates:
        return
    v = rnd.choice(candidates)
    h = oplus(g, v, l)
    part = similarity_partition(h)
    assert part.sigma_of(v) == sigma_of(g, v) + l
    assert all(part.class_of[w] == part.class_of[v] for w in range(g.n, h.n))


def test_defining_rank_examples():
    assert defining_rank_report(empty(5)).exact == 6
    assert defining_rank_report(named_graph("E4+K2")).exact == 6
    r = defining_rank_report(path(4))
    assert r.exact is None and r.upper == 4
    # frozen: exhaustive identification rank over the 10 other order-4 graphs
    assert r.lower == 3 and r.lower_source == "identification_rank"
    r = defining_rank_report(path(7))
    assert (r.lower, r.upper, r.lower_source) == (1, 6, "trivial")


def test_special_pair_examples():
    r = exact_pair_rank_special(empty(4), 0, 1)
    assert (r.pebbles, r.rank, r.rank_kind) == (5, 5, "D0")
    r = exact_pair_rank_special(complete(4), 0, 2)
    assert (r.pebbles, r.rank, r.rank_kind) == (5, 5, "D0")
    r = exact_pair_rank_special(named_graph("E4+K2"), 0, 1)
    assert (r.pebbles, r.rank, r.rank_kind) == (5, 6, "D")
    with pytest.raises(ValueError):
        exact_pair_rank_special(path(4), 0, 1)
    with pytest.raises(ValueError):
        exact_pair_rank_special(empty(4), 0, 0)


def test_homogeneity_helpers():
    assert is_clique(complete(3), [0, 1, 2]) and not is_independent(complete(3), [0, 1])
    assert is_maximal_homogeneous(empty(5), frozenset(range(5)))
    assert not is_maximal_homogeneous(named_graph("E4+K2"), frozenset(range(4)))


def test_complement_invariance_of_classification():
    for n in range(1, 7):
        for g in all_graphs(n):
            c = complement(g)
            assert sigma(g) == sigma(c)
            assert classify(g).membership == classify(c).membership


def test_random_orders_seeded():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(8, 12)
        g = named_graph(f"K{n // 2}+E{n - n // 2}")
        assert sigma(g) == max(n // 2, n - n // 2)
