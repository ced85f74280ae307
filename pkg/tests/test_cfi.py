import json
from fractions import Fraction

import pytest

from fogames.catalog import all_graphs, named_graph, regular_graphs
from fogames.cfi import (MAX_BRUTE_FORCE_ORDER, InvalidSeedError, cfi_pair, components_summary,
                         edge_expansion, lower_bound_certificate, random_regular, separator_size,
                         vertex_expansion)
from fogames.graph import (complete, cycle, empty, is_connected, is_isomorphic, is_regular, path,
                           prism)


def _check_instance(seed):
    inst = cfi_pair(seed)
    d = is_regular(seed)
    g, h = inst.pair
    assert g.n == h.n == (d + 2 ** (d - 1)) * seed.n
    assert g.max_degree() == h.max_degree() == 2 ** (d - 1)
    assert len(inst.provenance) == g.n
    return inst


def test_k4_instance():
    inst = _check_instance(complete(4))
    g, h = inst.pair
    assert g.n == 28 and g.max_degree() == 4
    assert is_connected(g) and is_connected(h)
    assert inst.certified_by == "multiset WL dimension 3"
    assert inst.twist == (0, 1)
    assert inst.provenance[0] == "middle(0,{})"
    assert inst.provenance[-1] == "edgepair(2-3,1)"


def test_cycle_instances_are_disconnected_doublings():
    inst = _check_instance(cycle(5))
    assert inst.pair[0].n == 20 and inst.pair[0].max_degree() == 2
    # the untwisted copy is two 10-cycles and the twisted one a 20-cycle
    assert components_summary(inst.pair[0]) == [10, 10]
    assert components_summary(inst.pair[1]) == [20]
    assert components_summary(cfi_pair(cycle(4)).pair[0]) == [8, 8]


@pytest.mark.slow
@pytest.mark.parametrize("seed", ["K3,3", "prism"])
def test_cubic_six_vertex_instances(seed):
    inst = _check_instance(named_graph(seed))
    assert inst.pair[0].n == 42
    assert is_connected(inst.pair[0]) and is_connected(inst.pair[1])


def test_small_instance_uses_isomorphism_search():
    # C3 gives order (2 + 2) * 3 = 12 > 10, so every certified seed uses WL here
    assert cfi_pair(cycle(3)).certified_by.startswith("multiset WL")


@pytest.mark.parametrize("seed", [path(3), empty(4), complete(2), named_graph("C3+C3")])
def test_invalid_seeds(seed):
    with pytest.raises(InvalidSeedError):
        cfi_pair(seed)


def test_separator_examples():
    assert separator_size(path(3)) == (1, frozenset({1}))
    assert separator_size(complete(4))[0] == 2
    assert separator_size(empty(4))[0] == 0
    with pytest.raises(ValueError):
        separator_size(empty(MAX_BRUTE_FORCE_ORDER + 1))


def test_expansion_examples():
    assert vertex_expansion(complete(4))[0] == 1
    assert edge_expansion(complete(4))[0] == 2
    assert vertex_expansion(empty(2))[0] == 0
    assert edge_expansion(cycle(4))[0] == 1
    # brute force: three consecutive vertices of C6 have two outside neighbours
    assert vertex_expansion(cycle(6)) == (Fraction(2, 3), frozenset({0, 1, 2}))
    assert edge_expansion(cycle(6))[0] == Fraction(2, 3)


def test_certificates():
    r = lower_bound_certificate(complete(4))
    assert (r.i_v, r.i_e, r.s, r.certified_lower) == (1, 2, 2, 1)
    assert r.i_v >= r.i_e / 2
    r = lower_bound_certificate(cycle(6))
    assert r.s == 2 and r.certified_lower == Fraction(12, 11)
    out = r.to_json()
    assert json.loads(json.dumps(out))["certified_lower"] == "12/11"


def test_expansion_lemmas_on_small_catalogue():
    for n in range(2, 7):
        for g in all_graphs(n):
            if is_connected(g):
                r = lower_bound_certificate(g)
                assert r.s >= r.certified_lower


def test_random_regular():
    assert random_regular(3, 4, 7) == complete(4)
    assert random_regular(3, 4, 99) == complete(4)
    with pytest.raises(ValueError):
        random_regular(3, 5, 1)
    g = random_regular(2, 6, 3)
    assert is_regular(g) == 2
    assert sum(components_summary(g)) == 6
    assert random_regular(3, 8, 5) == random_regular(3, 8, 5)


def test_cubic_catalogue_counts():
    # one cubic graph on 4 vertices, two on 6, six on 8 (five connected)
    assert len(regular_graphs(3, 4)) == 1
    assert len(regular_graphs(3, 6)) == 2
    eight = regular_graphs(3, 8)
    assert len(eight) == 6 and sum(map(is_connected, eight)) == 5
    assert any(is_isomorphic(prism(), g) for g in regular_graphs(3, 6))
