from itertools import combinations

import networkx as nx
import pytest

from equitable.degeneracy import assert_4_degenerate, degeneracy_ordering
from equitable.fixtures import cycle_graph, flower_graph, grid_graph, path_graph, star_graph, tree_graph
from equitable.structure import class_membership


def test_tree_is_1_degenerate():
    cert = degeneracy_ordering(tree_graph(3))
    assert cert.degeneracy == 1
    assert cert.verify(tree_graph(3).adjacency)


def test_cycle_is_2_degenerate():
    g = cycle_graph(7)
    cert = degeneracy_ordering(g)
    assert cert.degeneracy == 2
    assert sorted(cert.ordering) == list(g.vertex_ids)


def test_octahedron_is_exactly_4_degenerate(octahedron):
    check = assert_4_degenerate(octahedron, class_membership(octahedron))
    assert check.passed
    assert check.degeneracy == 4
    # 含弦 4-圈，推论前提不成立，只给警告
    assert [w.code for w in check.warnings] == ['precondition_not_checked']


def test_icosahedron_fails_with_core_witness(icosahedron):
    check = assert_4_degenerate(icosahedron)
    assert not check.passed
    assert check.witness_min_degree == 5
    assert check.witness_vertices == icosahedron.vertex_ids
    assert check.to_payload()['witness']['min_degree'] == 5


def test_member_without_report_warns(dodecahedron):
    check = assert_4_degenerate(dodecahedron)
    assert check.passed
    assert len(check.warnings) == 1


def test_member_with_report_has_no_warning(dodecahedron):
    check = assert_4_degenerate(dodecahedron, class_membership(dodecahedron))
    assert check.degeneracy == 3
    assert check.warnings == []


def test_certificate_rejects_tampered_back_degrees(k4):
    cert = degeneracy_ordering(k4)
    assert cert.verify(k4.adjacency)
    tampered = type(cert)(cert.degeneracy, cert.ordering, (0,) * len(cert.ordering), cert.core)
    assert not tampered.verify(k4.adjacency)


def _max_min_degree(adjacency):
    # 所有非空点子集上导出子图最小度的最大值
    best = 0
    vertices = sorted(adjacency)
    for size in range(1, len(vertices) + 1):
        for subset in combinations(vertices, size):
            keep = set(subset)
            best = max(best, min(len(adjacency[v] & keep) for v in subset))
    return best


SMALL = [
    path_graph(6),
    cycle_graph(5),
    star_graph(6),
    grid_graph(2, 3),
    flower_graph(3),
]


@pytest.mark.parametrize('g', SMALL)
def test_degeneracy_matches_subset_oracle(g):
    assert degeneracy_ordering(g).degeneracy == _max_min_degree(g.adjacency)


@pytest.mark.parametrize('g', SMALL + [tree_graph(3), grid_graph(4, 4)])
def test_degeneracy_matches_core_numbers(g):
    assert degeneracy_ordering(g).degeneracy == max(nx.core_number(g.to_networkx()).values())


def test_platonic_core_numbers(octahedron, icosahedron, dodecahedron):
    for g, expected in ((octahedron, 4), (icosahedron, 5), (dodecahedron, 3)):
        assert max(nx.core_number(g.to_networkx()).values()) == expected
        assert degeneracy_ordering(g).degeneracy == expected
