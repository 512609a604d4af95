from itertools import combinations
from random import Random

import pytest

from equitable import coloring as coloring_mod
from equitable.coloring import (
    EquitableColoring,
    ListAssignment,
    chi_e,
    chi_star_e,
    color_constructive,
    corollary_check,
    exact_equitable,
    exact_list,
    extend_coloring,
    list_color_constructive,
    random_lists,
    validate_coloring,
)
from equitable.configurations import ReducibleSet, find_reducible_set, load_catalog, verify_reducible
from equitable.errors import BadParams, InputError, NotUniform, PreconditionViolated, SizeLimit
from equitable.fixtures import bipartite_adjacency, path_graph, random_member, star_graph
from equitable.settings import EngineSettings


def test_exact_cycle5(cycle5):
    assert exact_equitable(cycle5, 2) is None
    found = exact_equitable(cycle5, 3)
    assert sorted(found.class_sizes) == [1, 2, 2]
    assert validate_coloring(cycle5, found.assignment, 3).passed


def test_exact_rejects_bad_k_and_large_graphs():
    with pytest.raises(BadParams):
        exact_equitable(path_graph(3), 0)
    with pytest.raises(SizeLimit):
        exact_equitable(path_graph(17), 3)
    # 上限可调
    assert exact_equitable(path_graph(17), 3, EngineSettings(exact_vertex_limit=20)) is not None


@pytest.mark.parametrize('n, expected_chi, expected_star', [
    (3, 3, 3),
    (6, 4, 4),
    (7, 5, 5),
])
def test_star_chromatic_numbers(n, expected_chi, expected_star):
    g = star_graph(n)
    assert chi_e(g) == expected_chi
    assert chi_star_e(g) == expected_star


def test_chi_on_adjacency_input():
    assert chi_e(bipartite_adjacency(3, 3)) == 2


def test_k33_threshold_exceeds_chi():
    k33 = bipartite_adjacency(3, 3)
    # 3 个大小为 2 的类只能各占一侧，两侧各 3 个点分不开
    assert exact_equitable(k33, 3) is None
    assert exact_equitable(k33, 2) is not None
    assert chi_star_e(k33) == 4


def test_corollary_on_star7():
    report = corollary_check(star_graph(7))
    assert report.applicable
    assert report.delta == 7
    assert report.holds is True


def test_corollary_not_applicable_below_seven(path8):
    report = corollary_check(path8)
    assert not report.applicable
    assert report.holds is None
    assert report.to_payload()['holds'] is None


def test_constructive_small_graph_is_all_base(path8):
    result = color_constructive(path8, 7)
    assert result.reducible_sets == []
    assert result.base_size == 8
    assert validate_coloring(path8, result.coloring.assignment, 7).passed


def test_constructive_peels_h(h_graph):
    result = color_constructive(h_graph, 7, catalog=load_catalog().configurations)
    assert len(result.reducible_sets) == 1
    assert result.reducible_sets[0].source == 'configuration:H'
    assert result.base_size == 9
    assert result.anomalies == []
    assert validate_coloring(h_graph, result.coloring.assignment, 7).passed
    payload = result.to_payload()
    assert sum(payload['class_sizes']) == 16


def test_constructive_records_missing_reducible_set(h_graph, monkeypatch):
    monkeypatch.setattr(coloring_mod, 'find_reducible_set', lambda *args, **kwargs: None)
    result = color_constructive(h_graph, 7)
    assert [a.kind for a in result.anomalies] == ['no_reducible_set']
    assert result.base_size == 16
    assert validate_coloring(h_graph, result.coloring.assignment, 7).passed


def test_constructive_preconditions(path8, octahedron):
    with pytest.raises(PreconditionViolated):
        color_constructive(path8, 3)
    with pytest.raises(PreconditionViolated):
        color_constructive(octahedron, 7)
    with pytest.raises(PreconditionViolated):
        color_constructive(path8.adjacency, 7)
    forced = color_constructive(path8, 3, force=True)
    assert validate_coloring(path8, forced.coloring.assignment, 3).passed


def test_extend_coloring_checks_k(path8):
    base = EquitableColoring(3, {0: 1})
    with pytest.raises(PreconditionViolated):
        extend_coloring(path8, ReducibleSet(7, tuple(range(1, 8)), (1, 0, 0, 0, 0, 0, 0), None, 'search'), base)


def test_extend_coloring_needs_the_whole_base(path8):
    reducible = ReducibleSet(7, tuple(range(1, 8)), (1, 0, 0, 0, 0, 0, 0), None, 'search')
    with pytest.raises(InputError) as e:
        extend_coloring(path8, reducible, EquitableColoring(7, {}))
    assert e.value.details['missing'] == [0]
    with pytest.raises(InputError) as e:
        extend_coloring(path8, reducible, EquitableColoring(7, {0: 1, 3: 2}))
    assert e.value.details['extra'] == [3]
    extended = extend_coloring(path8, reducible, EquitableColoring(7, {0: 1}))
    assert extended.class_sizes == [2, 1, 1, 1, 1, 1, 1]


def test_validate_reports_first_violation(triangle):
    assert validate_coloring(triangle, {0: 1, 1: 2}).violation == {'kind': 'uncolored', 'vertex': 2}
    bad = validate_coloring(triangle, {0: 1, 1: 1, 2: 2})
    assert bad.violation['kind'] == 'proper'
    assert bad.violation['edge'] == [0, 1]
    assert validate_coloring(triangle, {0: 1, 1: 2, 2: 3}, k=2).violation['kind'] == 'range'
    assert validate_coloring(triangle, {'0': 1, '1': 2, '2': 3}).passed


def test_validate_balance():
    g = path_graph(5)
    result = validate_coloring(g, {0: 1, 1: 2, 2: 1, 3: 2, 4: 1}, k=3)
    assert result.violation == {'kind': 'balance', 'class_sizes': [3, 2, 0]}
    assert validate_coloring(g, {0: 1, 1: 2, 2: 1, 3: 2, 4: 1}, k=2).passed


def test_validate_lists(triangle):
    lists = ListAssignment.from_mapping({0: [1, 2], 1: [2, 3], 2: [1, 3]})
    assert validate_coloring(triangle, {0: 3, 1: 2, 2: 1}, lists=lists).violation['kind'] == 'list'
    assert validate_coloring(triangle, {0: 1, 1: 2, 2: 3}, lists=lists).passed

    g = path_graph(5)
    lists = ListAssignment.from_mapping({v: [1, 2, 3] for v in range(5)})
    result = validate_coloring(g, {0: 1, 1: 2, 2: 1, 3: 2, 4: 1}, lists=lists)
    assert result.violation == {'kind': 'cap', 'color': 1, 'count': 3, 'cap': 2}


def test_list_assignment_must_be_uniform():
    with pytest.raises(NotUniform):
        ListAssignment.from_mapping({0: [1, 2], 1: [1]})
    with pytest.raises(NotUniform):
        ListAssignment.from_mapping({0: [1, 1], 1: [1, 2]})
    with pytest.raises(NotUniform):
        ListAssignment.from_mapping({0: [1, 2]}, vertices=[0, 1])


def test_exact_list(triangle):
    lists = ListAssignment.from_mapping({0: [1, 2], 1: [1, 2], 2: [1, 2]})
    assert exact_list(triangle, lists) is None
    lists = ListAssignment.from_mapping({0: [1, 2], 1: [2, 3], 2: [3, 4]})
    found = exact_list(triangle, lists)
    assert validate_coloring(triangle, found.assignment, lists=lists).passed
    assert found.cap == 2


def test_random_lists_are_uniform(path8):
    lists = random_lists(path8, 7, 21, Random(3))
    assert lists.k == 7
    assert all(len(set(c)) == 7 and set(c) <= set(range(1, 22)) for c in lists.lists.values())
    with pytest.raises(BadParams):
        random_lists(path8, 7, 5, Random(3))


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_list_constructive_on_h(h_graph, seed):
    lists = random_lists(h_graph, 7, 21, Random(seed))
    result = list_color_constructive(h_graph, lists, catalog=load_catalog().configurations)
    assert len(result.reducible_sets) == 1
    assert validate_coloring(h_graph, result.coloring.assignment, lists=lists).passed


def test_list_constructive_small_graph(path8):
    lists = random_lists(path8, 7, 21, Random(1))
    result = list_color_constructive(path8, lists)
    assert result.base_size == 8
    assert validate_coloring(path8, result.coloring.assignment, lists=lists).passed


def _exhaustive_order(adjacency, k):
    for subset in combinations(sorted(adjacency), k):
        chosen = set(subset)
        order = sorted(subset, key=lambda v: len(adjacency[v] - chosen), reverse=True)
        if verify_reducible(adjacency, order, k).accepted:
            return order
    return None


@pytest.mark.parametrize('batch', range(10))
def test_extension_grows_every_class_by_one(batch):
    for seed in range(100 * batch, 100 * batch + 100):
        g = random_member(Random(seed))
        k = max(7, g.max_degree)
        found = find_reducible_set(g, k)
        order = found.vertices if found is not None else _exhaustive_order(g.adjacency, k)
        assert order is not None, seed
        reducible = verify_reducible(g, order, k)
        assert reducible.accepted

        removed = set(order)
        rest = {v: nbrs - removed for v, nbrs in g.adjacency.items() if v not in removed}
        base = exact_equitable(rest, k)
        assert base is not None, seed
        extended = extend_coloring(g, reducible, base)
        assert validate_coloring(g, extended.assignment, k).passed, seed
        assert extended.class_sizes == [size + 1 for size in base.class_sizes], seed
