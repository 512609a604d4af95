from itertools import combinations, permutations
import pytest

from equitable.configurations import (
    complete_seed,
    find_reducible_set,
    label_index,
    load_catalog,
    match_configuration,
    parse_configuration,
    verify_reducible,
)
from equitable.errors import DegreeBelowShownEdges, DuplicateVertex, GraphTooSmall, InputError, MalformedPattern, WrongSize
from equitable.fixtures import (
    bipartite_adjacency,
    cycle_graph,
    disjoint_triangles_graph,
    load_corpus,
    path_graph,
    platonic_graph,
    stacked_graph,
    tree_graph,
)

TRIANGLE_CFG = {
    'name': 'T',
    'vertices': [{'id': 'a'}, {'id': 'b'}, {'id': 'c'}],
    'edges': [['a', 'b'], ['b', 'c'], ['c', 'a']],
    'faces': [{'cycle': ['a', 'b', 'c']}],
}


def reducible_exists(adjacency, k):
    """穷举所有 k 元子集：按外部邻点数降序排列即为最优顺序"""
    for subset in combinations(sorted(adjacency), k):
        chosen = set(subset)
        counts = sorted((len(adjacency[v] - chosen) for v in subset), reverse=True)
        if all(c <= k - i for i, c in enumerate(counts, start=1)):
            return True
    return False


def test_label_index():
    assert label_index('x_k', 7) == 7
    assert label_index('x_{k-3}', 7) == 4
    assert label_index('x_2', 7) == 2
    assert label_index('y', 7) is None


def test_catalog_ships_h_and_stubs():
    catalog = load_catalog()
    assert [c.name for c in catalog.configurations] == ['H']
    assert len(catalog.stubs) == 41
    h = catalog.configurations[0]
    assert h.labels['x_k'] == 'b'
    assert h.vertices['b'].solid


def test_malformed_patterns():
    with pytest.raises(MalformedPattern):
        parse_configuration('{not json')
    with pytest.raises(MalformedPattern):
        parse_configuration({'vertices': []})
    with pytest.raises(MalformedPattern):
        parse_configuration({'vertices': [{'id': 'a'}], 'edges': [['a', 'z']]})
    with pytest.raises(MalformedPattern):
        parse_configuration({'vertices': [{'id': 'a'}, {'id': 'a'}]})


def test_degree_below_shown_edges():
    raw = {'vertices': [{'id': 'a', 'degree': 1}, {'id': 'b'}, {'id': 'c'}], 'edges': [['a', 'b'], ['a', 'c']]}
    with pytest.raises(DegreeBelowShownEdges):
        parse_configuration(raw)


def test_triangle_pattern_counts_each_face_once(k4):
    matches = match_configuration(k4, parse_configuration(TRIANGLE_CFG))
    assert len(matches) == 4


def test_face_constraint_skips_separating_triangle():
    g = stacked_graph(2)
    no_face = {**TRIANGLE_CFG, 'faces': []}
    assert len(match_configuration(g, parse_configuration(no_face))) == 7
    assert len(match_configuration(g, parse_configuration(TRIANGLE_CFG))) == 6


def test_symmetric_matches_collapse():
    raw = {
        'vertices': [{'id': 'm', 'kind': 'solid', 'degree': 2}, {'id': 'p'}, {'id': 'q'}],
        'edges': [['m', 'p'], ['m', 'q']],
    }
    cfg = parse_configuration(raw)
    assert len(match_configuration(path_graph(3), cfg)) == 1


def test_hollow_vertices_may_coincide(triangle):
    # 路径 a-b-c-d 的两个端点落在三角形的同一个点上
    raw = {
        'vertices': [{'id': 'a'}, {'id': 'b'}, {'id': 'c'}, {'id': 'd'}],
        'edges': [['a', 'b'], ['b', 'c'], ['c', 'd']],
    }
    matches = match_configuration(triangle, parse_configuration(raw))
    assert len(matches) == 3
    assert all(m.mapping['a'] == m.mapping['d'] for m in matches)


def test_h_matches_the_gadget_once(h_graph):
    h = load_catalog().configurations[0]
    matches = match_configuration(h_graph, h)
    assert len(matches) == 1
    assert matches[0].labeled(h) == {
        'x_k': 0, 'x_{k-1}': 1, 'x_{k-2}': 2, 'x_{k-3}': 3, 'x_{k-4}': 4, 'x_1': 5,
    }


def test_h_yields_reducible_set(h_graph):
    found = find_reducible_set(h_graph, 7, load_catalog().configurations)
    assert found is not None
    assert found.source == 'configuration:H'
    assert found.vertices[6] == 0
    assert found.vertices[0] == 5
    assert verify_reducible(h_graph, found.vertices, 7).accepted


def test_verify_reducible_certificate():
    g = path_graph(8)
    ok = verify_reducible(g, [1, 2, 3, 4, 5, 6, 7], 7)
    assert ok.accepted
    assert ok.counts == (1, 0, 0, 0, 0, 0, 0)
    bad = verify_reducible(g, [7, 6, 5, 4, 3, 2, 1], 7)
    assert bad.violation == (7, 1)
    assert bad.to_payload()['violation'] == {'index': 7, 'count': 1}


def test_verify_reducible_input_errors():
    g = path_graph(8)
    with pytest.raises(WrongSize):
        verify_reducible(g, [0, 1], 7)
    with pytest.raises(DuplicateVertex):
        verify_reducible(g, [0, 0, 1, 2, 3, 4, 5], 7)
    with pytest.raises(InputError):
        verify_reducible(g, [0, 1, 2, 3, 4, 5, 99], 7)


def test_complete_seed():
    g = path_graph(8)
    assert complete_seed(g, [], 7) == [6, 5, 4, 3, 2, 1, 0]
    assert complete_seed(g, {7: 3}, 7)[6] == 3
    with pytest.raises(GraphTooSmall):
        complete_seed(path_graph(5), [], 7)
    with pytest.raises(DuplicateVertex):
        complete_seed(g, {7: 3, 6: 3}, 7)


def test_path_and_triangles_found_from_empty_seed():
    found = find_reducible_set(path_graph(8), 7)
    assert found is not None and found.source == 'seed-search'
    assert verify_reducible(path_graph(8), found.vertices, 7).accepted
    assert find_reducible_set(disjoint_triangles_graph(3), 7) is not None


def test_too_small_graph_has_no_set():
    assert find_reducible_set(path_graph(6), 7) is None


def test_complete_graph_has_no_set():
    k8 = {v: frozenset(u for u in range(8) if u != v) for v in range(8)}
    assert not reducible_exists(k8, 7)
    assert find_reducible_set(k8, 7) is None


@pytest.mark.parametrize('adjacency, k', [
    (path_graph(9).adjacency, 7),
    (cycle_graph(8).adjacency, 7),
    (bipartite_adjacency(3, 5), 7),
    (tree_graph(2).adjacency, 7),
    (disjoint_triangles_graph(3).adjacency, 8),
    (platonic_graph('octahedron').adjacency, 7),
])
def test_search_agrees_with_exhaustive_check(adjacency, k):
    found = find_reducible_set(adjacency, k)
    assert (found is not None) == reducible_exists(adjacency, k)
    if found is not None:
        assert verify_reducible(adjacency, found.vertices, k).accepted


def _brute_force_h(g):
    """直接枚举 H 的单射像：b 取 4 度点，a/c/e/w 取 N(b) 的排列，d 取其余 4 度点"""
    adjacency = g.adjacency
    triangles = {f.vertices for f in g.faces if f.degree == 3 and len(f.vertices) == 3}
    quads = [f.walk_vertices for f in g.faces if f.degree == 4 and len(f.vertices) == 4]

    def on_quad(b, c, d, e):
        # 存在以 {b,c,d,e} 为顶点、含边 bc 的四边形面
        for walk in quads:
            if set(walk) == {b, c, d, e}:
                i = walk.index(b)
                if c in (walk[i - 1], walk[(i + 1) % 4]):
                    return True
        return False

    four = [v for v in adjacency if len(adjacency[v]) == 4]
    found = set()
    for b in four:
        for a, c, e, w in permutations(sorted(adjacency[b])):
            if any(len(adjacency[x]) != 4 for x in (a, c, e, w)):
                continue
            if a not in adjacency[c] or frozenset((a, b, c)) not in triangles:
                continue
            for d in four:
                if d in (a, b, c, e, w) or d not in adjacency[c] or d not in adjacency[e]:
                    continue
                if on_quad(b, c, d, e):
                    found.add((('a', a), ('b', b), ('c', c), ('d', d), ('e', e), ('w', w)))
    return found


ORACLE_GRAPHS = [f for f in load_corpus() if f.graph.order <= 14]


@pytest.mark.parametrize('fixture', ORACLE_GRAPHS, ids=lambda f: f.name)
def test_h_matcher_agrees_with_enumeration(fixture):
    h = load_catalog().configurations[0]
    matches = {m.assignment for m in match_configuration(fixture.graph, h)}
    assert matches == _brute_force_h(fixture.graph)


def test_h_enumeration_on_gadget_and_solids(h_graph):
    h = load_catalog().configurations[0]
    assert len(_brute_force_h(h_graph)) >= 1
    assert {m.assignment for m in match_configuration(h_graph, h)} == _brute_force_h(h_graph)
    for name in ('cube', 'octahedron'):
        assert match_configuration(platonic_graph(name), h) == []
        assert _brute_force_h(platonic_graph(name)) == set()
