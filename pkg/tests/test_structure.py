import pytest

from equitable.errors import UnsupportedLength
from equitable.fixtures import cycle_graph, grid_graph, platonic_graph, special_face_gadget, wheel_graph
from equitable.structure import (
    canonical_cycle,
    class_membership,
    classify_faces_and_vertices,
    degree_vector_matches,
    enumerate_cycles,
    find_chordal_cycles,
    lemma1_audit,
)


def test_canonical_cycle_is_rotation_and_reflection_invariant():
    assert canonical_cycle((3, 1, 2)) == (1, 2, 3)
    assert canonical_cycle((2, 1, 3)) == (1, 2, 3)
    assert canonical_cycle((4, 3, 2, 1)) == (1, 2, 3, 4)


def test_enumerate_cycles_k4(k4):
    cycles = enumerate_cycles(k4, 4)
    assert len(cycles[3]) == 4
    assert len(cycles[4]) == 3


def test_k4_has_chordal_four_cycles(k4):
    witnesses = find_chordal_cycles(k4, 4)
    assert len(witnesses) == 6
    report = class_membership(k4)
    assert not report.is_member


def test_unsupported_length(k4):
    with pytest.raises(UnsupportedLength):
        find_chordal_cycles(k4, 5)


@pytest.mark.parametrize('graph, member', [
    (cycle_graph(6), True),
    (grid_graph(2, 2), True),
    (grid_graph(2, 3), False),
    (grid_graph(3, 3), False),
    (wheel_graph(4), False),
    (platonic_graph('cube'), False),
    (platonic_graph('dodecahedron'), True),
    (platonic_graph('icosahedron'), False),
])
def test_class_membership(graph, member):
    assert class_membership(graph).is_member is member


def test_two_squares_sharing_an_edge_give_a_chordal_six_cycle():
    report = class_membership(grid_graph(2, 3))
    assert not report.chordal4
    assert report.chordal6


def test_degree_vector_matches():
    assert degree_vector_matches((3, 4, 5), ['5+', '3', '4'])
    assert not degree_vector_matches((3, 3, 3), ['3', '3', '5+'])
    assert degree_vector_matches((2, 3, 5), ['5-', '3', '5+'])
    assert not degree_vector_matches((3, 3), ['3', '3', '3'])


def test_special_face_and_special_vertex():
    g = special_face_gadget()
    faces, vertices = classify_faces_and_vertices(g)
    special = [f for f in faces if f.is_special]
    assert len(special) == 1
    assert special[0].degree_vector == (3, 4, 4)
    kinds = {v.vertex: v.kind for v in vertices}
    assert [v for v, kind in kinds.items() if kind == 'special-3'] == [0]
    assert class_membership(g).special_face_count == 1


def test_two_vertex_kinds():
    faces, vertices = classify_faces_and_vertices(cycle_graph(5))
    assert {v.kind for v in vertices} == {'simple-2'}
    assert all(v.n2 == 2 for v in vertices)


def test_member_graphs_have_no_adjacency_violations(dodecahedron, h_graph):
    assert lemma1_audit(dodecahedron) == []
    assert lemma1_audit(h_graph) == []


def test_octahedron_triangles_touch(octahedron):
    kinds = {v.kind for v in lemma1_audit(octahedron)}
    assert '3-cycle adjacent to 3-cycle' in kinds
