from fractions import Fraction
import json

import pytest
from pydantic import ValidationError

from equitable.discharging import (
    ChargeScheme,
    RuleRow,
    RuleTable,
    apply_ruleset,
    audit_charges,
    discharge_summary,
    face,
    get_scheme,
    initial_charges,
    load_rule_table,
    rule_key,
    scheme_for,
    select_ruleset,
    vertex,
)
from equitable.errors import AmbiguousRule, InputError, TotalMismatch
from equitable.fixtures import cycle_graph, disjoint_triangles_graph, path_graph, quad_gadget


@pytest.mark.parametrize('scheme, total', [('A', -12), ('B', -20)])
def test_initial_total_per_component(scheme, total, dodecahedron):
    ledger = initial_charges(dodecahedron, scheme)
    assert ledger.total('initial') == total


def test_initial_totals_for_several_components():
    g = disjoint_triangles_graph(3)
    ledger = initial_charges(g, 'A')
    assert list(ledger.component_totals('initial').values()) == [-12, -12, -12]


def test_star_charges_under_scheme_b(star6):
    ledger = initial_charges(star6, 'B')
    assert ledger.initial[vertex(0)] == 8
    assert ledger.initial[face(0)] == 14
    assert ledger.total('initial') == -20


def test_wrong_expected_total_raises(triangle):
    broken = ChargeScheme('X', (2, -6), (1, -6), -10)
    with pytest.raises(TotalMismatch) as info:
        initial_charges(triangle, broken)
    assert info.value.exit_code == 1


def test_unknown_scheme_and_ruleset():
    with pytest.raises(InputError):
        get_scheme('C')
    with pytest.raises(InputError):
        load_rule_table('R9')


def test_octahedron_rule_d_empties_every_face(octahedron):
    ledger = apply_ruleset(octahedron, initial_charges(octahedron, 'A'), 'D')
    final = ledger.final
    assert all(final[face(f.id)] == 0 for f in octahedron.faces)
    assert all(final[vertex(v)] == -2 for v in octahedron.vertex_ids)
    assert ledger.total() == -12
    assert {t.rule for t in ledger.transfers} == {'D1'}


def test_icosahedron_555_faces_end_at_zero(icosahedron):
    ledger = apply_ruleset(icosahedron, initial_charges(icosahedron, 'B'), 'R1')
    final = ledger.final
    assert all(final[face(f.id)] == 0 for f in icosahedron.faces)
    assert all(t.amount == Fraction(4, 3) for t in ledger.transfers)
    assert ledger.total() == -20


def test_quad_gadget_four_face_is_covered():
    g = quad_gadget()
    ledger = apply_ruleset(g, initial_charges(g, 'B'), 'R1')
    quad = next(f.id for f in g.faces if f.degree == 4)
    into = [t for t in ledger.transfers if t.sink == face(quad)]
    assert sum(t.amount for t in into if t.rule == 'R5') == 2
    assert ledger.final[face(quad)] >= 0


def test_star_audit_has_no_unexplained_deficit(star6):
    ledger = apply_ruleset(star6, initial_charges(star6, 'B'), select_ruleset(star6))
    report = audit_charges(ledger)
    assert report.unexplained == []
    assert [e.allowance for e in report.exceptions] == ['one_vertex'] * 6
    assert report.exception_floor == -42
    assert not report.argument_contradiction


def test_audit_without_allowances_reports_everything(star6):
    ledger = apply_ruleset(star6, initial_charges(star6, 'B'), 'R1')
    report = audit_charges(ledger, allowances=())
    assert len(report.unexplained) == 6
    assert report.unexplained_deficit == -42


def test_unknown_allowance(star6):
    ledger = initial_charges(star6, 'B')
    with pytest.raises(InputError):
        audit_charges(ledger, allowances=('nothing',))


def test_ambiguous_rule(k4):
    table = RuleTable(ruleset='conflict', scheme='A', rows=[
        RuleRow(rule='X1', kind='vertex_to_face', giver='3', face_degree='3', amount='1'),
        RuleRow(rule='X1', kind='vertex_to_face', giver='3+', face_degree='3', amount='1/2'),
    ])
    with pytest.raises(AmbiguousRule):
        apply_ruleset(k4, initial_charges(k4, 'A'), table)


def test_rule_row_validation():
    with pytest.raises(ValidationError):
        RuleRow(rule='X', kind='vertex_to_face', amount='-1')
    with pytest.raises(ValidationError):
        RuleRow(rule='X', kind='vertex_to_face', amount='1/0')


def test_rule_table_from_file(tmp_path, k4):
    path = tmp_path / 'custom.json'
    path.write_text(json.dumps({
        'ruleset': 'custom',
        'scheme': 'A',
        'rows': [{'rule': 'C1', 'kind': 'vertex_to_face', 'giver': '3', 'face_degree': '3', 'amount': '1'}],
    }))
    ledger = apply_ruleset(k4, initial_charges(k4, 'A'), str(path))
    assert ledger.ruleset == 'custom'
    assert all(ledger.final[face(f.id)] == 0 for f in k4.faces)
    assert all(ledger.final[vertex(v)] == -3 for v in k4.vertex_ids)


def test_broken_rule_file(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"ruleset": "x"')
    with pytest.raises(InputError):
        load_rule_table(str(path))


def test_transfers_are_ordered_by_rule(icosahedron):
    ledger = apply_ruleset(icosahedron, initial_charges(icosahedron, 'B'), 'R1')
    keys = [(t.source, t.sink) for t in ledger.transfers]
    assert keys == sorted(keys)


def test_rule_ids_sort_numerically():
    ids = ['R10', 'R2', 'C4V', 'D1', 'R1', 'C2V']
    assert sorted(ids, key=rule_key) == ['C2V', 'C4V', 'D1', 'R1', 'R2', 'R10']


def test_transfers_follow_rule_ids():
    g = quad_gadget()
    ledger = apply_ruleset(g, initial_charges(g, 'B'), 'R1')
    keys = [rule_key(t.rule) for t in ledger.transfers]
    assert keys == sorted(keys)


def test_select_ruleset(octahedron, dodecahedron):
    assert select_ruleset(octahedron) == 'D'
    assert select_ruleset(dodecahedron) == 'R-case1'
    assert select_ruleset(cycle_graph(6)) == 'R-case3'
    assert select_ruleset(path_graph(5)) == 'R-case1'
    assert scheme_for('D').name == 'A'
    assert scheme_for('R4v').name == 'B'


def test_discharge_summary(octahedron):
    ledger = apply_ruleset(octahedron, initial_charges(octahedron, 'A'), 'D')
    summary = discharge_summary(ledger)
    assert summary.f(3, Fraction(1), 0) == 4
    assert summary.f(3, Fraction(3, 2), 0) == 0
    assert summary.n3(Fraction(0), 0) == 0
