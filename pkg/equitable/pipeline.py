"""命令行与插件工具共用的操作层：每个函数接收已解析的输入，返回可直接 JSON 化的报告"""
from collections.abc import Mapping, Sequence
from random import Random
from typing import Any, Optional, Union
import argparse
import logging
import shlex

from equitable.coloring import (
    ListAssignment,
    chi_e,
    chi_star_e,
    color_constructive,
    corollary_check,
    exact_equitable,
    exact_list,
    list_color_constructive,
    random_lists,
    validate_coloring,
)
from equitable.configurations import (
    Configuration,
    find_reducible_set,
    load_catalog,
    match_configuration,
    verify_reducible,
)
from equitable.degeneracy import assert_4_degenerate, degeneracy_ordering
from equitable.discharging import (
    apply_ruleset,
    audit_charges,
    discharge_summary,
    get_scheme,
    initial_charges,
    scheme_for,
    select_ruleset,
)
from equitable.errors import BadParams, EquitableError
from equitable.fixtures import Fixture, generate_fixture, load_corpus, verify_fixture
from equitable.plane_graph import PlaneGraph, degree_profile, load_graph
from equitable.serialize import FaceFormatter, describe, graph_to_dot
from equitable.settings import DEFAULT_SETTINGS, EngineSettings
from equitable.structure import class_membership, classify_faces_and_vertices, lemma1_audit

logger = logging.getLogger(__name__)


def analyze(g: PlaneGraph) -> dict:
    report = class_membership(g)
    profile = degree_profile(g)
    faces, vertices = classify_faces_and_vertices(g)
    violations = lemma1_audit(g, report)
    return {
        'passed': not (report.is_member and violations),
        'summary': describe(g),
        'membership': report.to_payload(),
        'max_degree': profile.max_degree,
        'min_degree': profile.min_degree,
        'faces': [
            {**f.to_payload(), 'notation': profile.face_notation[f.face], 'min_vertex_degree': profile.face_min_degree[f.face]}
            for f in faces
        ],
        'vertices': [v.to_payload() for v in vertices],
        'lemma1': [v.to_payload() for v in violations],
    }


def analysis_dot(g: PlaneGraph) -> str:
    faces, _ = classify_faces_and_vertices(g)
    return graph_to_dot(g, FaceFormatter(g, faces))


def degeneracy_report(g: PlaneGraph) -> dict:
    report = class_membership(g)
    cert = degeneracy_ordering(g)
    check = assert_4_degenerate(g, report)
    # 没有弦 4-圈的图必须是 4-退化的
    passed = check.passed or bool(report.chordal4)
    return {'passed': passed, 'certificate': cert.to_payload(), 'check': check.to_payload()}


def discharge_report(g: PlaneGraph, scheme: Optional[str] = None, rules: Optional[str] = None, audit: bool = False) -> dict:
    ruleset = select_ruleset(g) if rules in (None, 'auto') else rules
    chosen = get_scheme(scheme) if scheme else scheme_for(ruleset)
    ledger = apply_ruleset(g, initial_charges(g, chosen), ruleset)
    payload = {
        'passed': ledger.total() == ledger.total('initial'),
        'ruleset': ledger.ruleset,
        'ledger': ledger.to_payload(),
        'component_totals': {str(c): str(q) for c, q in ledger.component_totals().items()},
        'summary': discharge_summary(ledger, g).to_payload(),
    }
    if audit:
        payload['audit'] = audit_charges(ledger).to_payload()
    return payload


def match_report(g: PlaneGraph, cfg: Configuration) -> dict:
    matches = match_configuration(g, cfg)
    return {
        'passed': True,
        'configuration': cfg.name,
        'count': len(matches),
        'matches': [m.to_payload(cfg) for m in matches],
    }


def reduce_report(
    g: PlaneGraph,
    k: int,
    catalog_dir: Optional[str] = None,
    order: Optional[Sequence[int]] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> dict:
    if order:
        result = verify_reducible(g, order, k)
        return {'passed': result.accepted, 'reducible_set': result.to_payload()}
    catalog = load_catalog(catalog_dir).configurations
    found = find_reducible_set(g, k, catalog, settings)
    if found is None:
        return {'passed': False, 'reducible_set': None}
    # 返回前独立复核
    check = verify_reducible(g, found.vertices, k)
    return {'passed': check.accepted, 'reducible_set': found.to_payload()}


def color_report(
    g: PlaneGraph,
    k: int,
    mode: str = 'constructive',
    force: bool = False,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> dict:
    if mode == 'exact':
        coloring = exact_equitable(g, k, settings)
        if coloring is None:
            return {'passed': False, 'feasible': False, 'k': k}
        payload = {'feasible': True, **coloring.to_payload()}
    elif mode == 'constructive':
        result = color_constructive(g, k, force, settings, load_catalog().configurations)
        coloring = result.coloring
        payload = result.to_payload()
    else:
        raise BadParams(f'未知的着色模式: {mode!r}（可选 exact 或 constructive）')
    validation = validate_coloring(g, coloring.assignment, k)
    return {'passed': validation.passed, **payload, 'validation': validation.to_payload()}


def chromatic_report(g, which: str = 'both', settings: EngineSettings = DEFAULT_SETTINGS) -> dict:
    payload: dict[str, Any] = {'passed': True}
    if which in ('chie', 'both'):
        payload['chi_e'] = chi_e(g, settings)
    if which in ('chiestar', 'both'):
        payload['chi_star_e'] = chi_star_e(g, settings)
    if which == 'corollary':
        report = corollary_check(g, settings)
        payload.update(report.to_payload())
        payload['passed'] = report.holds is not False
    return payload


def list_color_report(
    g: PlaneGraph,
    lists: Union[ListAssignment, Mapping],
    mode: str = 'constructive',
    force: bool = False,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> dict:
    if not isinstance(lists, ListAssignment):
        lists = ListAssignment.from_mapping(lists, vertices=g.vertex_ids)
    if mode == 'exact':
        coloring = exact_list(g, lists, settings=settings)
        if coloring is None:
            return {'passed': False, 'feasible': False, 'k': lists.k}
        payload = {'feasible': True, **coloring.to_payload()}
    elif mode == 'constructive':
        result = list_color_constructive(g, lists, force, settings, load_catalog().configurations)
        coloring = result.coloring
        payload = result.to_payload()
    else:
        raise BadParams(f'未知的着色模式: {mode!r}（可选 exact 或 constructive）')
    validation = validate_coloring(g, coloring.assignment, lists=lists)
    return {'passed': validation.passed, **payload, 'validation': validation.to_payload()}


def validate_report(g, coloring: Mapping, k: Optional[int] = None, lists: Optional[Mapping] = None) -> dict:
    assignment = ListAssignment.from_mapping(lists) if lists else None
    result = validate_coloring(g, coloring, k, assignment)
    return {'passed': result.passed, **result.to_payload()}


def generate_report(kind: str, params: Optional[Mapping] = None, name: Optional[str] = None) -> tuple[Fixture, dict]:
    fixture = generate_fixture(kind, params, name)
    return fixture, {'passed': True, **fixture.to_payload()}


def _fixture_checks(fixture: Fixture, settings: EngineSettings, catalog: list[Configuration]) -> dict:
    g = fixture.graph
    checks: dict[str, Any] = {'name': fixture.name, 'n': g.order}
    measured = verify_fixture(fixture)
    checks['member'] = measured['member']
    for scheme in ('A', 'B'):
        ledger = initial_charges(g, scheme)
        checks[f'total_{scheme}'] = str(ledger.total('initial'))
    report = class_membership(g)
    checks['degeneracy'] = measured['degeneracy']
    ok = report.chordal4 or measured['degeneracy'] <= 4

    k = max(7, g.max_degree)
    if measured['member'] and g.order >= k:
        found = find_reducible_set(g, k, catalog, settings)
        checks['reducible'] = found is not None and verify_reducible(g, found.vertices, k).accepted
        ok = ok and checks['reducible']
    if measured['member'] and g.order <= 14:
        # k 取遍 [max(7, Δ), Δ+2]，每个 k 再用精确求解确认可行
        checks['coloring'] = {}
        checks['anomalies'] = 0
        for kk in range(k, max(k, g.max_degree + 2) + 1):
            result = color_constructive(g, kk, settings=settings, catalog=catalog)
            valid = validate_coloring(g, result.coloring.assignment, kk).passed
            confirmed = exact_equitable(g, kk, settings) is not None
            checks['coloring'][str(kk)] = valid and confirmed
            checks['anomalies'] += len(result.anomalies)
        ok = ok and all(checks['coloring'].values())
    checks['passed'] = bool(ok)
    return checks


def corpus_report(directory: Optional[str] = None, settings: EngineSettings = DEFAULT_SETTINGS) -> dict:
    catalog = load_catalog().configurations
    rows = []
    for fixture in load_corpus(directory):
        try:
            rows.append(_fixture_checks(fixture, settings, catalog))
        except EquitableError as e:
            logger.error(f'[Corpus] {fixture.name} 检查失败: {e}')
            rows.append({'name': fixture.name, 'passed': False, 'error': e.to_payload()})
    failed = [r['name'] for r in rows if not r['passed']]
    return {'passed': not failed, 'count': len(rows), 'failed': failed, 'fixtures': rows}


def _step_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='step', add_help=False, exit_on_error=False)
    parser.add_argument('name', choices=['analyze', 'degeneracy', 'discharge', 'color', 'chie', 'chiestar', 'reduce'])
    parser.add_argument('--k', type=int)
    parser.add_argument('--mode', default='constructive')
    parser.add_argument('--scheme')
    parser.add_argument('--rules', default='auto')
    parser.add_argument('--audit', action='store_true')
    parser.add_argument('--force', action='store_true')
    return parser


def parse_tasks(text: str) -> list[argparse.Namespace]:
    """'analyze,color --k 7' 这样的任务串，逗号分隔各步"""
    parser = _step_parser()
    steps = []
    for chunk in text.split(','):
        if not chunk.strip():
            continue
        try:
            steps.append(parser.parse_args(shlex.split(chunk)))
        except (argparse.ArgumentError, SystemExit) as e:
            raise BadParams(f'无法解析的任务: {chunk.strip()!r}') from e
    if not steps:
        raise BadParams('任务串为空')
    return steps


def _step_k(step, g: PlaneGraph) -> int:
    return step.k if step.k is not None else max(7, g.max_degree)


def run_pipeline(graph: Union[str, PlaneGraph], tasks: str, settings: EngineSettings = DEFAULT_SETTINGS) -> dict:
    g = load_graph(graph) if isinstance(graph, str) else graph
    report: dict[str, Any] = {'graph': describe(g), 'steps': []}
    for step in parse_tasks(tasks):
        logger.info(f'[Pipeline] 执行 {step.name}')
        if step.name == 'analyze':
            result = analyze(g)
        elif step.name == 'degeneracy':
            result = degeneracy_report(g)
        elif step.name == 'discharge':
            result = discharge_report(g, step.scheme, step.rules, step.audit)
        elif step.name == 'reduce':
            result = reduce_report(g, _step_k(step, g), settings=settings)
        elif step.name in ('chie', 'chiestar'):
            result = chromatic_report(g, step.name, settings)
        else:
            result = color_report(g, _step_k(step, g), step.mode, step.force, settings)
        report['steps'].append({'step': step.name, **result})
    report['passed'] = all(s['passed'] for s in report['steps'])
    return report


def random_list_payload(g: PlaneGraph, k: int, seed: int, palette_factor: int = 3) -> dict:
    return random_lists(g, k, palette_factor * k, Random(seed)).to_payload()
