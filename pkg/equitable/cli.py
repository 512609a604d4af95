from pathlib import Path
from typing import Optional, Union
import argparse
import json
import logging
import sys

from equitable import pipeline
from equitable.configurations import parse_configuration
from equitable.errors import EquitableError, InputError
from equitable.fixtures import KINDS, Fixture, dump_fixture
from equitable.plane_graph import PlaneGraph, load_graph
from equitable.serialize import SeedFormatter, coloring_to_dot, dumps, graph_to_dot
from equitable.settings import EngineSettings

logger = logging.getLogger(__name__)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f'读取 {path} 失败: {e}') from e


def _parse_order(text: Optional[str]) -> Optional[list[int]]:
    if not text:
        return None
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError as e:
        raise InputError(f'--order 应为逗号分隔的顶点编号: {text!r}') from e


def _parse_params(items: list[str]) -> dict:
    params = {}
    for item in items or []:
        key, sep, value = item.partition('=')
        if not sep:
            raise InputError(f'参数应写成 key=value: {item!r}')
        params[key.strip()] = value.strip()
    return params


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--graph', help='canonical graph JSON file')
    common.add_argument('--out', help='write the report here instead of stdout')
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--format', choices=['json', 'dot'], default='json')
    common.add_argument('--budget', type=int, dest='search_budget', help='reducible-set search budget')
    common.add_argument('--exact-limit', type=int, dest='exact_vertex_limit', help='max vertices for exact search')
    common.add_argument('--seed-pool', type=int, dest='seed_pool_size', help='candidate vertices tried as seeds')
    common.add_argument('--max-seed', type=int, dest='max_seed_size', help='largest seed the search extends')

    parser = argparse.ArgumentParser(prog='equitable', description='Equitable coloring toolkit for plane graphs')
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('analyze', parents=[common], help='class membership, face and vertex classification')
    sub.add_parser('degeneracy', parents=[common], help='smallest-last degeneracy certificate')

    p = sub.add_parser('discharge', parents=[common], help='apply a discharging ruleset')
    p.add_argument('--scheme', choices=['A', 'B'])
    p.add_argument('--rules', default='auto', help='D, R1, R3, R2v, R4v, auto, or a rule table file')
    p.add_argument('--audit', action='store_true')

    p = sub.add_parser('match', parents=[common], help='match a configuration')
    p.add_argument('--config', required=True)

    p = sub.add_parser('reduce', parents=[common], help='find or verify a reducible set')
    p.add_argument('--k', type=int)
    p.add_argument('--catalog')
    p.add_argument('--order', help='comma separated x_1..x_k to verify instead of searching')

    p = sub.add_parser('color', parents=[common], help='equitable k-coloring')
    p.add_argument('--k', type=int)
    p.add_argument('--mode', choices=['exact', 'constructive'], default='constructive')
    p.add_argument('--force', action='store_true')

    sub.add_parser('chie', parents=[common], help='equitable chromatic number')
    sub.add_parser('chiestar', parents=[common], help='equitable chromatic threshold')
    sub.add_parser('corollary', parents=[common], help='check chi_e and chi*_e against the maximum degree')

    p = sub.add_parser('list-color', parents=[common], help='equitable list coloring')
    p.add_argument('--lists', help='list assignment JSON; random lists are drawn when omitted')
    p.add_argument('--k', type=int)
    p.add_argument('--mode', choices=['exact', 'constructive'], default='constructive')
    p.add_argument('--force', action='store_true')

    p = sub.add_parser('validate', parents=[common], help='validate a coloring')
    p.add_argument('--coloring', required=True)
    p.add_argument('--k', type=int)
    p.add_argument('--lists')

    p = sub.add_parser('generate', parents=[common], help='generate a fixture')
    p.add_argument('kind', choices=KINDS)
    p.add_argument('params', nargs='*', help='key=value generator parameters')
    p.add_argument('--name')

    p = sub.add_parser('corpus-run', parents=[common], help='check every corpus fixture')
    p.add_argument('--corpus', help='directory with curated fixtures')

    p = sub.add_parser('pipeline', parents=[common], help='chain several steps on one graph')
    p.add_argument('tasks', help="e.g. 'analyze,color --k 7'")
    return parser


def _graph(args) -> PlaneGraph:
    if not args.graph:
        raise InputError(f'{args.command} 需要 --graph')
    return load_graph(args.graph)


def _run(args, settings: EngineSettings) -> tuple[Union[dict, Fixture], Optional[str]]:
    """返回 (报告, DOT 文本)；generate 返回夹具本身"""
    cmd = args.command
    if cmd == 'generate':
        fixture, _ = pipeline.generate_report(args.kind, _parse_params(args.params), args.name)
        return fixture, graph_to_dot(fixture.graph)
    if cmd == 'corpus-run':
        return pipeline.corpus_report(args.corpus, settings), None

    g = _graph(args)
    k = getattr(args, 'k', None)
    if k is None:
        k = max(7, g.max_degree)
    if cmd == 'analyze':
        return pipeline.analyze(g), pipeline.analysis_dot(g)
    if cmd == 'degeneracy':
        return pipeline.degeneracy_report(g), None
    if cmd == 'discharge':
        return pipeline.discharge_report(g, args.scheme, args.rules, args.audit), None
    if cmd == 'match':
        return pipeline.match_report(g, parse_configuration(_read_json(args.config))), None
    if cmd == 'reduce':
        report = pipeline.reduce_report(g, k, args.catalog, _parse_order(args.order), settings)
        found = report['reducible_set']
        return report, graph_to_dot(g, SeedFormatter(found['order'])) if found else None
    if cmd == 'color':
        report = pipeline.color_report(g, k, args.mode, args.force, settings)
        return report, coloring_to_dot(g, report['coloring']) if 'coloring' in report else None
    if cmd in ('chie', 'chiestar', 'corollary'):
        return pipeline.chromatic_report(g, cmd, settings), None
    if cmd == 'list-color':
        if args.lists:
            lists = _read_json(args.lists)
        else:
            seed = args.seed if args.seed is not None else settings.default_seed
            lists = pipeline.random_list_payload(g, k, seed, settings.list_palette_factor)
        report = pipeline.list_color_report(g, lists, args.mode, args.force, settings)
        return report, coloring_to_dot(g, report['coloring']) if 'coloring' in report else None
    if cmd == 'validate':
        coloring = _read_json(args.coloring)
        coloring = coloring.get('coloring', coloring)
        lists = _read_json(args.lists) if args.lists else None
        return pipeline.validate_report(g, coloring, args.k, lists), None
    if cmd == 'pipeline':
        return pipeline.run_pipeline(g, args.tasks, settings), None
    raise InputError(f'未知命令: {cmd}')


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = EngineSettings.from_parameters(vars(args))
        report, dot = _run(args, settings)
    except EquitableError as e:
        logger.error(f'[CLI] {args.command} 失败: {e}')
        _emit(dumps(e.to_payload()), args.out)
        return e.exit_code

    if isinstance(report, Fixture):
        if args.format == 'dot':
            _emit(dot, args.out)
            return 0
        # 生成的夹具直接写成语料库文件格式
        _emit(dump_fixture(report), args.out)
        return 0
    elif args.format == 'dot' and dot is not None:
        _emit(dot, args.out)
    else:
        _emit(dumps(report), args.out)
    return 0 if report.get('passed', True) else 1


if __name__ == '__main__':
    sys.exit(main())
