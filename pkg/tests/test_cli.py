import json

from equitable.cli import build_parser, main
from equitable.fixtures import badface_gadget, cycle_graph
from equitable.settings import EngineSettings
from equitable.plane_graph import dump_graph


def _write_graph(tmp_path, g, name='g.json'):
    path = tmp_path / name
    path.write_text(dump_graph(g), encoding='utf-8')
    return str(path)


def test_generate_prints_fixture(capsys):
    assert main(['generate', 'path', 'n=3']) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['name'] == 'path-3'
    assert payload['expected']['member'] is True


def test_generate_dot(capsys):
    assert main(['generate', 'cycle', 'n=4', '--format', 'dot']) == 0
    out = capsys.readouterr().out
    assert out.startswith('graph G {')
    assert '0 -- 1' in out


def test_generate_bad_param(capsys):
    assert main(['generate', 'path', 'n']) == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'input_error'


def test_analyze_graph_file(tmp_path, capsys, path8):
    assert main(['analyze', '--graph', _write_graph(tmp_path, path8)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['membership']['is_member'] is True


def test_missing_graph(tmp_path, capsys):
    assert main(['analyze', '--graph', str(tmp_path / 'nope.json')]) == 2
    assert json.loads(capsys.readouterr().out)['success'] is False
    assert main(['degeneracy']) == 2


def test_color_writes_out_file(tmp_path, path8):
    out = tmp_path / 'report.json'
    assert main(['color', '--graph', _write_graph(tmp_path, path8), '--k', '7', '--out', str(out)]) == 0
    report = json.loads(out.read_text(encoding='utf-8'))
    assert report['validation']['passed'] is True
    assert sum(report['class_sizes']) == 8


def test_validate_bad_coloring_exits_one(tmp_path, capsys, triangle):
    coloring = tmp_path / 'coloring.json'
    coloring.write_text(json.dumps({'coloring': {'0': 1, '1': 1, '2': 2}}), encoding='utf-8')
    code = main(['validate', '--graph', _write_graph(tmp_path, triangle), '--coloring', str(coloring)])
    assert code == 1
    assert json.loads(capsys.readouterr().out)['violation']['kind'] == 'proper'


def test_size_limit_from_flag(tmp_path, capsys, path8):
    code = main(['color', '--graph', _write_graph(tmp_path, path8), '--mode', 'exact', '--exact-limit', '4'])
    assert code == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'size_limit'


def test_pipeline_command(tmp_path, capsys, path8):
    assert main(['pipeline', 'analyze,reduce', '--graph', _write_graph(tmp_path, path8)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [s['step'] for s in report['steps']] == ['analyze', 'reduce']


def test_analyze_dot_marks_face_classes(tmp_path, capsys):
    g = badface_gadget()
    assert main(['analyze', '--graph', _write_graph(tmp_path, g), '--format', 'dot']) == 0
    out = capsys.readouterr().out
    assert 'subgraph cluster_legend {' in out
    assert 'label="bad 4-face"' in out
    # (3,3,5,5) 四边形的四条边都按坏面描边
    for edge in ('0 -- 1', '1 -- 2', '2 -- 3', '0 -- 3'):
        assert f'    {edge} [color="#377eb8",penwidth=2.5,style=dashed]' in out


def test_missing_config_is_an_input_error(tmp_path, capsys, k4):
    code = main(['match', '--graph', _write_graph(tmp_path, k4), '--config', str(tmp_path / 'nope.json')])
    assert code == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'input_error'


def test_bad_order_is_an_input_error(tmp_path, capsys, path8):
    code = main(['reduce', '--graph', _write_graph(tmp_path, path8), '--order', 'a,b'])
    assert code == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'input_error'


def test_search_flags_reach_settings():
    args = build_parser().parse_args(['reduce', '--seed-pool', '8', '--max-seed', '2', '--budget', '50'])
    settings = EngineSettings.from_parameters(vars(args))
    assert (settings.seed_pool_size, settings.max_seed_size, settings.search_budget) == (8, 2, 50)


def test_max_seed_limits_the_search(tmp_path, capsys):
    path = _write_graph(tmp_path, cycle_graph(8))
    assert main(['reduce', '--graph', path]) == 0
    capsys.readouterr()
    # 空种子补全后 x_7 仍有外部邻点，不扩展种子就找不到
    assert main(['reduce', '--graph', path, '--max-seed', '0']) == 1
    assert json.loads(capsys.readouterr().out)['reducible_set'] is None


def test_bad_seed_pool_is_rejected(tmp_path, capsys, path8):
    assert main(['reduce', '--graph', _write_graph(tmp_path, path8), '--seed-pool', '0']) == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'bad_params'


def test_explicit_zero_k_is_rejected(tmp_path, capsys, path8):
    code = main(['color', '--graph', _write_graph(tmp_path, path8), '--k', '0', '--mode', 'exact'])
    assert code == 2
    assert json.loads(capsys.readouterr().out)['code'] == 'bad_params'
