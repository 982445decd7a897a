import json

import numpy as np
import pytest

from main import main, parse_complex, UsageError
from src.power_series import from_pairs
from src.trigonometric import trigonometric_rmatrix


def _run(tmp_path, *argv, name='report.json'):
    out = tmp_path / name
    code = main([*argv, '--out', str(out)])
    return code, out


def _load(path):
    return json.loads(path.read_text(encoding='utf-8'))


def test_parse_complex_formats():
    assert parse_complex('[0.31, 0.07]') == 0.31 + 0.07j
    assert parse_complex('0.31+0.07i') == 0.31 + 0.07j
    assert parse_complex('2j') == 2j
    assert parse_complex('3') == 3
    with pytest.raises(UsageError):
        parse_complex('abc')


def test_verify_qdybe_passes(tmp_path):
    code, out = _run(tmp_path, 'verify-qdybe', '--samples', '10')
    assert code == 0
    report = _load(out)
    assert report['verdict'] == 'pass'
    assert [c['name'] for c in report['checks']] == ['qdybe', 'total_weight']
    assert report['config']['gamma'] == [0.31, 0.07]
    assert out.with_suffix('.txt').exists()


def test_verify_qdybe_is_reproducible(tmp_path):
    _, out = _run(tmp_path, 'verify-qdybe', '--samples', '5', '--n', '3')
    first = out.read_bytes()
    _, out = _run(tmp_path, 'verify-qdybe', '--samples', '5', '--n', '3')
    assert out.read_bytes() == first


def test_timing_is_opt_in(tmp_path):
    _, out = _run(tmp_path, 'verify-qdybe', '--samples', '3', '--timing')
    assert _load(out)['wall_time'] >= 0


@pytest.mark.parametrize('argv', [
    ['verify-qdybe', '--gamma', '0'],
    ['verify-qdybe', '--samples', '0'],
    ['verify-qdybe', '--tol-pass', '1e-3', '--tol-fail', '1e-4'],
    ['verify-qdybe', '--tau', '1'],
    ['verify-qdybe', '--bogus'],
    ['verify-qdybe', '--samples', 'many'],
    ['solve-difference', '--order', '0'],
])
def test_usage_errors(tmp_path, argv):
    code, _ = _run(tmp_path, *argv)
    assert code == 64


def test_config_file(tmp_path):
    config = tmp_path / 'run.env'
    config.write_text('samples=4\nseed=7\ngamma=[0.29, 0.05]\n', encoding='utf-8')
    code, out = _run(tmp_path, 'verify-qdybe', '--config', str(config), '--seed', '9')
    assert code == 0
    echoed = _load(out)['config']
    assert echoed['samples'] == 4
    assert echoed['seed'] == 9
    assert echoed['gamma'] == [0.29, 0.05]


def test_config_file_errors(tmp_path):
    assert main(['verify-qdybe', '--config', str(tmp_path / 'missing.env')]) == 65
    config = tmp_path / 'bad.env'
    config.write_text('colour=blue\n', encoding='utf-8')
    assert main(['verify-qdybe', '--config', str(config)]) == 64


def test_custom_rmatrix_module(tmp_path):
    code, _ = _run(tmp_path, 'verify-qdybe', '--rmatrix', 'nowhere.module:factory')
    assert code == 65
    code, _ = _run(tmp_path, 'verify-qdybe', '--rmatrix', 'no_colon')
    assert code == 64


def test_gauge_check_exact(tmp_path):
    code, out = _run(tmp_path, 'gauge', 'check-exact', '--samples', '4')
    assert code == 0
    names = [c['name'] for c in _load(out)['checks']]
    assert names == ['exactness', 'closedness', 'twist_equivalence']


def test_gauge_twist_sigma_form(tmp_path):
    code, _ = _run(tmp_path, 'gauge', 'twist', '--samples', '4')
    assert code == 0


def test_gauge_twist_rejects_non_closed_form(tmp_path):
    code, out = _run(tmp_path, 'gauge', 'twist', '--n', '3', '--form', 'random', '--samples', '3')
    assert code == 1
    checks = {c['name']: c for c in _load(out)['checks']}
    assert checks['closedness']['verdict'] == 'fail'
    assert checks['twist']['verdict'] == 'fail'
    assert 'qdybe' not in checks


def test_gauge_reparam_records_step(tmp_path):
    code, out = _run(tmp_path, 'gauge', 'reparam', '--b', '2', '--samples', '4')
    assert code == 0
    step = _load(out)['artifacts']['step']
    assert step == pytest.approx([0.155, 0.035])


def test_gauge_scale(tmp_path):
    code, _ = _run(tmp_path, 'gauge', 'scale', '--a', '0.5', '--b', '2', '--samples', '4')
    assert code == 0


def test_solve_difference_default_germ(tmp_path):
    code, out = _run(tmp_path, 'solve-difference', '--order', '10')
    assert code == 0
    report = _load(out)
    assert {c['name'] for c in report['checks']} == {'difference_residual', 'growth_bound'}
    series = _load(tmp_path / 'report_series.json')
    assert series['order'] == 10
    assert series['coefficients'][1] == [[1.0, 0.0]]


def test_solve_difference_first_order(tmp_path):
    code, _ = _run(tmp_path, 'solve-difference', '--order', '1')
    assert code == 0


def test_solve_difference_resonance(tmp_path):
    germ = tmp_path / 'germ.json'
    germ.write_text(json.dumps({'polynomial': [[9, 0], [1, 0]], 'p': [3, 0]}), encoding='utf-8')
    code, _ = _run(tmp_path, 'solve-difference', '--germ', str(germ), '--order', '4')
    assert code == 70


def test_solve_difference_bad_germ(tmp_path):
    germ = tmp_path / 'germ.json'
    germ.write_text('{not json', encoding='utf-8')
    code, _ = _run(tmp_path, 'solve-difference', '--germ', str(germ))
    assert code == 65
    germ.write_text(json.dumps({'polynomial': [[3, 0], [1, 0]]}), encoding='utf-8')
    code, _ = _run(tmp_path, 'solve-difference', '--germ', str(germ))
    assert code == 64


def test_solve_difference_crossing_fixture(tmp_path):
    code, out = _run(tmp_path, 'solve-difference', '--fixture', 'crossing', '--order', '6')
    assert code == 0
    check = _load(out)['checks'][0]
    assert check['name'] == 'crossing'
    assert check['message'] == 'forward'
    assert (tmp_path / 'report_crossing.json').exists()


def test_export_samples_grid(tmp_path):
    code, out = _run(tmp_path, 'export-samples', name='grid.json')
    assert code == 0
    payload = _load(out)
    assert len(payload['records']) == 25
    assert all(len(record['entries']) == 16 for record in payload['records'])
    first = out.read_bytes()
    main(['export-samples', '--out', str(out)])
    assert out.read_bytes() == first


def test_export_samples_empty_grid(tmp_path):
    code, _ = _run(tmp_path, 'export-samples', '--grid-u', '0', name='grid.json')
    assert code == 64


def test_export_samples_of_custom_rmatrix(tmp_path):
    code, out = _run(tmp_path, 'export-samples', '--rmatrix', 'src.trigonometric:trigonometric_operator',
                     '--grid-u', '3', '--grid-lambda', '2', name='grid.json')
    assert code == 0
    payload = _load(out)
    assert payload['operator'] == 'trigonometric'
    assert payload['shape'] == [4, 4]
    assert len(payload['records']) == 6
    record = payload['records'][0]
    u = complex(*record['u'])
    entries = from_pairs(record['entries']).reshape(4, 4)
    assert np.allclose(entries, trigonometric_rmatrix(np.exp(u), 0.6))


def test_export_samples_rejects_missing_module(tmp_path):
    code, _ = _run(tmp_path, 'export-samples', '--rmatrix', 'nowhere.module:factory', name='grid.json')
    assert code == 65
