"""Command line front end: payloads, files and exit codes."""

import csv
import io
import json
import logging
import math

import pytest
import yaml

from hwi_cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


def run_json(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, json.loads(captured.out), captured.err


def exact(text: str):
    return {'exact': text, 'float': pytest.approx(eval_fraction(text))}


def eval_fraction(text: str) -> float:
    num, den = text.split('/')
    return int(num) / int(den)


### invariants


def test_invariants_unit_sphere(capsys):
    code, data, _ = run_json(capsys, ['-q', 'invariants', '--sphere', '4', '1'])
    assert code == EXIT_OK
    assert data['n'] == 4
    assert data['backend'] == 'exact'
    assert data['h4'] == {'direct': exact('6/1'), 'decomposed': exact('6/1'), 'contraction': exact('6/1')}
    assert data['norms'] == {'R': exact('6/1'), 'cR': exact('36/1'), 'c2R': exact('144/1')}
    assert data['einstein']['is_einstein'] is True


def test_invariants_keeps_integer_fields_plain(capsys):
    code, data, _ = run_json(capsys, ['-q', 'invariants', '--spec', 'flat:4'])
    assert code == EXIT_OK
    assert data['n'] == 4
    assert 'metric_scale' not in data
    assert [row['q'] for row in data['h2q']] == [1, 2]
    assert data['h2q'][1]['value'] == exact('0/1')
    assert data['norms'] == {'R': exact('0/1'), 'cR': exact('0/1'), 'c2R': exact('0/1')}
    assert data['ricci'][0] == [exact('0/1')] * 4
    assert data['h4']['direct'] == exact('0/1')


def test_invariants_yaml(capsys):
    assert main(['-q', 'invariants', '--hypersurface', '1,2,3,4', '--format', 'yaml']) == EXIT_OK
    data = yaml.safe_load(capsys.readouterr().out)
    assert data['scal']['exact'] == '70/1'
    assert data['h4']['direct']['exact'] == '144/1'


def test_invariants_low_dimension(capsys):
    code, data, _ = run_json(capsys, ['-q', 'invariants', '--sphere', '3', '1'])
    assert code == EXIT_OK
    assert data['h4_formal']['exact'] == '0/1'
    assert 'h4' not in data
    assert 'note' in data


def test_invariants_product(capsys):
    code, data, _ = run_json(capsys, ['-q', 'invariants', '--product', 'sphere:4:1', 'sphere:4:1',
                                      '--orders', '2'])
    assert code == EXIT_OK
    assert data['n'] == 8
    assert data['h2q'] == [{'q': 2, 'value': exact('84/1')}]


def test_invariants_scaled_sphere(capsys):
    _, data, _ = run_json(capsys, ['-q', 'invariants', '--sphere', '4', '1', '--scale', '4'])
    assert data['h4']['direct']['exact'] == '3/8'


def test_invariants_scaled_product(capsys):
    _, data, _ = run_json(capsys, ['-q', 'invariants', '--product', 'sphere:4:1', 'sphere:4:1',
                                   '--orders', '2', '--scale', '4'])
    assert data['h2q'] == [{'q': 2, 'value': exact('21/4')}]
    assert data['label'].endswith('@4')
    assert 'metric_scale' not in data


def test_invariants_conformal_einsteinized(capsys):
    _, data, _ = run_json(capsys, ['-q', 'invariants', '--conformal', '1,1,-1,-1', '--einsteinize'])
    assert data['einstein']['is_einstein'] is True


def test_invariants_random_is_seeded(capsys):
    _, first, _ = run_json(capsys, ['-q', 'invariants', '--random', '5', '--seed', '3'])
    _, second, _ = run_json(capsys, ['-q', 'invariants', '--random', '5', '--seed', '3'])
    assert first == second


def test_invariants_out_file(tmp_path, capsys):
    out = tmp_path / 'reports' / 's4.json'
    assert main(['-q', 'invariants', '--sphere', '4', '1', '--out', str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ''
    assert json.loads(out.read_text(encoding='utf-8'))['h4']['direct']['exact'] == '6/1'


### export and tensor files


def test_export_then_invariants(tmp_path, capsys):
    path = tmp_path / 'hyp.json'
    assert main(['-q', 'export', '--hypersurface', '1,2,3,4', '--out', str(path)]) == EXIT_OK
    assert 'Wrote:' in capsys.readouterr().err
    code, data, _ = run_json(capsys, ['-q', 'invariants', '--file', str(path)])
    assert code == EXIT_OK
    assert data['h4']['direct']['exact'] == '144/1'


def test_export_to_stdout(capsys):
    code, data, _ = run_json(capsys, ['-q', 'export', '--spec', 'sphere:4:1'])
    assert code == EXIT_OK
    assert len(data['components']) == 6


def test_missing_tensor_file(tmp_path, capsys):
    assert main(['-q', 'invariants', '--file', str(tmp_path / 'none.json')]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith('Error:')


def test_bianchi_violation_is_usage_error(tmp_path, capsys):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'n': 4, 'components': [{'i': 0, 'j': 1, 'k': 2, 'l': 3, 'value': 1}]}),
                    encoding='utf-8')
    assert main(['-q', 'invariants', '--file', str(path)]) == EXIT_USAGE
    assert 'Error:' in capsys.readouterr().err


def test_bad_generator_spec(capsys):
    assert main(['-q', 'invariants', '--spec', 'torus:4']) == EXIT_USAGE
    assert 'unknown generator spec' in capsys.readouterr().err


### verify, sample, scaling


def test_verify_neck_suite(capsys):
    code, data, err = run_json(capsys, ['-q', 'verify', 'neck-coeffs'])
    assert code == EXIT_OK
    assert data['passed'] is True
    assert '[PASS] neck-coeffs' in err


def test_verify_uses_config_seed(tmp_path, capsys):
    config = tmp_path / 'hwi.yaml'
    config.write_text('seed: 9\n', encoding='utf-8')
    code, data, _ = run_json(capsys, ['-q', '--config', str(config), 'verify', 'scaling', '--samples', '1'])
    assert code == EXIT_OK
    assert data['seed'] == 9


def test_verify_small_dimension_is_refused(capsys):
    assert main(['-q', 'verify', 'h4-signs', '--n', '3']) == EXIT_USAGE
    assert 'Error:' in capsys.readouterr().err


def test_verify_accepts_registered_names(capsys):
    code, data, err = run_json(capsys, ['-q', 'verify', 'theorem31', '--samples', '2', '--n', '4'])
    assert code == EXIT_OK
    assert data['passed'] is True
    assert [s['suite'] for s in data['suites']] == ['theorem31']
    assert '[PASS] theorem31' in err


@pytest.mark.parametrize("name, suite", [('lemma21', 'lemma21'), ('theorem-a', 'theorem-a'),
                                         ('h4-signs', 'theorem31')])
def test_verify_names_and_aliases(capsys, name, suite):
    code, data, _ = run_json(capsys, ['-q', 'verify', name, '--samples', '1', '--n', '4',
                                      '--plane-samples', '500'])
    assert code == EXIT_OK
    assert data['suites'][0]['suite'] == suite


def test_verify_passes_plane_samples_through_settings(capsys):
    code, data, _ = run_json(capsys, ['-q', 'verify', 'theorem-a', '--seed', '2', '--samples', '1', '--n', '4',
                                      '--plane-samples', '400'])
    assert code == EXIT_OK
    assert data['seed'] == 2
    assert data['suites'][0]['metrics']['plane_samples'] == 400


def test_verify_unknown_suite():
    with pytest.raises(SystemExit):
        main(['verify', 'nonsense'])


def test_sample_unit_sphere(capsys):
    code, data, _ = run_json(capsys, ['-q', 'sample', '--sphere', '5', '1', '--plane-samples', '300',
                                      '--argmin'])
    assert code == EXIT_OK
    assert data['status'] == 'certified'
    assert data['h4']['exact'] == '30/1'
    assert data['n'] == 5
    assert data['samples'] == 300
    assert data['closed_form_sp'] == exact('2/1')
    assert len(data['argmin_plane']) == 3


def test_scaling_anchor(capsys):
    code, data, _ = run_json(capsys, ['-q', 'scaling', '--fiber', 'sphere:4:1', '--base', 'sphere:4:1',
                                      '--t', '1,10'])
    assert code == EXIT_OK
    assert data['passed'] is True
    assert data['rows'][0]['h4_t']['exact'] == '84/1'
    assert data['rows'][1]['h4_t']['exact'] == '33603/5000'


### neck


def test_neck_plan_with_csv(tmp_path, capsys):
    path = tmp_path / 'plan.csv'
    code, data, err = run_json(capsys, ['-q', 'neck', '--q', '5', '--r', '1', '--csv', str(path)])
    assert code == EXIT_OK
    assert data['feasible'] is True
    assert data['order'] == 'leading-order'
    assert len(data['bump_records']) == min(5, data['bumps'])
    rows = list(csv.DictReader(io.StringIO(path.read_text(encoding='utf-8'))))
    assert len(rows) == data['steps']
    assert data['q'] == 5
    assert isinstance(data['bumps'], int) and isinstance(data['steps'], int)
    assert 'Wrote:' in err


def test_neck_at_point(capsys):
    code, data, _ = run_json(capsys, ['-q', 'neck', '--q', '5', '--r', '0.1', '--at', str(math.pi / 4), '0'])
    assert code == EXIT_OK
    assert data['h4_lower_bound'] == pytest.approx(15000.0)
    assert data['k_cap'] == pytest.approx(math.sin(math.pi / 4) / 0.2)


def test_neck_at_point_low_codimension(capsys):
    code, data, _ = run_json(capsys, ['-q', 'neck', '--q', '3', '--r', '0.5', '--at', '1.0', '0'])
    assert code == EXIT_OK
    assert data['h4_lower_bound'] is None


def test_neck_sphere_base(capsys):
    code, data, _ = run_json(capsys, ['-q', 'neck', '--q', '6', '--r', '0.5', '--m', '4'])
    assert code == EXIT_OK
    assert data['h4_base'] == 6.0


def test_neck_sweep_to_stdout(capsys):
    assert main(['-q', 'neck', '--q', '5', '--r', '0.1', '--sweep', '--count', '2']) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    assert float(rows[0]['quartic_term']) == pytest.approx(6e4)


def test_neck_low_codimension_plan(capsys):
    assert main(['-q', 'neck', '--q', '4', '--r', '1']) == EXIT_USAGE
    assert 'Error:' in capsys.readouterr().err


def test_neck_infeasible_plan(capsys):
    assert main(['-q', 'neck', '--q', '5', '--r', '1', '--theta0', '1e-12']) == EXIT_FAILED
    assert 'Infeasible' in capsys.readouterr().err
