"""Tests for scenario parsing, output files and the command line."""

import json
import math
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from open_horizon.cli.app import (
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
    run_scenario,
)
from open_horizon.cli.outputs import MANIFEST_NAME, OutputWriter, jsonable, sha256_file
from open_horizon.cli.scenario import SCHEMA, parse_scenario
from open_horizon.core.errors import ScenarioError, ScenarioParseError


FLOW = {"family": "power_law", "direction": "inward", "r_min": 0.85, "r_max": 8.0, "beta0": 0.8}


def scenario_doc(task, eps=4.0, params=None, **extra):
    doc = {"schema": SCHEMA, "task": task, "medium": {"epsilon": eps}, "flow": FLOW}
    if params is not None:
        doc["params"] = params
    doc.update(extra)
    return doc


def write_scenario(path, doc):
    path.write_text(json.dumps(doc, indent=2), encoding='utf-8')
    return str(path)


def run_cli(*argv):
    return main(list(argv) + ['--quiet'])


# =============================================================================
# SCENARIOS
# =============================================================================

def test_parse_defaults():
    scenario = parse_scenario(json.dumps(scenario_doc('geodesic')))
    assert scenario.task == 'geodesic'
    assert scenario.epsilon == 4.0
    assert scenario.params['step'] == 0.05
    assert scenario.flow.beta0 == 0.8
    assert scenario.seed == 0


def test_wave_defaults_follow_flow():
    scenario = parse_scenario(json.dumps(scenario_doc('wave')))
    assert scenario.params['center'] == pytest.approx(0.5 * (0.85 + 8.0))
    assert scenario.params['width'] == pytest.approx(0.02 * 7.15)


def test_parse_error_location():
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario('{\n  "task": \n}')
    assert info.value.line == 3
    assert info.value.column == 1


def test_every_issue_reported():
    doc = scenario_doc('bogus', eps=0.5, params={'step': 1})
    doc['extra'] = 1
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(doc))
    paths = [path for path, _ in info.value.issues]
    assert 'medium.epsilon' in paths
    assert 'task' in paths
    assert 'extra' in paths


def test_parameter_checks():
    doc = scenario_doc('wave', params={'n_cells': 8, 'probes': [20.0], 'bogus': 1})
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(doc))
    paths = [path for path, _ in info.value.issues]
    assert paths == ['params.bogus', 'params.n_cells', 'params.probes[0]']


def test_spectrum_needs_length_scale():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(scenario_doc('spectrum')))
    assert ('length_scale_m', 'required for the spectrum task') in info.value.issues
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(scenario_doc('spectrum', length_scale_m=None)))
    assert ('length_scale_m', 'required for the spectrum task') in info.value.issues


def test_task_must_match_command():
    with pytest.raises(ScenarioError):
        parse_scenario(json.dumps(scenario_doc('horizon')), task='wave')
    doc = scenario_doc('horizon')
    del doc['task']
    assert parse_scenario(json.dumps(doc), task='horizon').task == 'horizon'


def test_dispersive_medium():
    doc = {"schema": SCHEMA, "task": "dispersion", "medium": {"modes": [[1.0, 2.0]]}}
    scenario = parse_scenario(json.dumps(doc))
    assert scenario.flow is None
    assert scenario.epsilon == pytest.approx(1.25)


# =============================================================================
# OUTPUTS
# =============================================================================

def test_output_writer(tmp_path):
    writer = OutputWriter(tmp_path)
    writer.write_json('a.json', {'b': 1, 'a': float('nan')})
    writer.write_csv('sub/t.csv', pd.DataFrame({'r': [1.0, 2.0], 'phi': [0.1, np.nan]}))
    manifest = json.loads(writer.write_manifest().read_text())

    assert (tmp_path / 'a.json').read_text() == '{\n  "a": null,\n  "b": 1\n}\n'
    lines = (tmp_path / 'sub' / 't.csv').read_text().splitlines()
    assert lines == ['r [r0],phi [1]', '1,0.10000000000000001', '2,nan']
    assert sorted(manifest['files']) == ['a.json', 'sub/t.csv']
    assert manifest['files']['a.json']['sha256'] == sha256_file(tmp_path / 'a.json')

    with pytest.raises(KeyError):
        writer.write_csv('bad.csv', pd.DataFrame({'mystery': [1.0]}))


def test_jsonable():
    data = jsonable({'x': np.float64(1.5), 'y': np.array([1, 2]), 'z': math.inf, 'w': np.bool_(True)})
    assert data == {'x': 1.5, 'y': [1, 2], 'z': None, 'w': True}


# =============================================================================
# COMMANDS
# =============================================================================

def test_horizon_command(tmp_path):
    path = write_scenario(tmp_path / 'bh.json', scenario_doc('horizon', length_scale_m=1e-6))
    out = tmp_path / 'out'
    assert run_cli('horizon', '--scenario', path, '--out', str(out)) == EXIT_OK

    report = json.loads((out / 'horizon.json').read_text())
    assert report['kind'] == 'black'
    assert report['radius']['value'] == pytest.approx(1.6, rel=1e-9)
    assert report['kappa']['value'] == pytest.approx(0.41666666666666667, rel=1e-8)
    assert report['static_kappa']['value'] == pytest.approx(report['kappa']['value'], rel=1e-10)
    assert report['temperature']['unit'] == 'K'

    manifest = json.loads((out / MANIFEST_NAME).read_text())
    assert sorted(manifest['files']) == ['horizon.json', 'scenario.json']


def test_metric_command(tmp_path):
    path = write_scenario(tmp_path / 'metric.json',
                          scenario_doc('metric', params={'n_points': 51, 'n_samples': 50}))
    out = tmp_path / 'out'
    assert run_cli('metric', '--scenario', path, '--out', str(out)) == EXIT_OK

    identities = json.loads((out / 'metric_identities.json').read_text())
    assert abs(identities['g00_at_horizon']) < 1e-9
    assert identities['max_inverse_residual'] < 1e-12
    assert identities['max_lagrangian_mismatch'] < 1e-12

    header = (out / 'metric_profile.csv').read_text().splitlines()[0]
    assert header == 'r [r0],g00 [1],g01 [1],g11 [1],g00_static [1],g_rr_static [1]'
    frame = pd.read_csv(out / 'metric_profile.csv')
    assert len(frame) == 52


def test_geodesic_command_is_deterministic(tmp_path):
    doc = scenario_doc('geodesic', params={'radii': [1.2, 3.0]})
    path = write_scenario(tmp_path / 'rays.json', doc)
    manifests = []
    for name in ('first', 'second'):
        out = tmp_path / name
        assert run_cli('geodesic', '--scenario', path, '--out', str(out)) == EXIT_OK
        manifests.append((out / MANIFEST_NAME).read_text())
    assert manifests[0] == manifests[1]

    rays = json.loads((tmp_path / 'first' / 'rays.json').read_text())
    assert [ray['radius'] for ray in rays['rays']] == [1.2, 1.2, 3.0, 3.0]
    assert [ray['classification'] for ray in rays['rays']] == ['captured', 'captured',
                                                               'escaped', 'captured']
    assert (tmp_path / 'first' / 'trajectories' / 'ray_003.csv').exists()


def test_wave_command_zero_duration(tmp_path):
    doc = scenario_doc('wave', params={'n_cells': 256, 't_final': 0.0, 'probes': [3.0]})
    path = write_scenario(tmp_path / 'wave.json', doc)
    out = tmp_path / 'out'
    assert run_cli('wave', '--scenario', path, '--out', str(out)) == EXIT_OK
    assert (out / 'field_final.csv').read_bytes() == (out / 'field_initial.csv').read_bytes()
    summary = json.loads((out / 'wave_summary.json').read_text())
    assert summary['n_cells'] == 256
    assert summary['launch_amplitude'] == pytest.approx(1.0, rel=1e-2)


def test_dispersion_command(tmp_path):
    doc = {"schema": SCHEMA, "task": "dispersion", "medium": {"modes": [[1.0, 2.0]]},
           "params": {"n_points": 11, "max_order": 3}}
    path = write_scenario(tmp_path / 'disp.json', doc)
    out = tmp_path / 'out'
    assert run_cli('dispersion', '--scenario', path, '--out', str(out)) == EXIT_OK
    frame = pd.read_csv(out / 'dispersion.csv')
    assert list(frame.columns) == ['omega [1]', 'eps [1]', 'eps_n0 [1]', 'eps_n1 [1]',
                                   'eps_n2 [1]', 'eps_n3 [1]']
    assert frame['eps [1]'].iloc[0] == pytest.approx(1.25)


def test_spectrum_command(tmp_path):
    path = write_scenario(tmp_path / 'spectrum.json',
                          scenario_doc('spectrum', params={'n_points': 20}, length_scale_m=1e-6))
    out = tmp_path / 'out'
    assert run_cli('spectrum', '--scenario', path, '--out', str(out)) == EXIT_OK
    frame = pd.read_csv(out / 'spectrum.csv')
    assert list(frame.columns) == ['omega [rad/s]', 'occupation [1]']
    assert np.all(np.diff(frame['occupation [1]']) < 0)


def test_spectrum_null_length_scale(tmp_path):
    path = write_scenario(tmp_path / 'spectrum.json',
                          scenario_doc('spectrum', length_scale_m=None))
    assert run_cli('spectrum', '--scenario', path, '--out', str(tmp_path / 'out')) == EXIT_VALIDATION

    # A scenario built in code without a length scale is rejected the same way
    scenario = parse_scenario(json.dumps(scenario_doc('spectrum', length_scale_m=1e-6)))
    result = run_scenario(replace(scenario, length_scale_m=None), tmp_path / 'direct')
    assert result.status == EXIT_VALIDATION
    assert 'length_scale_m' in result.message


RERUN_SCENARIOS = {
    'metric': scenario_doc('metric', params={'n_points': 21, 'n_samples': 20}, seed=7),
    'horizon': scenario_doc('horizon', length_scale_m=1e-6),
    'geodesic': scenario_doc('geodesic', params={'radii': [1.2, 3.0]}),
    'wave': scenario_doc('wave', params={'n_cells': 256, 't_final': 0.5, 'probes': [3.0],
                                         'snapshot_every': 20}),
    'dispersion': {"schema": SCHEMA, "task": "dispersion", "medium": {"modes": [[1.0, 2.0]]},
                   "params": {"n_points": 11}},
    'spectrum': scenario_doc('spectrum', params={'n_points': 20}, length_scale_m=1e-6),
}


@pytest.mark.parametrize('task', sorted(RERUN_SCENARIOS))
def test_reruns_are_byte_identical(tmp_path, task):
    path = write_scenario(tmp_path / f'{task}.json', RERUN_SCENARIOS[task])
    runs = []
    for name in ('first', 'second'):
        out = tmp_path / name
        assert run_cli(task, '--scenario', path, '--out', str(out)) == EXIT_OK
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        runs.append({rel: (out / rel).read_bytes() for rel in manifest['files']})
    assert runs[0] == runs[1]
    assert 'scenario.json' in runs[0]


def test_seed_override(tmp_path):
    path = write_scenario(tmp_path / 'bh.json', scenario_doc('horizon'))
    out = tmp_path / 'out'
    assert run_cli('horizon', '--scenario', path, '--out', str(out), '--seed', '5') == EXIT_OK
    assert json.loads((out / 'scenario.json').read_text())['seed'] == 5


def test_exit_codes(tmp_path):
    bad = write_scenario(tmp_path / 'bad.json', scenario_doc('horizon', eps=0.5))
    assert run_cli('horizon', '--scenario', bad, '--out', str(tmp_path / 'a')) == EXIT_VALIDATION

    flat = write_scenario(tmp_path / 'flat.json', scenario_doc('geodesic', eps=1.01))
    assert run_cli('geodesic', '--scenario', flat, '--out', str(tmp_path / 'b')) == EXIT_NUMERICAL

    missing = str(tmp_path / 'missing.json')
    assert run_cli('horizon', '--scenario', missing, '--out', str(tmp_path / 'c')) == EXIT_IO


def test_validate_lists_issues(tmp_path, capsys):
    path = write_scenario(tmp_path / 'bad.json', scenario_doc('horizon', eps=0.5, seed=-1))
    assert main(['validate', '--scenario', path]) == EXIT_VALIDATION
    printed = capsys.readouterr().out
    assert 'medium.epsilon: must be >= 1' in printed
    assert 'seed: must be an integer' in printed

    good = write_scenario(tmp_path / 'good.json', scenario_doc('horizon'))
    assert main(['validate', '--scenario', good]) == EXIT_OK
    assert 'valid horizon scenario' in capsys.readouterr().out


def test_sweep(tmp_path):
    scenarios = tmp_path / 'scenarios'
    scenarios.mkdir()
    write_scenario(scenarios / 'bh.json', scenario_doc('horizon'))
    write_scenario(scenarios / 'wh.json',
                   dict(scenario_doc('horizon'), flow=dict(FLOW, direction='outward')))
    out = tmp_path / 'out'
    assert run_cli('sweep', '--scenario', str(scenarios), '--out', str(out), '--workers', '2') == EXIT_OK

    assert json.loads((out / 'bh' / 'horizon.json').read_text())['kind'] == 'black'
    assert json.loads((out / 'wh' / 'horizon.json').read_text())['kind'] == 'white'
    assert (out / 'wh' / MANIFEST_NAME).exists()
