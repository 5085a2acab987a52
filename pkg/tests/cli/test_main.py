import json
import os

import pandas as pd
import pytest

from omalib.cli.main import build_parser, free_decay_part, main, resolve_config
from omalib.exceptions.exception import ArgsError
from omalib.file.records import read_record, write_record
from omalib.simulation.simulator import simulate


def _write_scenario(directory, name, scenario):
    _path = directory / f'{name}.json'
    _path.write_text(json.dumps(scenario), encoding='utf-8')
    return str(_path)


def _files(directory):
    return sorted(
        os.path.relpath(os.path.join(_root, _name), directory)
        for _root, _, _names in os.walk(directory) for _name in _names
    )


def _read_bytes(path):
    with open(file=path, mode='rb') as file_:
        return file_.read()


@pytest.fixture
def measurement_dir(tmp_path, defaults):
    """
    Two short impulse records and one servo record driven at b1.
    """
    _root = tmp_path / 'measurements'
    for _group in ('impulse', 'servo'):
        (_root / _group).mkdir(parents=True)
    for _seed in (1, 2):
        _sensors = [_sensor._replace(rng_seed=_sensor.rng_seed + 10 * _seed) for _sensor in defaults.sensors]
        _record = simulate(defaults.model, defaults.impulse, _sensors, duration=20.0)
        write_record(_record, str(_root / 'impulse' / f'drop{_seed}.csv'))
    _record = simulate(defaults.model, defaults.servo, defaults.sensors, duration=50.0)
    write_record(_record, str(_root / 'servo' / 'b1_run1.csv'))
    return str(_root)


def test_simulate_is_reproducible(tmp_path):
    _scenario = _write_scenario(tmp_path, 'drop', {'excitation': 'impulse', 'duration_s': 5.0})
    for _out in ('first', 'second'):
        assert main(['simulate', _scenario, '--out', str(tmp_path / _out), '--seed', '3', '-q']) == 0
    assert _files(tmp_path / 'first') == ['drop.csv', 'drop.meta.json']
    for _name in ('drop.csv', 'drop.meta.json'):
        assert _read_bytes(tmp_path / 'first' / _name) == _read_bytes(tmp_path / 'second' / _name)
    _record = read_record(str(tmp_path / 'first' / 'drop.csv'))
    assert _record.channel_ids == ['B_az', 'C_az', 'C_gx']
    assert _record.annotations['seed'] == '3'
    assert json.loads(_record.annotations['scenario'])['seed'] == 3


def test_simulate_default_scenario(tmp_path):
    _config = resolve_config(build_parser().parse_args(['simulate', '--out', str(tmp_path)]))
    assert _config['inputs'] == []
    assert _config['seed'] is None


def test_seed_changes_noise(tmp_path):
    _scenario = _write_scenario(tmp_path, 'drop', {'duration_s': 2.0})
    main(['simulate', _scenario, '--out', str(tmp_path / 'a'), '--seed', '1', '-q'])
    main(['simulate', _scenario, '--out', str(tmp_path / 'b'), '--seed', '2', '-q'])
    assert _read_bytes(tmp_path / 'a' / 'drop.csv') != _read_bytes(tmp_path / 'b' / 'drop.csv')


def test_invalid_scenario_exits_with_2(tmp_path, capsys):
    _scenario = _write_scenario(tmp_path, 'bad', {'duration_s': -1})
    assert main(['simulate', _scenario, '--out', str(tmp_path), '-q']) == 2
    assert 'duration_s' in capsys.readouterr().err


def test_missing_record_exits_with_2(tmp_path, capsys):
    assert main(['spectrum', str(tmp_path / 'missing.csv'), '--out', str(tmp_path), '-q']) == 2
    assert 'error:' in capsys.readouterr().err


def test_config_file_overrides_flags(tmp_path):
    _path = tmp_path / 'settings.json'
    _path.write_text(json.dumps({
        'band': [2, 8], 'min_prominence': 0.2, 'orders': [4, 20, 4], 'n-periods': 3,
        'modes': [{'label': 'b1', 'frequency_hz': 2.263}],
    }), encoding='utf-8')
    _args = build_parser().parse_args(['peaks', 'x.csv', '--band', '1,9', '--config', str(_path)])
    _config = resolve_config(_args)
    assert _config['band'] == (2.0, 8.0)
    assert _config['min_prominence'] == 0.2
    assert _config['orders'] == [4, 8, 12, 16, 20]
    assert _config['n_periods'] == 3
    assert _config['modes'] == [{'label': 'b1', 'frequency': 2.263, 'kind': 'bending'}]
    assert _config['inputs'] == ['x.csv']


def test_flags_and_defaults():
    _config = resolve_config(build_parser().parse_args(['ssi', 'x.csv', '--orders', '2,10,2', '--out', 'o']))
    assert _config['orders'] == [2, 4, 6, 8, 10]
    assert _config['band'] == (1.0, 9.0)
    assert _config['n_periods'] == 5
    assert _config['out'] == 'o'
    assert [_mode['label'] for _mode in _config['modes']] == ['b1', 'b2', 'b3', 't1']


def test_config_errors(tmp_path):
    _path = tmp_path / 'settings.json'
    _path.write_text(json.dumps({'colour': 'red'}), encoding='utf-8')
    with pytest.raises(ArgsError) as error:
        resolve_config(build_parser().parse_args(['peaks', 'x.csv', '--config', str(_path)]))
    assert error.value.argument_name == 'config.colour'
    with pytest.raises(ArgsError):
        resolve_config(build_parser().parse_args(['logdec', 'x.csv', '--n-periods', '0']))
    with pytest.raises(ArgsError):
        resolve_config(build_parser().parse_args(['peaks', 'x.csv', '--band', '9,1']))


def test_scale_prints_full_scale_table(tmp_path, capsys):
    assert main(['scale', '--out', str(tmp_path), '-q']) == 0
    _printed = capsys.readouterr().out
    assert 'stated' in _printed
    for _value in ('0.158', '0.263', '0.553', '0.523'):
        assert _value in _printed
    _frame = pd.read_csv(tmp_path / 'full_scale.csv')
    assert list(_frame['label']) == ['b1', 'b2', 'b3', 't1']
    assert _frame['factor'].iloc[0] == pytest.approx(0.07)


def test_scale_from_geometry_and_table(tmp_path, capsys):
    _table = tmp_path / 'frequencies.csv'
    _table.write_text('label,mean_hz\nb1,2.3\nb2,\n', encoding='utf-8')
    assert main(['scale', str(_table), '--out', str(tmp_path / 'out'), '--fl', '200', '-q']) == 0
    assert 'derived_from_geometry' in capsys.readouterr().out
    _frame = pd.read_csv(tmp_path / 'out' / 'full_scale.csv')
    assert list(_frame['label']) == ['b1']
    assert _frame['full_scale_hz'].iloc[0] == pytest.approx(2.3 / 200 ** 0.5)


def test_peaks_writes_frequency_statistics(measurement_dir, tmp_path):
    _out = tmp_path / 'peaks'
    assert main(['peaks', os.path.join(measurement_dir, 'impulse'), '--out', str(_out), '-q']) == 0
    for _name in ('spectra/drop1.csv', 'spectra/drop1.svg', 'peaks/drop1.csv', 'peaks/drop2.csv', 'frequencies.csv'):
        assert (_out / _name).is_file()
    _statistics = pd.read_csv(_out / 'frequencies.csv')
    assert list(_statistics['label']) == ['b1', 'b2', 'b3', 't1']


def test_ssi_continues_after_a_failing_record(measurement_dir, tmp_path, defaults, capsys):
    _short = simulate(defaults.model, defaults.impulse, defaults.sensors, duration=0.5)
    write_record(_short, str(tmp_path / 'a_short.csv'))
    _good = os.path.join(measurement_dir, 'impulse', 'drop1.csv')
    _out = tmp_path / 'ssi'
    assert main(['ssi', str(tmp_path / 'a_short.csv'), _good, '--out', str(_out), '-q']) == 1
    assert 'FAILED a_short ssi' in capsys.readouterr().err
    assert (_out / 'drop1_diagram.csv').is_file()
    assert (_out / 'drop1_modes.csv').is_file()
    assert not (_out / 'a_short_diagram.csv').exists()


def test_spectrum_and_peaks_continue_after_failing_records(measurement_dir, tmp_path, make_record, rng, capsys):
    write_record(make_record(rng.normal(size=(200, 1)), sample_rate=10.0), str(tmp_path / 'slow.csv'))
    write_record(make_record(rng.normal(size=(200, 1))), str(tmp_path / 'broken.csv'))
    (tmp_path / 'broken.meta.json').write_text('[', encoding='utf-8')
    _inputs = [str(tmp_path / 'slow.csv'), str(tmp_path / 'broken.csv'), os.path.join(measurement_dir, 'impulse')]

    assert main(['spectrum', *_inputs, '--out', str(tmp_path / 'spectra'), '-q']) == 1
    _err = capsys.readouterr().err
    assert 'FAILED slow spectrum' in _err
    assert 'FAILED broken' in _err
    assert _files(tmp_path / 'spectra') == ['drop1.csv', 'drop1.svg', 'drop2.csv', 'drop2.svg']

    _out = tmp_path / 'peaks'
    assert main(['peaks', *_inputs, '--out', str(_out), '-q']) == 1
    assert 'FAILED slow peaks' in capsys.readouterr().err
    assert _files(_out / 'peaks') == ['drop1.csv', 'drop2.csv']
    assert list(pd.read_csv(_out / 'frequencies.csv')['label']) == ['b1', 'b2', 'b3', 't1']


def test_peaks_with_only_failing_records(tmp_path, make_record, rng):
    write_record(make_record(rng.normal(size=(200, 1)), sample_rate=10.0), str(tmp_path / 'slow.csv'))
    assert main(['peaks', str(tmp_path / 'slow.csv'), '--out', str(tmp_path / 'out'), '-q']) == 1
    assert not (tmp_path / 'out' / 'frequencies.csv').exists()


def test_malformed_scenario_section_exits_with_2(tmp_path, capsys):
    _scenario = _write_scenario(tmp_path, 'bad', {'model': 5})
    assert main(['simulate', _scenario, '--out', str(tmp_path), '-q']) == 2
    assert 'args: model' in capsys.readouterr().err


def test_logdec_on_servo_record(tmp_path, defaults, single_mode_model):
    _record = simulate(single_mode_model(2.263, 0.0037), defaults.servo, defaults.sensors, duration=60.0)
    write_record(_record, str(tmp_path / 'run.csv'))
    _out = tmp_path / 'decay'
    assert main(['logdec', str(tmp_path / 'run.csv'), '--out', str(_out), '-q']) == 0
    _frame = pd.read_csv(_out / 'run_b1_damping.csv')
    assert list(_frame['channel']) == ['B_az', 'C_az', 'mean']
    assert _frame['zeta'].iloc[-1] == pytest.approx(0.0037, rel=0.05)
    assert (_out / 'run_b1_damping.svg').is_file()
    assert main(['logdec', str(tmp_path / 'run.csv'), '--out', str(_out), '--mode', 'b7', '-q']) == 2


def test_free_decay_part(defaults, make_record, damped_cosine):
    _, _x = damped_cosine(2.0, 0.01, 200.0, 10.0)
    _plain = make_record(_x)
    assert free_decay_part(_plain, 2.0) is _plain
    _annotated = make_record(_x, annotations={'excitation_off_s': 4.0})
    _part = free_decay_part(_annotated, 2.0)
    assert _part.start_time == pytest.approx(5.0)
    assert _part.n_samples == 1000


@pytest.fixture(scope='module')
def lillebaelt_dir(tmp_path_factory, defaults):
    """
    Six impulse records and one servo record per mode, all at 40 dB SNR.
    """
    _root = tmp_path_factory.mktemp('lillebaelt')
    for _group in ('impulse', 'servo'):
        (_root / _group).mkdir()
    for _index in range(6):
        _sensors = [_sensor._replace(rng_seed=_sensor.rng_seed + 10 * (_index + 1)) for _sensor in defaults.sensors]
        _record = simulate(defaults.model, defaults.impulse, _sensors, duration=90.0, snr_db=40.0)
        write_record(_record, str(_root / 'impulse' / f'drop{_index + 1}.csv'))
    for _mode in defaults.model.modes:
        _servo = defaults.servo._replace(drive_frequency=_mode.frequency)
        _record = simulate(defaults.model, _servo, defaults.sensors, duration=120.0, snr_db=40.0)
        write_record(_record, str(_root / 'servo' / f'{_mode.label}_run.csv'))
    return str(_root)


@pytest.fixture(scope='module')
def lillebaelt_report(lillebaelt_dir, tmp_path_factory):
    _out = tmp_path_factory.mktemp('report')
    return main(['report', lillebaelt_dir, '--out', str(_out), '-q']), _out


def test_report_frequency_summary(lillebaelt_report, defaults):
    _code, _out = lillebaelt_report
    assert _code == 0
    _frame = pd.read_csv(_out / 'frequency_summary.csv')
    assert list(_frame['label']) == ['b1', 'b2', 'b3', 't1']
    assert not _frame['missing'].any()
    assert list(_frame['count']) == [6, 6, 6, 6]
    for _mode, _row in zip(defaults.model.modes, _frame.itertuples(index=False)):
        assert _row.mean_hz == pytest.approx(_mode.frequency, abs=0.02)
        assert _row.std_hz < 0.02
    assert list(pd.read_csv(_out / 'full_scale.csv')['label']) == ['b1', 'b2', 'b3', 't1']


def test_report_damping_summary(lillebaelt_report, defaults):
    _code, _out = lillebaelt_report
    assert _code == 0
    _frame = pd.read_csv(_out / 'damping_summary.csv')
    assert list(_frame['label']) == ['b1', 'b2', 'b3', 't1']
    assert list(_frame['record']) == ['b1_run', 'b2_run', 'b3_run', 't1_run']
    for _mode, _row in zip(defaults.model.modes, _frame.itertuples(index=False)):
        assert _row.ssi_frequency_hz == pytest.approx(_mode.frequency, rel=0.005)
        assert _row.ssi_damping == pytest.approx(_mode.damping_ratio, rel=0.2)
        if _mode.label in ('b1', 'b2'):
            # b1 and b2 share one band-pass window, so sensor B sees both
            assert 0.0 < _row.logdec_damping < 3.0 * _mode.damping_ratio
        else:
            assert _row.logdec_damping == pytest.approx(_mode.damping_ratio, rel=0.15)
    for _label in ('b1', 'b2', 'b3', 't1'):
        assert (_out / 'decay' / f'{_label}_run_{_label}_damping.svg').is_file()
        assert (_out / 'ssi' / f'{_label}_run_diagram.svg').is_file()


def test_report_is_reproducible(lillebaelt_dir, lillebaelt_report, tmp_path):
    _code, _first = lillebaelt_report
    _second = tmp_path / 'again'
    assert main(['report', lillebaelt_dir, '--out', str(_second), '-q']) == _code == 0
    assert _files(_first) == _files(_second)
    for _name in _files(_first):
        if _name.endswith('.csv'):
            assert _read_bytes(_first / _name) == _read_bytes(_second / _name)
    _report = (_first / 'report.txt').read_text(encoding='utf-8').split('\n')
    assert _report[0].startswith('omalib report generated')
    assert _report[1:] == (_second / 'report.txt').read_text(encoding='utf-8').split('\n')[1:]
    assert 'failures: 0' in _report


def test_report_skips_record_with_corrupt_sidecar(measurement_dir, tmp_path, capsys):
    _sidecar = os.path.join(measurement_dir, 'impulse', 'drop1.meta.json')
    with open(file=_sidecar, mode='wt', encoding='utf-8') as file_:
        file_.write('{"sample_rate_hz": 200,')
    assert main(['report', measurement_dir, '--out', str(tmp_path / 'out'), '-q']) == 1
    assert 'FAILED drop1' in capsys.readouterr().err
    _frame = pd.read_csv(tmp_path / 'out' / 'frequency_summary.csv')
    assert set(_frame.loc[~_frame['missing'], 'count']) == {1}
    assert (tmp_path / 'out' / 'peaks' / 'drop2.csv').is_file()
    _report = (tmp_path / 'out' / 'report.txt').read_text(encoding='utf-8')
    assert 'drop1.meta.json cannot be read.' in _report


def test_report_without_records(tmp_path):
    (tmp_path / 'empty').mkdir()
    assert main(['report', str(tmp_path / 'empty'), '--out', str(tmp_path / 'out'), '-q']) == 2
