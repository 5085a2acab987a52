"""
Command line interface.

    omalib simulate [SCENARIO] --out DIR [--seed N]
    omalib spectrum RECORD... --out DIR [--band LO,HI]
    omalib peaks RECORD... --out DIR [--band LO,HI]
    omalib ssi RECORD... --out DIR [--orders MIN,MAX,STEP]
    omalib logdec RECORD... --out DIR [--n-periods N] [--mode LABEL]
    omalib scale [TABLE] --out DIR [--fl X | --ff X]
    omalib report DIR --out DIR

Every sub-command accepts --config PATH (JSON); its keys override flags.
"""

import argparse
import datetime
import json
import logging
import math
import os
import sys
from collections.abc import Mapping, Sequence
from typing import Literal, TypedDict

import pandas as pd

from omalib.analysis.decay import (SETTLE_PERIODS, bandpass,
                                   damping_frame, estimate_damping)
from omalib.analysis.similitude import (ScalingLaw, compare_to_reference,
                                        load_full_scale_reference,
                                        scale_frame, to_full_scale,
                                        transfer_damping)
from omalib.analysis.spectral import (aggregate_frequencies,
                                      compute_spectrum, peaks_frame,
                                      pick_peaks, spectrum_frame,
                                      statistics_frame)
from omalib.analysis.ssi import (StabilityCriteria,
                                 build_stabilization_diagram,
                                 cluster_stable_poles, diagram_frame,
                                 estimate_covariances, modal_result_frame)
from omalib.exceptions.exception import ArgsError, NoRecords, OmaError
from omalib.file.handler import ensure_directory, find_records, require_file, write_table
from omalib.file.records import TimeSeriesRecord, read_record, slice_time, write_record
from omalib.file.svg import plot_decay, plot_spectrum, plot_stabilization_diagram
from omalib.py.generic import parse_orders, parse_pair
from omalib.simulation.simulator import (load_scenario, run_scenario,
                                         scenario_from_mapping)

logger = logging.getLogger(__name__)

AnalysisKind = Literal['simulate', 'spectrum', 'peaks', 'ssi', 'logdec', 'scale', 'report']


class ModeTarget(TypedDict):
    label: str
    frequency: float
    kind: Literal['bending', 'torsion']


class AnalysisConfig(TypedDict):
    kind: AnalysisKind
    inputs: list[str]
    out: str
    seed: int | None
    band: tuple[float, float]
    orders: list[int]
    n_periods: int
    fl: float | None
    ff: float | None
    window: Literal['rectangular', 'hann']
    min_prominence: float
    max_peaks: int
    match_tolerance: float
    hankel_rows: int
    max_lag: int | None
    normalization: Literal['unbiased', 'biased'] | None
    min_support: int
    freq_gap: float
    band_halfwidth: float
    exact: bool
    mode: str | None
    modes: list[ModeTarget]


def _default_modes() -> list[ModeTarget]:
    _scenario = scenario_from_mapping({})
    return [
        ModeTarget(label=_mode.label, frequency=_mode.frequency, kind=_mode.kind)
        for _mode in _scenario.model.modes
    ]


def default_config(kind: AnalysisKind) -> AnalysisConfig:
    """
    ## Summary
    Settings used when neither flags nor the config file give a value.
    """
    return AnalysisConfig(
        kind=kind,
        inputs=[],
        out='.',
        seed=None,
        band=(1.0, 9.0),
        orders=list(range(2, 41, 2)),
        n_periods=5,
        fl=None,
        ff=None,
        window='rectangular',
        min_prominence=0.05,
        max_peaks=10,
        match_tolerance=0.15,
        hankel_rows=40,
        max_lag=None,
        normalization=None,
        min_support=5,
        freq_gap=0.05,
        band_halfwidth=0.5,
        exact=False,
        mode=None,
        modes=_default_modes(),
    )


def _config_value(key: str, value):
    # config-file values may be given as in the flags or as JSON lists
    if key == 'band':
        if isinstance(value, str):
            return parse_pair(value, argument_name='band')
        if isinstance(value, list) and len(value) == 2:
            return parse_pair(f'{value[0]},{value[1]}', argument_name='band')
        raise ArgsError(argument_name='config.band', add='Expected "LO,HI" or [LO, HI].')
    if key == 'orders':
        if isinstance(value, str):
            return parse_orders(value)
        if isinstance(value, list) and all(isinstance(_item, int) for _item in value):
            return parse_orders(','.join(str(_item) for _item in value)) if len(value) == 3 else value
        raise ArgsError(argument_name='config.orders', add='Expected "MIN,MAX,STEP" or a list.')
    if key == 'modes':
        if not isinstance(value, list) or not value:
            raise ArgsError(argument_name='config.modes', add='Expected a non-empty list.')
        _modes = []
        for _index, _mode in enumerate(value):
            try:
                _modes.append(ModeTarget(
                    label=str(_mode['label']),
                    frequency=float(_mode.get('frequency_hz', _mode.get('frequency'))),
                    kind=_mode.get('kind', 'bending'),
                ))
            except (KeyError, AttributeError, TypeError, ValueError) as error:
                raise ArgsError(argument_name=f'config.modes[{_index}]', add=str(error)) from error
        return _modes
    return value


def resolve_config(args: argparse.Namespace) -> AnalysisConfig:
    """
    ## Summary
    Merge defaults, command-line flags and the --config file, in that order.
    """
    _config = default_config(args.command)
    _inputs = getattr(args, 'inputs', None)
    _config['inputs'] = [_inputs] if isinstance(_inputs, str) else list(_inputs or [])
    _flags = {
        'out': args.out,
        'seed': args.seed,
        'band': parse_pair(args.band, argument_name='band') if args.band else None,
        'orders': parse_orders(args.orders) if args.orders else None,
        'n_periods': args.n_periods,
        'fl': args.fl,
        'ff': args.ff,
        'window': getattr(args, 'window', None),
        'mode': getattr(args, 'mode', None),
    }
    for _key, _value in _flags.items():
        if _value is not None:
            _config[_key] = _value
    if args.config:
        with open(file=require_file(args.config), mode='rt', encoding='utf-8') as file_:
            try:
                _overrides = json.load(file_)
            except json.JSONDecodeError as error:
                raise ArgsError(argument_name='config', add=f'Invalid JSON: {error}') from error
        if not isinstance(_overrides, Mapping):
            raise ArgsError(argument_name='config', add='Expected a JSON object.')
        for _key, _value in _overrides.items():
            _name = _key.replace('-', '_')
            if _name not in _config or _name == 'kind':
                raise ArgsError(argument_name=f'config.{_key}', add='Unknown setting.')
            _config[_name] = _config_value(_name, _value)
    if _config['n_periods'] < 1:
        raise ArgsError(argument_name='n_periods', add='Must be at least 1.')
    return _config


def _record_name(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _read_inputs(config: AnalysisConfig, failures: list[str]) -> list[tuple[str, TimeSeriesRecord]]:
    # a missing path stops the command; a record that cannot be read is a failure
    if not config['inputs']:
        raise NoRecords(location='command line')
    _paths = []
    for _path in config['inputs']:
        if os.path.isdir(_path):
            _paths.extend(find_records(_path))
        else:
            _paths.append(require_file(_path))
    if not _paths:
        raise NoRecords(location=', '.join(config['inputs']))
    _records = []
    for _path in _paths:
        try:
            _records.append((_record_name(_path), read_record(_path)))
        except OmaError as error:
            logger.error('%s: %s', _path, error)
            failures.append(f'{_record_name(_path)}: {error}')
    return _records


def _finish(failures: list[str]) -> int:
    for _failure in failures:
        print(f'FAILED {_failure}', file=sys.stderr)
    return 1 if failures else 0


def _configured_mode(config: AnalysisConfig) -> ModeTarget | None:
    if config['mode'] is None:
        return None
    for _mode in config['modes']:
        if _mode['label'] == config['mode']:
            return _mode
    raise ArgsError(argument_name='mode', add=f'{config["mode"]} is not a configured mode.')


def _target_mode(record: TimeSeriesRecord, config: AnalysisConfig) -> ModeTarget | None:
    _configured = _configured_mode(config)
    if _configured is not None:
        return _configured
    _drive = record.annotations.get('drive_frequency_hz')
    if _drive in (None, ''):
        return None
    try:
        _frequency = float(_drive)
    except ValueError as error:
        raise ArgsError(argument_name='annotations.drive_frequency_hz', add=f'"{_drive}" is not a number.') from error
    return min(config['modes'], key=lambda _mode: abs(_mode['frequency'] - _frequency))


def free_decay_part(record: TimeSeriesRecord, frequency: float) -> TimeSeriesRecord:
    """
    ## Summary
    The record from SETTLE_PERIODS periods after "excitation_off_s" to its
    end; the whole record when it is not annotated.
    """
    _off = record.annotations.get('excitation_off_s')
    if _off in (None, ''):
        return record
    try:
        _off = float(_off)
    except ValueError as error:
        raise ArgsError(argument_name='annotations.excitation_off_s', add=f'"{_off}" is not a number.') from error
    return slice_time(
        record,
        _off + SETTLE_PERIODS / frequency,
        record.start_time + record.duration,
    )


def _spectrum_outputs(name: str, record: TimeSeriesRecord, config: AnalysisConfig,
                      spectra_dir: str, peaks_dir: str | None):
    _spectrum = compute_spectrum(record, window=config['window'], band=config['band'])
    write_table(spectrum_frame(_spectrum), os.path.join(spectra_dir, f'{name}.csv'))
    _peaks = None
    if peaks_dir is not None:
        _peaks = pick_peaks(
            _spectrum, band=config['band'],
            min_prominence=config['min_prominence'], max_peaks=config['max_peaks'],
        )
        write_table(peaks_frame(_peaks), os.path.join(peaks_dir, f'{name}.csv'))
    plot_spectrum(_spectrum, os.path.join(spectra_dir, f'{name}.svg'), band=config['band'], peaks=_peaks)
    return _spectrum, _peaks


def _ssi_outputs(name: str, record: TimeSeriesRecord, config: AnalysisConfig, ssi_dir: str):
    _normalization = config['normalization']
    if _normalization is None:
        _normalization = 'biased' if 'excitation_off_s' in record.annotations else 'unbiased'
    _max_lag = config['max_lag'] or 2 * config['hankel_rows']
    _cov = estimate_covariances(record, _max_lag, normalization=_normalization)
    _diagram = build_stabilization_diagram(
        _cov, orders=config['orders'], hankel_rows=config['hankel_rows'], criteria=StabilityCriteria(),
    )
    _result = cluster_stable_poles(
        _diagram, min_support=config['min_support'], freq_gap=config['freq_gap'],
        mode_labels=config['modes'], label_tolerance=config['match_tolerance'],
    )
    write_table(diagram_frame(_diagram), os.path.join(ssi_dir, f'{name}_diagram.csv'))
    write_table(modal_result_frame(_result, _cov.channel_ids), os.path.join(ssi_dir, f'{name}_modes.csv'))
    plot_stabilization_diagram(_diagram, os.path.join(ssi_dir, f'{name}_diagram.svg'), band=config['band'])
    return _diagram, _result


def _logdec_outputs(name: str, record: TimeSeriesRecord, mode: ModeTarget,
                    config: AnalysisConfig, decay_dir: str):
    _estimate = estimate_damping(
        record, mode,
        n_periods=config['n_periods'],
        band_halfwidth=config['band_halfwidth'],
        exact=config['exact'],
    )
    _stem = f'{name}_{mode["label"]}_damping'
    write_table(damping_frame(_estimate), os.path.join(decay_dir, f'{_stem}.csv'))
    _first = _estimate.per_channel[0]
    _band = (mode['frequency'] - config['band_halfwidth'], mode['frequency'] + config['band_halfwidth'])
    _filtered = bandpass(record.channel(_first.channel), record.sample_rate, _band)
    _keep = record.time >= _first.pair.t1 - 1.0 / mode['frequency']
    plot_decay(
        record.time[_keep], _filtered[_keep], os.path.join(decay_dir, f'{_stem}.svg'),
        pair=_first.pair, decrement=_first.decrement, frequency=mode['frequency'],
        title=f'Free decay {name} {_first.channel} ({mode["label"]})',
    )
    return _estimate


def cmd_simulate(config: AnalysisConfig) -> int:
    """
    ## Summary
    Simulate a scenario (JSON file, or the default impulse test) into a
    record + sidecar under --out.
    """
    if config['inputs']:
        _scenario, _raw = load_scenario(config['inputs'][0])
        _name = _record_name(config['inputs'][0])
    else:
        _raw = {}
        _scenario = scenario_from_mapping(_raw)
        _name = 'simulated'
    if config['seed'] is not None:
        _raw = {**_raw, 'seed': config['seed']}
        _scenario = scenario_from_mapping(_raw)
    _record = run_scenario(_scenario, annotations={'scenario': json.dumps(_raw, sort_keys=True)})
    _path = os.path.join(ensure_directory(config['out']), f'{_name}.csv')
    write_record(_record, _path)
    logger.info('record written: %s (%d channels, %g Hz)', _path, _record.n_channels, _record.sample_rate)
    return 0


def cmd_spectrum(config: AnalysisConfig) -> int:
    """
    ## Summary
    Normalized spectrum CSV and SVG per record.
    """
    _out = ensure_directory(config['out'])
    _failures: list[str] = []
    for _name, _record in _read_inputs(config, _failures):
        try:
            _spectrum_outputs(_name, _record, config, _out, None)
        except OmaError as error:
            logger.error('%s spectrum: %s', _name, error)
            _failures.append(f'{_name} spectrum: {error}')
    return _finish(_failures)


def cmd_peaks(config: AnalysisConfig) -> int:
    """
    ## Summary
    Peaks per record under peaks/, spectra under spectra/ and, over all
    records, the frequency statistics.
    """
    _out = ensure_directory(config['out'])
    _spectra_dir = ensure_directory(os.path.join(_out, 'spectra'))
    _peaks_dir = ensure_directory(os.path.join(_out, 'peaks'))
    _failures: list[str] = []
    _peak_sets = []
    for _name, _record in _read_inputs(config, _failures):
        try:
            _, _peaks = _spectrum_outputs(_name, _record, config, _spectra_dir, _peaks_dir)
        except OmaError as error:
            logger.error('%s peaks: %s', _name, error)
            _failures.append(f'{_name} peaks: {error}')
            continue
        _peak_sets.append(_peaks)
    if _peak_sets:
        _statistics = aggregate_frequencies(
            _peak_sets, config['modes'], match_tolerance=config['match_tolerance'], per_set='strongest',
        )
        write_table(statistics_frame(_statistics), os.path.join(_out, 'frequencies.csv'))
    return _finish(_failures)


def cmd_ssi(config: AnalysisConfig) -> int:
    """
    ## Summary
    Stabilization diagram and clustered modes per record (free-decay part
    when the record is annotated with excitation_off_s).
    """
    _out = ensure_directory(config['out'])
    _configured_mode(config)
    _lowest = min(_mode['frequency'] for _mode in config['modes'])
    _failures: list[str] = []
    for _name, _record in _read_inputs(config, _failures):
        try:
            _target = _target_mode(_record, config)
            _frequency = _target['frequency'] if _target else _lowest
            _, _result = _ssi_outputs(_name, free_decay_part(_record, _frequency), config, _out)
        except OmaError as error:
            logger.error('%s ssi: %s', _name, error)
            _failures.append(f'{_name} ssi: {error}')
            continue
        for _mode in _result:
            logger.info('%s %s: %.4f Hz, zeta %.5f (%d poles)',
                        _name, _mode.label, _mode.frequency, _mode.damping_ratio, _mode.support)
    return _finish(_failures)


def cmd_logdec(config: AnalysisConfig) -> int:
    """
    ## Summary
    Log-decrement damping per record of the driven mode (--mode or the
    mode nearest drive_frequency_hz; every configured mode otherwise).
    """
    _out = ensure_directory(config['out'])
    _configured_mode(config)
    _failures: list[str] = []
    for _name, _record in _read_inputs(config, _failures):
        try:
            _target = _target_mode(_record, config)
        except OmaError as error:
            logger.error('%s: %s', _name, error)
            _failures.append(f'{_name}: {error}')
            continue
        for _mode in [_target] if _target else config['modes']:
            try:
                _logdec_outputs(_name, _record, _mode, config, _out)
            except OmaError as error:
                logger.error('%s %s: %s', _name, _mode['label'], error)
                _failures.append(f'{_name} {_mode["label"]}: {error}')
    return _finish(_failures)


def _scaling_law(config: AnalysisConfig, reference: Mapping) -> ScalingLaw:
    if config['ff'] is not None:
        return ScalingLaw.stated(config['ff'], config['fl'] or reference['geometry_factor'])
    if config['fl'] is not None:
        return ScalingLaw.from_geometry(config['fl'])
    return ScalingLaw.stated(reference['stated_frequency_factor'], reference['geometry_factor'])


def _model_frequencies(config: AnalysisConfig) -> list[dict]:
    if not config['inputs']:
        return [{'label': _mode['label'], 'frequency': _mode['frequency']} for _mode in config['modes']]
    _frame = pd.read_csv(require_file(config['inputs'][0]))
    _column = 'mean_hz' if 'mean_hz' in _frame.columns else 'frequency_hz'
    if 'label' not in _frame.columns or _column not in _frame.columns:
        raise ArgsError(argument_name='TABLE', add='Needs columns label and mean_hz (or frequency_hz).')
    _frame = _frame.dropna(subset=[_column])
    return [{'label': str(_label), 'frequency': float(_value)}
            for _label, _value in zip(_frame['label'], _frame[_column])]


def cmd_scale(config: AnalysisConfig) -> int:
    """
    ## Summary
    Full-scale frequencies and comparison with the real bridge.
    """
    _out = ensure_directory(config['out'])
    _reference = load_full_scale_reference()
    _law = _scaling_law(config, _reference)
    _frame = scale_frame(_model_frequencies(config), _law, _reference['frequencies_hz'])
    write_table(_frame, os.path.join(_out, 'full_scale.csv'))
    for _line in _format_scale(_frame, _law):
        print(_line)
    return 0


def _format_scale(frame: pd.DataFrame, law: ScalingLaw) -> list[str]:
    _lines = [f'frequency factor {law.frequency_factor:g} ({law.factor_source})']
    if law.derived_factor is not None:
        _lines.append(f'derived 1/sqrt(F_l) = {law.derived_factor:.6f}, discrepancy {law.discrepancy:+.2%}')
    _lines.append(f'{"mode":<6}{"model Hz":>10}{"full Hz":>10}{"bridge Hz":>11}{"diff":>9}')
    for _row in frame.itertuples(index=False):
        _reference = '' if math.isnan(_row.reference_hz) else f'{_row.reference_hz:.3f}'
        _diff = '' if math.isnan(_row.rel_diff) else f'{_row.rel_diff:+.1%}'
        _lines.append(
            f'{_row.label:<6}{_row.model_hz:>10.3f}{round(_row.full_scale_hz, 3):>10.3f}'
            f'{_reference:>11}{_diff:>9}'
        )
    return _lines


def _group_of(path: str, record: TimeSeriesRecord) -> str | None:
    _kind = record.annotations.get('excitation_kind', '')
    if _kind.startswith('impulse'):
        return 'impulse'
    if _kind.startswith('servo'):
        return 'servo'
    _parts = os.path.normpath(path).split(os.sep)
    for _group in ('impulse', 'servo'):
        if _group in _parts[:-1]:
            return _group
    return None


def _percent(value: float) -> str:
    return '' if value is None or math.isnan(value) else f'{value * 100:.2f} %'


def cmd_report(config: AnalysisConfig) -> int:
    """
    ## Summary
    Frequencies from the impulse records, SSI and log-decrement damping from
    the servo records, full-scale comparison; tables, figures, report.txt.
    """
    if len(config['inputs']) != 1:
        raise ArgsError(argument_name='DIR', add='Give exactly one measurement directory.')
    _paths = find_records(config['inputs'][0], recursive=True)
    if not _paths:
        raise NoRecords(location=config['inputs'][0])
    _out = ensure_directory(config['out'])
    _dirs = {_sub: ensure_directory(os.path.join(_out, _sub)) for _sub in ('peaks', 'spectra', 'ssi', 'decay')}
    _failures: list[str] = []

    _groups: dict[str, list[tuple[str, TimeSeriesRecord]]] = {'impulse': [], 'servo': []}
    for _path in _paths:
        _name = _record_name(_path)
        try:
            _record = read_record(_path)
        except OmaError as error:
            logger.error('%s: %s', _path, error)
            _failures.append(f'{_name}: {error}')
            continue
        _group = _group_of(_path, _record)
        if _group is None:
            logger.warning('%s: neither an impulse nor a servo record, skipped', _path)
            continue
        _groups[_group].append((_name, _record))

    _peak_sets = []
    for _name, _record in _groups['impulse']:
        try:
            _, _peaks = _spectrum_outputs(_name, _record, config, _dirs['spectra'], _dirs['peaks'])
            _peak_sets.append(_peaks)
        except OmaError as error:
            logger.error('%s spectrum: %s', _name, error)
            _failures.append(f'{_name} spectrum: {error}')
    _frequencies = None
    if _peak_sets:
        _statistics = aggregate_frequencies(
            _peak_sets, config['modes'], match_tolerance=config['match_tolerance'], per_set='strongest',
        )
        _frequencies = statistics_frame(_statistics)
        write_table(_frequencies, os.path.join(_out, 'frequency_summary.csv'))

    _damping_rows = []
    for _name, _record in _groups['servo']:
        try:
            _mode = _target_mode(_record, {**config, 'mode': None})
        except OmaError as error:
            logger.error('%s: %s', _name, error)
            _failures.append(f'{_name}: {error}')
            continue
        if _mode is None:
            _failures.append(f'{_name}: no drive_frequency_hz annotation')
            continue
        _row = {'label': _mode['label'], 'record': _name, 'nominal_hz': _mode['frequency'],
                'ssi_frequency_hz': math.nan, 'ssi_damping': math.nan, 'logdec_damping': math.nan}
        try:
            _, _result = _ssi_outputs(_name, free_decay_part(_record, _mode['frequency']), config, _dirs['ssi'])
            _found = _result.nearest(_mode['frequency'])
            if _found is not None and abs(_found.frequency - _mode['frequency']) <= config['match_tolerance']:
                _row['ssi_frequency_hz'] = _found.frequency
                _row['ssi_damping'] = _found.damping_ratio
            else:
                _failures.append(f'{_name} ssi: no stable mode near {_mode["frequency"]} Hz')
        except OmaError as error:
            logger.error('%s ssi: %s', _name, error)
            _failures.append(f'{_name} ssi: {error}')
        try:
            _estimate = _logdec_outputs(_name, _record, _mode, config, _dirs['decay'])
            _row['logdec_damping'] = _estimate.mean_zeta
        except OmaError as error:
            logger.error('%s logdec: %s', _name, error)
            _failures.append(f'{_name} logdec: {error}')
        _damping_rows.append(_row)
    _damping = pd.DataFrame(
        _damping_rows,
        columns=['label', 'record', 'nominal_hz', 'ssi_frequency_hz', 'ssi_damping', 'logdec_damping'],
    )
    if _damping_rows:
        write_table(_damping, os.path.join(_out, 'damping_summary.csv'))

    _full_scale = None
    _reference = load_full_scale_reference()
    _law = _scaling_law(config, _reference)
    if _frequencies is not None:
        _measured = [
            {'label': _row.label, 'frequency': _row.mean_hz}
            for _row in _frequencies.itertuples(index=False) if not _row.missing
        ]
        if _measured:
            _full_scale = scale_frame(_measured, _law, _reference['frequencies_hz'])
            write_table(_full_scale, os.path.join(_out, 'full_scale.csv'))

    _lines = [f'omalib report generated {datetime.datetime.now().isoformat(timespec="seconds")}']
    _lines.extend(_report_body(config, _frequencies, _damping, _full_scale, _law, _failures))
    with open(file=os.path.join(_out, 'report.txt'), mode='wt', encoding='utf-8', newline='\n') as file_:
        file_.write('\n'.join(_lines) + '\n')
    return _finish(_failures)


def _report_body(config, frequencies, damping, full_scale, law, failures) -> list[str]:
    _lines = [f'input: {os.path.normpath(config["inputs"][0])}', '', 'Natural frequencies (impulse)']
    if frequencies is None:
        _lines.append('  no impulse records')
    else:
        for _row in frequencies.itertuples(index=False):
            _mean = 'missing' if _row.missing else f'{_row.mean_hz:.3f} Hz +/- {_row.std_hz:.3f} Hz'
            _lines.append(f'  {_row.label:<4} {_mean} (n = {_row.count})')
    _lines.extend(['', 'Damping ratios (servo free decay)'])
    if damping.empty:
        _lines.append('  no servo records')
    for _row in damping.itertuples(index=False):
        _transferred = '' if math.isnan(_row.logdec_damping) else \
            f', full scale {_percent(transfer_damping(_row.logdec_damping)["value"])} (uncalibrated)'
        _lines.append(
            f'  {_row.label:<4} {_row.record}: SSI {_percent(_row.ssi_damping) or "-"}, '
            f'log decrement {_percent(_row.logdec_damping) or "-"}{_transferred}'
        )
    _lines.extend(['', 'Full scale'])
    if full_scale is None:
        _lines.append('  nothing to scale')
    else:
        _lines.extend(f'  {_line}' for _line in _format_scale(full_scale, law))
        _reference = [{'label': _row.label, 'frequency': _row.reference_hz}
                      for _row in full_scale.itertuples(index=False) if not math.isnan(_row.reference_hz)]
        _scaled = [{'label': _row.label, 'frequency': round(to_full_scale(_row.model_hz, law), 3)}
                   for _row in full_scale.itertuples(index=False) if not math.isnan(_row.reference_hz)]
        if _reference:
            for _label, _diff in compare_to_reference(_scaled, _reference).items():
                _lines.append(f'  {_label}: {_diff["absolute_diff"]:+.3f} Hz ({_diff["relative_diff"]:+.2%})')
    _lines.extend(['', f'failures: {len(failures)}'])
    _lines.extend(f'  {_failure}' for _failure in failures)
    return _lines


_COMMANDS = {
    'simulate': cmd_simulate,
    'spectrum': cmd_spectrum,
    'peaks': cmd_peaks,
    'ssi': cmd_ssi,
    'logdec': cmd_logdec,
    'scale': cmd_scale,
    'report': cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    """
    ## Summary
    argparse parser with one sub-command per analysis.
    """
    _common = argparse.ArgumentParser(add_help=False)
    _common.add_argument('--out', help='output directory (default: current directory)')
    _common.add_argument('--seed', type=int, help='random seed (simulate)')
    _common.add_argument('--band', help='frequency band LO,HI in Hz (default 1,9)')
    _common.add_argument('--orders', help='model orders MIN,MAX,STEP (default 2,40,2)')
    _common.add_argument('--n-periods', type=int, dest='n_periods', help='periods between maxima (default 5)')
    _law = _common.add_mutually_exclusive_group()
    _law.add_argument('--fl', type=float, help='geometry scale factor')
    _law.add_argument('--ff', type=float, help='stated frequency scale factor')
    _common.add_argument('--config', help='JSON file whose keys override the flags')
    _verbosity = _common.add_mutually_exclusive_group()
    _verbosity.add_argument('--verbose', '-v', action='store_true')
    _verbosity.add_argument('--quiet', '-q', action='store_true')

    _parser = argparse.ArgumentParser(prog='omalib', description='Operational modal analysis of scale-model records.')
    _sub = _parser.add_subparsers(dest='command', required=True)
    _sub.add_parser('simulate', parents=[_common], help='simulate a scenario') \
        .add_argument('inputs', nargs='?', metavar='SCENARIO')
    for _name, _help in (('spectrum', 'normalized amplitude spectra'),
                         ('peaks', 'spectral peaks and frequency statistics'),
                         ('ssi', 'covariance-driven subspace identification'),
                         ('logdec', 'log-decrement damping')):
        _command = _sub.add_parser(_name, parents=[_common], help=_help)
        _command.add_argument('inputs', nargs='+', metavar='RECORD')
        if _name in ('spectrum', 'peaks'):
            _command.add_argument('--window', choices=['rectangular', 'hann'])
        if _name in ('ssi', 'logdec'):
            _command.add_argument('--mode', help='mode label to analyse')
    _sub.add_parser('scale', parents=[_common], help='full-scale frequencies') \
        .add_argument('inputs', nargs='?', metavar='TABLE')
    _sub.add_parser('report', parents=[_common], help='complete report of a measurement directory') \
        .add_argument('inputs', nargs=1, metavar='DIR')
    return _parser


def _configure_logging(args: argparse.Namespace) -> None:
    _level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    _root = logging.getLogger('omalib')
    _root.handlers[:] = [_handler]
    _root.setLevel(_level)


def main(argv: Sequence[str] | None = None) -> int:
    """
    ## Summary
    Entry point of the omalib console script.

    ## Returns:
    - int: 0 on success, 1 when a stage failed on some record, 2 when the
        command could not run.
    """
    _args = build_parser().parse_args(argv)
    _configure_logging(_args)
    try:
        _config = resolve_config(_args)
        return _COMMANDS[_config['kind']](_config)
    except OmaError as error:
        logger.error('%s', error)
        print(f'error: {error}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
