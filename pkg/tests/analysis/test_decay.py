import logging
import math

import numpy as np
import pytest

from omalib.analysis.decay import (DecaySegment, PeakPair, bandpass,
                                   damping_frame, damping_from_decrement,
                                   detect_free_decay, estimate_damping,
                                   extract_peak_pair, filter_settle_time,
                                   log_decrement)
from omalib.exceptions.exception import (ArgsError, BandAboveNyquist,
                                         NoDecayDetected,
                                         NonPositiveAmplitude,
                                         NoUsableChannel, SegmentTooShort)
from omalib.file.records import MeasurementSet
from omalib.simulation.simulator import simulate


def _ramp_and_decay(frequency, zeta, ramp=10.0, duration=40.0, sample_rate=200.0):
    # amplitude grows linearly, then decays freely from t = ramp
    _t = np.arange(int(duration * sample_rate)) / sample_rate
    _omega = 2.0 * math.pi * frequency
    _envelope = np.where(_t < ramp, _t / ramp, np.exp(-zeta * _omega * (_t - ramp)))
    return _envelope * np.sin(_omega * math.sqrt(1.0 - zeta ** 2) * _t)


def _decrement_of(samples, frequency, n_periods, sample_rate=200.0):
    _segment = DecaySegment('ch0', 0.0, samples, sample_rate)
    return log_decrement(extract_peak_pair(_segment, frequency, n_periods))


def test_closed_form_decay_accuracy(damped_cosine):
    _, _x = damped_cosine(2.263, 0.0037, 200.0, 10.0)
    _zeta = damping_from_decrement(_decrement_of(_x, 2.263, 5))
    assert _zeta == pytest.approx(0.0037, rel=1e-3)


def test_decrement_does_not_depend_on_n(damped_cosine):
    # 100 samples per damped period: every maximum sits at the same grid offset
    _, _x = damped_cosine(2.0, 0.005, 200.0, 10.0, damped_frequency=2.0)
    _values = [_decrement_of(_x, 2.0, _n) for _n in range(1, 11)]
    _expected = 0.005 * 2.0 * math.pi * 2.0 / 2.0
    for _value in _values:
        assert _value == pytest.approx(_expected, rel=1e-6)
        assert _value == pytest.approx(_values[0], rel=1e-6)


def test_decrement_is_scale_invariant(damped_cosine, rng):
    for _ in range(100):
        _frequency = float(rng.uniform(1.0, 10.0))
        _zeta = float(rng.uniform(0.001, 0.05))
        _, _x = damped_cosine(_frequency, _zeta, 200.0, 10.0)
        _scale = 10.0 ** float(rng.uniform(-6, 6))
        _n = int(rng.integers(1, 6))
        assert _decrement_of(_scale * _x, _frequency, _n) == pytest.approx(
            _decrement_of(_x, _frequency, _n), rel=1e-9)


def test_log_decrement_errors():
    with pytest.raises(NonPositiveAmplitude):
        log_decrement(PeakPair(0.0, 1.0, 1.0, 0.0, 1))
    with pytest.raises(NonPositiveAmplitude):
        log_decrement(PeakPair(0.0, -1.0, 1.0, -2.0, 1))
    with pytest.raises(ArgsError):
        log_decrement(PeakPair(0.0, 1.0, 1.0, 1.5, 1))
    assert log_decrement(PeakPair(0.0, 1.0, 1.0, 1.0, 3)) == 0.0


def test_damping_from_decrement():
    assert damping_from_decrement(2.0 * math.pi * 0.01) == pytest.approx(0.01)
    _lambda = 0.5
    assert damping_from_decrement(_lambda, exact=True) == pytest.approx(
        _lambda / math.sqrt(4.0 * math.pi ** 2 + _lambda ** 2))
    assert damping_from_decrement(_lambda, exact=True) < damping_from_decrement(_lambda)
    with pytest.raises(ArgsError):
        damping_from_decrement(-0.1)


def test_extract_peak_pair_short_segment(damped_cosine):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 2.0)
    with pytest.raises(SegmentTooShort):
        extract_peak_pair(DecaySegment('ch0', 0.0, _x, 200.0), 2.0, n_periods=5)
    with pytest.raises(ArgsError):
        extract_peak_pair(DecaySegment('ch0', 0.0, _x, 200.0), 2.0, n_periods=0)


def test_extract_peak_pair_noise_floor(damped_cosine):
    _, _x = damped_cosine(2.0, 0.05, 200.0, 10.0)
    with pytest.raises(SegmentTooShort):
        extract_peak_pair(DecaySegment('ch0', 0.0, _x, 200.0), 2.0, n_periods=10, noise_floor_ratio=0.2)


def test_peak_pair_times(damped_cosine):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 10.0, damped_frequency=2.0)
    _pair = extract_peak_pair(DecaySegment('ch0', 3.0, _x, 200.0), 2.0, n_periods=4)
    assert _pair.t2 - _pair.t1 == pytest.approx(2.0, abs=1e-9)
    assert 3.0 < _pair.t1 < 3.6
    assert _pair.n_periods == 4


def test_detect_with_hint(make_record, damped_cosine):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 20.0)
    _record = make_record(np.column_stack([_x, _x]), start_time=10.0)
    _segments = detect_free_decay(_record, 2.0, excitation_off_hint=15.0)
    assert [_segment.channel for _segment in _segments] == ['ch0', 'ch1']
    assert _segments[0].t_start == pytest.approx(16.0)
    assert _segments[0].samples.size == 4000 - 1200


def test_detect_with_annotation(make_record, damped_cosine):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 20.0)
    _record = make_record(_x, annotations={'excitation_off_s': 5.0})
    assert detect_free_decay(_record, 2.0, settle_periods=0)[0].t_start == pytest.approx(5.0)


def test_detect_hint_errors(make_record, damped_cosine):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 10.0)
    _record = make_record(_x)
    with pytest.raises(ArgsError):
        detect_free_decay(_record, 2.0, excitation_off_hint=12.0)
    with pytest.raises(NoDecayDetected):
        detect_free_decay(_record, 2.0, excitation_off_hint=9.5)
    with pytest.raises(ArgsError):
        detect_free_decay(_record, 0.0)


def test_detect_from_envelope(make_record):
    _t = np.arange(4000) / 200.0
    _envelope = np.where(_t < 8.0, _t / 8.0, np.exp(-0.1 * (_t - 8.0)))
    _record = make_record(_envelope * np.sin(2 * np.pi * 2.0 * _t))
    _segment, = detect_free_decay(_record, 2.0)
    assert _segment.t_start == pytest.approx(8.0, abs=0.5)


def test_detect_rejects_steady_response(make_record):
    _t = np.arange(4000) / 200.0
    with pytest.raises(NoDecayDetected):
        detect_free_decay(make_record(np.sin(2 * np.pi * 2.0 * _t)), 2.0)


def test_bandpass(rng):
    _t = np.arange(8000) / 200.0
    _x = np.sin(2 * np.pi * 2.0 * _t) + np.sin(2 * np.pi * 20.0 * _t)
    _y = bandpass(_x, 200.0, (1.5, 2.5))
    _middle = slice(2000, 6000)
    np.testing.assert_allclose(_y[_middle], np.sin(2 * np.pi * 2.0 * _t)[_middle], atol=0.02)
    assert bandpass(rng.standard_normal((100, 3)), 200.0, (1.0, 3.0)).shape == (100, 3)
    with pytest.raises(ArgsError):
        bandpass(_x, 200.0, (0.0, 2.0))
    with pytest.raises(BandAboveNyquist):
        bandpass(_x, 200.0, (90.0, 110.0))


def test_filter_settle_time():
    assert filter_settle_time(0.5) == pytest.approx(8.0 / (math.sqrt(2.0) * math.pi * 0.5))
    assert filter_settle_time(0.5) == pytest.approx(3.60, abs=0.01)


def test_estimate_damping_without_hint(make_record):
    _estimate = estimate_damping(make_record(_ramp_and_decay(2.263, 0.0037)), {'label': 'b1', 'frequency': 2.263})
    assert _estimate.mean_zeta == pytest.approx(0.0037, rel=0.02)
    assert _estimate.per_channel[0].pair.t1 > 10.0 + filter_settle_time(0.5)


def test_estimate_damping_servo_bending(defaults, single_mode_model):
    _model = single_mode_model(2.263, 0.0037)
    _servo = defaults.servo._replace(drive_frequency=2.263)
    _record = simulate(_model, _servo, defaults.sensors, duration=120.0)
    _estimate = estimate_damping(
        MeasurementSet([_record, _record], label='servo', names=['s1', 's2']),
        {'label': 'b1', 'frequency': 2.263, 'kind': 'bending'},
    )
    assert [_item.channel for _item in _estimate.per_channel] == ['B_az', 'C_az', 'B_az', 'C_az']
    for _item in _estimate.per_channel:
        assert _item.pair.t1 >= 30.0 + 2 / 2.263 + filter_settle_time(0.5) - 0.01
        assert _item.zeta == pytest.approx(0.0037, rel=0.05)
    assert list(_estimate.record_means()) == ['s1', 's2']


def test_estimate_damping_servo_torsion(defaults):
    _t1 = defaults.model.mode('t1')
    _servo = defaults.servo._replace(drive_frequency=_t1.frequency)
    _record = simulate(defaults.model, _servo, defaults.sensors, duration=60.0)
    _estimate = estimate_damping(_record, {'label': 't1', 'frequency': _t1.frequency, 'kind': 'torsion'})
    assert [_item.channel for _item in _estimate.per_channel] == ['C_gx']
    assert _estimate.mean_zeta == pytest.approx(_t1.damping_ratio, rel=0.05)


def test_estimate_damping_skips_records_the_hint_does_not_fit(make_record, caplog):
    _x = _ramp_and_decay(2.263, 0.0037)
    _good = make_record(_x, annotations={'excitation_off_s': 10.0})
    _short = make_record(_x[:2000], annotations={'excitation_off_s': 30.0})
    _garbled = make_record(_x, annotations={'excitation_off_s': 'soon'})
    _set = MeasurementSet([_short, _good, _garbled], label='servo', names=['short', 'good', 'garbled'])
    with caplog.at_level(logging.WARNING, logger='omalib'):
        _estimate = estimate_damping(_set, {'label': 'b1', 'frequency': 2.263})
    assert {_item.record for _item in _estimate.per_channel} == {'good'}
    assert _estimate.mean_zeta == pytest.approx(0.0037, rel=0.05)
    assert 'short skipped' in caplog.text
    assert 'garbled skipped' in caplog.text
    with pytest.raises(NoUsableChannel) as error:
        estimate_damping([_short], {'label': 'b1', 'frequency': 2.263})
    assert 'outside the record' in error.value.failures[0]


def test_estimate_damping_failures(make_record, damped_cosine, caplog):
    _, _x = damped_cosine(2.0, 0.005, 200.0, 10.0)
    _record = make_record(_x)
    with caplog.at_level(logging.WARNING, logger='omalib'):
        with pytest.raises(NoUsableChannel) as error:
            estimate_damping(_record, {'label': 'b1', 'frequency': 2.0}, excitation_off_hint=9.9)
    assert 'skipped' in caplog.text
    assert error.value.mode_label == 'b1'
    with pytest.raises(NoUsableChannel):
        estimate_damping(_record, {'label': 't1', 'frequency': 2.0, 'kind': 'torsion'})
    with pytest.raises(ArgsError):
        estimate_damping(_record, {'label': 'x', 'frequency': 2.0, 'kind': 'lateral'})


def test_damping_frame(make_record):
    _x = _ramp_and_decay(2.263, 0.0037)
    _estimate = estimate_damping(make_record(np.column_stack([_x, 0.5 * _x])), {'label': 'b1', 'frequency': 2.263})
    _frame = damping_frame(_estimate)
    assert list(_frame.columns) == ['mode', 'record', 'channel', 't1_s', 'a1', 't2_s', 'a2',
                                    'n', 'lambda', 'zeta']
    assert list(_frame['channel']) == ['ch0', 'ch1', 'mean']
    assert _frame['zeta'].iloc[-1] == pytest.approx(_frame['zeta'].iloc[:2].mean())
