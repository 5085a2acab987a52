import logging
import math

import numpy as np
import pytest

from omalib.analysis.spectral import (Peak, PeakSet, aggregate_frequencies,
                                      check_nyquist, compute_spectrum,
                                      peaks_frame, pick_peaks,
                                      spectral_energy, spectrum_frame,
                                      statistics_frame)
from omalib.exceptions.exception import (ArgsError, BandAboveNyquist,
                                         DegenerateSignal, EmptyBand)
from omalib.simulation.simulator import ExcitationSpec, simulate


def test_nyquist_for_model_sensors():
    _verdict = check_nyquist(200.0, 8.0)
    assert _verdict.verdict == 'ok'
    assert _verdict.minimum_rate == 16.0
    assert _verdict.ok


def test_nyquist_boundary_and_undersampling(caplog):
    assert check_nyquist(16.0, 8.0).ok
    with caplog.at_level(logging.WARNING, logger='omalib'):
        _verdict = check_nyquist(15.0, 8.0)
    assert _verdict.verdict == 'undersampled'
    assert 'below the minimum' in caplog.text


@pytest.mark.parametrize('rate, f_max', [(0.0, 8.0), (200.0, 0.0), (-1.0, 8.0)])
def test_nyquist_rejects_non_positive(rate, f_max):
    with pytest.raises(ArgsError):
        check_nyquist(rate, f_max)


def test_spectrum_normalization_and_resolution(make_record):
    _t = np.arange(3000) / 200.0
    _record = make_record(np.column_stack([
        3.0 * np.sin(2 * np.pi * 2.5 * _t),
        0.01 * np.sin(2 * np.pi * 6.0 * _t) + 0.001 * np.sin(2 * np.pi * 3.0 * _t),
    ]))
    _spectrum = compute_spectrum(_record, band=(1.0, 9.0))
    assert _spectrum.padded_length == 4096
    assert _spectrum.resolution == pytest.approx(200.0 / 4096)
    _in_band = (_spectrum.frequencies >= 1.0) & (_spectrum.frequencies <= 9.0)
    np.testing.assert_allclose(_spectrum.magnitudes[_in_band].max(axis=0), [1.0, 1.0])
    assert _spectrum.frequencies[np.argmax(_spectrum.channel('ch1'))] == pytest.approx(6.0, abs=0.05)


def test_spectrum_parseval(make_record, rng):
    _samples = rng.standard_normal((1000, 2))
    _spectrum = compute_spectrum(make_record(_samples), zero_pad_to=1000)
    np.testing.assert_allclose(
        spectral_energy(_spectrum.raw_magnitudes, _spectrum.padded_length),
        (_samples ** 2).sum(axis=0),
        rtol=1e-10,
    )


def test_spectrum_errors(make_record):
    _record = make_record(np.ones((100, 1)) * np.sin(np.arange(100))[:, None])
    with pytest.raises(BandAboveNyquist):
        compute_spectrum(_record, band=(1.0, 120.0))
    with pytest.raises(ArgsError):
        compute_spectrum(_record, zero_pad_to=50)
    with pytest.raises(ArgsError):
        compute_spectrum(_record, window='flattop')
    with pytest.raises(DegenerateSignal):
        compute_spectrum(make_record(np.zeros(100)))
    with pytest.raises(EmptyBand):
        compute_spectrum(_record, band=(1.0, 1.001), zero_pad_to=100)


def test_hann_window_is_accepted(make_record):
    _t = np.arange(2000) / 200.0
    _spectrum = compute_spectrum(make_record(np.sin(2 * np.pi * 4.0 * _t)), window='hann', band=(1.0, 9.0))
    assert _spectrum.window == 'hann'
    _peaks = pick_peaks(_spectrum, band=(1.0, 9.0))
    assert _peaks.frequencies == pytest.approx([4.0], abs=0.01)


def test_pick_peaks_within_half_a_bin(make_record):
    _t = np.arange(4000) / 200.0
    _record = make_record(np.sin(2 * np.pi * 2.263 * _t) + 0.5 * np.sin(2 * np.pi * 7.906 * _t))
    _spectrum = compute_spectrum(_record, band=(1.0, 9.0))
    _peaks = pick_peaks(_spectrum, band=(1.0, 9.0), min_prominence=0.3)
    assert len(_peaks) == 2
    assert _peaks.frequencies == pytest.approx([2.263, 7.906], abs=0.5 * _spectrum.resolution)
    assert all(0 < _peak.magnitude <= 1 for _peak in _peaks)


def test_pick_peaks_limits(make_record):
    _t = np.arange(4000) / 200.0
    _x = sum(_amplitude * np.sin(2 * np.pi * _f * _t) for _f, _amplitude in ((2, 1.0), (4, 0.8), (6, 0.6)))
    _spectrum = compute_spectrum(make_record(_x), band=(1.0, 9.0))
    _peaks = pick_peaks(_spectrum, band=(1.0, 9.0), min_prominence=0.3, max_peaks=2)
    assert _peaks.frequencies == pytest.approx([2.0, 4.0], abs=0.02)
    with pytest.raises(ArgsError):
        pick_peaks(_spectrum, band=(1.0, 9.0), min_prominence=1.0)
    with pytest.raises(ArgsError):
        pick_peaks(_spectrum, band=(1.0, 9.0), max_peaks=0)
    with pytest.raises(EmptyBand):
        pick_peaks(_spectrum, band=(1.0, 1.01))


def test_peak_set_validates_members():
    with pytest.raises(ArgsError):
        PeakSet([Peak(10.0, 0.5, 'a')], band=(1.0, 9.0))
    with pytest.raises(ArgsError):
        PeakSet([Peak(2.0, 1.5, 'a')], band=(1.0, 9.0))


_LABELS = [
    {'label': 'b2', 'frequency': 2.085},
    {'label': 'b1', 'frequency': 2.263},
    {'label': 'b3', 'frequency': 3.752},
    {'label': 't1', 'frequency': 7.906},
]


def test_aggregate_mean_and_sample_std():
    _sets = [
        PeakSet([Peak(2.25, 1.0, 'a'), Peak(3.75, 0.5, 'a')], (1.0, 9.0)),
        PeakSet([Peak(2.27, 1.0, 'a'), Peak(3.76, 0.5, 'a')], (1.0, 9.0)),
    ]
    _statistics = aggregate_frequencies(_sets, _LABELS)
    _b1 = _statistics.get('b1')
    assert _b1['mean'] == pytest.approx(2.26)
    assert _b1['std_dev'] == pytest.approx(math.sqrt(2 * 0.01 ** 2))
    assert _b1['count'] == 2
    assert _statistics.get('b3')['mean'] == pytest.approx(3.755)
    assert set(_statistics.missing_labels) == {'b2', 't1'}


def test_aggregate_single_value_has_zero_std():
    _statistics = aggregate_frequencies([PeakSet([Peak(7.9, 1.0, 'a')], (1.0, 9.0))], _LABELS)
    assert _statistics.get('t1')['std_dev'] == 0.0


def test_aggregate_missing_label_is_logged(caplog):
    with caplog.at_level(logging.WARNING, logger='omalib'):
        _statistics = aggregate_frequencies([PeakSet([Peak(2.26, 1.0, 'a')], (1.0, 9.0))], _LABELS)
    _t1 = _statistics.get('t1')
    assert _t1['missing'] and _t1['count'] == 0 and math.isnan(_t1['mean'])
    assert 'no peak matched t1' in caplog.text


def test_aggregate_strongest_keeps_one_peak_per_set():
    _set = PeakSet([Peak(2.25, 0.4, 'a'), Peak(2.27, 1.0, 'b')], (1.0, 9.0))
    assert aggregate_frequencies([_set], _LABELS).get('b1')['count'] == 2
    _strongest = aggregate_frequencies([_set], _LABELS, per_set='strongest').get('b1')
    assert _strongest['count'] == 1
    assert _strongest['mean'] == pytest.approx(2.27)


def test_aggregate_ignores_peaks_outside_tolerance():
    _statistics = aggregate_frequencies([PeakSet([Peak(5.0, 1.0, 'a')], (1.0, 9.0))], _LABELS)
    assert len(_statistics.missing_labels) == 4


def test_export_frames(make_record):
    _t = np.arange(1000) / 200.0
    _spectrum = compute_spectrum(make_record(np.sin(2 * np.pi * 3.0 * _t)), band=(1.0, 9.0))
    _peaks = pick_peaks(_spectrum, band=(1.0, 9.0))
    assert list(spectrum_frame(_spectrum).columns) == ['frequency_hz', 'ch0']
    assert list(peaks_frame(_peaks).columns) == ['channel', 'frequency_hz', 'magnitude']
    _statistics = aggregate_frequencies([_peaks], [{'label': 'x', 'frequency': 3.0}])
    assert list(statistics_frame(_statistics).columns) == [
        'label', 'nominal_hz', 'mean_hz', 'std_hz', 'count', 'missing']


def test_simulated_impulse_recovers_all_modes(defaults):
    _impulse = ExcitationSpec(**{**defaults.impulse._asdict(), 'position_x': 0.4 * defaults.model.span_length})
    _record = simulate(
        defaults.model, _impulse, [_sensor.noiseless() for _sensor in defaults.sensors], duration=90.0,
    )
    _spectrum = compute_spectrum(_record, band=(1.0, 9.0))
    _peaks = pick_peaks(_spectrum, band=(1.0, 9.0), min_prominence=0.05)
    _labels = [{'label': _mode.label, 'frequency': _mode.frequency} for _mode in defaults.model.modes]
    _statistics = aggregate_frequencies([_peaks], _labels, per_set='strongest')
    assert _statistics.missing_labels == []
    for _mode in defaults.model.modes:
        assert _statistics.get(_mode.label)['mean'] == pytest.approx(_mode.frequency, abs=0.02)
