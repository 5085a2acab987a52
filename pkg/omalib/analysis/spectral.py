"""
This module identifies natural frequencies from measured responses:
FFT magnitude spectra normalized per channel, peak picking with
sub-bin refinement, and the statistics over repeated measurements.
It uses the following libraries
- numpy
- scipy (fft, signal)
- pandas (export tables)

Typical usage example:
    spectrum = compute_spectrum(record, band=(1.0, 9.0))
    peaks = pick_peaks(spectrum, band=(1.0, 9.0), min_prominence=0.05)
"""

import logging
import math
from collections.abc import Sequence
from typing import Literal, NamedTuple, TypedDict

import numpy as np
import pandas as pd
import scipy.fft
import scipy.signal

from omalib.exceptions.exception import (ArgsError, BandAboveNyquist,
                                         DegenerateSignal, EmptyBand,
                                         RecordTooShort)
from omalib.file.records import TimeSeriesRecord
from omalib.py.generic import parabolic_vertex

logger = logging.getLogger(__name__)

Window = Literal['rectangular', 'hann']

DEFAULT_MATCH_TOLERANCE = 0.15


class NyquistVerdict(NamedTuple):
    """
    Result of a sampling-rate check.
    """
    verdict: Literal['ok', 'undersampled']
    minimum_rate: float

    @property
    def ok(self) -> bool:  # pylint: disable=missing-function-docstring
        return self.verdict == 'ok'


class Peak(NamedTuple):
    """
    One spectral peak.
    """
    frequency: float
    magnitude: float
    channel: str


class ModeLabel(TypedDict):
    label: str
    frequency: float


class ModeStatistics(TypedDict):
    label: str
    nominal: float
    mean: float
    std_dev: float
    count: int
    missing: bool


def check_nyquist(sample_rate: float, f_max_expected: float) -> NyquistVerdict:
    """
    ## Summary
    Check a sampling rate against the highest expected signal frequency.

    ## Args:
    - sample_rate (float) : Hz, > 0.
    - f_max_expected (float) : Hz, > 0.

    ## Returns:
    - NyquistVerdict: "ok" iff sample_rate >= 2 * f_max_expected.
    """
    if not sample_rate > 0:
        raise ArgsError(argument_name='sample_rate', add='Must be positive.')
    if not f_max_expected > 0:
        raise ArgsError(argument_name='f_max_expected', add='Must be positive.')
    _minimum = 2.0 * f_max_expected
    if sample_rate >= _minimum:
        return NyquistVerdict(verdict='ok', minimum_rate=_minimum)
    logger.warning(
        'sample rate %.3f Hz is below the minimum %.3f Hz', sample_rate, _minimum
    )
    return NyquistVerdict(verdict='undersampled', minimum_rate=_minimum)


class Spectrum:
    """
    One-sided magnitude spectrum per channel, normalized so that the
    largest magnitude inside normalized_band is 1 for every channel.
    """
    def __init__(
            self,
            frequencies: np.ndarray,
            raw_magnitudes: np.ndarray,
            channel_ids: Sequence[str],
            padded_length: int,
            sample_rate: float,
            window: Window,
            normalized_band: tuple[float, float],
        ) -> None:
        _in_band = _band_mask(frequencies, normalized_band)
        if not _in_band.any():
            raise EmptyBand(band=normalized_band)
        _maxima = raw_magnitudes[_in_band].max(axis=0)
        for _channel_id, _maximum in zip(channel_ids, _maxima):
            if not _maximum > 0:
                raise DegenerateSignal(channel_id=_channel_id)
        _magnitudes = raw_magnitudes / _maxima
        for _array in (frequencies, raw_magnitudes, _magnitudes):
            _array.flags.writeable = False
        self.__frequencies = frequencies
        self.__raw_magnitudes = raw_magnitudes
        self.__magnitudes = _magnitudes
        self.__channel_ids = tuple(channel_ids)
        self.__padded_length = int(padded_length)
        self.__sample_rate = float(sample_rate)
        self.__window = window
        self.__normalized_band = (float(normalized_band[0]), float(normalized_band[1]))

    @property
    def frequencies(self) -> np.ndarray:  # pylint: disable=missing-function-docstring
        return self.__frequencies

    @property
    def magnitudes(self) -> np.ndarray:  # pylint: disable=missing-function-docstring
        return self.__magnitudes

    @property
    def raw_magnitudes(self) -> np.ndarray:  # pylint: disable=missing-function-docstring
        return self.__raw_magnitudes

    @property
    def channel_ids(self) -> tuple[str, ...]:  # pylint: disable=missing-function-docstring
        return self.__channel_ids

    @property
    def padded_length(self) -> int:  # pylint: disable=missing-function-docstring
        return self.__padded_length

    @property
    def sample_rate(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__sample_rate

    @property
    def resolution(self) -> float:
        """
        Bin spacing in Hz: sample_rate / padded_length.
        """
        return self.__sample_rate / self.__padded_length

    @property
    def window(self) -> Window:  # pylint: disable=missing-function-docstring
        return self.__window

    @property
    def normalized_band(self) -> tuple[float, float]:  # pylint: disable=missing-function-docstring
        return self.__normalized_band

    def channel(self, channel_id: str) -> np.ndarray:
        """
        ## Summary
        Normalized magnitudes of one channel.
        """
        if channel_id not in self.__channel_ids:
            raise ArgsError(
                argument_name='channel_id',
                add=f'{channel_id} is not one of {list(self.__channel_ids)}.',
            )
        return self.__magnitudes[:, self.__channel_ids.index(channel_id)]


class PeakSet:
    """
    Peaks found inside a band, sorted by frequency.
    """
    def __init__(self, peaks: Sequence[Peak], band: tuple[float, float]) -> None:
        _lo, _hi = band
        for _peak in peaks:
            if not _lo <= _peak.frequency <= _hi:
                raise ArgsError(argument_name='peaks', add=f'{_peak} lies outside {band}.')
            if not 0 < _peak.magnitude <= 1:
                raise ArgsError(argument_name='peaks', add=f'{_peak} magnitude outside (0, 1].')
        self.__peaks = tuple(sorted(peaks, key=lambda _peak: (_peak.frequency, _peak.channel)))
        self.__band = (float(_lo), float(_hi))

    @property
    def peaks(self) -> tuple[Peak, ...]:  # pylint: disable=missing-function-docstring
        return self.__peaks

    @property
    def band(self) -> tuple[float, float]:  # pylint: disable=missing-function-docstring
        return self.__band

    @property
    def frequencies(self) -> list[float]:  # pylint: disable=missing-function-docstring
        return [_peak.frequency for _peak in self.__peaks]

    def __len__(self) -> int:
        return len(self.__peaks)

    def __iter__(self):
        return iter(self.__peaks)


class FrequencyStatistics:
    """
    Mean and sample standard deviation of each labelled mode.
    """
    def __init__(self, modes: Sequence[ModeStatistics]) -> None:
        self.__modes = tuple(modes)

    @property
    def modes(self) -> tuple[ModeStatistics, ...]:  # pylint: disable=missing-function-docstring
        return self.__modes

    def get(self, label: str) -> ModeStatistics:
        """
        ## Summary
        Statistics of one label.
        """
        for _mode in self.__modes:
            if _mode['label'] == label:
                return _mode
        raise ArgsError(argument_name='label', add=f'{label} is not part of the statistics.')

    @property
    def missing_labels(self) -> list[str]:  # pylint: disable=missing-function-docstring
        return [_mode['label'] for _mode in self.__modes if _mode['missing']]


def _band_mask(frequencies: np.ndarray, band: tuple[float, float]) -> np.ndarray:
    return (frequencies >= band[0]) & (frequencies <= band[1])


def spectral_energy(raw_magnitudes: np.ndarray, padded_length: int) -> np.ndarray:
    """
    ## Summary
    Time-domain energy sum(x**2) recovered from a one-sided spectrum (Parseval).

    ## Args:
    - raw_magnitudes (numpy.ndarray) : |rfft| per channel (bins x channels).
    - padded_length (int) : Transform length.

    ## Returns:
    - numpy.ndarray: One energy per channel.
    """
    _power = np.abs(raw_magnitudes) ** 2
    _weights = np.full(_power.shape[0], 2.0)
    _weights[0] = 1.0
    if padded_length % 2 == 0:
        _weights[-1] = 1.0
    return (_weights[:, None] * _power).sum(axis=0) / padded_length


def compute_spectrum(
        record: TimeSeriesRecord,
        window: Window = 'rectangular',
        band: tuple[float, float] | None = None,
        zero_pad_to: int | None = None,
        channels: Sequence[str] | None = None,
    ) -> Spectrum:
    """
    ## Summary
    FFT magnitude spectrum of each channel, normalized inside a band.

    ## Args:
    - record (TimeSeriesRecord) :
        At least two samples.
    - window (Literal['rectangular', 'hann'], optional) :
        Defaults to 'rectangular' (transient and free-decay signals).
    - band (tuple[float, float] | None, optional) :
        Normalization band in Hz. Defaults to (0, sample_rate / 2).
    - zero_pad_to (int | None, optional) :
        Transform length >= n_samples. Defaults to the next power of two.
    - channels (Sequence[str] | None, optional) :
        Channel subset. Defaults to all channels.

    ## Returns:
    - Spectrum: resolution = sample_rate / padded length.
    """
    if record.n_samples < 2:
        raise RecordTooShort(n_samples=record.n_samples, required=2)
    _nyquist = record.sample_rate / 2.0
    if band is None:
        band = (0.0, _nyquist)
    if band[1] > _nyquist:
        raise BandAboveNyquist(band_high=band[1], nyquist=_nyquist)
    if not band[0] < band[1]:
        raise ArgsError(argument_name='band', add='LO must be smaller than HI.')
    _n = record.n_samples
    if zero_pad_to is None:
        _padded = 1 << math.ceil(math.log2(_n))
    elif zero_pad_to < _n:
        raise ArgsError(
            argument_name='zero_pad_to',
            add=f'{zero_pad_to} is shorter than the record ({_n} samples).',
        )
    else:
        _padded = int(zero_pad_to)
    _ids = list(record.channel_ids) if channels is None else list(channels)
    _columns = [record.channel_index(_channel_id) for _channel_id in _ids]
    _data = record.samples[:, _columns]
    if window == 'hann':
        _data = _data * scipy.signal.get_window('hann', _n)[:, None]
    elif window != 'rectangular':
        raise ArgsError(argument_name='window', add='Use "rectangular" or "hann".')
    _raw = np.abs(scipy.fft.rfft(_data, n=_padded, axis=0))
    _frequencies = scipy.fft.rfftfreq(_padded, d=1.0 / record.sample_rate)
    logger.debug(
        'spectrum: %d samples padded to %d, resolution %.5f Hz',
        _n, _padded, record.sample_rate / _padded,
    )
    return Spectrum(
        frequencies=_frequencies,
        raw_magnitudes=_raw,
        channel_ids=_ids,
        padded_length=_padded,
        sample_rate=record.sample_rate,
        window=window,
        normalized_band=band,
    )


def pick_peaks(
        spectrum: Spectrum,
        band: tuple[float, float],
        min_prominence: float = 0.05,
        max_peaks: int = 10,
        channels: Sequence[str] | None = None,
    ) -> PeakSet:
    """
    ## Summary
    Local maxima of the normalized spectrum, refined between bins.

    ## Args:
    - spectrum (Spectrum)
    - band (tuple[float, float]) :
        Search band in Hz.
    - min_prominence (float, optional) :
        Minimum peak prominence in normalized units, 0 < p < 1.
        Defaults to 0.05.
    - max_peaks (int, optional) :
        Largest peaks kept per channel. Defaults to 10.
    - channels (Sequence[str] | None, optional) :
        Channel subset. Defaults to all channels of the spectrum.

    ## Returns:
    - PeakSet: Sorted by frequency.
    """
    if not 0 < min_prominence < 1:
        raise ArgsError(argument_name='min_prominence', add='Must lie in (0, 1).')
    if max_peaks < 1:
        raise ArgsError(argument_name='max_peaks', add='Must be at least 1.')
    _indices = np.flatnonzero(_band_mask(spectrum.frequencies, band))
    if _indices.size == 0:
        raise EmptyBand(band=band)
    _ids = spectrum.channel_ids if channels is None else tuple(channels)
    _peaks: list[Peak] = []
    for _channel_id in _ids:
        _magnitudes = spectrum.channel(_channel_id)
        _local = _magnitudes[_indices]
        _found, _ = scipy.signal.find_peaks(_local, prominence=min_prominence)
        _order = np.argsort(_local[_found])[::-1][:max_peaks]
        for _position in _found[_order]:
            _bin = _indices[_position]
            _offset, _value = parabolic_vertex(
                _magnitudes[_bin - 1], _magnitudes[_bin], _magnitudes[_bin + 1]
            )
            _frequency = spectrum.frequencies[_bin] + _offset * spectrum.resolution
            _peaks.append(Peak(
                frequency=float(min(max(_frequency, band[0]), band[1])),
                magnitude=float(min(_value, 1.0)),
                channel=_channel_id,
            ))
        logger.debug('%s: %d peak(s) in %s Hz', _channel_id, min(len(_found), max_peaks), band)
    return PeakSet(peaks=_peaks, band=band)


def aggregate_frequencies(
        peak_sets: Sequence[PeakSet],
        mode_labels: Sequence[ModeLabel],
        match_tolerance: float = DEFAULT_MATCH_TOLERANCE,
        per_set: Literal['all', 'strongest'] = 'all',
    ) -> FrequencyStatistics:
    """
    ## Summary
    Assign peaks to labelled modes and compute mean and sample std.

    ## Args:
    - peak_sets (Sequence[PeakSet]) :
        One set per measurement, at least one.
    - mode_labels (Sequence[ModeLabel]) :
        {label, frequency} nominal frequencies used for matching.
    - match_tolerance (float, optional) :
        Maximum distance in Hz to the nearest nominal frequency.
        Defaults to 0.15 Hz.
    - per_set (Literal['all', 'strongest'], optional) :
        'all' keeps every matched peak, 'strongest' keeps the largest
        matched peak per label and set. Defaults to 'all'.

    ## Returns:
    - FrequencyStatistics: One entry per label, in label order.
    """
    if not peak_sets:
        raise ArgsError(argument_name='peak_sets', add='At least one peak set is required.')
    if not mode_labels:
        raise ArgsError(argument_name='mode_labels', add='At least one label is required.')
    _nominal = np.array([_mode['frequency'] for _mode in mode_labels], dtype=float)
    _matched: dict[str, list[float]] = {_mode['label']: [] for _mode in mode_labels}
    for _set in peak_sets:
        _best: dict[str, Peak] = {}
        for _peak in _set:
            _distance = np.abs(_nominal - _peak.frequency)
            _nearest = int(np.argmin(_distance))
            if _distance[_nearest] > match_tolerance:
                continue
            _label = mode_labels[_nearest]['label']
            if per_set == 'all':
                _matched[_label].append(_peak.frequency)
            elif _label not in _best or _peak.magnitude > _best[_label].magnitude:
                _best[_label] = _peak
        for _label, _peak in _best.items():
            _matched[_label].append(_peak.frequency)
    _modes: list[ModeStatistics] = []
    for _mode in mode_labels:
        _values = np.array(_matched[_mode['label']], dtype=float)
        if _values.size == 0:
            logger.warning(
                'no peak matched %s (%.3f Hz +/- %.3f Hz)',
                _mode['label'], _mode['frequency'], match_tolerance,
            )
            _modes.append(ModeStatistics(
                label=_mode['label'], nominal=float(_mode['frequency']),
                mean=math.nan, std_dev=math.nan, count=0, missing=True,
            ))
            continue
        _std = float(np.std(_values, ddof=1)) if _values.size > 1 else 0.0
        _modes.append(ModeStatistics(
            label=_mode['label'],
            nominal=float(_mode['frequency']),
            mean=float(np.mean(_values)),
            std_dev=_std,
            count=int(_values.size),
            missing=False,
        ))
    return FrequencyStatistics(modes=_modes)


def spectrum_frame(spectrum: Spectrum) -> pd.DataFrame:
    """
    ## Summary
    Export table: frequency_hz followed by one normalized column per channel.
    """
    _frame = pd.DataFrame(spectrum.magnitudes, columns=list(spectrum.channel_ids))
    _frame.insert(0, 'frequency_hz', spectrum.frequencies)
    return _frame


def peaks_frame(peak_set: PeakSet) -> pd.DataFrame:
    """
    ## Summary
    Export table: channel, frequency_hz, magnitude.
    """
    return pd.DataFrame(
        [(_peak.channel, _peak.frequency, _peak.magnitude) for _peak in peak_set],
        columns=['channel', 'frequency_hz', 'magnitude'],
    )


def statistics_frame(statistics: FrequencyStatistics) -> pd.DataFrame:
    """
    ## Summary
    Export table: label, nominal_hz, mean_hz, std_hz, count, missing.
    """
    return pd.DataFrame(
        [
            (_mode['label'], _mode['nominal'], _mode['mean'],
             _mode['std_dev'], _mode['count'], _mode['missing'])
            for _mode in statistics.modes
        ],
        columns=['label', 'nominal_hz', 'mean_hz', 'std_hz', 'count', 'missing'],
    )
