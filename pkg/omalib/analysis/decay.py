"""
Damping from free decays by the logarithmic decrement.

A channel is band-pass filtered around the target mode, the free-vibration
part is located (after the excitation is switched off, or after the
largest response), two maxima n periods apart are read with sub-sample
refinement and the decrement is turned into a damping ratio.

It uses the following libraries
- numpy
- scipy (signal)
- pandas (export tables)
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Literal, NamedTuple, TypedDict

import numpy as np
import pandas as pd
import scipy.signal

from omalib.exceptions.exception import (ArgsError, BandAboveNyquist,
                                         NoDecayDetected,
                                         NonPositiveAmplitude,
                                         NoUsableChannel, OmaError,
                                         SegmentTooShort)
from omalib.file.records import MeasurementSet, TimeSeriesRecord
from omalib.py.generic import parabolic_vertex

logger = logging.getLogger(__name__)

DEFAULT_N_PERIODS = 5
DEFAULT_BAND_HALFWIDTH = 0.5
SETTLE_PERIODS = 2
MIN_DECAY_PERIODS = 5
NOISE_FLOOR_RATIO = 0.05
# filter time constants skipped at the start of a filtered segment
FILTER_SETTLE_CONSTANTS = 8.0
# envelope rules of the automatic detection
_ENVELOPE_RISE_TOLERANCE = 0.005
_ENVELOPE_MIN_DROP = 0.01
# accepted mismatch between requested and measured number of periods
_PERIOD_TOLERANCE = 0.25

MODE_KIND_CHANNELS: Mapping[str, str] = {
    'bending': 'acceleration_z',
    'torsion': 'angular_velocity_x',
}


class DampingTarget(TypedDict, total=False):
    label: str
    frequency: float
    kind: Literal['bending', 'torsion']


class DecaySegment(NamedTuple):
    """
    Free-vibration part of one channel.
    """
    channel: str
    t_start: float
    samples: np.ndarray
    sample_rate: float
    band_filter: tuple[float, float] | None = None

    @property
    def duration(self) -> float:  # pylint: disable=missing-function-docstring
        return self.samples.size / self.sample_rate


class PeakPair(NamedTuple):
    """
    Two maxima n_periods apart, a1 at t1 and a2 at t2.
    """
    t1: float
    a1: float
    t2: float
    a2: float
    n_periods: int


class ChannelDamping(NamedTuple):
    record: str
    channel: str
    pair: PeakPair
    decrement: float
    zeta: float


class DampingEstimate:
    """
    Damping of one mode: per-channel values and their arithmetic mean.
    """
    def __init__(self, mode_label: str, per_channel: Sequence[ChannelDamping]) -> None:
        if not per_channel:
            raise NoUsableChannel(mode_label=mode_label, failures=[])
        self.__mode_label = mode_label
        self.__per_channel = tuple(per_channel)
        self.__mean_zeta = math.fsum(_item.zeta for _item in per_channel) / len(per_channel)

    @property
    def mode_label(self) -> str:  # pylint: disable=missing-function-docstring
        return self.__mode_label

    @property
    def per_channel(self) -> tuple[ChannelDamping, ...]:  # pylint: disable=missing-function-docstring
        return self.__per_channel

    @property
    def mean_zeta(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__mean_zeta

    def record_means(self) -> dict[str, float]:
        """
        ## Summary
        Mean damping ratio per measurement, in record order.
        """
        _grouped: dict[str, list[float]] = {}
        for _item in self.__per_channel:
            _grouped.setdefault(_item.record, []).append(_item.zeta)
        return {_name: math.fsum(_values) / len(_values) for _name, _values in _grouped.items()}


def bandpass(
        samples: np.ndarray,
        sample_rate: float,
        band: tuple[float, float],
    ) -> np.ndarray:
    """
    ## Summary
    Zero-phase second-order Butterworth band-pass (forward-backward SOS).

    ## Args:
    - samples (numpy.ndarray) : 1-D, or n_samples x n_channels.
    - sample_rate (float) : Hz.
    - band (tuple[float, float]) : Corner frequencies in Hz.

    ## Returns:
    - numpy.ndarray: Filtered samples of the same shape.
    """
    _low, _high = band
    if not 0 < _low < _high:
        raise ArgsError(argument_name='band', add=f'Need 0 < low < high, got {band}.')
    if _high >= sample_rate / 2:
        raise BandAboveNyquist(band_high=_high, nyquist=sample_rate / 2)
    _sos = scipy.signal.butter(2, [_low, _high], btype='bandpass', fs=sample_rate, output='sos')
    return scipy.signal.sosfiltfilt(_sos, np.asarray(samples, dtype=float), axis=0)


def _hint_from(record: TimeSeriesRecord, excitation_off_hint: float | None) -> float | None:
    if excitation_off_hint is not None:
        return float(excitation_off_hint)
    _annotated = record.annotations.get('excitation_off_s')
    if _annotated in (None, '', 'None'):
        return None
    try:
        return float(_annotated)
    except ValueError as error:
        raise ArgsError(
            argument_name='annotations.excitation_off_s',
            add=f'"{_annotated}" is not a number.',
        ) from error


def _envelope_start(
        values: np.ndarray,
        period_samples: int,
        min_decay_periods: int,
    ) -> int | None:
    _n_blocks = values.size // period_samples
    if _n_blocks < min_decay_periods + 1:
        return None
    _blocks = np.abs(values[:_n_blocks * period_samples]).reshape(_n_blocks, period_samples)
    _envelope = _blocks.max(axis=1)
    _top = int(np.argmax(_envelope))
    if _top + min_decay_periods >= _n_blocks or _envelope[_top] <= 0:
        return None
    _checked = _envelope[_top:_top + min_decay_periods + 1]
    if np.any(_checked[1:] > _checked[:-1] * (1.0 + _ENVELOPE_RISE_TOLERANCE)):
        return None
    if _checked[-1] > _checked[0] * (1.0 - _ENVELOPE_MIN_DROP):
        return None
    return _top * period_samples + int(np.argmax(_blocks[_top]))


def detect_free_decay(
        record: TimeSeriesRecord,
        target_frequency: float,
        excitation_off_hint: float | None = None,
        settle_periods: int = SETTLE_PERIODS,
        min_decay_periods: int = MIN_DECAY_PERIODS,
        channels: Sequence[str] | None = None,
    ) -> list[DecaySegment]:
    """
    ## Summary
    Locate the free-decay segment of every channel.

    ## Description
    With a hint (argument or annotation "excitation_off_s") the segment
    starts settle_periods periods of the target mode after the hint.
    Without one, it starts at the largest |x| of the channel, provided the
    per-period envelope keeps decreasing for min_decay_periods periods.
    Segments run to the end of the record.

    ## Args:
    - record (TimeSeriesRecord)
    - target_frequency (float) : Hz.
    - excitation_off_hint (float | None, optional) :
        Time in s on the record's time axis when excitation stopped.
    - settle_periods (int, optional) : Defaults to 2.
    - min_decay_periods (int, optional) : Defaults to 5.
    - channels (Sequence[str] | None, optional) : Defaults to all.

    ## Returns:
    - list[DecaySegment]
    """
    if not target_frequency > 0:
        raise ArgsError(argument_name='target_frequency', add='Must be positive.')
    _fs = record.sample_rate
    _ids = list(channels) if channels is not None else record.channel_ids
    _hint = _hint_from(record, excitation_off_hint)
    _segments: list[DecaySegment] = []
    if _hint is not None:
        _end = record.start_time + record.duration
        if not record.start_time <= _hint < _end:
            raise ArgsError(
                argument_name='excitation_off_hint',
                add=f'{_hint} s lies outside the record ({record.start_time} .. {_end} s).',
            )
        _start_time = _hint + settle_periods / target_frequency
        _first = math.ceil((_start_time - record.start_time) * _fs - 1e-9)
        if _first > record.n_samples - 2:
            raise NoDecayDetected(
                channel_id=','.join(_ids),
                add='Nothing is left after the excitation stops.',
            )
        for _channel_id in _ids:
            _segments.append(DecaySegment(
                channel=_channel_id,
                t_start=record.start_time + _first / _fs,
                samples=record.channel(_channel_id)[_first:],
                sample_rate=_fs,
            ))
        return _segments
    _period_samples = max(1, round(_fs / target_frequency))
    for _channel_id in _ids:
        _values = record.channel(_channel_id)
        _first = _envelope_start(_values, _period_samples, min_decay_periods)
        if _first is None:
            raise NoDecayDetected(
                channel_id=_channel_id,
                add=f'no decreasing envelope over {min_decay_periods} periods',
            )
        _segments.append(DecaySegment(
            channel=_channel_id,
            t_start=record.start_time + _first / _fs,
            samples=_values[_first:],
            sample_rate=_fs,
        ))
    return _segments


def _refined_maximum(samples: np.ndarray, index: int, segment: DecaySegment) -> tuple[float, float]:
    _offset, _value = parabolic_vertex(samples[index - 1], samples[index], samples[index + 1])
    return segment.t_start + (index + _offset) / segment.sample_rate, _value


def extract_peak_pair(
        segment: DecaySegment,
        target_frequency: float,
        n_periods: int = DEFAULT_N_PERIODS,
        noise_floor_ratio: float = NOISE_FLOOR_RATIO,
    ) -> PeakPair:
    """
    ## Summary
    First maximum above the noise floor and the maximum nearest to
    n_periods periods later, both refined by parabolic interpolation.

    ## Args:
    - segment (DecaySegment)
    - target_frequency (float) : Hz.
    - n_periods (int, optional) : At least 1. Defaults to 5.
    - noise_floor_ratio (float, optional) :
        Maxima below this fraction of the segment's largest |x| are
        ignored. Defaults to 0.05.

    ## Returns:
    - PeakPair
    """
    if n_periods < 1:
        raise ArgsError(argument_name='n_periods', add='Must be at least 1.')
    if not target_frequency > 0:
        raise ArgsError(argument_name='target_frequency', add='Must be positive.')
    if segment.duration <= (n_periods + 1) / target_frequency:
        raise SegmentTooShort(
            channel_id=segment.channel,
            add=f'{segment.duration:.3f} s holds fewer than {n_periods + 1} periods',
        )
    _x = np.asarray(segment.samples, dtype=float)
    _floor = noise_floor_ratio * float(np.abs(_x).max())
    _maxima, _ = scipy.signal.find_peaks(_x)
    _maxima = _maxima[_x[_maxima] > _floor]
    if _maxima.size < n_periods + 1:
        raise SegmentTooShort(
            channel_id=segment.channel,
            add=f'{_maxima.size} maxima above the noise floor, {n_periods + 1} needed',
        )
    _t1, _a1 = _refined_maximum(_x, int(_maxima[0]), segment)
    _wanted = _t1 + n_periods / target_frequency
    _times = segment.t_start + _maxima[1:] / segment.sample_rate
    _second = int(_maxima[1:][np.argmin(np.abs(_times - _wanted))])
    _t2, _a2 = _refined_maximum(_x, _second, segment)
    _measured = (_t2 - _t1) * target_frequency
    if abs(_measured - n_periods) > _PERIOD_TOLERANCE * n_periods:
        raise SegmentTooShort(
            channel_id=segment.channel,
            add=f'maxima {_measured:.2f} periods apart, {n_periods} requested',
        )
    return PeakPair(t1=_t1, a1=_a1, t2=_t2, a2=_a2, n_periods=n_periods)


def log_decrement(pair: PeakPair) -> float:
    """
    ## Summary
    Lambda = ln(a1 / a2) / n.
    """
    if pair.a2 <= 0:
        raise NonPositiveAmplitude(amplitude=pair.a2)
    if pair.a1 <= 0:
        raise NonPositiveAmplitude(amplitude=pair.a1)
    if pair.a2 > pair.a1:
        raise ArgsError(argument_name='pair', add='a2 exceeds a1; the response is not decaying.')
    return math.log(pair.a1 / pair.a2) / pair.n_periods


def damping_from_decrement(decrement: float, exact: bool = False) -> float:
    """
    ## Summary
    Damping ratio from the logarithmic decrement.

    ## Args:
    - decrement (float) : Lambda >= 0.
    - exact (bool, optional) :
        False gives the small-damping relation Lambda / (2 pi);
        True gives Lambda / sqrt(4 pi^2 + Lambda^2). Defaults to False.

    ## Returns:
    - float
    """
    if decrement < 0:
        raise ArgsError(argument_name='decrement', add='Must be non-negative.')
    if exact:
        return decrement / math.sqrt(4.0 * math.pi ** 2 + decrement ** 2)
    return decrement / (2.0 * math.pi)


def filter_settle_time(band_halfwidth: float) -> float:
    """
    ## Summary
    Time in s for the transient of bandpass() with a given half-width to
    decay by FILTER_SETTLE_CONSTANTS time constants.
    """
    return FILTER_SETTLE_CONSTANTS / (math.sqrt(2.0) * math.pi * band_halfwidth)


def _responsive_channels(record: TimeSeriesRecord, kind: str | None) -> list[str]:
    if kind is None:
        return record.channel_ids
    if kind not in MODE_KIND_CHANNELS:
        raise ArgsError(argument_name='target.kind', add=f'Use one of {list(MODE_KIND_CHANNELS)}.')
    return [
        _channel.channel_id for _channel in record.channels
        if _channel.kind == MODE_KIND_CHANNELS[kind]
    ]


def estimate_damping(
        records: MeasurementSet | Iterable[TimeSeriesRecord] | TimeSeriesRecord,
        target: DampingTarget,
        n_periods: int = DEFAULT_N_PERIODS,
        band_halfwidth: float = DEFAULT_BAND_HALFWIDTH,
        excitation_off_hint: float | None = None,
        exact: bool = False,
        noise_floor_ratio: float = NOISE_FLOOR_RATIO,
    ) -> DampingEstimate:
    """
    ## Summary
    Damping ratio of one mode from every usable channel of the records.

    ## Description
    Each channel is band-pass filtered to target frequency +/- band_halfwidth,
    then detect_free_decay, extract_peak_pair, log_decrement and
    damping_from_decrement are applied. Each segment loses its first
    filter_settle_time(band_halfwidth) seconds, where the filter still
    rings from the excitation. Channels that fail are logged and skipped.

    ## Args:
    - records (MeasurementSet | Iterable[TimeSeriesRecord] | TimeSeriesRecord)
    - target (DampingTarget) :
        {label, frequency} and optionally kind ("bending" keeps only
        acceleration channels, "torsion" only angular-velocity channels).
    - n_periods (int, optional) : Defaults to 5.
    - band_halfwidth (float, optional) : Hz. Defaults to 0.5.
    - excitation_off_hint (float | None, optional) :
        Overrides the "excitation_off_s" annotation of every record.
    - exact (bool, optional) : See damping_from_decrement.
    - noise_floor_ratio (float, optional) : See extract_peak_pair.

    ## Returns:
    - DampingEstimate
    """
    _label = str(target['label'])
    _frequency = float(target['frequency'])
    if not _frequency > 0:
        raise ArgsError(argument_name='target.frequency', add='Must be positive.')
    if isinstance(records, TimeSeriesRecord):
        records = MeasurementSet([records], label=_label)
    elif not isinstance(records, MeasurementSet):
        records = MeasurementSet(records, label=_label)
    _band = (_frequency - band_halfwidth, _frequency + band_halfwidth)
    _results: list[ChannelDamping] = []
    _failures: list[str] = []
    for _name, _record in zip(records.names, records.records):
        _ids = _responsive_channels(_record, target.get('kind'))
        if not _ids:
            _failures.append(f'{_name}: no channel of kind {target.get("kind")}')
            continue
        _filtered = _record.replace(samples=bandpass(_record.samples, _record.sample_rate, _band))
        try:
            _segments = detect_free_decay(
                _filtered, _frequency,
                excitation_off_hint=excitation_off_hint,
                channels=_ids,
            )
        except ArgsError as error:
            # the hint does not fit this record
            logger.warning('%s skipped: %s', _name, error)
            _failures.append(f'{_name}: {error}')
            continue
        except NoDecayDetected as error:
            if _hint_from(_record, excitation_off_hint) is not None:
                logger.warning('%s skipped: %s', _name, error)
                _failures.append(f'{_name}: {error}')
                continue
            # automatic detection fails per channel; retry one by one
            _segments = []
            for _channel_id in _ids:
                try:
                    _segments.extend(detect_free_decay(_filtered, _frequency, channels=[_channel_id]))
                except NoDecayDetected as channel_error:
                    logger.warning('%s/%s skipped: %s', _name, _channel_id, channel_error)
                    _failures.append(f'{_name}/{_channel_id}: {channel_error}')
        _skip = math.ceil(filter_settle_time(band_halfwidth) * _record.sample_rate)
        for _segment in _segments:
            _segment = _segment._replace(
                t_start=_segment.t_start + _skip / _segment.sample_rate,
                samples=_segment.samples[_skip:],
                band_filter=_band,
            )
            try:
                _pair = extract_peak_pair(_segment, _frequency, n_periods, noise_floor_ratio)
                _decrement = log_decrement(_pair)
            except OmaError as error:
                logger.warning('%s/%s skipped: %s', _name, _segment.channel, error)
                _failures.append(f'{_name}/{_segment.channel}: {error}')
                continue
            _results.append(ChannelDamping(
                record=_name,
                channel=_segment.channel,
                pair=_pair,
                decrement=_decrement,
                zeta=damping_from_decrement(_decrement, exact=exact),
            ))
    if not _results:
        raise NoUsableChannel(mode_label=_label, failures=_failures)
    _estimate = DampingEstimate(mode_label=_label, per_channel=_results)
    logger.info('%s: zeta = %.5f from %d channel(s)', _label, _estimate.mean_zeta, len(_results))
    return _estimate


def damping_frame(estimate: DampingEstimate) -> pd.DataFrame:
    """
    ## Summary
    Export table: mode, record, channel, t1_s, a1, t2_s, a2, n, lambda,
    zeta, followed by a "mean" row.
    """
    _rows = [
        (estimate.mode_label, _item.record, _item.channel, _item.pair.t1, _item.pair.a1,
         _item.pair.t2, _item.pair.a2, _item.pair.n_periods, _item.decrement, _item.zeta)
        for _item in estimate.per_channel
    ]
    _rows.append((estimate.mode_label, '', 'mean', math.nan, math.nan, math.nan, math.nan,
                  math.nan, math.nan, estimate.mean_zeta))
    return pd.DataFrame(
        _rows,
        columns=['mode', 'record', 'channel', 't1_s', 'a1', 't2_s', 'a2', 'n', 'lambda', 'zeta'],
    )
