"""
This module holds the data model of multi-channel vibration measurements
and their file format.

A record is stored as a pair of files:
- <name>.csv        samples, no header, one row per sample, one column per channel
- <name>.meta.json  sample_rate_hz, start_time_s, channels, annotations

Typical usage example:
    record = read_record('measurements/impulse_01.csv')
    free = slice_time(record, 30.0, record.start_time + record.duration)
    write_record(free, 'out/impulse_01_free.csv')
"""

import json
import logging
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from typing import Literal, TypedDict

import numpy as np
import pandas as pd

from omalib.exceptions.exception import (ArgsError, EmptyWindow,
                                         InvalidRate, InvalidSidecar,
                                         MissingSidecar, NonFiniteSample,
                                         NoRecords, RaggedRows,
                                         RecordTooShort, ReversedWindow,
                                         UnitKindMismatch, UnwritablePath)
from omalib.file.handler import (FLOAT_FORMAT, find_records, require_file,
                                 sidecar_path)
from omalib.py.generic import protect

logger = logging.getLogger(__name__)

ChannelKind = Literal['acceleration_z', 'angular_velocity_x']
ChannelUnit = Literal['m_per_s2', 'deg_per_s']

UNIT_OF_KIND: Mapping[str, str] = protect({
    'acceleration_z': 'm_per_s2',
    'angular_velocity_x': 'deg_per_s',
})

# sample index tolerance when mapping a time onto the sample grid
_GRID_EPS = 1e-9


class _ChannelDict(TypedDict):
    id: str
    kind: ChannelKind
    unit: ChannelUnit
    position_x_m: float
    position_y_m: float


class ChannelSpec:
    """
    One sensor channel: what it measures and where it sits on the deck.
    """
    def __init__(
            self,
            channel_id: str,
            kind: ChannelKind,
            unit: ChannelUnit | None = None,
            position_x: float = 0.0,
            position_y: float = 0.0,
            span_length: float | None = None,
        ) -> None:
        """
        ## Args:
        - channel_id (str) :
            Short identifier, e.g. "B_az".
        - kind (Literal['acceleration_z', 'angular_velocity_x']) :
            Measured quantity.
        - unit (Literal['m_per_s2', 'deg_per_s'], optional) :
            Defaults to the unit belonging to kind.
        - position_x (float, optional) :
            Position along the main-span axis in m. Defaults to 0.
        - position_y (float, optional) :
            Lateral offset in m. Defaults to 0.
        - span_length (float | None, optional) :
            When given, position_x must lie in [0, span_length].
        """
        if not channel_id or not isinstance(channel_id, str):
            raise ArgsError(argument_name='channel_id', add='A non-empty string is required.')
        if kind not in UNIT_OF_KIND:
            raise ArgsError(
                argument_name='kind',
                add=f'Unsupported kind "{kind}". Use one of {sorted(UNIT_OF_KIND)}.',
            )
        if unit is None:
            unit = UNIT_OF_KIND[kind]
        if UNIT_OF_KIND[kind] != unit:
            raise UnitKindMismatch(channel_id=channel_id, kind=kind, unit=unit)
        if span_length is not None and not 0.0 <= position_x <= span_length:
            raise ArgsError(
                argument_name='position_x',
                add=f'{position_x} m lies outside the span [0, {span_length}] m.',
            )
        self.__channel_id = channel_id
        self.__kind = kind
        self.__unit = unit
        self.__position_x = float(position_x)
        self.__position_y = float(position_y)

    @property
    def channel_id(self) -> str:  # pylint: disable=missing-function-docstring
        return self.__channel_id

    @property
    def kind(self) -> ChannelKind:  # pylint: disable=missing-function-docstring
        return self.__kind

    @property
    def unit(self) -> ChannelUnit:  # pylint: disable=missing-function-docstring
        return self.__unit

    @property
    def position_x(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__position_x

    @property
    def position_y(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__position_y

    def to_dict(self) -> _ChannelDict:
        """
        ## Returns:
        - dict: Sidecar representation of the channel.
        """
        return {
            'id': self.channel_id,
            'kind': self.kind,
            'unit': self.unit,
            'position_x_m': self.position_x,
            'position_y_m': self.position_y,
        }

    @classmethod
    def from_dict(cls, value: Mapping) -> 'ChannelSpec':
        """
        ## Summary
        Build a channel from its sidecar representation.
        """
        for _key in ('id', 'kind'):
            if _key not in value:
                raise ArgsError(argument_name=f'channels.{_key}', add='Missing in sidecar.')
        return cls(
            channel_id=value['id'],
            kind=value['kind'],
            unit=value.get('unit'),
            position_x=float(value.get('position_x_m', 0.0)),
            position_y=float(value.get('position_y_m', 0.0)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.to_dict().items()))

    def __repr__(self) -> str:
        return (
            f'ChannelSpec({self.channel_id!r}, {self.kind!r}, '
            f'x={self.position_x}, y={self.position_y})'
        )


class TimeSeriesRecord:
    """
    Synchronized multi-channel samples on one time base.
    Instances are immutable: samples are a read-only array and
    annotations a read-only mapping.
    """
    def __init__(
            self,
            sample_rate: float,
            channels: Sequence[ChannelSpec],
            samples: np.ndarray,
            start_time: float = 0.0,
            annotations: Mapping[str, object] | None = None,
        ) -> None:
        """
        ## Args:
        - sample_rate (float) :
            Sampling frequency in Hz.
        - channels (Sequence[ChannelSpec]) :
            One entry per column of samples, in column order.
        - samples (numpy.ndarray) :
            n_samples x n_channels matrix in channel units.
            A 1-D array is accepted for a single channel.
        - start_time (float, optional) :
            Time of the first sample in s. Defaults to 0.
        - annotations (Mapping[str, object] | None, optional) :
            Key/value metadata; values are stored as strings.
        """
        if not np.isfinite(sample_rate) or sample_rate <= 0:
            raise InvalidRate(sample_rate=sample_rate)
        _channels = tuple(channels)
        if not _channels:
            raise ArgsError(argument_name='channels', add='At least one channel is required.')
        _ids = [_channel.channel_id for _channel in _channels]
        if len(set(_ids)) != len(_ids):
            raise ArgsError(argument_name='channels', add=f'Channel ids must be unique: {_ids}')
        _samples = np.array(samples, dtype=float)
        if _samples.ndim == 1 and len(_channels) == 1:
            _samples = _samples.reshape(-1, 1)
        if _samples.ndim != 2 or _samples.shape[1] != len(_channels):
            raise ArgsError(
                argument_name='samples',
                add=(
                    f'Expected shape (n_samples, {len(_channels)}), '
                    f'got {_samples.shape}.'
                ),
            )
        if _samples.shape[0] < 2:
            raise RecordTooShort(n_samples=_samples.shape[0], required=2)
        _bad = np.argwhere(~np.isfinite(_samples))
        if _bad.size:
            raise NonFiniteSample(row=int(_bad[0][0]), column=int(_bad[0][1]))
        _samples.flags.writeable = False
        self.__sample_rate = float(sample_rate)
        self.__channels = _channels
        self.__samples = _samples
        self.__start_time = float(start_time)
        self.__annotations = protect(
            {str(_key): str(_value) for _key, _value in (annotations or {}).items()}
        )

    @property
    def sample_rate(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__sample_rate

    @property
    def channels(self) -> tuple[ChannelSpec, ...]:  # pylint: disable=missing-function-docstring
        return self.__channels

    @property
    def samples(self) -> np.ndarray:  # pylint: disable=missing-function-docstring
        return self.__samples

    @property
    def start_time(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__start_time

    @property
    def annotations(self) -> Mapping[str, str]:  # pylint: disable=missing-function-docstring
        return self.__annotations

    @property
    def n_samples(self) -> int:  # pylint: disable=missing-function-docstring
        return self.__samples.shape[0]

    @property
    def n_channels(self) -> int:  # pylint: disable=missing-function-docstring
        return self.__samples.shape[1]

    @property
    def duration(self) -> float:
        """
        n_samples / sample_rate, in s.
        """
        return self.n_samples / self.sample_rate

    @property
    def time(self) -> np.ndarray:
        """
        Time of every sample in s.
        """
        return self.start_time + np.arange(self.n_samples) / self.sample_rate

    @property
    def channel_ids(self) -> list[str]:  # pylint: disable=missing-function-docstring
        return [_channel.channel_id for _channel in self.channels]

    def channel_index(self, channel_id: str) -> int:
        """
        ## Summary
        Column index of a channel.
        """
        try:
            return self.channel_ids.index(channel_id)
        except ValueError as error:
            raise ArgsError(
                argument_name='channel_id',
                add=f'{channel_id} is not one of {self.channel_ids}.',
            ) from error

    def channel(self, channel_id: str) -> np.ndarray:
        """
        ## Summary
        Samples of one channel.
        """
        return self.samples[:, self.channel_index(channel_id)]

    def replace(
            self,
            samples: np.ndarray | None = None,
            start_time: float | None = None,
            annotations: Mapping[str, object] | None = None,
        ) -> 'TimeSeriesRecord':
        """
        ## Summary
        Return a copy with some fields replaced (rate and channels are kept).
        """
        return TimeSeriesRecord(
            sample_rate=self.sample_rate,
            channels=self.channels,
            samples=self.samples if samples is None else samples,
            start_time=self.start_time if start_time is None else start_time,
            annotations=self.annotations if annotations is None else annotations,
        )

    def with_annotations(self, **annotations: object) -> 'TimeSeriesRecord':
        """
        ## Summary
        Return a copy with annotations added or overwritten.
        """
        _merged = dict(self.annotations)
        _merged.update({_key: str(_value) for _key, _value in annotations.items()})
        return self.replace(annotations=_merged)

    def __repr__(self) -> str:
        return (
            f'TimeSeriesRecord({self.n_samples} x {self.n_channels}, '
            f'{self.sample_rate} Hz, start {self.start_time} s)'
        )


class MeasurementSet:
    """
    Repeated measurements analysed together (e.g. the six impulse tests).
    """
    def __init__(
            self,
            records: Iterable[TimeSeriesRecord],
            label: str,
            names: Sequence[str] | None = None,
        ) -> None:
        """
        ## Args:
        - records (Iterable[TimeSeriesRecord]) :
            At least one record.
        - label (str) :
            Name of the set.
        - names (Sequence[str] | None, optional) :
            One name per record. Defaults to "<label>_<index>".
        """
        _records = tuple(records)
        if not _records:
            raise NoRecords(location=label)
        _kinds: dict[str, str] = {}
        for _record in _records:
            for _channel in _record.channels:
                _known = _kinds.setdefault(_channel.channel_id, _channel.kind)
                if _known != _channel.kind:
                    raise ArgsError(
                        argument_name='records',
                        add=(
                            f'channel {_channel.channel_id} is "{_known}" in one '
                            f'record and "{_channel.kind}" in another.'
                        ),
                    )
        if names is None:
            names = [f'{label}_{_index:02d}' for _index in range(len(_records))]
        if len(names) != len(_records):
            raise ArgsError(argument_name='names', add='One name per record is required.')
        self.__records = _records
        self.__label = label
        self.__names = tuple(names)

    @property
    def records(self) -> tuple[TimeSeriesRecord, ...]:  # pylint: disable=missing-function-docstring
        return self.__records

    @property
    def label(self) -> str:  # pylint: disable=missing-function-docstring
        return self.__label

    @property
    def names(self) -> tuple[str, ...]:  # pylint: disable=missing-function-docstring
        return self.__names

    def __iter__(self):
        return iter(self.__records)

    def __len__(self) -> int:
        return len(self.__records)


def read_record(path: str) -> TimeSeriesRecord:
    """
    ## Summary
    Read a record from a sample CSV and its metadata sidecar.

    ## Args:
    - path (str) :
        Path of <name>.csv. <name>.meta.json must exist next to it.

    ## Returns:
    - TimeSeriesRecord: Channel order follows the sidecar.
    """
    require_file(filepath=path)
    _sidecar = sidecar_path(path)
    if not os.path.isfile(_sidecar):
        raise MissingSidecar(data_path=path, sidecar_path=_sidecar)
    _meta = _read_sidecar(_sidecar)
    _rate = _meta['sample_rate_hz']
    if not _rate > 0:
        raise InvalidRate(sample_rate=_rate)
    _channels = _meta['channels']
    with open(file=path, mode='rt', encoding='utf-8') as file_:
        _lines = file_.read().split('\n')
    while _lines and not _lines[-1].strip():
        _lines.pop()
    for _number, _line in enumerate(_lines, start=1):
        _found = _line.count(',') + 1
        if _found != len(_channels):
            raise RaggedRows(
                file_path=path,
                line_number=_number,
                expected=len(_channels),
                found=_found,
            )
    if len(_lines) < 2:
        raise RecordTooShort(n_samples=len(_lines), required=2)
    _frame = pd.read_csv(
        path,
        header=None,
        float_precision='round_trip',
        skip_blank_lines=True,
    )
    try:
        _samples = _frame.to_numpy(dtype=float)
    except ValueError as error:
        raise ArgsError(argument_name='path', add=f'{path} contains non-numeric values.') from error
    _record = TimeSeriesRecord(
        sample_rate=_rate,
        channels=_channels,
        samples=_samples,
        start_time=_meta['start_time_s'],
        annotations=_meta['annotations'],
    )
    logger.debug('read %s: %r', path, _record)
    return _record


def _read_sidecar(sidecar: str) -> dict:
    # every parse failure is reported as InvalidSidecar naming the field
    try:
        with open(file=sidecar, mode='rt', encoding='utf-8') as file_:
            _meta = json.load(file_)
    except (json.JSONDecodeError, UnicodeDecodeError) as error:
        raise InvalidSidecar(sidecar_path=sidecar, field='(document)', reason=str(error)) from error
    if not isinstance(_meta, Mapping):
        raise InvalidSidecar(sidecar_path=sidecar, field='(document)', reason='A JSON object is required.')
    _parsed: dict = {}
    _field = 'sample_rate_hz'
    try:
        _parsed['sample_rate_hz'] = float(_meta['sample_rate_hz'])
        _field = 'start_time_s'
        _parsed['start_time_s'] = float(_meta.get('start_time_s', 0.0))
        _field = 'annotations'
        _annotations = _meta.get('annotations') or {}
        if not isinstance(_annotations, Mapping):
            raise TypeError('A JSON object is required.')
        _parsed['annotations'] = _annotations
        _field = 'channels'
        _channels = _meta['channels']
        if not isinstance(_channels, list) or not _channels:
            raise TypeError('A non-empty list is required.')
        _parsed['channels'] = []
        for _index, _channel in enumerate(_channels):
            _field = f'channels[{_index}]'
            if not isinstance(_channel, Mapping):
                raise TypeError('A JSON object is required.')
            _parsed['channels'].append(ChannelSpec.from_dict(_channel))
    except KeyError as error:
        raise InvalidSidecar(sidecar_path=sidecar, field=_field, reason='Missing.') from error
    except (TypeError, ValueError) as error:
        raise InvalidSidecar(sidecar_path=sidecar, field=_field, reason=str(error)) from error
    except (ArgsError, UnitKindMismatch) as error:
        raise InvalidSidecar(sidecar_path=sidecar, field=_field, reason=str(error)) from error
    return _parsed


def write_record(record: TimeSeriesRecord, path: str) -> None:
    """
    ## Summary
    Write a record as <name>.csv plus <name>.meta.json.

    ## Args:
    - record (TimeSeriesRecord) :
        Record to write.
    - path (str) :
        Destination CSV path; the parent directory must exist.
    """
    if not path.lower().endswith('.csv'):
        raise ArgsError(argument_name='path', add='Record files must end with ".csv".')
    _bad = np.argwhere(~np.isfinite(record.samples))
    if _bad.size:
        raise NonFiniteSample(row=int(_bad[0][0]), column=int(_bad[0][1]))
    _parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(_parent):
        raise UnwritablePath(file_path=path, reason='directory does not exist')
    _meta = {
        'sample_rate_hz': record.sample_rate,
        'start_time_s': record.start_time,
        'channels': [_channel.to_dict() for _channel in record.channels],
        'annotations': dict(record.annotations),
    }
    try:
        pd.DataFrame(record.samples).to_csv(
            path,
            header=False,
            index=False,
            float_format=FLOAT_FORMAT,
            lineterminator='\n',
        )
        with open(file=sidecar_path(path), mode='wt', encoding='utf-8', newline='\n') as file_:
            json.dump(_meta, file_, indent=4, ensure_ascii=False)
            file_.write('\n')
    except OSError as error:
        raise UnwritablePath(file_path=path, reason=str(error)) from error
    logger.info('record written: %s', path)


def _index_at(offset: float, sample_rate: float, n_samples: int) -> int:
    # first sample index k with k / fs >= offset
    _index = math.ceil(offset * sample_rate - _GRID_EPS)
    return min(max(_index, 0), n_samples)


def slice_time(record: TimeSeriesRecord, t0: float, t1: float) -> TimeSeriesRecord:
    """
    ## Summary
    Keep the samples whose time start_time + k / fs lies in [t0, t1).

    ## Args:
    - record (TimeSeriesRecord)
    - t0 (float) : Window start in s (inclusive).
    - t1 (float) : Window end in s (exclusive).

    ## Returns:
    - TimeSeriesRecord: Same rate and channels; start_time is the time of
        the first kept sample.
    """
    if t1 < t0:
        raise ReversedWindow(t0=t0, t1=t1)
    _start = record.start_time
    _end = _start + record.duration
    _slack = _GRID_EPS / record.sample_rate
    if t0 < _start - _slack or t1 > _end + _slack:
        raise ArgsError(
            argument_name='t0, t1',
            add=f'Window [{t0}, {t1}) exceeds the record [{_start}, {_end}].',
        )
    _k0 = _index_at(t0 - _start, record.sample_rate, record.n_samples)
    _k1 = _index_at(t1 - _start, record.sample_rate, record.n_samples)
    if _k1 - _k0 < 2:
        raise EmptyWindow(t0=t0, t1=t1)
    return record.replace(
        samples=record.samples[_k0:_k1],
        start_time=_start + _k0 / record.sample_rate,
    )


def load_measurement_set(
        directory: str,
        label: str | None = None,
        recursive: bool = False,
    ) -> MeasurementSet:
    """
    ## Summary
    Read every record of a directory into a MeasurementSet.

    ## Args:
    - directory (str) :
        Directory holding <name>.csv / <name>.meta.json pairs.
    - label (str | None, optional) :
        Set label. Defaults to the directory name.
    - recursive (bool, optional) :
        Descend into sub-directories. Defaults to False.

    ## Returns:
    - MeasurementSet: Records sorted by path, named after their file stem.
    """
    _paths = find_records(directory=directory, recursive=recursive)
    if label is None:
        label = os.path.basename(os.path.normpath(directory))
    if not _paths:
        raise NoRecords(location=directory)
    return MeasurementSet(
        records=[read_record(_path) for _path in _paths],
        label=label,
        names=[os.path.splitext(os.path.basename(_path))[0] for _path in _paths],
    )
