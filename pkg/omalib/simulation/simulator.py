"""
Virtual scale model of a suspension-bridge main span.

Every mode is an independent single-degree-of-freedom oscillator driven by
the modal projection of the load, discretized exactly (zero-order hold) on
an internal grid at least ten times the sensor rate. Sensors read
vertical acceleration from the bending modes and roll rate from the
torsion modes, then add white noise, clip to their range and quantize.

It uses the following libraries
- numpy
- scipy (linalg.expm, signal.ss2tf / lfilter, special.sindg)

Typical usage example:
    defaults = lillebaelt_default()
    record = simulate(defaults.model, defaults.impulse, defaults.sensors, duration=90.0)
"""

import json
import logging
import math
import os
from collections.abc import Mapping, Sequence
from typing import Literal, NamedTuple, TypedDict

import numpy as np
import scipy.linalg
import scipy.signal
import scipy.special

from omalib.exceptions.exception import (ArgsError, PositionOutsideSpan,
                                         RecordTooShort, UnknownMode)
from omalib.file.handler import require_file
from omalib.file.records import ChannelSpec, TimeSeriesRecord

logger = logging.getLogger(__name__)

GRAVITY = 9.81
MAX_DRIVE_FREQUENCY = 10.0
MAX_ANGLE_AMPLITUDE = math.radians(30.0)
MIN_OVERSAMPLING = 10

ModeKind = Literal['bending', 'torsion']
ExcitationKind = Literal['impulse_drop', 'servo_harmonic']

_CHANNEL_SUFFIX: Mapping[str, str] = {
    'acceleration_z': 'az',
    'angular_velocity_x': 'gx',
}


class ModeSpec(NamedTuple):
    """
    One mode of the span. modal_mass is in kg for bending modes and in
    kg m^2 for torsion modes.
    """
    label: str
    kind: ModeKind
    shape_index: int
    frequency: float
    damping_ratio: float
    modal_mass: float = 1.0


def _check_mode(mode: ModeSpec, path: str) -> None:
    if not mode.label:
        raise ArgsError(argument_name=f'{path}.label', add='A non-empty label is required.')
    if mode.kind not in ('bending', 'torsion'):
        raise ArgsError(argument_name=f'{path}.kind', add='Use "bending" or "torsion".')
    if int(mode.shape_index) != mode.shape_index or mode.shape_index < 1:
        raise ArgsError(argument_name=f'{path}.shape_index', add='Must be a positive integer.')
    if not mode.frequency > 0:
        raise ArgsError(argument_name=f'{path}.frequency_hz', add='Must be positive.')
    if not 0 <= mode.damping_ratio < 1:
        raise ArgsError(argument_name=f'{path}.damping_ratio', add='Must satisfy 0 <= zeta < 1.')
    if not mode.modal_mass > 0:
        raise ArgsError(argument_name=f'{path}.modal_mass', add='Must be positive.')


class ModalModel:
    """
    Pinned-pinned main span with sinusoidal mode shapes.
    """
    def __init__(
            self,
            span_length: float,
            modes: Sequence[ModeSpec],
            deck_half_width: float = 0.08,
        ) -> None:
        """
        ## Args:
        - span_length (float) : L in m.
        - modes (Sequence[ModeSpec]) : Unique labels.
        - deck_half_width (float, optional) : b in m. Defaults to 0.08.
        """
        if not span_length > 0:
            raise ArgsError(argument_name='model.span_length_m', add='Must be positive.')
        if not deck_half_width > 0:
            raise ArgsError(argument_name='model.deck_half_width_m', add='Must be positive.')
        _modes = tuple(ModeSpec(*_mode) for _mode in modes)
        if not _modes:
            raise ArgsError(argument_name='model.modes', add='At least one mode is required.')
        for _index, _mode in enumerate(_modes):
            _check_mode(_mode, f'model.modes[{_index}]')
        _labels = [_mode.label for _mode in _modes]
        if len(set(_labels)) != len(_labels):
            raise ArgsError(argument_name='model.modes', add=f'Labels must be unique: {_labels}')
        self.__span_length = float(span_length)
        self.__modes = _modes
        self.__deck_half_width = float(deck_half_width)

    @property
    def span_length(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__span_length

    @property
    def modes(self) -> tuple[ModeSpec, ...]:  # pylint: disable=missing-function-docstring
        return self.__modes

    @property
    def deck_half_width(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__deck_half_width

    @property
    def labels(self) -> list[str]:  # pylint: disable=missing-function-docstring
        return [_mode.label for _mode in self.__modes]

    def mode(self, label: str) -> ModeSpec:
        """
        ## Summary
        Mode by label.
        """
        for _mode in self.__modes:
            if _mode.label == label:
                return _mode
        raise UnknownMode(label=label)

    def with_modes(self, modes: Sequence[ModeSpec]) -> 'ModalModel':
        """
        ## Summary
        Same span with another set of modes.
        """
        return ModalModel(self.__span_length, modes, self.__deck_half_width)


class ExcitationSpec(NamedTuple):
    """
    Drop-weight impulse or oscillating eccentric servo mass.
    Impulse fields: mass, drop_height, pulse_width. Servo fields: mass,
    arm_length, angle_amplitude (rad), drive_frequency, on_duration.
    """
    kind: ExcitationKind
    position_x: float
    position_y: float = 0.0
    mass: float = 0.192
    drop_height: float = 0.10
    pulse_width: float = 0.01
    arm_length: float = 0.029
    angle_amplitude: float = MAX_ANGLE_AMPLITUDE
    drive_frequency: float = 0.0
    on_duration: float = 30.0

    @property
    def impulse(self) -> float:
        """
        J = m sqrt(2 g h) in N s (impulse_drop).
        """
        return self.mass * math.sqrt(2.0 * GRAVITY * self.drop_height)

    @property
    def servo_amplitude(self) -> float:
        """
        Peak vertical force m l theta omega^2 in N (servo_harmonic).
        """
        return self.mass * self.arm_length * self.angle_amplitude * (2.0 * math.pi * self.drive_frequency) ** 2


class SensorSpec(NamedTuple):
    """
    One sensor node. Ranges: accel_range in m/s^2, gyro_range in deg/s.
    Noise densities: m/s^2/sqrt(Hz) and deg/s/sqrt(Hz).
    quantization_bits None disables quantization.
    """
    point: str
    position_x: float
    channels: tuple[str, ...] = ('acceleration_z', 'angular_velocity_x')
    sample_rate: float = 200.0
    accel_range: float = 4.0 * GRAVITY
    gyro_range: float = 1000.0
    accel_noise_density: float = 80e-6 * GRAVITY
    gyro_noise_density: float = 0.001
    quantization_bits: int | None = 16
    rng_seed: int = 0

    def noiseless(self) -> 'SensorSpec':
        """
        ## Summary
        Copy without noise and quantization.
        """
        return self._replace(accel_noise_density=0.0, gyro_noise_density=0.0, quantization_bits=None)


class ForceSample(TypedDict):
    vertical_force: float | np.ndarray
    torque_about_x: float | np.ndarray


class ModalResponse(NamedTuple):
    """
    Modal coordinates on the internal grid, one column per mode.
    """
    time: np.ndarray
    displacement: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray


class LillebaeltDefaults(NamedTuple):
    model: ModalModel
    sensors: list[SensorSpec]
    points: dict[str, float]
    impulse: ExcitationSpec
    servo: ExcitationSpec
    impulse_duration: float
    servo_duration: float
    oversampling: int


class Scenario(NamedTuple):
    model: ModalModel
    excitation: ExcitationSpec
    sensors: list[SensorSpec]
    duration: float
    seed: int
    snr_db: float | None = None
    oversampling: int = MIN_OVERSAMPLING


def mode_shape(model: ModalModel, mode: str, x: float) -> float:
    """
    ## Summary
    sin(k pi x / L) of a mode; the twist-angle shape for torsion modes.

    ## Args:
    - model (ModalModel)
    - mode (str) : Mode label.
    - x (float) : Position in m, 0 <= x <= L.

    ## Returns:
    - float: Exactly 0 at nodes.
    """
    _mode = model.mode(mode)
    if not 0.0 <= x <= model.span_length:
        raise PositionOutsideSpan(position=x, span_length=model.span_length)
    return float(scipy.special.sindg(180.0 * _mode.shape_index * x / model.span_length))


def validate_excitation(spec: ExcitationSpec, model: ModalModel) -> ExcitationSpec:
    """
    ## Summary
    Check an excitation against the actuator limits and the span.

    ## Returns:
    - ExcitationSpec: The same spec.
    """
    if spec.kind not in ('impulse_drop', 'servo_harmonic'):
        raise ArgsError(argument_name='excitation.kind', add='Use "impulse_drop" or "servo_harmonic".')
    if not 0.0 <= spec.position_x <= model.span_length:
        raise PositionOutsideSpan(position=spec.position_x, span_length=model.span_length)
    if abs(spec.position_y) > model.deck_half_width:
        raise ArgsError(
            argument_name='excitation.position_y_m',
            add=f'Must lie on the deck, |y| <= {model.deck_half_width} m.',
        )
    if not spec.mass > 0:
        raise ArgsError(argument_name='excitation.mass_kg', add='Must be positive.')
    if spec.kind == 'impulse_drop':
        if spec.drop_height < 0:
            raise ArgsError(argument_name='excitation.drop_height_m', add='Must be non-negative.')
        if not spec.pulse_width > 0:
            raise ArgsError(argument_name='excitation.pulse_width_s', add='Must be positive.')
        return spec
    if not spec.arm_length > 0:
        raise ArgsError(argument_name='excitation.arm_length_m', add='Must be positive.')
    if not 0 <= spec.angle_amplitude <= MAX_ANGLE_AMPLITUDE * (1.0 + 1e-12):
        raise ArgsError(argument_name='excitation.angle_amplitude_deg', add='Must lie in [0, 30] deg.')
    if not 0 < spec.drive_frequency <= MAX_DRIVE_FREQUENCY:
        raise ArgsError(
            argument_name='excitation.drive_frequency_hz',
            add=f'Must lie in (0, {MAX_DRIVE_FREQUENCY}] Hz.',
        )
    if spec.on_duration < 0:
        raise ArgsError(argument_name='excitation.on_duration_s', add='Must be non-negative.')
    return spec


def excitation_force(spec: ExcitationSpec, t: float | np.ndarray) -> ForceSample:
    """
    ## Summary
    Vertical force and torque about the deck axis at time(s) t.

    ## Description
    impulse_drop: half-sine pulse of width pulse_width starting at t = 0
    whose integral is the impulse m sqrt(2 g h).
    servo_harmonic: m l theta omega^2 sin(omega t) while t < on_duration.
    The torque is the vertical force times position_y.

    ## Args:
    - spec (ExcitationSpec)
    - t (float | numpy.ndarray) : s, t >= 0.

    ## Returns:
    - ForceSample: Scalars for scalar t, arrays otherwise.
    """
    _t = np.asarray(t, dtype=float)
    if np.any(_t < 0):
        raise ArgsError(argument_name='t', add='Must be non-negative.')
    if spec.kind == 'impulse_drop':
        _peak = math.pi * spec.impulse / (2.0 * spec.pulse_width)
        _force = np.where(_t < spec.pulse_width, _peak * np.sin(math.pi * _t / spec.pulse_width), 0.0)
    elif spec.kind == 'servo_harmonic':
        _omega = 2.0 * math.pi * spec.drive_frequency
        _force = np.where(_t < spec.on_duration, spec.servo_amplitude * np.sin(_omega * _t), 0.0)
    else:
        raise ArgsError(argument_name='excitation.kind', add=f'Unknown kind: {spec.kind}')
    _torque = _force * spec.position_y
    if _force.ndim == 0:
        return ForceSample(vertical_force=float(_force), torque_about_x=float(_torque))
    return ForceSample(vertical_force=_force, torque_about_x=_torque)


def _sdof_filter(mode: ModeSpec, step: float) -> tuple[np.ndarray, np.ndarray]:
    # zero-order-hold transition of [q, dq/dt] for one time step
    _omega = 2.0 * math.pi * mode.frequency
    _augmented = np.zeros((3, 3))
    _augmented[0, 1] = 1.0
    _augmented[1, 0] = -_omega ** 2
    _augmented[1, 1] = -2.0 * mode.damping_ratio * _omega
    _augmented[1, 2] = 1.0
    _transition = scipy.linalg.expm(_augmented * step)
    return scipy.signal.ss2tf(_transition[:2, :2], _transition[:2, 2:], np.eye(2), np.zeros((2, 1)))


def modal_coordinates(
        model: ModalModel,
        excitation: ExcitationSpec,
        n_steps: int,
        internal_rate: float,
    ) -> ModalResponse:
    """
    ## Summary
    Response of every mode on the internal grid.

    ## Args:
    - model (ModalModel)
    - excitation (ExcitationSpec)
    - n_steps (int) : Number of internal samples.
    - internal_rate (float) : Hz.

    ## Returns:
    - ModalResponse: q, dq/dt and d2q/dt2 of each mode, in model order.
    """
    validate_excitation(excitation, model)
    _time = np.arange(n_steps) / internal_rate
    _load = excitation_force(excitation, _time)
    _n_modes = len(model.modes)
    _q = np.zeros((n_steps, _n_modes))
    _dq = np.zeros((n_steps, _n_modes))
    _ddq = np.zeros((n_steps, _n_modes))
    for _index, _mode in enumerate(model.modes):
        _shape = mode_shape(model, _mode.label, excitation.position_x)
        _generalized = _load['vertical_force'] if _mode.kind == 'bending' else _load['torque_about_x']
        _input = _shape * _generalized / _mode.modal_mass
        if _shape == 0.0 or not np.any(_input):
            logger.debug('%s is not excited at x = %s m', _mode.label, excitation.position_x)
            continue
        _numerator, _denominator = _sdof_filter(_mode, 1.0 / internal_rate)
        _q[:, _index] = scipy.signal.lfilter(_numerator[0], _denominator, _input)
        _dq[:, _index] = scipy.signal.lfilter(_numerator[1], _denominator, _input)
        _omega = 2.0 * math.pi * _mode.frequency
        _ddq[:, _index] = _input - _omega ** 2 * _q[:, _index] - 2.0 * _mode.damping_ratio * _omega * _dq[:, _index]
    return ModalResponse(time=_time, displacement=_q, velocity=_dq, acceleration=_ddq)


def _finish_channel(
        clean: np.ndarray,
        noise_density: float,
        full_range: float,
        sensor: SensorSpec,
        rng: np.random.Generator,
        snr_db: float | None,
    ) -> np.ndarray:
    if snr_db is not None:
        _sigma = math.sqrt(float(np.mean(clean ** 2))) / 10.0 ** (snr_db / 20.0)
    else:
        _sigma = noise_density * math.sqrt(sensor.sample_rate / 2.0)
    _noisy = clean + _sigma * rng.standard_normal(clean.size)
    _clipped = np.clip(_noisy, -full_range, full_range)
    if sensor.quantization_bits is None:
        return _clipped
    _lsb = 2.0 * full_range / 2 ** sensor.quantization_bits
    return np.clip(np.round(_clipped / _lsb) * _lsb, -full_range, full_range)


def simulate(
        model: ModalModel,
        excitation: ExcitationSpec,
        sensors: Sequence[SensorSpec],
        duration: float,
        oversampling: int = MIN_OVERSAMPLING,
        snr_db: float | None = None,
        annotations: Mapping[str, object] | None = None,
    ) -> TimeSeriesRecord:
    """
    ## Summary
    Sensor record of the span under one excitation.

    ## Args:
    - model (ModalModel)
    - excitation (ExcitationSpec)
    - sensors (Sequence[SensorSpec]) :
        Sensors sharing one sample rate; each has its own noise generator
        seeded with rng_seed.
    - duration (float) : s.
    - oversampling (int, optional) :
        Internal steps per output sample, at least 10. Defaults to 10.
    - snr_db (float | None, optional) :
        Noise level relative to each channel's RMS; replaces the noise
        densities when given.
    - annotations (Mapping[str, object] | None, optional) :
        Added to the excitation annotations.

    ## Returns:
    - TimeSeriesRecord: Channels "<point>_az" and "<point>_gx".
    """
    if not duration > 0:
        raise ArgsError(argument_name='duration_s', add='Must be positive.')
    if not sensors:
        raise ArgsError(argument_name='sensors', add='At least one sensor is required.')
    if int(oversampling) != oversampling or oversampling < MIN_OVERSAMPLING:
        raise ArgsError(argument_name='oversampling', add=f'Must be an integer >= {MIN_OVERSAMPLING}.')
    _rate = sensors[0].sample_rate
    for _index, _sensor in enumerate(sensors):
        if not _sensor.sample_rate > 0:
            raise ArgsError(argument_name=f'sensors[{_index}].sample_rate_hz', add='Must be positive.')
        if _sensor.sample_rate != _rate:
            raise ArgsError(argument_name=f'sensors[{_index}].sample_rate_hz', add='All sensors share one rate.')
        if not 0.0 <= _sensor.position_x <= model.span_length:
            raise PositionOutsideSpan(position=_sensor.position_x, span_length=model.span_length)
        if not (_sensor.accel_range > 0 and _sensor.gyro_range > 0):
            raise ArgsError(argument_name=f'sensors[{_index}]', add='Ranges must be positive.')
    _n_out = int(round(duration * _rate))
    if _n_out < 2:
        raise RecordTooShort(n_samples=_n_out, required=2)
    _response = modal_coordinates(model, excitation, _n_out * int(oversampling), _rate * oversampling)
    _acceleration = _response.acceleration[::int(oversampling)]
    _velocity = _response.velocity[::int(oversampling)]

    _channels: list[ChannelSpec] = []
    _columns: list[np.ndarray] = []
    for _sensor in sensors:
        _rng = np.random.default_rng(_sensor.rng_seed)
        _weights = {
            _kind: np.array([
                mode_shape(model, _mode.label, _sensor.position_x) if _mode.kind == _kind else 0.0
                for _mode in model.modes
            ])
            for _kind in ('bending', 'torsion')
        }
        for _kind in _sensor.channels:
            if _kind == 'acceleration_z':
                _clean = _acceleration @ _weights['bending']
                _column = _finish_channel(_clean, _sensor.accel_noise_density,
                                          _sensor.accel_range, _sensor, _rng, snr_db)
            elif _kind == 'angular_velocity_x':
                _clean = np.degrees(_velocity @ _weights['torsion'])
                _column = _finish_channel(_clean, _sensor.gyro_noise_density,
                                          _sensor.gyro_range, _sensor, _rng, snr_db)
            else:
                raise ArgsError(argument_name=f'sensors.{_sensor.point}.channels', add=f'Unknown channel {_kind}')
            _channels.append(ChannelSpec(
                channel_id=f'{_sensor.point}_{_CHANNEL_SUFFIX[_kind]}',
                kind=_kind,
                position_x=_sensor.position_x,
                span_length=model.span_length,
            ))
            _columns.append(_column)

    _annotations: dict[str, object] = {
        'excitation_kind': excitation.kind,
        'excitation_position_x_m': excitation.position_x,
        'excitation_position_y_m': excitation.position_y,
        'seed': sensors[0].rng_seed,
    }
    if excitation.kind == 'servo_harmonic':
        _annotations['drive_frequency_hz'] = excitation.drive_frequency
        _annotations['excitation_off_s'] = excitation.on_duration
    _annotations.update(annotations or {})
    logger.debug('simulated %s: %d samples, %d channels', excitation.kind, _n_out, len(_channels))
    return TimeSeriesRecord(
        sample_rate=_rate,
        channels=_channels,
        samples=np.column_stack(_columns),
        annotations=_annotations,
    )


def _load_resource() -> dict:
    _path = os.path.join(os.path.dirname(__file__), 'resource/lillebaelt.json')
    with open(file=_path, mode='rt', encoding='utf-8') as file_:
        return json.load(file_)


def _number(
        mapping: Mapping,
        key: str,
        path: str,
        default: float | None = None,
    ) -> float:
    _value = mapping.get(key, default)
    if _value is None:
        raise ArgsError(argument_name=f'{path}.{key}', add='Required field is missing.')
    if isinstance(_value, bool) or not isinstance(_value, (int, float)):
        raise ArgsError(argument_name=f'{path}.{key}', add=f'Expected a number, got {_value!r}.')
    return float(_value)


def _model_from_mapping(mapping: Mapping, path: str = 'model') -> ModalModel:
    if not isinstance(mapping, Mapping):
        raise ArgsError(argument_name=path, add='Expected an object.')
    _modes = mapping.get('modes')
    if not isinstance(_modes, list):
        raise ArgsError(argument_name=f'{path}.modes', add='Expected a list of modes.')
    _specs = []
    for _index, _mode in enumerate(_modes):
        _mode_path = f'{path}.modes[{_index}]'
        if not isinstance(_mode, Mapping):
            raise ArgsError(argument_name=_mode_path, add='Expected an object.')
        _specs.append(ModeSpec(
            label=str(_mode.get('label', '')),
            kind=_mode.get('kind', 'bending'),
            shape_index=int(_number(_mode, 'shape_index', _mode_path)),
            frequency=_number(_mode, 'frequency_hz', _mode_path),
            damping_ratio=_number(_mode, 'damping_ratio', _mode_path),
            modal_mass=_number(_mode, 'modal_mass', _mode_path, 1.0),
        ))
    return ModalModel(
        span_length=_number(mapping, 'span_length_m', path),
        modes=_specs,
        deck_half_width=_number(mapping, 'deck_half_width_m', path, 0.08),
    )


def _excitation_from_mapping(mapping: Mapping, path: str = 'excitation') -> ExcitationSpec:
    if not isinstance(mapping, Mapping):
        raise ArgsError(argument_name=path, add='Expected an object.')
    _kind = mapping.get('kind')
    if _kind not in ('impulse_drop', 'servo_harmonic'):
        raise ArgsError(argument_name=f'{path}.kind', add='Use "impulse_drop" or "servo_harmonic".')
    _common = {
        'kind': _kind,
        'position_x': _number(mapping, 'position_x_m', path),
        'position_y': _number(mapping, 'position_y_m', path, 0.0),
        'mass': _number(mapping, 'mass_kg', path),
    }
    if _kind == 'impulse_drop':
        return ExcitationSpec(
            **_common,
            drop_height=_number(mapping, 'drop_height_m', path, 0.10),
            pulse_width=_number(mapping, 'pulse_width_s', path, 0.01),
        )
    return ExcitationSpec(
        **_common,
        arm_length=_number(mapping, 'arm_length_m', path),
        angle_amplitude=math.radians(_number(mapping, 'angle_amplitude_deg', path, 30.0)),
        drive_frequency=_number(mapping, 'drive_frequency_hz', path),
        on_duration=_number(mapping, 'on_duration_s', path, 30.0),
    )


def _sensors_from_mapping(
        sensors: Sequence[Mapping],
        defaults: Mapping,
        points: Mapping[str, float],
        span_length: float,
        seed: int,
        path: str = 'sensors',
    ) -> list[SensorSpec]:
    _specs: list[SensorSpec] = []
    for _index, _sensor in enumerate(sensors):
        _path = f'{path}[{_index}]'
        if not isinstance(_sensor, Mapping):
            raise ArgsError(argument_name=_path, add='Expected an object.')
        _merged = {**defaults, **_sensor}
        _point = str(_merged.get('point', f'S{_index}'))
        if 'position_x_m' in _merged:
            _position = _number(_merged, 'position_x_m', _path)
        elif _point in points:
            _position = points[_point] * span_length
        else:
            raise ArgsError(
                argument_name=f'{_path}.point',
                add=f'Unknown point "{_point}"; give position_x_m or one of {sorted(points)}.',
            )
        _channels = _merged.get('channels', ('acceleration_z', 'angular_velocity_x'))
        if isinstance(_channels, str) or not isinstance(_channels, (list, tuple)) or not _channels:
            raise ArgsError(argument_name=f'{_path}.channels', add='Expected a non-empty list.')
        _channels = tuple(_channels)
        for _channel in _channels:
            if not isinstance(_channel, str) or _channel not in _CHANNEL_SUFFIX:
                raise ArgsError(argument_name=f'{_path}.channels', add=f'Unknown channel "{_channel}".')
        _bits = _merged.get('quantization_bits', 16)
        if _bits is not None and (isinstance(_bits, bool) or not isinstance(_bits, int) or _bits < 2):
            raise ArgsError(argument_name=f'{_path}.quantization_bits', add='Integer >= 2 or null.')
        _specs.append(SensorSpec(
            point=_point,
            position_x=_position,
            channels=_channels,
            sample_rate=_number(_merged, 'sample_rate_hz', _path),
            accel_range=_number(_merged, 'accel_range_g', _path) * GRAVITY,
            gyro_range=_number(_merged, 'gyro_range_deg_s', _path),
            accel_noise_density=_number(_merged, 'accel_noise_density_ug', _path) * 1e-6 * GRAVITY,
            gyro_noise_density=_number(_merged, 'gyro_noise_density_deg_s', _path),
            quantization_bits=_bits,
            rng_seed=seed + _index,
        ))
    return _specs


def lillebaelt_default(seed: int = 0) -> LillebaeltDefaults:
    """
    ## Summary
    The 1:200 Lillebaelt main-span parameterization.

    ## Description
    Span 3.0 m; modes b1 2.263 Hz / 0.37 %, b2 2.085 Hz / 0.22 %,
    b3 3.752 Hz / 0.19 %, t1 7.906 Hz / 0.33 %; 200 Hz sensors; measurement
    points A = L/6, B = L/4, C = L/2, D = 3L/4, E = 5L/6. The servo is
    driven at b1 unless replaced.

    ## Args:
    - seed (int, optional) : Sensor i uses seed + i. Defaults to 0.

    ## Returns:
    - LillebaeltDefaults
    """
    _resource = _load_resource()
    _model = _model_from_mapping(_resource['model'])
    _points = {_name: _fraction * _model.span_length for _name, _fraction in _resource['points'].items()}
    _sensors = _sensors_from_mapping(
        _resource['sensors'], _resource['sensor'], _resource['points'], _model.span_length, seed,
    )
    _impulse = _excitation_from_mapping(_resource['impulse'], 'impulse')
    _servo = _excitation_from_mapping(
        {**_resource['servo'], 'drive_frequency_hz': _model.modes[0].frequency}, 'servo',
    )
    return LillebaeltDefaults(
        model=_model,
        sensors=_sensors,
        points=_points,
        impulse=_impulse,
        servo=_servo,
        impulse_duration=float(_resource['duration_s']['impulse']),
        servo_duration=float(_resource['duration_s']['servo']),
        oversampling=int(_resource['oversampling']),
    )


_SCENARIO_KEYS = ('model', 'excitation', 'sensors', 'duration_s', 'seed', 'snr_db', 'oversampling')


def scenario_from_mapping(mapping: Mapping) -> Scenario:
    """
    ## Summary
    Validate a scenario object field by field.

    ## Description
    Keys: model, excitation, sensors, duration_s, seed, snr_db, oversampling.
    model and sensors fall back to the Lillebaelt defaults; excitation may
    be the string "impulse" or "servo" for the default devices, or an
    object with a kind. Errors name the offending field path.

    ## Args:
    - mapping (Mapping)

    ## Returns:
    - Scenario
    """
    if not isinstance(mapping, Mapping):
        raise ArgsError(argument_name='scenario', add='Expected a JSON object.')
    _unknown = sorted(set(mapping) - set(_SCENARIO_KEYS))
    if _unknown:
        raise ArgsError(argument_name='scenario', add=f'Unknown field(s): {_unknown}')
    _resource = _load_resource()
    _seed = mapping.get('seed', 0)
    if isinstance(_seed, bool) or not isinstance(_seed, int) or _seed < 0:
        raise ArgsError(argument_name='seed', add='Must be a non-negative integer.')
    _model = _model_from_mapping(mapping['model']) if 'model' in mapping else _model_from_mapping(_resource['model'])
    _excitation = mapping.get('excitation', 'impulse')
    if _excitation in ('impulse', 'servo'):
        _defaults = dict(_resource[_excitation])
        if _excitation == 'servo':
            _defaults['drive_frequency_hz'] = _model.modes[0].frequency
        _duration_default = _resource['duration_s'][_excitation]
        _excitation = _defaults
    elif isinstance(_excitation, Mapping):
        _duration_default = None
    else:
        raise ArgsError(argument_name='excitation', add='Expected "impulse", "servo" or an object.')
    _spec = validate_excitation(_excitation_from_mapping(_excitation), _model)
    _sensors = mapping.get('sensors', _resource['sensors'])
    if not isinstance(_sensors, list) or not _sensors:
        raise ArgsError(argument_name='sensors', add='Expected a non-empty list.')
    _duration = _number(mapping, 'duration_s', 'scenario', _duration_default)
    if not _duration > 0:
        raise ArgsError(argument_name='duration_s', add='Must be positive.')
    _snr = mapping.get('snr_db')
    if _snr is not None:
        _snr = _number(mapping, 'snr_db', 'scenario')
    _oversampling = mapping.get('oversampling', _resource['oversampling'])
    if isinstance(_oversampling, bool) or not isinstance(_oversampling, int) or _oversampling < MIN_OVERSAMPLING:
        raise ArgsError(argument_name='oversampling', add=f'Must be an integer >= {MIN_OVERSAMPLING}.')
    return Scenario(
        model=_model,
        excitation=_spec,
        sensors=_sensors_from_mapping(
            _sensors, _resource['sensor'], _resource['points'], _model.span_length, _seed,
        ),
        duration=_duration,
        seed=_seed,
        snr_db=_snr,
        oversampling=_oversampling,
    )


def load_scenario(filepath: str) -> tuple[Scenario, dict]:
    """
    ## Summary
    Read and validate a scenario JSON file.

    ## Returns:
    - tuple[Scenario, dict]: The scenario and the raw JSON object.
    """
    with open(file=require_file(filepath), mode='rt', encoding='utf-8') as file_:
        try:
            _raw = json.load(file_)
        except json.JSONDecodeError as error:
            raise ArgsError(argument_name='scenario', add=f'Invalid JSON: {error}') from error
    return scenario_from_mapping(_raw), _raw


def run_scenario(scenario: Scenario, annotations: Mapping[str, object] | None = None) -> TimeSeriesRecord:
    """
    ## Summary
    simulate() with the scenario's settings; the seed is annotated.
    """
    _record = simulate(
        scenario.model,
        scenario.excitation,
        scenario.sensors,
        scenario.duration,
        oversampling=scenario.oversampling,
        snr_db=scenario.snr_db,
    )
    return _record.with_annotations(**{'seed': scenario.seed, **(annotations or {})})
