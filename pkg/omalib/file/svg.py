"""
This module draws the report figures as SVG files:
spectra, stabilization diagrams and free-decay curves.

It uses the following libraries
- reportlab (graphics.shapes, graphics.renderSVG)

Typical usage example:
    plot_spectrum(spectrum, 'out/spectra/impulse_01.svg', band=(1.0, 9.0))
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from reportlab.graphics import renderSVG
from reportlab.graphics.shapes import Circle, Drawing, Line, PolyLine, String
from reportlab.lib import colors

from omalib.analysis.decay import PeakPair
from omalib.analysis.spectral import PeakSet, Spectrum
from omalib.analysis.ssi import StabilizationDiagram
from omalib.exceptions.exception import ArgsError, UnwritablePath

logger = logging.getLogger(__name__)

WIDTH = 640
HEIGHT = 400
MARGIN = 56
MAX_POLYLINE_POINTS = 4000
SERIES_COLORS = (
    colors.HexColor('#1f77b4'),
    colors.HexColor('#d62728'),
    colors.HexColor('#2ca02c'),
    colors.HexColor('#9467bd'),
    colors.HexColor('#ff7f0e'),
    colors.HexColor('#8c564b'),
)


class _Axes:
    """
    Linear mapping of a data window onto the plot area, with ticks.
    """
    def __init__(
            self,
            x_range: tuple[float, float],
            y_range: tuple[float, float],
            title: str,
            x_label: str,
            y_label: str,
        ) -> None:
        self.__x_range = _widen(x_range)
        self.__y_range = _widen(y_range)
        self.drawing = Drawing(WIDTH, HEIGHT)
        self.__draw_frame(title, x_label, y_label)

    def x(self, value: float) -> float:  # pylint: disable=missing-function-docstring
        _lo, _hi = self.__x_range
        return MARGIN + (value - _lo) / (_hi - _lo) * (WIDTH - 2 * MARGIN)

    def y(self, value: float) -> float:  # pylint: disable=missing-function-docstring
        _lo, _hi = self.__y_range
        return MARGIN + (value - _lo) / (_hi - _lo) * (HEIGHT - 2 * MARGIN)

    def __draw_frame(self, title: str, x_label: str, y_label: str) -> None:
        _left, _right = MARGIN, WIDTH - MARGIN
        _bottom, _top = MARGIN, HEIGHT - MARGIN
        for _x0, _y0, _x1, _y1 in (
                (_left, _bottom, _right, _bottom), (_left, _top, _right, _top),
                (_left, _bottom, _left, _top), (_right, _bottom, _right, _top)):
            self.drawing.add(Line(_x0, _y0, _x1, _y1, strokeColor=colors.black, strokeWidth=0.8))
        for _value in _ticks(*self.__x_range):
            _px = self.x(_value)
            self.drawing.add(Line(_px, _bottom, _px, _bottom - 4, strokeColor=colors.black))
            self.drawing.add(String(_px, _bottom - 16, _format_tick(_value), fontSize=9, textAnchor='middle'))
        for _value in _ticks(*self.__y_range):
            _py = self.y(_value)
            self.drawing.add(Line(_left, _py, _left - 4, _py, strokeColor=colors.black))
            self.drawing.add(String(_left - 6, _py - 3, _format_tick(_value), fontSize=9, textAnchor='end'))
        self.drawing.add(String(WIDTH / 2, HEIGHT - MARGIN + 16, title, fontSize=12, textAnchor='middle'))
        self.drawing.add(String(WIDTH / 2, 12, x_label, fontSize=10, textAnchor='middle'))
        self.drawing.add(String(12, HEIGHT - MARGIN + 4, y_label, fontSize=10, textAnchor='start'))

    def polyline(self, xs: np.ndarray, ys: np.ndarray, color, width: float = 1.0) -> None:
        """
        ## Summary
        Add a polyline, thinned to at most MAX_POLYLINE_POINTS vertices.
        """
        _step = max(1, math.ceil(len(xs) / MAX_POLYLINE_POINTS))
        _points: list[float] = []
        for _x, _y in zip(xs[::_step], ys[::_step]):
            _points.extend((self.x(float(_x)), self.y(float(_y))))
        if len(_points) >= 4:
            self.drawing.add(PolyLine(_points, strokeColor=color, strokeWidth=width))

    def marker(self, x: float, y: float, color, filled: bool = True, radius: float = 2.5) -> None:
        """
        ## Summary
        Add a circle marker at a data point.
        """
        self.drawing.add(Circle(
            self.x(x), self.y(y), radius,
            fillColor=color if filled else None,
            strokeColor=color,
            strokeWidth=0.6,
        ))

    def legend(self, labels: Sequence[str]) -> None:
        """
        ## Summary
        Series names in the upper right corner.
        """
        for _index, _label in enumerate(labels):
            _y = HEIGHT - MARGIN - 14 * (_index + 1)
            self.drawing.add(String(
                WIDTH - MARGIN - 6, _y, _label, fontSize=9, textAnchor='end',
                fillColor=SERIES_COLORS[_index % len(SERIES_COLORS)],
            ))

    def save(self, filepath: str) -> str:
        """
        ## Summary
        Write the drawing as SVG.
        """
        try:
            renderSVG.drawToFile(self.drawing, filepath)
        except OSError as error:
            raise UnwritablePath(file_path=filepath, reason=str(error)) from error
        logger.info('figure written: %s', filepath)
        return filepath


def _widen(value_range: tuple[float, float]) -> tuple[float, float]:
    _lo, _hi = float(value_range[0]), float(value_range[1])
    if not (math.isfinite(_lo) and math.isfinite(_hi)):
        raise ArgsError(argument_name='range', add=f'Non-finite axis range {value_range}.')
    if _hi <= _lo:
        _pad = abs(_lo) * 0.5 or 1.0
        return _lo - _pad, _hi + _pad
    return _lo, _hi


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    _raw = (hi - lo) / target
    _magnitude = 10 ** math.floor(math.log10(_raw))
    _step = next(_m * _magnitude for _m in (1, 2, 5, 10) if _m * _magnitude >= _raw)
    _first = math.ceil(lo / _step) * _step
    return [float(_value) for _value in np.arange(_first, hi + 1e-9 * _step, _step)]


def _format_tick(value: float) -> str:
    return f'{value:.6g}'


def plot_spectrum(
        spectrum: Spectrum,
        filepath: str,
        band: tuple[float, float] | None = None,
        peaks: PeakSet | None = None,
        title: str = 'Normalized amplitude spectrum',
    ) -> str:
    """
    ## Summary
    One normalized magnitude curve per channel, picked peaks as markers.

    ## Args:
    - spectrum (Spectrum)
    - filepath (str) : Destination .svg.
    - band (tuple[float, float] | None, optional) :
        Frequency window shown. Defaults to the spectrum's normalized band.
    - peaks (PeakSet | None, optional)
    - title (str, optional)

    ## Returns:
    - str: filepath
    """
    _band = band or spectrum.normalized_band
    _mask = (spectrum.frequencies >= _band[0]) & (spectrum.frequencies <= _band[1])
    _axes = _Axes(_band, (0.0, 1.05), title, 'Frequency [Hz]', 'Amplitude [-]')
    for _index, _channel_id in enumerate(spectrum.channel_ids):
        _axes.polyline(
            spectrum.frequencies[_mask],
            np.clip(spectrum.channel(_channel_id)[_mask], 0.0, 1.05),
            SERIES_COLORS[_index % len(SERIES_COLORS)],
        )
    if peaks is not None:
        _order = list(spectrum.channel_ids)
        for _peak in peaks:
            _color = SERIES_COLORS[_order.index(_peak.channel) % len(SERIES_COLORS)] \
                if _peak.channel in _order else colors.black
            _axes.marker(_peak.frequency, _peak.magnitude, _color)
    _axes.legend(spectrum.channel_ids)
    return _axes.save(filepath)


def plot_stabilization_diagram(
        diagram: StabilizationDiagram,
        filepath: str,
        band: tuple[float, float] | None = None,
        title: str = 'Stabilization diagram',
    ) -> str:
    """
    ## Summary
    Poles over model order: fully stable poles filled, others hollow.
    """
    _poles = diagram.poles
    if band is None:
        _frequencies = [_pole.frequency for _pole in _poles] or [0.0, 1.0]
        band = (0.0, max(_frequencies))
    _orders = diagram.orders or (0, 1)
    _axes = _Axes(band, (0.0, max(_orders) + 2.0), title, 'Frequency [Hz]', 'Model order')
    for _pole in _poles:
        if not band[0] <= _pole.frequency <= band[1]:
            continue
        if _pole.fully_stable:
            _axes.marker(_pole.frequency, _pole.model_order, SERIES_COLORS[0], filled=True)
        elif _pole.stable_frequency:
            _axes.marker(_pole.frequency, _pole.model_order, SERIES_COLORS[2], filled=False)
        else:
            _axes.marker(_pole.frequency, _pole.model_order, colors.grey, filled=False, radius=1.5)
    _axes.legend(['fully stable', 'stable frequency', 'other'])
    return _axes.save(filepath)


def plot_decay(
        time: np.ndarray,
        values: np.ndarray,
        filepath: str,
        pair: PeakPair | None = None,
        decrement: float | None = None,
        frequency: float | None = None,
        title: str = 'Free decay',
    ) -> str:
    """
    ## Summary
    Filtered free-decay signal with the two read maxima and the
    exponential envelope a1 exp(-Lambda f (t - t1)).
    """
    _time = np.asarray(time, dtype=float)
    _values = np.asarray(values, dtype=float)
    if _time.size != _values.size or _time.size < 2:
        raise ArgsError(argument_name='time, values', add='Equal lengths of at least 2 required.')
    _limit = float(np.abs(_values).max()) * 1.05 or 1.0
    _axes = _Axes((_time[0], _time[-1]), (-_limit, _limit), title, 'Time [s]', 'Response')
    _axes.polyline(_time, _values, SERIES_COLORS[0], width=0.6)
    if pair is not None:
        _axes.marker(pair.t1, pair.a1, SERIES_COLORS[1], radius=3.5)
        _axes.marker(pair.t2, pair.a2, SERIES_COLORS[1], radius=3.5)
        if decrement is not None and frequency is not None:
            _after = _time[_time >= pair.t1]
            _envelope = pair.a1 * np.exp(-decrement * frequency * (_after - pair.t1))
            _axes.polyline(_after, _envelope, SERIES_COLORS[1], width=0.8)
            _axes.polyline(_after, -_envelope, SERIES_COLORS[1], width=0.8)
    return _axes.save(filepath)
