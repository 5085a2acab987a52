"""
Covariance-driven stochastic subspace identification (SSI-cov).

Output covariances are stacked into a block Hankel matrix, whose SVD gives
the observability matrix of a discrete state-space model; the modal poles
follow from the eigenvalues of the shift-invariance solution for A.
Poles are tracked over increasing model orders in a stabilization diagram
and the fully stable ones are clustered into modal estimates.

It uses the following libraries
- numpy
- scipy (linalg)
- pandas (export tables)

Typical usage example:
    cov = estimate_covariances(free_decay, max_lag=80, normalization='biased')
    diagram = build_stabilization_diagram(cov, orders=range(2, 41, 2))
    result = cluster_stable_poles(diagram, min_support=5, freq_gap=0.05)
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Literal, NamedTuple

import numpy as np
import pandas as pd
import scipy.linalg

from omalib.exceptions.exception import (ArgsError, DegenerateShape,
                                         InvalidOrder, RankDeficient,
                                         RecordTooShort)
from omalib.file.records import TimeSeriesRecord

logger = logging.getLogger(__name__)

DEFAULT_ORDERS: tuple[int, ...] = tuple(range(2, 41, 2))
DEFAULT_HANKEL_ROWS = 40
RANK_TOLERANCE = 1e-12
PINV_RTOL = 1e-10
# inclusive thresholds; slack absorbs rounding in the ratios
_BOUNDARY_SLACK = 1e-12


class CovarianceSequence:
    """
    Output covariance blocks R_0 .. R_lags of an n_ch-channel record.
    """
    def __init__(
            self,
            blocks: np.ndarray,
            sample_rate: float,
            channel_ids: Sequence[str] | None = None,
        ) -> None:
        """
        ## Args:
        - blocks (numpy.ndarray) :
            Array (lags + 1) x n_ch x n_ch; blocks[i] = R_i.
        - sample_rate (float) :
            Hz.
        - channel_ids (Sequence[str] | None, optional) :
            Defaults to "ch0", "ch1", ...
        """
        _blocks = np.array(blocks, dtype=float)
        if _blocks.ndim != 3 or _blocks.shape[1] != _blocks.shape[2]:
            raise ArgsError(argument_name='blocks', add='Expected (lags + 1) x n_ch x n_ch.')
        if not sample_rate > 0:
            raise ArgsError(argument_name='sample_rate', add='Must be positive.')
        _r0 = _blocks[0]
        _scale = max(1.0, float(np.abs(_r0).max()))
        if np.abs(_r0 - _r0.T).max() > 1e-8 * _scale:
            raise ArgsError(argument_name='blocks', add='R_0 must be symmetric.')
        if np.linalg.eigvalsh(0.5 * (_r0 + _r0.T)).min() < -1e-8 * _scale:
            raise ArgsError(argument_name='blocks', add='R_0 must be positive semidefinite.')
        if channel_ids is None:
            channel_ids = [f'ch{_index}' for _index in range(_blocks.shape[1])]
        if len(channel_ids) != _blocks.shape[1]:
            raise ArgsError(argument_name='channel_ids', add='One id per channel is required.')
        _blocks.flags.writeable = False
        self.__blocks = _blocks
        self.__sample_rate = float(sample_rate)
        self.__channel_ids = tuple(channel_ids)

    @property
    def blocks(self) -> np.ndarray:  # pylint: disable=missing-function-docstring
        return self.__blocks

    @property
    def lags(self) -> int:  # pylint: disable=missing-function-docstring
        return self.__blocks.shape[0] - 1

    @property
    def n_channels(self) -> int:  # pylint: disable=missing-function-docstring
        return self.__blocks.shape[1]

    @property
    def sample_rate(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__sample_rate

    @property
    def channel_ids(self) -> tuple[str, ...]:  # pylint: disable=missing-function-docstring
        return self.__channel_ids


class Realization(NamedTuple):
    """
    Discrete state-space model x_{k+1} = A x_k, y_k = C x_k.
    """
    A: np.ndarray
    C: np.ndarray
    order: int
    sample_rate: float
    singular_values: np.ndarray


class PoleEstimate(NamedTuple):
    """
    One identified pole (positive-frequency member of a conjugate pair).
    """
    frequency: float
    damping_ratio: float
    mode_shape: np.ndarray
    model_order: int
    stable_frequency: bool = False
    stable_damping: bool = False
    stable_shape: bool = False
    fully_stable: bool = False


class StabilityCriteria(NamedTuple):
    """
    Pole stability thresholds between consecutive model orders.
    rule 'all' requires frequency, damping and shape to be stable;
    'frequency_or_mac' requires damping and (frequency or shape).
    """
    df_rel: float = 0.01
    dzeta_rel: float = 0.05
    mac_min: float = 0.99
    rule: Literal['all', 'frequency_or_mac'] = 'all'


class ModalEstimate(NamedTuple):
    """
    Mode obtained from a cluster of fully stable poles.
    """
    label: str
    frequency: float
    frequency_std: float
    damping_ratio: float
    damping_std: float
    mode_shape: np.ndarray
    support: int


class StabilizationDiagram:
    """
    Poles of every model order with their stability verdicts.
    """
    def __init__(
            self,
            poles: Sequence[PoleEstimate],
            orders: Sequence[int],
            criteria: StabilityCriteria,
            failed_orders: Sequence[int] = (),
            channel_ids: Sequence[str] | None = None,
        ) -> None:
        _orders = tuple(int(_order) for _order in orders)
        if any(_b <= _a for _a, _b in zip(_orders, _orders[1:])):
            raise ArgsError(argument_name='orders', add='Orders must be strictly increasing.')
        for _pole in poles:
            if _pole.model_order not in _orders:
                raise ArgsError(
                    argument_name='poles',
                    add=f'pole order {_pole.model_order} is not one of {_orders}.',
                )
        self.__poles = tuple(sorted(poles, key=lambda _pole: (_pole.model_order, _pole.frequency)))
        self.__orders = _orders
        self.__criteria = criteria
        self.__failed_orders = tuple(failed_orders)
        self.__channel_ids = None if channel_ids is None else tuple(channel_ids)

    @property
    def poles(self) -> tuple[PoleEstimate, ...]:  # pylint: disable=missing-function-docstring
        return self.__poles

    @property
    def orders(self) -> tuple[int, ...]:  # pylint: disable=missing-function-docstring
        return self.__orders

    @property
    def criteria(self) -> StabilityCriteria:  # pylint: disable=missing-function-docstring
        return self.__criteria

    @property
    def failed_orders(self) -> tuple[int, ...]:  # pylint: disable=missing-function-docstring
        return self.__failed_orders

    @property
    def channel_ids(self) -> tuple[str, ...] | None:  # pylint: disable=missing-function-docstring
        return self.__channel_ids

    def poles_at(self, order: int) -> list[PoleEstimate]:
        """
        ## Summary
        Poles identified at one model order, sorted by frequency.
        """
        return [_pole for _pole in self.__poles if _pole.model_order == order]

    def stable_poles(self) -> list[PoleEstimate]:
        """
        ## Summary
        Fully stable poles of all orders.
        """
        return [_pole for _pole in self.__poles if _pole.fully_stable]


class ModalResult:
    """
    Modes identified from a stabilization diagram, sorted by frequency.
    """
    def __init__(self, modes: Iterable[ModalEstimate]) -> None:
        self.__modes = tuple(sorted(modes, key=lambda _mode: _mode.frequency))

    @property
    def modes(self) -> tuple[ModalEstimate, ...]:  # pylint: disable=missing-function-docstring
        return self.__modes

    def nearest(self, frequency: float) -> ModalEstimate | None:
        """
        ## Summary
        Mode closest in frequency, None for an empty result.
        """
        if not self.__modes:
            return None
        return min(self.__modes, key=lambda _mode: abs(_mode.frequency - frequency))

    def __len__(self) -> int:
        return len(self.__modes)

    def __iter__(self):
        return iter(self.__modes)


def estimate_covariances(
        record: TimeSeriesRecord,
        max_lag: int,
        normalization: Literal['unbiased', 'biased'] = 'unbiased',
    ) -> CovarianceSequence:
    """
    ## Summary
    Output covariance blocks R_i = 1/(N - i) sum_k y_{k+i} y_k^T of the
    mean-removed record, i = 0 .. max_lag.

    ## Args:
    - record (TimeSeriesRecord)
    - max_lag (int) :
        Largest lag, smaller than n_samples / 2.
    - normalization (Literal['unbiased', 'biased'], optional) :
        'unbiased' divides by N - i, 'biased' by N. Defaults to 'unbiased'.
        Use 'biased' on free-decay records: there 1/(N - i) grows with the
        lag and lowers every identified decay rate by about fs / N.

    ## Returns:
    - CovarianceSequence
    """
    _n = record.n_samples
    if max_lag < 0:
        raise ArgsError(argument_name='max_lag', add='Must be non-negative.')
    if not max_lag < _n / 2:
        raise RecordTooShort(n_samples=_n, required=2 * max_lag + 1)
    if normalization not in ('unbiased', 'biased'):
        raise ArgsError(argument_name='normalization', add='Use "unbiased" or "biased".')
    _y = record.samples - record.samples.mean(axis=0)
    _blocks = np.empty((max_lag + 1, record.n_channels, record.n_channels))
    for _lag in range(max_lag + 1):
        _divisor = _n - _lag if normalization == 'unbiased' else _n
        _blocks[_lag] = _y[_lag:].T @ _y[:_n - _lag] / _divisor
    # R_0 is symmetric by definition; remove rounding asymmetry
    _blocks[0] = 0.5 * (_blocks[0] + _blocks[0].T)
    return CovarianceSequence(
        blocks=_blocks,
        sample_rate=record.sample_rate,
        channel_ids=record.channel_ids,
    )


def block_hankel(cov: CovarianceSequence, hankel_rows: int) -> np.ndarray:
    """
    ## Summary
    Square block Hankel matrix with block (r, c) = R_{r + c + 1}.

    ## Args:
    - cov (CovarianceSequence) :
        Needs at least 2 * hankel_rows - 1 lags.
    - hankel_rows (int) :
        Number of block rows (and block columns).

    ## Returns:
    - numpy.ndarray: (hankel_rows * n_ch) x (hankel_rows * n_ch)
    """
    if hankel_rows < 1:
        raise ArgsError(argument_name='hankel_rows', add='Must be at least 1.')
    if cov.lags < 2 * hankel_rows - 1:
        raise ArgsError(
            argument_name='hankel_rows',
            add=(
                f'{hankel_rows} block rows need {2 * hankel_rows - 1} lags, '
                f'the covariance sequence has {cov.lags}.'
            ),
        )
    return np.block([
        [cov.blocks[_row + _col + 1] for _col in range(hankel_rows)]
        for _row in range(hankel_rows)
    ])


def _realize_from_svd(
        left: np.ndarray,
        singular_values: np.ndarray,
        order: int,
        n_channels: int,
        sample_rate: float,
    ) -> Realization:
    if order <= 0 or order % 2:
        raise InvalidOrder(order=order, add='Model orders must be positive and even.')
    if order > singular_values.size:
        raise InvalidOrder(
            order=order,
            add=f'The block Hankel matrix supports orders up to {singular_values.size}.',
        )
    _ratio = singular_values[order - 1] / singular_values[0] if singular_values[0] > 0 else 0.0
    if _ratio < RANK_TOLERANCE:
        raise RankDeficient(order=order, ratio=_ratio)
    _observability = left[:, :order] * np.sqrt(singular_values[:order])
    _c = _observability[:n_channels]
    _a = scipy.linalg.pinv(_observability[:-n_channels], rtol=PINV_RTOL) @ _observability[n_channels:]
    return Realization(
        A=_a,
        C=_c,
        order=order,
        sample_rate=sample_rate,
        singular_values=singular_values,
    )


def realize_system(
        cov: CovarianceSequence,
        order: int,
        hankel_rows: int,
    ) -> Realization:
    """
    ## Summary
    Balanced state-space realization of a given order.

    ## Args:
    - cov (CovarianceSequence)
    - order (int) :
        Even model order, at most hankel_rows * n_ch.
    - hankel_rows (int) :
        Block rows of the Hankel matrix.

    ## Returns:
    - Realization: A (order x order) and C (n_ch x order).
    """
    if order <= 0 or order % 2:
        raise InvalidOrder(order=order, add='Model orders must be positive and even.')
    if order > hankel_rows * cov.n_channels:
        raise InvalidOrder(
            order=order,
            add=f'At most hankel_rows * n_ch = {hankel_rows * cov.n_channels}.',
        )
    _left, _singular, _ = scipy.linalg.svd(block_hankel(cov, hankel_rows), full_matrices=False)
    return _realize_from_svd(_left, _singular, order, cov.n_channels, cov.sample_rate)


def modal_parameters(eigenvalue: complex, sample_rate: float) -> tuple[float, float]:
    """
    ## Summary
    Natural frequency and damping ratio of a discrete-time eigenvalue.

    ## Args:
    - eigenvalue (complex) : Eigenvalue of A.
    - sample_rate (float) : Hz.

    ## Returns:
    - tuple[float, float]: (frequency in Hz, damping ratio)
    """
    _mu = np.log(complex(eigenvalue)) * sample_rate
    _modulus = abs(_mu)
    return _modulus / (2.0 * math.pi), -_mu.real / _modulus


def poles_from_realization(
        real: Realization,
        sample_rate: float | None = None,
    ) -> list[PoleEstimate]:
    """
    ## Summary
    Modal poles of a realization, one per conjugate pair.

    ## Args:
    - real (Realization)
    - sample_rate (float | None, optional) :
        Defaults to the realization's sample rate.

    ## Returns:
    - list[PoleEstimate]: Sorted by frequency; mode shapes are scaled so
        that their largest-magnitude entry is 1 + 0i.
    """
    if sample_rate is None:
        sample_rate = real.sample_rate
    if not sample_rate > 0:
        raise ArgsError(argument_name='sample_rate', add='Must be positive.')
    _a = np.asarray(real.A)
    if _a.ndim != 2 or _a.shape[0] != _a.shape[1]:
        raise ArgsError(argument_name='real.A', add='A must be square.')
    _values, _vectors = scipy.linalg.eig(_a)
    _poles: list[PoleEstimate] = []
    _discarded = 0
    for _index, _value in enumerate(_values):
        if _value.imag > 0:
            _frequency, _damping = modal_parameters(_value, sample_rate)
            _shape = np.asarray(real.C) @ _vectors[:, _index]
            _largest = int(np.argmax(np.abs(_shape)))
            if _shape[_largest] != 0:
                _shape = _shape / _shape[_largest]
                _shape[_largest] = 1.0
            _poles.append(PoleEstimate(
                frequency=float(_frequency),
                damping_ratio=float(_damping),
                mode_shape=_shape,
                model_order=real.order,
            ))
        elif _value.imag == 0 and _value.real < 0:
            _discarded += 1
    if _discarded:
        logger.warning(
            'order %d: %d eigenvalue(s) on the negative real axis discarded',
            real.order, _discarded,
        )
    _poles.sort(key=lambda _pole: _pole.frequency)
    return _poles


def mac(shape_a: np.ndarray, shape_b: np.ndarray) -> float:
    """
    ## Summary
    Modal assurance criterion |a^H b|^2 / ((a^H a)(b^H b)).

    ## Args:
    - shape_a (numpy.ndarray) : Complex or real vector.
    - shape_b (numpy.ndarray) : Vector of the same length.

    ## Returns:
    - float: In [0, 1]; 1 iff the vectors are collinear.
    """
    _a = np.asarray(shape_a).ravel()
    _b = np.asarray(shape_b).ravel()
    if _a.size == 0 or _a.size != _b.size:
        raise ArgsError(argument_name='shape_a, shape_b', add='Equal, non-zero lengths required.')
    _norm_a = np.vdot(_a, _a).real
    _norm_b = np.vdot(_b, _b).real
    if _norm_a == 0 or _norm_b == 0:
        raise DegenerateShape()
    _value = abs(np.vdot(_a, _b)) ** 2 / (_norm_a * _norm_b)
    return float(min(max(_value, 0.0), 1.0))


def _within(ratio: float, limit: float) -> bool:
    return ratio <= limit * (1.0 + _BOUNDARY_SLACK)


def compare_poles(
        current: PoleEstimate,
        previous: PoleEstimate,
        criteria: StabilityCriteria = StabilityCriteria(),
    ) -> PoleEstimate:
    """
    ## Summary
    Stability flags of a pole against its match at the previous order.

    ## Args:
    - current (PoleEstimate)
    - previous (PoleEstimate)
    - criteria (StabilityCriteria, optional)

    ## Returns:
    - PoleEstimate: current with the stability flags set.
    """
    _stable_f = _within(abs(current.frequency - previous.frequency) / previous.frequency,
                        criteria.df_rel)
    if previous.damping_ratio == 0:
        _stable_zeta = current.damping_ratio == 0
    else:
        _stable_zeta = _within(
            abs(current.damping_ratio - previous.damping_ratio) / abs(previous.damping_ratio),
            criteria.dzeta_rel,
        )
    _stable_shape = mac(current.mode_shape, previous.mode_shape) >= criteria.mac_min * (1.0 - _BOUNDARY_SLACK)
    if criteria.rule == 'all':
        _fully = _stable_f and _stable_zeta and _stable_shape
    elif criteria.rule == 'frequency_or_mac':
        _fully = _stable_zeta and (_stable_f or _stable_shape)
    else:
        raise ArgsError(argument_name='criteria.rule', add='Use "all" or "frequency_or_mac".')
    return current._replace(
        stable_frequency=_stable_f,
        stable_damping=_stable_zeta,
        stable_shape=_stable_shape,
        fully_stable=_fully,
    )


def _nearest_previous(current: PoleEstimate, previous: Sequence[PoleEstimate]) -> PoleEstimate:
    # nearest in frequency; ties go to the higher MAC
    def _key(_candidate: PoleEstimate) -> tuple[float, float]:
        return (
            abs(_candidate.frequency - current.frequency),
            -mac(current.mode_shape, _candidate.mode_shape),
        )
    return min(previous, key=_key)


def assess_stability(
        poles_by_order: Mapping[int, Sequence[PoleEstimate]],
        criteria: StabilityCriteria = StabilityCriteria(),
        orders: Sequence[int] | None = None,
        failed_orders: Sequence[int] = (),
        channel_ids: Sequence[str] | None = None,
    ) -> StabilizationDiagram:
    """
    ## Summary
    Compare every pole with its nearest pole of the previous order.

    ## Args:
    - poles_by_order (Mapping[int, Sequence[PoleEstimate]]) :
        Poles of each successfully realized order.
    - criteria (StabilityCriteria, optional) :
        Defaults to 1 % frequency, 5 % damping and MAC 0.99.
    - orders (Sequence[int] | None, optional) :
        All requested orders. Defaults to the keys of poles_by_order.
    - failed_orders (Sequence[int], optional) :
        Orders whose realization failed.
    - channel_ids (Sequence[str] | None, optional)

    ## Returns:
    - StabilizationDiagram
    """
    _realized = sorted(poles_by_order)
    if orders is None:
        orders = _realized
    _flagged: list[PoleEstimate] = []
    _previous: Sequence[PoleEstimate] = ()
    for _order in _realized:
        _current = poles_by_order[_order]
        for _pole in _current:
            if _previous:
                _flagged.append(compare_poles(_pole, _nearest_previous(_pole, _previous), criteria))
            else:
                _flagged.append(_pole)
        _previous = _current
    return StabilizationDiagram(
        poles=_flagged,
        orders=sorted(set(orders) | set(_realized)),
        criteria=criteria,
        failed_orders=failed_orders,
        channel_ids=channel_ids,
    )


def default_hankel_rows(max_order: int, cov: CovarianceSequence) -> int:
    """
    ## Summary
    Block rows used when none are given: 40, limited by the available lags,
    but never fewer than needed to reach max_order.
    """
    _needed = math.ceil(max_order / cov.n_channels)
    return max(_needed, min(DEFAULT_HANKEL_ROWS, (cov.lags + 1) // 2))


def build_stabilization_diagram(
        cov: CovarianceSequence,
        orders: Iterable[int] = DEFAULT_ORDERS,
        hankel_rows: int | None = None,
        criteria: StabilityCriteria = StabilityCriteria(),
    ) -> StabilizationDiagram:
    """
    ## Summary
    Realize every model order and assess pole stability across orders.

    ## Args:
    - cov (CovarianceSequence)
    - orders (Iterable[int], optional) :
        Even, increasing model orders. Defaults to 2, 4, ..., 40.
    - hankel_rows (int | None, optional) :
        Defaults to default_hankel_rows(max(orders), cov).
    - criteria (StabilityCriteria, optional)

    ## Returns:
    - StabilizationDiagram: Orders whose realization failed are listed in
        failed_orders and carry no poles.
    """
    _orders = [int(_order) for _order in orders]
    if not _orders:
        raise ArgsError(argument_name='orders', add='At least one order is required.')
    if any(_order % 2 for _order in _orders):
        raise ArgsError(argument_name='orders', add='Model orders must be even.')
    if any(_b <= _a for _a, _b in zip(_orders, _orders[1:])):
        raise ArgsError(argument_name='orders', add='Orders must be strictly increasing.')
    if hankel_rows is None:
        hankel_rows = default_hankel_rows(max(_orders), cov)
    _left, _singular, _ = scipy.linalg.svd(block_hankel(cov, hankel_rows), full_matrices=False)
    _poles_by_order: dict[int, list[PoleEstimate]] = {}
    _failed: list[int] = []
    for _order in _orders:
        try:
            _real = _realize_from_svd(_left, _singular, _order, cov.n_channels, cov.sample_rate)
        except (InvalidOrder, RankDeficient) as error:
            logger.warning('order %d skipped: %s', _order, error)
            _failed.append(_order)
            continue
        _poles_by_order[_order] = poles_from_realization(_real)
        logger.debug('order %d: %d pole(s)', _order, len(_poles_by_order[_order]))
    return assess_stability(
        _poles_by_order,
        criteria=criteria,
        orders=_orders,
        failed_orders=_failed,
        channel_ids=cov.channel_ids,
    )


def cluster_stable_poles(
        diagram: StabilizationDiagram,
        min_support: int = 5,
        freq_gap: float = 0.05,
        mode_labels: Sequence[Mapping] | None = None,
        label_tolerance: float = 0.15,
    ) -> ModalResult:
    """
    ## Summary
    Group fully stable poles by single linkage in frequency.

    ## Args:
    - diagram (StabilizationDiagram)
    - min_support (int, optional) :
        Minimum number of poles per mode, at least 2. Defaults to 5.
    - freq_gap (float, optional) :
        Largest frequency gap in Hz inside a cluster. Defaults to 0.05 Hz.
    - mode_labels (Sequence[Mapping] | None, optional) :
        {label, frequency} used to name clusters after the nearest nominal
        frequency within label_tolerance; otherwise "mode_<k>".
    - label_tolerance (float, optional) :
        Defaults to 0.15 Hz.

    ## Returns:
    - ModalResult: Mean and sample std of frequency and damping per
        cluster, and the mode shape of the pole at the median order.
    """
    if min_support < 2:
        raise ArgsError(argument_name='min_support', add='Must be at least 2.')
    _stable = sorted(diagram.stable_poles(), key=lambda _pole: _pole.frequency)
    _clusters: list[list[PoleEstimate]] = []
    for _pole in _stable:
        if _clusters and _pole.frequency - _clusters[-1][-1].frequency <= freq_gap:
            _clusters[-1].append(_pole)
        else:
            _clusters.append([_pole])
    _modes: list[ModalEstimate] = []
    for _cluster in _clusters:
        if len(_cluster) < min_support:
            continue
        _frequencies = np.array([_pole.frequency for _pole in _cluster])
        _dampings = np.array([_pole.damping_ratio for _pole in _cluster])
        _by_order = sorted(_cluster, key=lambda _pole: (_pole.model_order, _pole.frequency))
        _median = _by_order[(len(_by_order) - 1) // 2]
        _mean_frequency = float(_frequencies.mean())
        _modes.append(ModalEstimate(
            label=_cluster_label(_mean_frequency, len(_modes), mode_labels, label_tolerance),
            frequency=_mean_frequency,
            frequency_std=float(_frequencies.std(ddof=1)),
            damping_ratio=float(_dampings.mean()),
            damping_std=float(_dampings.std(ddof=1)),
            mode_shape=_median.mode_shape,
            support=len(_cluster),
        ))
    logger.info('%d mode(s) from %d stable pole(s)', len(_modes), len(_stable))
    return ModalResult(modes=_modes)


def _cluster_label(
        frequency: float,
        index: int,
        mode_labels: Sequence[Mapping] | None,
        tolerance: float,
    ) -> str:
    if mode_labels:
        _nearest = min(mode_labels, key=lambda _mode: abs(_mode['frequency'] - frequency))
        if abs(_nearest['frequency'] - frequency) <= tolerance:
            return str(_nearest['label'])
    return f'mode_{index + 1}'


def diagram_frame(diagram: StabilizationDiagram) -> pd.DataFrame:
    """
    ## Summary
    Export table: order, frequency_hz, damping_ratio, stable_f, stable_zeta,
    stable_mac, fully_stable.
    """
    return pd.DataFrame(
        [
            (_pole.model_order, _pole.frequency, _pole.damping_ratio,
             _pole.stable_frequency, _pole.stable_damping,
             _pole.stable_shape, _pole.fully_stable)
            for _pole in diagram.poles
        ],
        columns=['order', 'frequency_hz', 'damping_ratio', 'stable_f',
                 'stable_zeta', 'stable_mac', 'fully_stable'],
    )


def modal_result_frame(
        result: ModalResult,
        channel_ids: Sequence[str] | None = None,
    ) -> pd.DataFrame:
    """
    ## Summary
    Export table of the clustered modes; mode-shape entries are written as
    magnitude and phase (degrees) per channel.
    """
    _rows = []
    for _mode in result:
        _row = {
            'label': _mode.label,
            'frequency_hz': _mode.frequency,
            'frequency_std_hz': _mode.frequency_std,
            'damping_ratio': _mode.damping_ratio,
            'damping_std': _mode.damping_std,
            'support': _mode.support,
        }
        _ids = channel_ids or [f'ch{_index}' for _index in range(_mode.mode_shape.size)]
        for _channel_id, _entry in zip(_ids, _mode.mode_shape):
            _row[f'shape_abs_{_channel_id}'] = float(abs(_entry))
            _row[f'shape_deg_{_channel_id}'] = float(np.degrees(np.angle(_entry)))
        _rows.append(_row)
    return pd.DataFrame(_rows)
