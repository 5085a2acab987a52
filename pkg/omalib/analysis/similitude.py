"""
This module converts scale-model results to the full-scale structure.

Frequencies scale with F_f = 1 / sqrt(F_l) for a geometry reduction F_l;
damping ratios are dimensionless and carried over unchanged, flagged as
uncalibrated.

Typical usage example:
    law = ScalingLaw.stated(frequency_factor=0.07, geometry_factor=200)
    full = to_full_scale(2.263, law)
"""

import json
import logging
import math
import os
from collections.abc import Mapping, Sequence
from typing import Literal, TypedDict

import pandas as pd

from omalib.exceptions.exception import ArgsError, LabelMismatch

logger = logging.getLogger(__name__)

FactorSource = Literal['derived_from_geometry', 'stated']


class LabelledFrequency(TypedDict):
    label: str
    frequency: float


class Comparison(TypedDict):
    scaled: float
    reference: float
    absolute_diff: float
    relative_diff: float


class TransferredDamping(TypedDict):
    value: float
    uncalibrated: bool


class FullScaleReference(TypedDict):
    bridge: str
    geometry_factor: float
    stated_frequency_factor: float
    frequencies_hz: list[LabelledFrequency]


def frequency_factor(geometry_factor: float) -> float:
    """
    ## Summary
    F_f = 1 / sqrt(F_l).

    ## Args:
    - geometry_factor (float) : F_l > 0, e.g. 200 for a 1:200 model.

    ## Returns:
    - float
    """
    if not geometry_factor > 0:
        raise ArgsError(argument_name='geometry_factor', add='Must be positive.')
    return 1.0 / math.sqrt(geometry_factor)


class ScalingLaw:
    """
    Frequency scaling between a model and the full-scale structure.
    """
    def __init__(
            self,
            geometry_factor: float | None,
            factor: float,
            factor_source: FactorSource,
        ) -> None:
        if not factor > 0:
            raise ArgsError(argument_name='frequency_factor', add='Must be positive.')
        if factor_source not in ('derived_from_geometry', 'stated'):
            raise ArgsError(argument_name='factor_source', add=f'Unknown source: {factor_source}')
        if factor_source == 'derived_from_geometry' and geometry_factor is None:
            raise ArgsError(argument_name='geometry_factor', add='Required for a derived factor.')
        self.__geometry_factor = geometry_factor
        self.__frequency_factor = float(factor)
        self.__factor_source = factor_source

    @classmethod
    def from_geometry(cls, geometry_factor: float) -> 'ScalingLaw':
        """
        ## Summary
        Law whose frequency factor is derived as 1 / sqrt(F_l).
        """
        return cls(geometry_factor, frequency_factor(geometry_factor), 'derived_from_geometry')

    @classmethod
    def stated(cls, frequency_factor: float, geometry_factor: float | None = None) -> 'ScalingLaw':  # pylint: disable=redefined-outer-name
        """
        ## Summary
        Law using a given (e.g. rounded) frequency factor; the derived
        factor stays available when geometry_factor is known.
        """
        if geometry_factor is not None and not geometry_factor > 0:
            raise ArgsError(argument_name='geometry_factor', add='Must be positive.')
        return cls(geometry_factor, frequency_factor, 'stated')

    @property
    def geometry_factor(self) -> float | None:  # pylint: disable=missing-function-docstring
        return self.__geometry_factor

    @property
    def frequency_factor(self) -> float:  # pylint: disable=missing-function-docstring
        return self.__frequency_factor

    @property
    def factor_source(self) -> FactorSource:  # pylint: disable=missing-function-docstring
        return self.__factor_source

    @property
    def derived_factor(self) -> float | None:
        """
        1 / sqrt(F_l), or None when F_l is unknown.
        """
        if self.__geometry_factor is None:
            return None
        return frequency_factor(self.__geometry_factor)

    @property
    def discrepancy(self) -> float | None:
        """
        frequency_factor / derived_factor - 1 (0 for a derived law).
        """
        _derived = self.derived_factor
        if _derived is None:
            return None
        return self.__frequency_factor / _derived - 1.0

    def __repr__(self) -> str:
        return (
            f'ScalingLaw(F_l={self.__geometry_factor}, F_f={self.__frequency_factor}, '
            f'{self.__factor_source})'
        )


def to_full_scale(model_frequency: float, law: ScalingLaw) -> float:
    """
    ## Summary
    Full-scale frequency of a model frequency.

    ## Args:
    - model_frequency (float) : Hz, positive.
    - law (ScalingLaw)

    ## Returns:
    - float: Hz, unrounded.
    """
    if not model_frequency > 0:
        raise ArgsError(argument_name='model_frequency', add='Must be positive.')
    return model_frequency * law.frequency_factor


def compare_to_reference(
        scaled: Sequence[LabelledFrequency],
        reference: Sequence[LabelledFrequency],
    ) -> dict[str, Comparison]:
    """
    ## Summary
    Differences scaled - reference per label, absolute and relative.

    ## Args:
    - scaled (Sequence[LabelledFrequency])
    - reference (Sequence[LabelledFrequency]) :
        Must carry exactly the labels of scaled.

    ## Returns:
    - dict[str, Comparison]: In the label order of scaled.
    """
    _scaled = {_item['label']: float(_item['frequency']) for _item in scaled}
    _reference = {_item['label']: float(_item['frequency']) for _item in reference}
    if set(_scaled) != set(_reference):
        raise LabelMismatch(
            missing=sorted(set(_scaled) - set(_reference)),
            unexpected=sorted(set(_reference) - set(_scaled)),
        )
    _result: dict[str, Comparison] = {}
    for _label, _value in _scaled.items():
        _ref = _reference[_label]
        if not _ref > 0:
            raise ArgsError(argument_name=f'reference.{_label}', add='Must be positive.')
        _result[_label] = Comparison(
            scaled=_value,
            reference=_ref,
            absolute_diff=_value - _ref,
            relative_diff=(_value - _ref) / _ref,
        )
    return _result


def transfer_damping(model_zeta: float) -> TransferredDamping:
    """
    ## Summary
    Full-scale damping ratio: the model value, flagged as uncalibrated.
    """
    if not 0 <= model_zeta < 1:
        raise ArgsError(argument_name='model_zeta', add='Must satisfy 0 <= zeta < 1.')
    return TransferredDamping(value=float(model_zeta), uncalibrated=True)


def load_full_scale_reference(filepath: str | None = None) -> FullScaleReference:
    """
    ## Summary
    Read the full-scale reference frequencies.

    ## Args:
    - filepath (str | None, optional) :
        JSON file. Defaults to the shipped resource/full_scale_reference.json.

    ## Returns:
    - FullScaleReference
    """
    if filepath is None:
        filepath = os.path.join(os.path.dirname(__file__), 'resource/full_scale_reference.json')
    with open(file=filepath, mode='rt', encoding='utf-8') as file_:
        _reference: FullScaleReference = json.load(file_)
    return _reference


def scale_frame(
        model_frequencies: Sequence[LabelledFrequency],
        law: ScalingLaw,
        reference: Sequence[LabelledFrequency] | None = None,
    ) -> pd.DataFrame:
    """
    ## Summary
    Scaling report: label, model_hz, factor, full_scale_hz, reference_hz,
    rel_diff, derived_factor, full_scale_derived_hz.

    ## Description
    Without a reference the reference_hz and rel_diff columns are NaN.
    Labels missing from the reference also get NaN.
    """
    _reference: Mapping[str, float] = {
        _item['label']: float(_item['frequency']) for _item in (reference or [])
    }
    _derived = law.derived_factor
    _rows = []
    for _item in model_frequencies:
        _full = to_full_scale(float(_item['frequency']), law)
        _ref = _reference.get(_item['label'], math.nan)
        _rows.append({
            'label': _item['label'],
            'model_hz': float(_item['frequency']),
            'factor': law.frequency_factor,
            'full_scale_hz': _full,
            'reference_hz': _ref,
            'rel_diff': (_full - _ref) / _ref if not math.isnan(_ref) else math.nan,
            'derived_factor': math.nan if _derived is None else _derived,
            'full_scale_derived_hz': math.nan if _derived is None else float(_item['frequency']) * _derived,
        })
    return pd.DataFrame(
        _rows,
        columns=['label', 'model_hz', 'factor', 'full_scale_hz', 'reference_hz',
                 'rel_diff', 'derived_factor', 'full_scale_derived_hz'],
    )
