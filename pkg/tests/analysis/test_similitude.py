import math

import pytest

from omalib.analysis.similitude import (ScalingLaw, compare_to_reference,
                                        frequency_factor,
                                        load_full_scale_reference,
                                        scale_frame, to_full_scale,
                                        transfer_damping)
from omalib.exceptions.exception import ArgsError, LabelMismatch

MODEL = [
    {'label': 'b1', 'frequency': 2.263},
    {'label': 'b2', 'frequency': 2.085},
    {'label': 'b3', 'frequency': 3.752},
    {'label': 't1', 'frequency': 7.906},
]


def test_frequency_factor():
    assert frequency_factor(200) == pytest.approx(0.0707106781, rel=1e-9)
    assert frequency_factor(1) == 1.0
    for _value in (0, -4):
        with pytest.raises(ArgsError):
            frequency_factor(_value)


def test_stated_factor_reproduces_full_scale_table():
    _law = ScalingLaw.stated(0.07, geometry_factor=200)
    # b2 lands exactly on a rounding boundary (0.14595)
    _full = [to_full_scale(_item['frequency'], _law) for _item in MODEL]
    assert _full == pytest.approx([0.158, 0.146, 0.263, 0.553], abs=5e-4 + 1e-9)


def test_law_from_geometry():
    _law = ScalingLaw.from_geometry(200)
    assert _law.factor_source == 'derived_from_geometry'
    assert _law.frequency_factor == pytest.approx(1 / math.sqrt(200))
    assert _law.discrepancy == pytest.approx(0.0, abs=1e-15)
    assert to_full_scale(2.263, _law) == pytest.approx(2.263 / math.sqrt(200))


def test_stated_law_discrepancy():
    _law = ScalingLaw.stated(0.07, geometry_factor=200)
    assert _law.factor_source == 'stated'
    assert _law.derived_factor == pytest.approx(0.0707107, rel=1e-6)
    assert _law.discrepancy == pytest.approx(0.07 * math.sqrt(200) - 1.0)
    assert _law.discrepancy < 0
    _bare = ScalingLaw.stated(0.07)
    assert _bare.derived_factor is None
    assert _bare.discrepancy is None
    assert 'stated' in repr(_bare)


def test_law_errors():
    with pytest.raises(ArgsError):
        ScalingLaw.stated(0.0)
    with pytest.raises(ArgsError):
        ScalingLaw.stated(0.07, geometry_factor=-1)
    with pytest.raises(ArgsError):
        ScalingLaw(None, 0.07, 'derived_from_geometry')
    with pytest.raises(ArgsError):
        ScalingLaw(200, 0.07, 'guessed')
    with pytest.raises(ArgsError):
        to_full_scale(0.0, ScalingLaw.from_geometry(200))


def test_compare_to_reference():
    _result = compare_to_reference(
        [{'label': 'b1', 'frequency': 0.158}, {'label': 't1', 'frequency': 0.553}],
        [{'label': 't1', 'frequency': 0.523}, {'label': 'b1', 'frequency': 0.156}],
    )
    assert list(_result) == ['b1', 't1']
    assert _result['b1']['absolute_diff'] == pytest.approx(0.002)
    assert _result['t1']['relative_diff'] == pytest.approx(0.03 / 0.523)


def test_compare_to_reference_label_mismatch():
    with pytest.raises(LabelMismatch) as error:
        compare_to_reference(
            [{'label': 'b1', 'frequency': 0.158}, {'label': 'b2', 'frequency': 0.146}],
            [{'label': 'b1', 'frequency': 0.156}, {'label': 't1', 'frequency': 0.523}],
        )
    assert error.value.missing == ['b2']
    assert error.value.unexpected == ['t1']
    assert 'b2' in str(error.value)
    with pytest.raises(ArgsError):
        compare_to_reference([{'label': 'b1', 'frequency': 0.158}], [{'label': 'b1', 'frequency': 0.0}])


def test_transfer_damping():
    assert transfer_damping(0.0037) == {'value': 0.0037, 'uncalibrated': True}
    assert transfer_damping(0.0)['value'] == 0.0
    for _value in (-0.01, 1.0):
        with pytest.raises(ArgsError):
            transfer_damping(_value)


def test_load_full_scale_reference():
    _reference = load_full_scale_reference()
    assert _reference['geometry_factor'] == 200
    assert _reference['stated_frequency_factor'] == 0.07
    assert [_item['label'] for _item in _reference['frequencies_hz']] == ['b1', 'b2', 'b3', 't1']
    assert _reference['frequencies_hz'][3]['frequency'] == 0.523


def test_load_full_scale_reference_from_file(tmp_path):
    _path = tmp_path / 'reference.json'
    _path.write_text(
        '{"bridge": "x", "geometry_factor": 100, "stated_frequency_factor": 0.1,'
        ' "frequencies_hz": [{"label": "b1", "frequency": 0.2}]}',
        encoding='utf-8',
    )
    assert load_full_scale_reference(str(_path))['geometry_factor'] == 100


def test_scale_frame():
    _reference = load_full_scale_reference()
    _law = ScalingLaw.stated(_reference['stated_frequency_factor'], _reference['geometry_factor'])
    _frame = scale_frame(MODEL, _law, _reference['frequencies_hz'])
    assert list(_frame.columns) == ['label', 'model_hz', 'factor', 'full_scale_hz', 'reference_hz',
                                    'rel_diff', 'derived_factor', 'full_scale_derived_hz']
    assert list(_frame['label']) == ['b1', 'b2', 'b3', 't1']
    assert _frame['full_scale_hz'].tolist() == pytest.approx([0.158, 0.146, 0.263, 0.553], abs=5e-4 + 1e-9)
    assert _frame['rel_diff'].iloc[0] == pytest.approx((2.263 * 0.07 - 0.156) / 0.156)
    assert _frame['full_scale_derived_hz'].iloc[0] == pytest.approx(2.263 / math.sqrt(200))


def test_scale_frame_without_reference():
    _frame = scale_frame(MODEL[:2], ScalingLaw.stated(0.07))
    assert _frame['reference_hz'].isna().all()
    assert _frame['rel_diff'].isna().all()
    assert _frame['derived_factor'].isna().all()
    _partial = scale_frame(MODEL[:2], ScalingLaw.from_geometry(200), [{'label': 'b1', 'frequency': 0.156}])
    assert _partial['reference_hz'].isna().tolist() == [False, True]
