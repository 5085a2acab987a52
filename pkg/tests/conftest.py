import math

import numpy as np
import pytest

from omalib.file.records import ChannelSpec, TimeSeriesRecord
from omalib.simulation.simulator import ModalModel, ModeSpec, lillebaelt_default


@pytest.fixture(scope='session')
def defaults():
    return lillebaelt_default()


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


@pytest.fixture
def damped_cosine():
    """
    Factory of exp(-zeta w t) cos(w_d t) sampled at sample_rate.
    damped_frequency fixes w_d / 2 pi directly when given.
    """
    def _make(frequency, zeta, sample_rate, duration, amplitude=1.0, damped_frequency=None):
        _omega = 2.0 * math.pi * frequency
        if damped_frequency is None:
            _omega_d = _omega * math.sqrt(1.0 - zeta ** 2)
        else:
            _omega_d = 2.0 * math.pi * damped_frequency
        _t = np.arange(int(round(duration * sample_rate))) / sample_rate
        return _t, amplitude * np.exp(-zeta * _omega * _t) * np.cos(_omega_d * _t)
    return _make


@pytest.fixture
def make_record():
    """
    Factory of acceleration records with channels ch0, ch1, ...
    """
    def _make(samples, sample_rate=200.0, start_time=0.0, annotations=None, kinds=None):
        _samples = np.asarray(samples, dtype=float)
        if _samples.ndim == 1:
            _samples = _samples.reshape(-1, 1)
        _kinds = kinds or ['acceleration_z'] * _samples.shape[1]
        _channels = [
            ChannelSpec(f'ch{_index}', _kind, position_x=0.5 * _index)
            for _index, _kind in enumerate(_kinds)
        ]
        return TimeSeriesRecord(sample_rate, _channels, _samples, start_time, annotations)
    return _make


@pytest.fixture
def single_mode_model():
    def _make(frequency=2.263, zeta=0.0037, kind='bending', shape_index=1, modal_mass=1.0):
        return ModalModel(3.0, [ModeSpec('m1', kind, shape_index, frequency, zeta, modal_mass)])
    return _make
