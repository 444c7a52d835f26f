"""
Unit tests for readout strategies.
"""

import numpy as np
import pytest

from stqft.core.error_handler import InvalidShotsException
from stqft.models.quantum_state import QuantumState
from stqft.services.readout import ExactReadout, SampledReadout, create_readout

pytestmark = pytest.mark.unit


class TestExactReadout:
    def test_returns_real_parts(self):
        state = QuantumState.from_amplitudes([0.6, -0.8j])
        values = ExactReadout().read(state)
        assert values.dtype == np.float64
        assert np.allclose(values, [0.6, 0.0])

    def test_is_signed(self):
        state = QuantumState.from_amplitudes([0.6, -0.8])
        assert ExactReadout().signed
        assert np.allclose(ExactReadout().read(state), [0.6, -0.8])


class TestSampledReadout:
    def test_estimates_magnitudes(self):
        state = QuantumState.from_amplitudes([0.6, -0.8])
        values = SampledReadout(shots=200_000, seed=3).read(state, (0, 0))
        assert np.allclose(values, [0.6, 0.8], atol=0.01)
        assert not SampledReadout(shots=1).signed

    def test_same_key_same_result(self, random_state):
        state = random_state(4)
        readout = SampledReadout(shots=1000, seed=11)
        assert np.array_equal(readout.read(state, (5, 0)), readout.read(state, (5, 0)))

    def test_keys_give_independent_streams(self, random_state):
        state = random_state(4)
        readout = SampledReadout(shots=1000, seed=11)
        assert not np.array_equal(
            readout.read(state, (5, 0)), readout.read(state, (6, 0))
        )

    def test_zero_shots_rejected(self):
        with pytest.raises(InvalidShotsException):
            SampledReadout(shots=0)


class TestFactory:
    def test_creates_each_mode(self):
        assert create_readout("exact").name == "exact"
        sampled = create_readout("sampled", shots=10, seed=4)
        assert isinstance(sampled, SampledReadout)
        assert (sampled.shots, sampled.seed) == (10, 4)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            create_readout("tomography")
