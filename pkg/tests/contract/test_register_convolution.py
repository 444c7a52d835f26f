"""Contract tests for the register convolution method.

This test validates that a frame convolved through the two-register circuit
and rescaled by its ledger equals the classical linear convolution, and that
the recorded success probability follows the spectral overlap law.
"""

import numpy as np
import pytest

from stqft.dsp.framing import pad_and_encode
from stqft.dsp.oracle import direct_convolution, unitary_dft
from stqft.models.frame import Frame
from stqft.services.qconv import conv_register_method, make_filter

pytestmark = pytest.mark.contract


def _random_case(rng):
    """A random frame and filter whose linear convolution fits 2^n, n in 2..4."""
    num_qubits = int(rng.integers(2, 5))
    size = 1 << num_qubits
    window_length = int(rng.integers(1, size + 1))
    filter_length = int(rng.integers(1, size - window_length + 2))
    samples = rng.normal(size=window_length)
    taps = rng.normal(size=filter_length)
    return samples, taps


def _convolve(samples, taps):
    frame = Frame(samples=samples, index=0, window_length=samples.size)
    encoded = pad_and_encode(frame, taps.size)
    spec = make_filter(taps, samples.size)
    return encoded, spec, conv_register_method(encoded, spec)


class TestRegisterConvolution:
    """Contract tests for conv_register_method."""

    def test_matches_linear_convolution(self, rng):
        """Contract: The rescaled register output is the linear convolution.

        Given: 200 random frames and filters on 2 to 4 qubits
        When: Each pair is convolved with the register method
        Then: Every output matches direct convolution within 1e-10
        """
        worst = 0.0
        for _ in range(200):
            # Given: A random case
            samples, taps = _random_case(rng)

            # When: Convolved on the register circuit
            encoded, _, (output, _) = _convolve(samples, taps)

            # Then: The output carries the convolution and zero padding
            expected = np.zeros(encoded.padded_length)
            expected[: samples.size + taps.size - 1] = direct_convolution(samples, taps)
            worst = max(worst, float(np.max(np.abs(output - expected))))

        assert worst <= 1e-10

    def test_probability_law(self, rng):
        """Contract: The postselection probability is the spectral overlap.

        Given: 1000 random frames and filters
        When: Each pair is convolved with the register method
        Then: The ledger probability equals sum |a_i b_i|^2 within 1e-14
        """
        for _ in range(1000):
            # Given: A random case
            samples, taps = _random_case(rng)

            # When: Convolved on the register circuit
            encoded, spec, (_, ledger) = _convolve(samples, taps)

            # Then: Brute-force overlap of the two spectra
            padded = np.zeros(encoded.padded_length)
            padded[: samples.size] = samples
            a = unitary_dft(padded / np.linalg.norm(padded))
            b = spec.fourier_coeffs
            expected = float(np.sum(np.abs(a * b) ** 2))
            assert ledger.success_probs[0] == pytest.approx(expected, abs=1e-14)

    def test_small_worked_example(self):
        """Contract: Frame [1, 2] with taps [1, 1] gives [1, 3, 2, 0].

        Given: A two-sample frame and a two-tap averaging filter
        When: Convolved with the register method
        Then: The padded output is [1, 3, 2, 0]
        """
        # Given / When
        _, _, (output, ledger) = _convolve(np.array([1.0, 2.0]), np.array([1.0, 1.0]))

        # Then
        assert np.allclose(output, [1.0, 3.0, 2.0, 0.0], atol=1e-12)
        assert ledger.qft_factor == pytest.approx(2.0)

    def test_delta_filter_returns_frame(self):
        """Contract: A delta filter leaves the frame unchanged.

        Given: Frame [1, 0, 0, 0] and taps [1]
        When: Convolved with the register method
        Then: Output equals the frame and P = 1/4
        """
        # Given / When
        _, _, (output, ledger) = _convolve(np.array([1.0, 0.0, 0.0, 0.0]), np.ones(1))

        # Then
        assert np.allclose(output, [1.0, 0.0, 0.0, 0.0], atol=1e-12)
        assert ledger.success_probs[0] == pytest.approx(0.25, abs=1e-14)
