"""Contract tests for quantum overlap-add.

This test validates that a QOLA pair reproduces the classical overlap-add of
two frames, that its difference branch holds the classical difference, and
that the two branches share the pair energy exactly.
"""

import numpy as np
import pytest

from stqft.dsp.oracle import classical_ola
from stqft.services.reconstruct import build_uperm, qola_pair, qola_stream

pytestmark = pytest.mark.contract


def _classical(a, b, overlap, sign):
    r = a.size
    expected = np.zeros(2 * r)
    expected[:r] += a
    expected[r - overlap : 2 * r - overlap] += sign * b
    return expected


class TestQolaPair:
    """Contract tests for qola_pair."""

    def test_matches_classical_overlap_add(self, rng):
        """Contract: Both branches equal their classical counterparts.

        Given: 100 random frame pairs with r in {4, 8, 16}
        When: Every valid overlap 0 <= l < r is run through a QOLA pair
        Then: SUM and DIFFERENCE match classical OLA within 1e-10
        And: Branch probabilities follow 1/2 ||branch||^2 / M^2 within 1e-12
        And: 1/2 ||SUM||^2 + 1/2 ||DIFFERENCE||^2 = M^2 within 1e-12 M^2
        """
        for case in range(100):
            # Given: A random pair
            r = (4, 8, 16)[case % 3]
            a, b = rng.normal(size=r), rng.normal(size=r)
            energy = float(a @ a + b @ b)

            for overlap in range(r):
                # When: Overlap-added on the circuit
                result = qola_pair(a, b, overlap)

                # Then: Equal to the classical sums
                expected_sum = _classical(a, b, overlap, 1.0)
                expected_difference = _classical(a, b, overlap, -1.0)
                assert np.max(np.abs(result.sum_vector - expected_sum)) <= 1e-10
                assert (
                    np.max(np.abs(result.difference_vector - expected_difference))
                    <= 1e-10
                )
                assert result.pair_norm**2 == pytest.approx(energy, rel=1e-12)
                assert result.success_probability == pytest.approx(
                    0.5 * float(expected_sum @ expected_sum) / energy, abs=1e-12
                )
                assert result.difference_probability == pytest.approx(
                    0.5 * float(expected_difference @ expected_difference) / energy,
                    abs=1e-12,
                )
                assert result.energy_residual <= 1e-12 * energy

    def test_worked_example(self):
        """Contract: [1,2,3,4] and [5,6,7,8] overlapped by 2.

        Given: Two frames of four samples
        When: They are overlap-added with l = 2
        Then: SUM is [1,2,8,10,7,8,0,0] with probability 282/408
        """
        # Given / When
        result = qola_pair([1.0, 2.0, 3.0, 4.0], [5.0, 6.0, 7.0, 8.0], 2)

        # Then
        assert np.allclose(result.sum_vector, [1, 2, 8, 10, 7, 8, 0, 0], atol=1e-12)
        assert result.success_probability == pytest.approx(282 / 408, abs=1e-12)

    def test_routing_is_a_permutation(self):
        """Contract: U_PERM is a permutation for every (r, l).

        Given: Every r up to 8 and every valid l
        When: The routing matrix is built
        Then: Each row and column holds exactly one 1
        """
        for r in range(1, 9):
            for overlap in range(r):
                assert build_uperm(r, overlap).is_permutation()

    def test_small_routing_rows(self):
        """Contract: r = 2, l = 1 routes rows e0, e2, e3, e1.

        Given: r = 2 and l = 1
        When: The routing matrix is built
        Then: Its rows are the unit vectors e0, e2, e3, e1
        """
        matrix = build_uperm(2, 1).matrix
        assert np.array_equal(matrix, np.eye(4)[[0, 2, 3, 1]])


class TestQolaStream:
    """Contract tests for qola_stream."""

    @pytest.mark.parametrize(("r", "hop"), [(4, 2), (8, 4), (8, 5), (16, 16)])
    def test_matches_classical_stream(self, rng, r, hop):
        """Contract: A stream equals classical OLA of its frames.

        Given: Eight random frames of length r
        When: They are overlap-added pairwise on the circuit
        Then: The output equals classical OLA within 1e-10
        And: Every pair conserves its energy
        """
        # Given
        frames = [rng.normal(size=r) for _ in range(8)]
        residuals = []

        # When
        output = qola_stream(
            frames,
            hop,
            hop,
            on_pair=lambda _, result: residuals.append(
                result.energy_residual / result.pair_norm**2
            ),
        )

        # Then
        assert np.max(np.abs(output - classical_ola(frames, hop))) <= 1e-10
        assert len(residuals) == 7
        assert max(residuals) <= 1e-12
