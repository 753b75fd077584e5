"""
Tests for the graded Wick engine and Berezin integration.

The determinant and Pfaffian checks compare an expansion in Grassmann
generators against numpy's linear algebra; nothing is shared between the two
sides.
"""

from fractions import Fraction

import numpy as np
import pytest

from ym2d.core import (
    Generator,
    GradedExpr,
    IdentityCheckError,
    InvalidParameterError,
    PairingKernel,
    berezin_gaussian,
    canonicalize,
    contract_vector,
    fermionic_pairing,
    fermionic_two_point,
    matching_sum,
    perfect_matchings,
    pfaffian_gaussian,
    wick_expectation,
)


def odd(i: int) -> Generator:
    return Generator(i, 1, f"xi{i}")


def even(i: int) -> Generator:
    return Generator(i, 0, f"x{i}")


class TestAlgebra:
    """Signs and canonical ordering."""

    def test_odd_swap_flips_sign(self):
        sign, key = canonicalize([odd(2), odd(1)])
        assert sign == -1
        assert [g.id for g in key] == [1, 2]

    def test_repeated_odd_generator_vanishes(self):
        assert GradedExpr.monomial(odd(1), odd(1)).is_zero()
        assert canonicalize([odd(3), odd(1), odd(3)])[0] == 0

    def test_even_generators_commute(self):
        assert GradedExpr.monomial(even(2), even(1)) == GradedExpr.monomial(even(1), even(2))

    def test_left_derivation(self):
        """∂_ξ₂(ξ₁ξ₂) = -ξ₁ and ∂_ξ₁(ξ₁ξ₂) = ξ₂."""
        product = GradedExpr.monomial(odd(1), odd(2))
        assert contract_vector(product, odd(2)) == GradedExpr.monomial(odd(1), coeff=-1)
        assert contract_vector(product, odd(1)) == GradedExpr.monomial(odd(2))

    def test_conflicting_degrees_rejected(self):
        with pytest.raises(InvalidParameterError):
            canonicalize([Generator(1, 0), Generator(1, 1)])

    def test_mixed_pairing_rejected(self):
        with pytest.raises(InvalidParameterError):
            PairingKernel((even(0), odd(1)), {(0, 1): 1})


class TestBosonicWick:
    """Gaussian moments as sums over perfect matchings."""

    @pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
    def test_matching_count(self, n, count):
        assert len(perfect_matchings(n)) == count

    def test_odd_point_count_has_no_matchings(self):
        assert perfect_matchings(5) == []

    def test_four_points_all_ones(self):
        x = [even(i) for i in range(4)]
        P = PairingKernel.from_matrix(x, np.ones((4, 4), dtype=int))
        assert wick_expectation(GradedExpr.monomial(*x), P) == 3
        assert matching_sum(x, P) == 3

    def test_repeated_generator_moments(self):
        """⟨x²⟩ = 1 and ⟨x⁴⟩ = 3 for unit variance."""
        x = even(0)
        P = PairingKernel((x,), {(0, 0): 1})
        assert wick_expectation(GradedExpr.monomial(x, x), P) == 1
        assert wick_expectation(GradedExpr.monomial(x, x, x, x), P) == 3

    def test_odd_degree_is_zero(self):
        x = [even(i) for i in range(3)]
        P = PairingKernel.from_matrix(x, np.ones((3, 3), dtype=int))
        assert wick_expectation(GradedExpr.monomial(*x), P) == 0

    def test_random_symmetric_six_points(self, rng):
        x = [even(i) for i in range(6)]
        for _ in range(5):
            m = rng.normal(size=(6, 6))
            P = PairingKernel.from_matrix(x, m + m.T)
            assert float(wick_expectation(GradedExpr.monomial(*x), P)) == pytest.approx(
                float(matching_sum(x, P)), abs=1e-12
            )

    def test_exact_coefficients_stay_rational(self):
        x = [even(i) for i in range(4)]
        matrix = [[0, 1, 2, 3], [1, 0, 4, 5], [2, 4, 0, 6], [3, 5, 6, 0]]
        P = PairingKernel.from_matrix(x, matrix)
        value = wick_expectation(GradedExpr.monomial(*x, coeff=Fraction(1, 3)), P)
        # (P01·P23 + P02·P13 + P03·P12) / 3 = (6 + 10 + 12) / 3
        assert value == Fraction(28, 3)


class TestBerezin:
    """Fermionic Gaussians against determinants and Pfaffians."""

    def test_two_by_two_determinant(self):
        assert berezin_gaussian([[1, 2], [3, 4]]) == pytest.approx(-2.0)

    def test_random_determinants(self, rng):
        for k in range(20):
            B = rng.normal(size=(3, 3))
            assert berezin_gaussian(B) == pytest.approx(np.linalg.det(B), abs=1e-10), f"matrix {k}"

    def test_block_pfaffian(self):
        A = np.zeros((4, 4))
        A[0, 1], A[1, 0] = 2.0, -2.0
        A[2, 3], A[3, 2] = 3.0, -3.0
        assert pfaffian_gaussian(A) == pytest.approx(6.0)

    def test_pfaffian_formula(self):
        """Pf = a12·a34 - a13·a24 + a14·a23."""
        upper = {(0, 1): 1, (0, 2): 2, (0, 3): 3, (1, 2): 4, (1, 3): 5, (2, 3): 6}
        A = np.zeros((4, 4))
        for (i, j), v in upper.items():
            A[i, j], A[j, i] = v, -v
        assert pfaffian_gaussian(A) == pytest.approx(1 * 6 - 2 * 5 + 3 * 4)

    def test_random_pfaffians_square_to_det(self, rng):
        for k in range(20):
            m = rng.normal(size=(4, 4))
            A = m - m.T
            pf = pfaffian_gaussian(A)
            assert pf * pf == pytest.approx(np.linalg.det(A), rel=1e-9, abs=1e-12), f"matrix {k}"

    def test_pfaffian_rejects_bad_input(self):
        with pytest.raises(InvalidParameterError):
            pfaffian_gaussian(np.zeros((3, 3)))
        with pytest.raises(InvalidParameterError):
            pfaffian_gaussian(np.ones((2, 2)))

    def test_pfaffian_identity_failure_reported(self):
        A = np.array([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(IdentityCheckError):
            pfaffian_gaussian(A, tol=-1.0)


class TestFermionicTwoPoint:
    """⟨ω_i ω*_j⟩ = (B⁻¹)_ij with the sign flipped when ω* comes first."""

    B = np.array([[2.0, 1.0], [0.5, 3.0]])

    def test_berezin_ratio(self):
        inv = np.linalg.inv(self.B)
        for i in range(2):
            for j in range(2):
                assert fermionic_two_point(self.B, i, j) == pytest.approx(inv[i, j])
                assert fermionic_two_point(self.B, i, j, star_first=True) == pytest.approx(-inv[i, j])

    def test_pairing_agrees_with_berezin(self):
        P, omega, omega_star = fermionic_pairing(self.B)
        for i in range(2):
            for j in range(2):
                wick = wick_expectation(GradedExpr.monomial(omega[i], omega_star[j]), P)
                assert float(wick) == pytest.approx(fermionic_two_point(self.B, i, j)), f"({i}, {j})"

    def test_four_point_is_determinant_of_two_points(self):
        """⟨ω₁ω*₁ω₂ω*₂⟩ = G₁₁G₂₂ - G₁₂G₂₁."""
        P, omega, omega_star = fermionic_pairing(self.B)
        G = np.linalg.inv(self.B)
        word = GradedExpr.monomial(omega[0], omega_star[0]) * GradedExpr.monomial(omega[1], omega_star[1])
        assert float(wick_expectation(word, P)) == pytest.approx(G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0])

    def test_index_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            fermionic_two_point(self.B, 2, 0)
