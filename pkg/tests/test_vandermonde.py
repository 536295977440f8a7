import itertools

import numpy as np
import pytest

from dynphase import (
    BudgetExceededError,
    DimensionMismatchError,
    classical,
    det_product_classical,
    det_product_second_kind,
    determinant,
    first_kind,
    full_spark,
    schur_value,
    second_kind,
)
from oracles import det_cofactor, random_distinct, spark_by_enumeration


class TestClassical:
    def test_equal_points_give_rank_one(self):
        v = classical(np.array([1.0, 1.0, 1.0]), 4)
        assert np.linalg.matrix_rank(v) == 1

    def test_zero_one_points(self):
        assert np.allclose(classical(np.array([0.0, 1.0]), 3), [[1, 0, 0], [1, 1, 1]])

    def test_one_two_three_determinant(self):
        v = classical(np.array([1.0, 2.0, 3.0]), 3)
        assert determinant(v) == pytest.approx(2.0)
        assert det_cofactor(v) == pytest.approx(2.0)


class TestDetProductClassical:
    def test_repeated_point_vanishes(self):
        assert det_product_classical(np.array([2.0, 2.0, 5.0])) == 0

    def test_single_point_empty_product(self):
        assert det_product_classical(np.array([7.0])) == 1

    def test_one_two_three(self):
        # the factor order matches the LU determinant sign, |.| matches either order
        assert det_product_classical(np.array([1.0, 2.0, 3.0])) == pytest.approx(2.0)

    def test_matches_lu_determinant_with_sign(self):
        rng = np.random.default_rng(30)
        for d in range(2, 7):
            values = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            product = det_product_classical(values)
            lu = determinant(classical(values, d))
            assert abs(product - lu) <= 1e-9 * abs(lu)


class TestFirstKind:
    def test_contiguous_exponents_reduce_to_classical(self):
        rng = np.random.default_rng(31)
        values = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert np.allclose(first_kind(values, range(4)), classical(values, 4))

    def test_gapped_selection(self):
        assert np.allclose(first_kind(np.array([1.0, 2.0]), (0, 2)), [[1, 1], [1, 4]])

    def test_positive_points_give_nonzero_determinant(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            values = np.sort(rng.uniform(0.1, 3.0, 3))
            while np.min(np.diff(values)) < 0.05:
                values = np.sort(rng.uniform(0.1, 3.0, 3))
            exponents = sorted(rng.choice(8, size=3, replace=False))
            det = det_cofactor(first_kind(values, exponents))
            assert abs(det) > 1e-8

    def test_rejects_non_increasing_exponents(self):
        with pytest.raises(ValueError):
            first_kind(np.array([1.0, 2.0]), (2, 1))


class TestSchurValue:
    def test_contiguous_exponents_give_one(self):
        rng = np.random.default_rng(33)
        values = random_distinct(rng, 4)
        assert schur_value(values, range(4)) == pytest.approx(1.0, abs=1e-9)

    def test_first_gap_gives_power_sum(self):
        # exponents (0, 2) in two variables: value x + y
        x, y = 1.7, -0.4
        assert schur_value(np.array([x, y]), (0, 2)) == pytest.approx(x + y)

    def test_positive_points_give_positive_value(self):
        rng = np.random.default_rng(34)
        for _ in range(10):
            values = np.array(sorted(rng.uniform(0.1, 2.0, 4)))
            if np.min(np.diff(values)) < 0.05:
                continue
            exponents = sorted(rng.choice(9, size=4, replace=False))
            value = schur_value(values, exponents)
            assert value.real > 0 and abs(value.imag) < 1e-9 * value.real

    def test_permutation_symmetry(self):
        rng = np.random.default_rng(35)
        values = random_distinct(rng, 4)
        exponents = (0, 2, 3, 6)
        reference = schur_value(values, exponents)
        for perm in itertools.permutations(range(4)):
            permuted = schur_value(values[list(perm)], exponents)
            assert abs(permuted - reference) <= 1e-8 * abs(reference)

    def test_coincident_points_rejected(self):
        with pytest.raises(ValueError):
            schur_value(np.array([1.0, 1.0]), (0, 2))

    def test_square_selection_required(self):
        with pytest.raises(DimensionMismatchError):
            schur_value(np.array([1.0, 2.0]), (0, 1, 2))

    def test_factorization_reproduces_first_kind_determinant(self):
        rng = np.random.default_rng(36)
        values = random_distinct(rng, 3)
        exponents = (1, 3, 4)
        det = determinant(first_kind(values, exponents))
        rebuilt = det_product_classical(values) * schur_value(values, exponents)
        assert abs(det - rebuilt) <= 1e-12 * abs(det)

    def test_sign_matches_prefactor_for_positive_points(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            values = np.array(sorted(rng.uniform(0.1, 2.0, 3), reverse=True))
            if np.min(np.abs(np.diff(values))) < 0.05:
                continue
            exponents = sorted(rng.choice(7, size=3, replace=False))
            det = determinant(first_kind(values, exponents)).real
            prefactor = det_product_classical(values).real
            assert np.sign(det) == np.sign(prefactor)


class TestSecondKind:
    def test_all_ones_profile_is_classical(self):
        rng = np.random.default_rng(38)
        values = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert np.allclose(second_kind(values, (1, 1, 1), 5), classical(values, 5))

    def test_confluent_row_structure(self):
        lam = 0.8 - 0.2j
        m = second_kind(np.array([lam, 2.0, 3.0]), (3, 1, 2), 6)
        expected_row = [0, 0, 1, 3 * lam, 6 * lam**2, 10 * lam**3]
        assert np.allclose(m[2], expected_row)
        assert m.shape == (6, 6)

    def test_zero_point_block_gives_shifted_unit_rows(self):
        m = second_kind(np.array([0.0]), (3,), 3)
        assert np.allclose(m, np.eye(3))

    def test_repeated_points_singular(self):
        values = np.array([1.5, 1.5])
        assert det_product_second_kind(values, (2, 1)) == 0
        assert abs(determinant(second_kind(values, (2, 1), 3))) < 1e-9

    def test_two_simple_points(self):
        a, b = 0.3 + 1j, -1.2
        assert det_product_second_kind(np.array([a, b]), (1, 1)) == pytest.approx(b - a)

    def test_product_matches_lu_on_confluent_shape(self):
        rng = np.random.default_rng(39)
        for _ in range(10):
            values = random_distinct(rng, 3)
            product = det_product_second_kind(values, (3, 1, 2))
            lu = determinant(second_kind(values, (3, 1, 2), 6))
            assert abs(product - lu) <= 1e-9 * abs(lu)

    def test_product_matches_lu_across_profiles(self):
        rng = np.random.default_rng(40)
        for mults in [(1, 1), (2, 2), (2, 1, 1), (4, 2), (1, 2, 3)]:
            values = random_distinct(rng, len(mults))
            d = sum(mults)
            product = det_product_second_kind(values, mults)
            lu = determinant(second_kind(values, mults, d))
            assert abs(product - lu) <= 1e-9 * abs(lu)


class TestFullSpark:
    def test_square_distinct_points(self):
        rng = np.random.default_rng(41)
        values = random_distinct(rng, 3)
        certificate = full_spark(classical(values, 3))
        assert certificate.full_spark
        assert certificate.witness is None
        assert certificate.min_abs_det > 0

    def test_zero_column_fails_with_witness(self):
        m = np.array([[1.0, 0.0, 2.0], [3.0, 0.0, 4.0]])
        certificate = full_spark(m)
        assert not certificate.full_spark
        assert 1 in certificate.witness
        assert certificate.min_abs_det == 0.0

    def test_harmonic_synthesis_full_spark(self):
        w = np.exp(2j * np.pi / 6)
        values = w ** np.arange(4)
        certificate = full_spark(classical(values, 6))
        assert certificate.full_spark
        ok, _ = spark_by_enumeration(classical(values, 6))
        assert ok

    def test_lexicographically_first_witness(self):
        # cube roots of unity repeat coordinates with period 3, so columns
        # {0, 3} coincide; the first failing subset is (0, 1, 3)
        w = np.exp(2j * np.pi / 3)
        values = w ** np.arange(3)
        certificate = full_spark(classical(values, 6))
        assert not certificate.full_spark
        assert certificate.witness == (0, 1, 3)
        ok, first = spark_by_enumeration(classical(values, 6))
        assert not ok and first == (0, 1, 3)

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceededError):
            full_spark(np.ones((3, 40)), budget=100)

    def test_tall_matrix_rejected(self):
        with pytest.raises(DimensionMismatchError):
            full_spark(np.ones((4, 3)))

    def test_geometric_points_not_roots_of_unity(self):
        base = 0.9 * np.exp(0.7j)  # |base| != 1, no power equals 1
        values = base ** np.arange(3)
        certificate = full_spark(classical(values, 6))
        assert certificate.full_spark
        ok, _ = spark_by_enumeration(classical(values, 6))
        assert ok
