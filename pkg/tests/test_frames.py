import numpy as np
import pytest

from dynphase import (
    DimensionMismatchError,
    JordanSpec,
    SingularMatrixError,
    analyze,
    assemble,
    build,
    circulant,
    circulant_frame,
    dft_matrix,
    dual,
    frame_criterion_diagonalizable,
    frame_criterion_jordan,
    full_spark,
    full_spark_criterion,
    harmonic_frame,
)
from oracles import orbit_naive, orbit_rank, random_distinct, random_unitary, spark_by_enumeration


def rotation(theta: float) -> np.ndarray:
    return np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex
    )


def diagonalizable_frame(rng, dim, length, values=None, coords=None):
    values = random_distinct(rng, dim) if values is None else values
    basis = random_unitary(rng, dim)
    coords = (
        rng.uniform(0.4, 1.2, dim) * np.exp(1j * rng.uniform(0, 2 * np.pi, dim))
        if coords is None
        else coords
    )
    operator = (basis * values) @ basis.conj().T
    generator = basis @ coords
    return build(operator, generator, length), values, coords


class TestBuild:
    def test_identity_operator(self):
        phi = np.array([1.0, 2.0j, -1.0])
        frame = build(np.eye(3), phi, 4)
        for v in frame.vectors:
            assert np.allclose(v, phi)

    def test_quarter_turn_orbit(self):
        frame = build(rotation(np.pi / 2), np.array([1.0, 0.0]), 4)
        expected = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        for v, e in zip(frame.vectors, expected):
            assert np.allclose(v, e, atol=1e-15)

    def test_matches_matrix_power_oracle(self):
        rng = np.random.default_rng(50)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        frame = build(a, phi, 6)
        expected = orbit_naive(a, phi, 6)
        assert np.max(np.abs(frame.synthesis() - expected)) < 1e-10 * np.max(np.abs(expected))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            build(np.eye(3), np.array([1.0, 0.0]), 3)


class TestAnalyze:
    def test_too_short_orbit_is_not_a_frame(self):
        frame = build(np.eye(3), np.array([1.0, 0.0, 0.0]), 2)
        analysis = analyze(frame)
        assert not analysis.is_frame
        assert analysis.lower_bound == 0.0

    def test_orthonormal_orbit_is_parseval(self):
        shift = circulant(np.array([0.0, 1.0, 0.0]))
        frame = build(shift, np.array([1.0, 0.0, 0.0]), 3)
        analysis = analyze(frame)
        assert analysis.is_frame
        assert analysis.lower_bound == pytest.approx(1.0)
        assert analysis.upper_bound == pytest.approx(1.0)

    def test_rotation_pair_spans(self):
        frame = build(rotation(np.pi / 4), np.array([1.0, 0.0]), 2)
        assert analyze(frame).is_frame

    def test_spark_on_demand(self):
        frame = harmonic_frame(3, 5)
        assert analyze(frame).spark is None
        analysis = analyze(frame, spark=True)
        assert analysis.spark is not None and analysis.spark.full_spark


class TestFrameCriterionDiagonalizable:
    def test_repeated_eigenvalue(self):
        values = np.array([1.0, 1.0, 2.0])
        coords = np.ones(3)
        assert not frame_criterion_diagonalizable(values, coords)

    def test_zero_coordinate(self):
        values = np.array([1.0, 2.0, 3.0])
        assert not frame_criterion_diagonalizable(values, np.array([1.0, 0.0, 1.0]))

    def test_random_positive_case_agrees_with_rank(self):
        rng = np.random.default_rng(51)
        for _ in range(10):
            frame, values, coords = diagonalizable_frame(rng, 4, 4)
            assert frame_criterion_diagonalizable(values, coords)
            assert analyze(frame).is_frame


class TestFrameCriterionJordan:
    def test_shared_eigenvalue_across_blocks(self):
        rng = np.random.default_rng(52)
        spec = JordanSpec(np.array([0.9, 0.9]), (2, 2), random_unitary(rng, 4))
        phi = spec.basis @ np.ones(4)
        assert not frame_criterion_jordan(spec, phi)
        assert orbit_rank(assemble(spec), phi, 4) < 4

    def test_generator_missing_a_chain(self):
        rng = np.random.default_rng(53)
        spec = JordanSpec(np.array([0.9, -0.8]), (2, 1), random_unitary(rng, 3))
        coords = np.array([1.0, 0.0, 1.0])  # kills the first block's leading vector
        assert not frame_criterion_jordan(spec, spec.basis @ coords)

    def test_single_jordan_block_spans(self):
        spec = JordanSpec(np.array([0.7]), (3,), np.eye(3))
        phi = np.array([0.2, -0.4, 1.0], dtype=complex)
        assert frame_criterion_jordan(spec, phi)
        assert orbit_rank(assemble(spec), phi, 3) == 3

    def test_agrees_with_rank_oracle_over_random_specs(self):
        rng = np.random.default_rng(54)
        for mults in [(1, 1), (2, 1), (3, 1, 2), (2, 2), (1, 1, 1, 1)]:
            d = sum(mults)
            values = random_distinct(rng, len(mults), gap=0.5)
            spec = JordanSpec(values, mults, random_unitary(rng, d))
            for _ in range(5):
                phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                verdict = frame_criterion_jordan(spec, phi)
                assert verdict == (orbit_rank(assemble(spec), phi, d) == d)


class TestDual:
    def test_orthonormal_orbit_is_self_dual(self):
        shift = circulant(np.array([0.0, 1.0, 0.0]))
        frame = build(shift, np.array([1.0, 0.0, 0.0]), 3)
        df = dual(frame)
        assert np.allclose(df.frame_operator, np.eye(3), atol=1e-12)
        assert np.allclose(df.dual_synthesis, frame.synthesis(), atol=1e-12)

    def test_reconstruction_formula(self):
        rng = np.random.default_rng(55)
        for _ in range(20):
            d = int(rng.integers(2, 6))
            L = int(rng.integers(d, 2 * d + 2))
            frame, _, _ = diagonalizable_frame(rng, d, L)
            df = dual(frame)
            x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            rebuilt = df.reconstruct(frame.coefficients(x))
            assert np.linalg.norm(rebuilt - x) <= 1e-8 * np.linalg.norm(x)

    def test_dual_vectors_match_operator_form(self):
        rng = np.random.default_rng(56)
        frame, _, _ = diagonalizable_frame(rng, 3, 5)
        df = dual(frame)
        power = np.eye(3, dtype=complex)
        for l in range(frame.length):
            expected = power @ df.dual_generator
            assert np.linalg.norm(df.dual_vectors[l] - expected) < 1e-9
            power = df.dual_operator @ power

    def test_scaled_generator_keeps_reconstruction_exact(self):
        rng = np.random.default_rng(57)
        frame, _, _ = diagonalizable_frame(rng, 3, 5)
        scaled = build(frame.operator, 3.7j * frame.generator, frame.length)
        df = dual(scaled)
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        rebuilt = df.reconstruct(scaled.coefficients(x))
        assert np.linalg.norm(rebuilt - x) <= 1e-8 * np.linalg.norm(x)

    def test_non_frame_rejected(self):
        frame = build(np.eye(2), np.array([1.0, 0.0]), 3)
        with pytest.raises(SingularMatrixError):
            dual(frame)


class TestCirculantFrame:
    def test_shift_kernel_with_unit_generator(self):
        d = 4
        kernel = np.zeros(d, dtype=complex)
        kernel[1] = 1.0
        frame, criterion = circulant_frame(kernel, np.eye(d, dtype=complex)[:, 0], d)
        assert criterion
        assert np.allclose(frame.synthesis(), np.eye(d))

    def test_repeated_spectrum_fails(self):
        d = 3
        kernel = np.array([1.0, 0.0, 0.0], dtype=complex)  # DFT is all ones
        _, criterion = circulant_frame(kernel, np.ones(d, dtype=complex), d)
        assert not criterion

    def test_vanishing_generator_spectrum_fails(self):
        d = 3
        kernel = np.zeros(d, dtype=complex)
        kernel[1] = 1.0
        phi = np.ones(d, dtype=complex)  # DFT of the all-ones vector has zeros
        _, criterion = circulant_frame(kernel, phi, d)
        assert not criterion

    def test_criterion_agrees_with_frame_bounds(self):
        rng = np.random.default_rng(58)
        for _ in range(20):
            d = int(rng.integers(2, 6))
            kernel = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            frame, criterion = circulant_frame(kernel, phi, d + 2)
            assert criterion == analyze(frame).is_frame


class TestHarmonicFrame:
    def test_small_orbit_values(self):
        frame = harmonic_frame(2, 4)
        expected = [(1, 1), (1, 1j), (1, -1), (1, -1j)]
        for v, e in zip(frame.vectors, expected):
            assert np.allclose(v, e, atol=1e-12)

    def test_square_case_is_scaled_unitary(self):
        L = 5
        frame = harmonic_frame(5, L)
        gram = frame.synthesis() @ frame.synthesis().conj().T
        assert np.allclose(gram, L * np.eye(5), atol=1e-9)
        analysis = analyze(frame)
        assert analysis.lower_bound == pytest.approx(L)
        assert analysis.upper_bound == pytest.approx(L)

    def test_full_spark_by_enumeration(self):
        frame = harmonic_frame(4, 6)
        certificate = full_spark(frame.synthesis())
        assert certificate.full_spark
        ok, _ = spark_by_enumeration(frame.synthesis())
        assert ok

    def test_length_below_dim_rejected(self):
        with pytest.raises(ValueError):
            harmonic_frame(4, 3)


class TestFullSparkCriterion:
    def test_positive_real_spectrum_short_circuits(self):
        values = np.array([0.5, 1.0, 1.7, 2.4])
        certificate = full_spark_criterion(values, np.ones(4), 8)
        assert certificate.full_spark
        assert certificate.min_abs_det is None  # no enumeration happened
        ok, _ = spark_by_enumeration(np.vander(values, 8, increasing=True))
        assert ok

    def test_zero_coordinate_fails_without_enumeration(self):
        values = np.array([0.5, 1.0, 2.0])
        certificate = full_spark_criterion(values, np.array([1.0, 0.0, 1.0]), 6)
        assert not certificate.full_spark
        assert certificate.witness == (0, 1, 2)
        assert certificate.min_abs_det == 0.0

    def test_geometric_spectrum_short_circuits(self):
        base = np.exp(2j * np.pi / 7)  # 7th root of unity, orbit length 6 stays clear
        values = base ** np.arange(3)
        certificate = full_spark_criterion(values, np.ones(3), 6)
        assert certificate.full_spark
        assert certificate.min_abs_det is None

    def test_root_of_unity_ratio_falls_back_to_enumeration(self):
        base = np.exp(2j * np.pi / 3)
        values = base ** np.arange(3)
        certificate = full_spark_criterion(values, np.ones(3), 6)
        assert not certificate.full_spark
        assert certificate.witness == (0, 1, 3)

    def test_zero_eigenvalue_is_not_full_spark_beyond_square(self):
        # a zero point zeroes every minor that skips the constant column
        values = np.array([0.0, 1.0, 2.0])
        certificate = full_spark_criterion(values, np.ones(3), 4)
        assert not certificate.full_spark
        assert certificate.witness == (1, 2, 3)

    def test_agrees_with_direct_orbit_enumeration(self):
        rng = np.random.default_rng(59)
        for trial in range(20):
            d = int(rng.integers(2, 5))
            L = int(rng.integers(d, 9))
            if trial % 2 == 0:
                values = np.exp(1j * rng.uniform(0, 2 * np.pi, d))
                while np.min(
                    np.abs(values[:, None] - values[None, :])[~np.eye(d, dtype=bool)]
                    if d > 1
                    else np.array([1.0])
                ) < 0.1:
                    values = np.exp(1j * rng.uniform(0, 2 * np.pi, d))
            else:
                values = random_distinct(rng, d)
            coords = rng.uniform(0.4, 1.0, d) * np.exp(1j * rng.uniform(0, 2 * np.pi, d))
            basis = random_unitary(rng, d)
            operator = (basis * values) @ basis.conj().T
            frame = build(operator, basis @ coords, L)
            certificate = full_spark_criterion(values, coords, L)
            direct, _ = spark_by_enumeration(frame.synthesis())
            assert certificate.full_spark == direct

    def test_coincident_eigenvalues_rejected(self):
        with pytest.raises(ValueError):
            full_spark_criterion(np.array([1.0, 1.0]), np.ones(2), 4)


class TestFrameInequality:
    def test_bounds_hold_on_random_vectors(self):
        rng = np.random.default_rng(60)
        frame, _, _ = diagonalizable_frame(rng, 4, 7)
        analysis = analyze(frame)
        for _ in range(100):
            y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            total = float(np.sum(np.abs(frame.coefficients(y)) ** 2))
            norm2 = float(np.linalg.norm(y) ** 2)
            assert analysis.lower_bound * norm2 <= total * (1 + 1e-9)
            assert total <= analysis.upper_bound * norm2 * (1 + 1e-9)
