import numpy as np
import pytest

from conftest import random_correlation, random_correlation_1d, separable_correlation
from ndspec import (
    CorrelationSignal,
    DimSpec,
    SpectralComposition,
    SpectralGridSpec,
    ar_spectrum_1d,
    assemble,
    fourier_block_sum,
    init_stage,
    invert_pd,
    levinson_1d,
    sequential_spectrum,
    stage_update,
    synth_correlation,
)
from ndspec.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotPositiveDefinite,
    SizeMismatch,
)


class TestLevinson:
    def test_white_noise(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([1.0, 0.0, 0.0]))
        assert np.array_equal(res.p, [1.0, 0.0, 0.0])
        assert res.rho == 1.0
        assert np.array_equal(res.sigmas, [0.0, 0.0])

    def test_single_step(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([1.0, 0.5]))
        np.testing.assert_allclose(res.p, [1.0, -0.5], rtol=1e-15)
        assert res.rho == pytest.approx(0.75, rel=1e-15)
        np.testing.assert_allclose(res.sigmas, [-0.5], rtol=1e-15)

    def test_near_singular_step(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([1.0, 0.99]))
        np.testing.assert_allclose(res.sigmas, [-0.99], rtol=1e-15)
        assert res.rho == pytest.approx(0.0199, rel=1e-12)

    def test_rejects_reflection_on_unit_circle(self):
        with pytest.raises(NotPositiveDefinite) as info:
            levinson_1d(CorrelationSignal.from_forward_lags([1.0, 1.1]))
        assert info.value.pivot_index == 1

    def test_rejects_nd_input(self):
        rng = np.random.default_rng(0)
        with pytest.raises(DimensionMismatch):
            levinson_1d(random_correlation(rng, (2, 2)))

    def test_solves_the_normal_equations(self):
        # R p = rho e_0 with p normalized to p[0] = 1
        rng = np.random.default_rng(1)
        for _ in range(10):
            c = random_correlation_1d(rng, 6)
            res = levinson_1d(c)
            r = assemble(c).entries
            lhs = r @ (res.p / res.rho)
            expected = np.zeros(6, dtype=complex)
            expected[0] = 1.0
            np.testing.assert_allclose(lhs, expected, atol=1e-10)
            assert abs(res.p[0] - 1.0) == 0.0
            assert np.all(np.abs(res.sigmas) < 1.0)
            assert res.rho == pytest.approx(
                c.zero_lag * np.prod(1.0 - np.abs(res.sigmas) ** 2), rel=1e-12
            )


class TestArSpectrum1d:
    def test_white_is_flat(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([0.3, 0.0]))
        s = ar_spectrum_1d(res, SpectralGridSpec((16,)))
        np.testing.assert_allclose(s.power, 0.3, rtol=1e-14)

    def test_hand_values_at_0_and_pi(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([1.0, 0.5]))
        s = ar_spectrum_1d(res, SpectralGridSpec((2,)))
        assert s.power[0] == pytest.approx(3.0, rel=1e-12)
        assert s.power[1] == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_rejects_nd_grid(self):
        res = levinson_1d(CorrelationSignal.from_forward_lags([1.0, 0.5]))
        with pytest.raises(DimensionMismatch):
            ar_spectrum_1d(res, SpectralGridSpec((4, 4)))


class TestInitStage:
    def test_1d_reads_first_column(self):
        r_inv = np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0
        field = init_stage(r_inv, DimSpec((2,)))
        assert field.stage == 1
        assert field.processed == ()
        assert field.blocks.shape == (2, 1, 1)
        assert field.blocks[0, 0, 0] == pytest.approx(2.0 / 3.0)
        assert field.blocks[1, 0, 0] == pytest.approx(-1.0 / 3.0)

    def test_diagonal_inverse_gives_zero_cross_blocks(self):
        c = synth_correlation(SpectralComposition(noise_var=0.25), (2, 3))
        r_inv = invert_pd(assemble(c).entries)
        field = init_stage(r_inv, DimSpec((2, 3)))
        assert field.blocks.shape == (3, 2, 2)
        np.testing.assert_allclose(field.blocks[0], 4.0 * np.eye(2), rtol=1e-12)
        assert np.all(field.blocks[1] == 0.0)
        assert np.all(field.blocks[2] == 0.0)

    def test_blocks_match_brute_force_inverse(self):
        rng = np.random.default_rng(2)
        c = random_correlation(rng, (2, 2))
        entries = assemble(c).entries
        r_inv = invert_pd(entries)
        oracle = np.linalg.inv(entries)
        field = init_stage(r_inv, DimSpec((2, 2)))
        np.testing.assert_allclose(field.blocks[0], oracle[0:2, 0:2], atol=1e-10)
        np.testing.assert_allclose(field.blocks[1], oracle[2:4, 0:2], atol=1e-10)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            init_stage(np.eye(3), DimSpec((2, 2)))


class TestFourierBlockSum:
    def test_zero_index_is_plain_sum(self):
        rng = np.random.default_rng(3)
        c = random_correlation(rng, (3, 2))
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((3, 2)))
        out = fourier_block_sum(field, 0, 8)
        np.testing.assert_allclose(out, field.blocks.sum(axis=0), rtol=1e-14)

    def test_single_block_is_constant_in_frequency(self):
        rng = np.random.default_rng(4)
        c = random_correlation(rng, (3, 1))
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((3, 1)))
        assert field.n_blocks == 1
        for m in range(4):
            np.testing.assert_allclose(fourier_block_sum(field, m, 4), field.blocks[0],
                                       rtol=1e-14)

    def test_1d_matches_prediction_polynomial(self):
        # first-column identity: G(k) = p_k / rho
        c = CorrelationSignal.from_forward_lags([1.0, 0.5])
        res = levinson_1d(c)
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((2,)))
        for m in range(8):
            w = 2.0 * np.pi * m / 8.0
            expected = (1.0 + res.p[1] * np.exp(1j * w)) / res.rho
            out = fourier_block_sum(field, m, 8)
            assert out[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_grid_index_bounds(self):
        c = CorrelationSignal.from_forward_lags([1.0, 0.5])
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((2,)))
        with pytest.raises(IndexOutOfRange):
            fourier_block_sum(field, 8, 8)


class TestStageUpdate:
    def test_1d_final_stage_holds_spectral_inverse(self):
        c = CorrelationSignal.from_forward_lags([1.0, 0.5])
        res = levinson_1d(c)
        grid = SpectralGridSpec((8,))
        field = stage_update(init_stage(invert_pd(assemble(c).entries), DimSpec((2,))),
                             grid)
        assert field.stage == 2
        assert field.processed == (0,)
        assert field.blocks.shape == (8, 1, 1, 1)
        w = grid.angular(0)
        poly = 1.0 + res.p[1] * np.exp(1j * w)
        np.testing.assert_allclose(field.blocks[:, 0, 0, 0].real,
                                   np.abs(poly) ** 2 / res.rho, rtol=1e-12)

    def test_white_noise_blocks_stay_diagonal(self):
        var = 0.25
        c = synth_correlation(SpectralComposition(noise_var=var), (2, 2, 2))
        grid = SpectralGridSpec((4, 4, 4))
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((2, 2, 2)))
        for expected_h in (2, 1):
            field = stage_update(field, grid)
            h = field.block_size
            assert h == expected_h
            for point in np.ndindex(*field.counts):
                np.testing.assert_allclose(field.blocks[point + (0,)],
                                           np.eye(h) / var, rtol=1e-11)
                if field.n_blocks > 1:
                    assert np.max(np.abs(field.blocks[point + (1,)])) < 1e-12

    def test_separable_stage_is_scaled_inverse_block(self):
        # c(t0, t1) = c0(t0) c1(t1): after one stage the field is the
        # 1D spectral inverse of c1 times the inverse matrix of c0
        rng = np.random.default_rng(5)
        c0 = random_correlation_1d(rng, 2)
        c1 = random_correlation_1d(rng, 2)
        c = separable_correlation([c0, c1])
        grid = SpectralGridSpec((8, 8))
        field = stage_update(init_stage(invert_pd(assemble(c).entries), DimSpec((2, 2))),
                             grid)
        res1 = levinson_1d(c1)
        inv0 = np.linalg.inv(assemble(c0).entries)
        w = grid.angular(1)
        poly = 1.0 + res1.p[1] * np.exp(1j * w)
        spectral_inverse = np.abs(poly) ** 2 / res1.rho
        for m in range(8):
            reconstructed = np.stack(
                [field.blocks[m, 0, 0, 0], field.blocks[m, 1, 0, 0]]
            )
            np.testing.assert_allclose(
                reconstructed, spectral_inverse[m] * inv0[:, 0], atol=1e-10
            )

    def test_raw_congruence_is_hermitian_before_symmetrization(self):
        rng = np.random.default_rng(6)
        c = random_correlation(rng, (2, 3))
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((2, 3)))
        g0_inv = invert_pd(field.blocks[0])
        for m in range(6):
            summed = fourier_block_sum(field, m, 6)
            raw = summed @ g0_inv @ summed.conj().T
            asymmetry = np.max(np.abs(raw - raw.conj().T))
            assert asymmetry <= 1e-12 * np.max(np.abs(raw))

    def test_final_scalar_is_real_before_symmetrization(self):
        rng = np.random.default_rng(7)
        c = random_correlation_1d(rng, 4)
        field = init_stage(invert_pd(assemble(c).entries), DimSpec((4,)))
        g0_inv = invert_pd(field.blocks[0])
        for m in range(8):
            summed = fourier_block_sum(field, m, 8)
            raw = (summed @ g0_inv @ summed.conj().T)[0, 0]
            assert abs(raw.imag) <= 1e-10 * abs(raw.real)

    def test_rejects_update_after_completion(self):
        c = CorrelationSignal.from_forward_lags([1.0, 0.5])
        grid = SpectralGridSpec((4,))
        field = stage_update(init_stage(invert_pd(assemble(c).entries), DimSpec((2,))),
                             grid)
        with pytest.raises(ValueError):
            stage_update(field, grid)


class TestSequentialSpectrum:
    def test_1d_equals_levinson_oracle(self):
        rng = np.random.default_rng(8)
        grid = SpectralGridSpec((64,))
        for order in (2, 4, 8):
            c = random_correlation_1d(rng, order)
            oracle = ar_spectrum_1d(levinson_1d(c), grid)
            estimate = sequential_spectrum(c, grid)
            rel = np.max(np.abs(estimate.power - oracle.power) / oracle.power)
            assert rel < 1e-10

    def test_white_noise_is_flat(self):
        c = synth_correlation(SpectralComposition(noise_var=0.1), (2, 2))
        s = sequential_spectrum(c, SpectralGridSpec((5, 5)))
        np.testing.assert_allclose(s.power, 0.1, rtol=1e-12)

    def test_2d_separable_is_a_product(self):
        rng = np.random.default_rng(9)
        grid1 = SpectralGridSpec((8,))
        c0 = random_correlation_1d(rng, 2)
        c1 = random_correlation_1d(rng, 2)
        s0 = ar_spectrum_1d(levinson_1d(c0), grid1)
        s1 = ar_spectrum_1d(levinson_1d(c1), grid1)
        joint = sequential_spectrum(separable_correlation([c0, c1]),
                                    SpectralGridSpec((8, 8)))
        expected = np.outer(s0.power, s1.power)
        assert np.max(np.abs(joint.power - expected) / expected) < 1e-8

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(10)
        c = random_correlation(rng, (2, 3))
        grid = SpectralGridSpec((6, 6))
        base = sequential_spectrum(c, grid)
        for alpha in (0.1, 7.0):
            scaled = sequential_spectrum(c.scaled(alpha), grid)
            rel = np.max(np.abs(scaled.power - alpha * base.power)
                         / (alpha * base.power))
            assert rel < 1e-12

    def test_grid_dimension_mismatch(self):
        c = CorrelationSignal.from_forward_lags([1.0, 0.5])
        with pytest.raises(DimensionMismatch):
            sequential_spectrum(c, SpectralGridSpec((4, 4)))

    def test_not_positive_definite_is_tagged(self):
        c = CorrelationSignal.from_forward_lags([0.5, 1.0])
        with pytest.raises(NotPositiveDefinite) as info:
            sequential_spectrum(c, SpectralGridSpec((4,)))
        assert info.value.stage == 1
        assert info.value.frequency == ()

    def test_walking_cross_check_agrees(self):
        rng = np.random.default_rng(11)
        c = random_correlation(rng, (2, 3))
        grid = SpectralGridSpec((5, 5))
        checked = sequential_spectrum(c, grid, cross_check_walking=True)
        plain = sequential_spectrum(c, grid)
        assert np.array_equal(checked.power, plain.power)
