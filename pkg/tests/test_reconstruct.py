import numpy as np
import pytest

from bandsamp.errors import DataError, DimensionMismatchError, RankDeficientError, UnderdeterminedError
from bandsamp.image import Image, rmse
from bandsamp.masks import SampleSet, SpectralMask, circular_lowpass_mask, random_sample_set
from bandsamp.reconstruct import (
    GPParams,
    gp_reconstruct,
    in_mask_design_matrix,
    ista_l1,
    ista_l1_spectrum,
    ista_objective,
    least_squares_oracle,
    soft_threshold,
)
from bandsamp.testimages import natural_image
from bandsamp.transforms import Spectrum, dct2, idct2
from oracles import dct1_matrix
from problems import band_limited_problem, sparse_problem


# ------------------------------------------------------------ GP


def test_full_sampling_converges_in_one_iteration(natural64):
    s = random_sample_set(natural64, natural64.size, seed=1)
    res = gp_reconstruct(s, circular_lowpass_mask(64, 64, 10), GPParams(tol=0.0))
    assert res.iterations_run == 1 and res.converged
    assert res.final_displacement == 0.0
    assert res.image == natural64


def test_band_limited_recovery_matches_oracle():
    truth, mask, samples = band_limited_problem(seed=5)
    gp = gp_reconstruct(samples, mask, GPParams(tol=1e-6))
    ls = least_squares_oracle(samples, mask)
    assert gp.converged
    assert rmse(gp.image, truth) < 1e-3
    assert rmse(gp.image, ls) < 1e-3


@pytest.mark.parametrize("seed", range(4))
def test_oracle_equivalence_randomized(seed):
    truth, mask, samples = band_limited_problem(seed=100 + seed)
    gp = gp_reconstruct(samples, mask, GPParams(tol=1e-6))
    assert gp.converged
    assert rmse(gp.image, least_squares_oracle(samples, mask)) < 1e-3


def test_displacement_non_increasing():
    truth, mask, samples = band_limited_problem(seed=9)
    res = gp_reconstruct(samples, mask, GPParams(tol=1e-8, max_iters=3000, record_trace=True))
    tr = np.array(res.trace)
    assert len(tr) == res.iterations_run
    assert np.all(np.diff(tr) <= 1e-12 * tr[:-1] + 1e-15)


def test_displacement_non_increasing_natural_image(natural64):
    s = random_sample_set(natural64, 900, seed=4)
    res = gp_reconstruct(s, circular_lowpass_mask(64, 64, 700), GPParams(tol=0.0, max_iters=200, record_trace=True))
    tr = np.array(res.trace)
    assert np.all(np.diff(tr) <= 1e-12 * tr[:-1] + 1e-15)
    assert not res.converged and res.iterations_run == 200


def test_fixed_point():
    truth, mask, samples = band_limited_problem(seed=2)
    res = gp_reconstruct(samples, mask, GPParams(max_iters=1, tol=0.0), initial=truth)
    assert np.abs(res.image.pixels - truth.pixels).max() < 1e-9
    assert res.final_displacement < 1e-9


def test_output_satisfies_samples_exactly(natural64):
    s = random_sample_set(natural64, 500, seed=8)
    res = gp_reconstruct(s, circular_lowpass_mask(64, 64, 400), GPParams(max_iters=7, tol=0.0))
    np.testing.assert_array_equal(res.image.pixels.ravel()[s.flat_indices], s.values)


def test_result_invariants(natural64):
    s = random_sample_set(natural64, 500, seed=8)
    p = GPParams(max_iters=50, tol=0.5)
    res = gp_reconstruct(s, circular_lowpass_mask(64, 64, 400), p)
    assert res.iterations_run <= p.max_iters
    if res.converged:
        assert res.final_displacement <= p.tol
    assert res.trace is None


def test_trace_csv():
    truth, mask, samples = band_limited_problem(seed=3)
    res = gp_reconstruct(samples, mask, GPParams(max_iters=5, tol=0.0, record_trace=True))
    lines = res.trace_csv().splitlines()
    assert lines[0] == "iteration,displacement,in_band_energy_fraction"
    assert len(lines) == 6
    fr = [float(l.split(",")[2]) for l in lines[1:]]
    assert all(0 <= f <= 1 for f in fr)


def test_gp_dimension_mismatch():
    s = random_sample_set(Image(np.zeros((8, 8))), 10, 0)
    with pytest.raises(DimensionMismatchError):
        gp_reconstruct(s, circular_lowpass_mask(8, 9, 5))


def test_gp_params_validation():
    with pytest.raises(DataError):
        GPParams(max_iters=0)
    with pytest.raises(DataError):
        GPParams(tol=-1)


# ---------------------------------------------------- least squares


def test_design_matrix_against_definition():
    s = SampleSet(5, 4, [[1, 2], [4, 0], [0, 3]], [0.0, 0.0, 0.0], 0)
    m = SpectralMask(np.array([[1, 1, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 1]], dtype=bool))
    a = in_mask_design_matrix(s, m)
    cw, ch = dct1_matrix(5), dct1_matrix(4)
    for i, (x, y) in enumerate([(1, 2), (4, 0), (0, 3)]):
        for j, (u, v) in enumerate([(0, 0), (1, 0), (3, 1), (4, 3)]):
            assert a[i, j] == pytest.approx(cw[u, x] * ch[v, y], abs=1e-14)


def test_oracle_exact_recovery():
    truth, mask, samples = band_limited_problem(seed=11)
    rec = least_squares_oracle(samples, mask)
    a = in_mask_design_matrix(samples, mask)
    coef = dct2(rec).coeffs[mask.included]  # row-major, same order as mask.indices()
    assert np.abs(a @ coef - samples.values).max() < 1e-8
    assert rmse(rec, truth) < 1e-6


def test_oracle_dc_fit():
    s = SampleSet(4, 4, [[0, 0], [3, 2]], [7.5, 7.5], 0)
    m = SpectralMask(np.eye(1, 16, dtype=bool).reshape(4, 4))
    np.testing.assert_allclose(least_squares_oracle(s, m).pixels, 7.5, atol=1e-12)


def test_oracle_underdetermined():
    s = random_sample_set(Image(np.zeros((8, 8))), 5, 0)
    with pytest.raises(UnderdeterminedError):
        least_squares_oracle(s, circular_lowpass_mask(8, 8, 10))


def test_oracle_rank_deficient():
    # every sample has x = 2, where the DC and (u=1, v=0) basis functions are proportional
    s = SampleSet(8, 8, [[2, 0], [2, 3], [2, 5]], [1.0, 2.0, 3.0], 0)
    inc = np.zeros((8, 8), dtype=bool)
    inc[0, 0] = inc[0, 1] = True
    with pytest.raises(RankDeficientError) as e:
        least_squares_oracle(s, SpectralMask(inc))
    assert e.value.n_unknowns == 2 and e.value.rank == 1


# ---------------------------------------------------------------- ISTA


def test_soft_threshold():
    np.testing.assert_array_equal(soft_threshold(np.array([-3.0, -0.5, 0.0, 0.5, 2.0]), 1.0), [-2, 0, 0, 0, 1])


def test_ista_total_shrinkage():
    truth, samples, _ = sparse_problem(seed=1)
    back = dct2(samples.render())  # D^T y
    lam = np.abs(back.coeffs).max() * 1.01
    out = ista_l1(samples, lam, 1)
    assert not out.pixels.any()


def test_ista_objective_monotone():
    r = np.random.default_rng(4)
    img = Image(r.uniform(0, 255, size=(16, 16)))
    s = random_sample_set(img, 100, 3)
    objs = []
    ista_l1_spectrum(s, 5.0, 300, callback=lambda i, c, o: objs.append(o))
    assert len(objs) == 300
    o = np.array(objs)
    assert np.all(np.diff(o) <= 1e-10 * np.abs(o[1:]))
    assert o[0] <= ista_objective(s, Spectrum(np.zeros((16, 16))), 5.0)


def test_ista_callback_objective_consistent():
    truth, samples, _ = sparse_problem(seed=2, size=16, m=80)
    seen = {}

    def cb(i, c, o):
        seen[i] = (c.copy(), o)

    ista_l1_spectrum(samples, 0.5, 3, callback=cb)
    c, o = seen[3]
    assert o == pytest.approx(ista_objective(samples, Spectrum(c), 0.5), rel=1e-12)


def test_ista_sparse_recovery_and_debiasing():
    truth, samples, support = sparse_problem(seed=3)
    est = ista_l1_spectrum(samples, 0.1, 2000)
    c = est.coeffs
    k = int(support.sum())
    top = np.zeros(c.size, dtype=bool)
    top[np.argsort(-np.abs(c.ravel()), kind="stable")[:k]] = True
    assert np.array_equal(top.reshape(c.shape), support)
    rec = idct2(est)
    assert rmse(rec, truth) < 0.5
    debiased = least_squares_oracle(samples, SpectralMask(top.reshape(c.shape)))
    assert rmse(debiased, truth) < 1e-6
    assert rmse(rec, debiased) < 0.5


@pytest.mark.parametrize("lam, iters", [(0.0, 5), (-1.0, 5), (1.0, 0)])
def test_ista_argument_errors(lam, iters):
    _, samples, _ = sparse_problem(seed=1, size=8, m=20)
    with pytest.raises(DataError):
        ista_l1(samples, lam, iters)
