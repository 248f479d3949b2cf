import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandsamp.errors import DataError
from bandsamp.image import Image, rmse
from bandsamp.transforms import (
    STD_LUMINANCE_TABLE,
    Spectrum,
    dct2,
    dct2_direct,
    idct2,
    jpeg_model_roundtrip,
    quality_table,
)
from bandsamp.testimages import natural_image
from conftest import random_image
from oracles import dct2_loops, jpeg_step_by_step, rms


@pytest.mark.parametrize("w, h", [(4, 4), (5, 3), (8, 8), (1, 6)])
def test_constant_image_dc(w, h):
    c = 37.5
    s = dct2(Image(np.full((h, w), c))).coeffs
    assert s[0, 0] == pytest.approx(c * math.sqrt(w * h), rel=1e-12)
    rest = s.copy()
    rest[0, 0] = 0
    assert np.abs(rest).max() < 1e-10


def test_parseval_random_8x8(rng):
    for _ in range(10):
        img = random_image(rng, 8, 8)
        e_pix = np.sum(img.pixels**2)
        assert dct2(img).energy() == pytest.approx(e_pix, rel=1e-9)


def test_dct2_matches_literal_loops(rng):
    img = random_image(rng, 4, 4)
    np.testing.assert_allclose(dct2(img).coeffs, dct2_loops(img.pixels), rtol=0, atol=1e-10)
    np.testing.assert_allclose(dct2_direct(img).coeffs, dct2_loops(img.pixels), rtol=0, atol=1e-10)


def test_dct2_direct_matches_fast_path_50_images(rng):
    for _ in range(50):
        h, w = rng.integers(4, 17, size=2)
        img = random_image(rng, h, w)
        np.testing.assert_allclose(dct2(img).coeffs, dct2_direct(img).coeffs, rtol=0, atol=1e-10)


def test_dct2_direct_degenerate_sizes():
    assert dct2_direct(Image([[42.0]])).coeffs[0, 0] == pytest.approx(42.0, abs=1e-12)
    s = dct2_direct(Image(np.full((3, 5), 2.0))).coeffs
    assert s[0, 0] == pytest.approx(2.0 * math.sqrt(15))


def test_idct2_dc_only():
    w, h = 6, 4
    c = np.zeros((h, w))
    c[0, 0] = math.sqrt(w * h)
    np.testing.assert_allclose(idct2(Spectrum(c)).pixels, 1.0, atol=1e-12)


def test_idct2_roundtrip_16x16(rng):
    img = random_image(rng, 16, 16)
    assert np.abs(idct2(dct2(img)).pixels - img.pixels).max() < 1e-9


def test_idct2_single_basis_function():
    c = np.zeros((4, 4))
    c[0, 1] = 1.0  # u = 1 (horizontal), v = 0
    px = idct2(Spectrum(c)).pixels
    # 2D basis: a_W(1) cos(pi (2x+1) / 8) times the vertical DC factor a_H(0) = 1/2
    expected_row = [0.5 * math.sqrt(2 / 4) * math.cos(math.pi * (2 * x + 1) / 8) for x in range(4)]
    for y in range(4):
        np.testing.assert_allclose(px[y], expected_row, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_linearity(alpha, beta, seed):
    r = np.random.default_rng(seed)
    x, y = r.normal(size=(6, 7)) * 50, r.normal(size=(6, 7)) * 50
    lhs = dct2(Image(alpha * x + beta * y)).coeffs
    rhs = alpha * dct2(Image(x)).coeffs + beta * dct2(Image(y)).coeffs
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-9 * (1 + np.abs(rhs).max()))


# ------------------------------------------------------------------ JPEG


def test_quality_50_is_verbatim_table():
    np.testing.assert_array_equal(quality_table(50), STD_LUMINANCE_TABLE)


@pytest.mark.parametrize("q", [1, 10, 25, 49, 50, 51, 75, 95, 100])
def test_quality_table_matches_formula(q):
    scale = 5000 // q if q < 50 else 200 - 2 * q
    expected = np.clip((STD_LUMINANCE_TABLE * scale + 50) // 100, 1, 255)
    np.testing.assert_array_equal(quality_table(q), expected)


def test_quality_extremes():
    assert np.all(quality_table(100) == 1)
    assert np.all(quality_table(1) == 255)


@pytest.mark.parametrize("q", [0, 101, -3, 2.5])
def test_bad_quality(q):
    with pytest.raises(DataError):
        jpeg_model_roundtrip(Image(np.zeros((8, 8))), q)


@pytest.mark.parametrize("q", [1, 50, 75, 100])
def test_constant_128_exact(q):
    img = Image(np.full((16, 24), 128.0))
    assert jpeg_model_roundtrip(img, q) == img


def test_matches_step_by_step_oracle(rng):
    img = random_image(rng, 16, 16)
    fast = jpeg_model_roundtrip(img, 75)
    slow = jpeg_step_by_step(img.pixels, 75)
    np.testing.assert_allclose(fast.pixels, slow, atol=1e-9)
    assert rmse(img, fast) == pytest.approx(rms(img.pixels, slow), abs=1e-9)


@pytest.mark.parametrize("shape", [(13, 21), (8, 3), (1, 1)])
def test_non_multiple_of_8_padding(rng, shape):
    img = random_image(rng, *shape)
    out = jpeg_model_roundtrip(img, 60)
    assert out.shape == img.shape
    np.testing.assert_allclose(out.pixels, jpeg_step_by_step(img.pixels, 60), atol=1e-9)


def test_rmse_non_increasing_in_quality():
    for seed in (1, 2, 3):
        img = natural_image(64, 64, seed=seed, beta=2.4)
        errs = [rmse(img, jpeg_model_roundtrip(img, q)) for q in (10, 25, 50, 75, 95)]
        assert all(a >= b for a, b in zip(errs, errs[1:])), errs
