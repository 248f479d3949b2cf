import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandsamp.errors import DataError
from bandsamp.image import Image, load_pgm
from bandsamp.masks import (
    Disc,
    Rect,
    SampleSet,
    SpectralMask,
    circular_lowpass_mask,
    mask_from_regions,
    parse_regions,
    random_sample_set,
)


def _img(w, h):
    return Image(np.arange(w * h, dtype=float).reshape(h, w))


# ----------------------------------------------------------- sample sets


def test_full_draw_covers_every_pixel():
    img = _img(7, 5)
    s = random_sample_set(img, 35, seed=3)
    assert sorted(s.flat_indices.tolist()) == list(range(35))
    np.testing.assert_array_equal(s.values, s.flat_indices.astype(float))


def test_deterministic():
    img = _img(16, 16)
    a, b = random_sample_set(img, 40, 11), random_sample_set(img, 40, 11)
    np.testing.assert_array_equal(a.positions, b.positions)
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.positions, random_sample_set(img, 40, 12).positions)


def test_frozen_positions_for_seed():
    # Guards the documented generator: changing it would silently change experiments.
    s = random_sample_set(_img(8, 8), 5, seed=2024)
    assert s.flat_indices.tolist() == [21, 36, 15, 13, 42]
    assert s.positions.tolist() == [[5, 2], [4, 4], [7, 1], [5, 1], [2, 5]]


def test_full_scale_budget():
    s = random_sample_set(Image(np.zeros((256, 256))), 6141, seed=1)
    assert s.m == 6141 == len(set(s.flat_indices.tolist()))


@pytest.mark.parametrize("m", [0, 17, -2])
def test_budget_out_of_range(m):
    with pytest.raises(DataError):
        random_sample_set(_img(4, 4), m, 0)


def test_uniform_inclusion_frequency():
    n, m, trials = 32 * 32, 256, 1000
    counts = np.zeros(n)
    img = Image(np.zeros((32, 32)))
    for seed in range(trials):
        counts[random_sample_set(img, m, seed).flat_indices] += 1
    p = m / n
    sd = np.sqrt(trials * p * (1 - p))
    assert np.abs(counts - trials * p).max() < 5 * sd


def test_sample_set_validation():
    with pytest.raises(DataError):
        SampleSet(4, 4, [[0, 0], [0, 0]], [1.0, 2.0], 0)
    with pytest.raises(DataError):
        SampleSet(4, 4, [[4, 0]], [1.0], 0)
    with pytest.raises(DataError):
        SampleSet(4, 4, [[1, 0]], [1.0, 2.0], 0)


def test_sample_set_text_roundtrip(tmp_path):
    s = random_sample_set(Image(np.random.default_rng(0).uniform(0, 255, (9, 11))), 20, seed=77)
    s.save(tmp_path / "s.txt")
    text = (tmp_path / "s.txt").read_text().splitlines()
    assert text[1:5] == ["width 11", "height 9", "m 20", "seed 77"]
    t = SampleSet.load(tmp_path / "s.txt")
    np.testing.assert_array_equal(t.positions, s.positions)
    np.testing.assert_array_equal(t.values, s.values)
    assert (t.width, t.height, t.seed) == (11, 9, 77)


def test_sample_set_text_count_mismatch():
    with pytest.raises(DataError):
        SampleSet.from_text("width 2\nheight 2\nm 2\nseed 0\n0 0 1.0\n")


def test_render_sample_map():
    s = SampleSet(3, 2, [[2, 1], [0, 0]], [9.0, 4.0], 0)
    np.testing.assert_array_equal(s.render().pixels, [[4, 0, 0], [0, 0, 9]])
    np.testing.assert_array_equal(s.indicator(), [[True, False, False], [False, False, True]])


# ---------------------------------------------------------------- masks


def test_circular_smallest():
    m = circular_lowpass_mask(8, 8, 1)
    assert m.count == 1 and m.included[0, 0]


def test_circular_whole_shell_only():
    # shell r2=1 holds (1,0) and (0,1); a budget of 2 cannot take half of it
    assert circular_lowpass_mask(8, 8, 2).count == 1
    assert circular_lowpass_mask(8, 8, 3).count == 3


def test_circular_full():
    m = circular_lowpass_mask(5, 7, 35)
    assert m.count == 35


def test_circular_full_scale_budget():
    m = circular_lowpass_mask(256, 256, 6141)
    assert 6000 <= m.count <= 6141


def _shell_brute(w, h, m):
    """Largest integer r2 whose disc holds <= m indices, by direct counting."""
    best = 0
    for r2 in range((w - 1) ** 2 + (h - 1) ** 2 + 1):
        cnt = sum(1 for u in range(w) for v in range(h) if u * u + v * v <= r2)
        if cnt <= m:
            best = r2
    return best


@pytest.mark.parametrize("w, h, m", [(6, 6, 10), (9, 4, 20), (5, 5, 25), (7, 3, 1), (8, 8, 30)])
def test_circular_matches_brute_force(w, h, m):
    r2 = _shell_brute(w, h, m)
    expected = np.array([[u * u + v * v <= r2 for u in range(w)] for v in range(h)])
    np.testing.assert_array_equal(circular_lowpass_mask(w, h, m).included, expected)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_circular_properties(w, h, data):
    n = w * h
    m1 = data.draw(st.integers(1, n))
    m2 = data.draw(st.integers(m1, n))
    a, b = circular_lowpass_mask(w, h, m1), circular_lowpass_mask(w, h, m2)
    assert a.count <= m1 and b.count <= m2
    assert a.issubset(b)
    assert a.included[0, 0]
    d = np.add.outer(np.arange(h) ** 2, np.arange(w) ** 2)
    assert d[~a.included].min(initial=10**9) > d[a.included].max()


@pytest.mark.parametrize("m", [0, 65])
def test_circular_range(m):
    with pytest.raises(DataError):
        circular_lowpass_mask(8, 8, m)


def test_regions_single_rect():
    assert mask_from_regions(8, 8, [Rect(0, 3, 0, 3)]).count == 16


def test_regions_disjoint():
    m = mask_from_regions(8, 8, [Rect(0, 1, 0, 1), Rect(4, 6, 5, 6)])
    assert m.count == 4 + 6


def test_regions_overlap_inclusion_exclusion():
    m = mask_from_regions(8, 8, [Rect(0, 2, 0, 2), Rect(2, 3, 2, 3)])
    assert m.count == 9 + 4 - 1


def test_regions_clipped_to_grid():
    assert mask_from_regions(4, 4, [Rect(2, 10, -3, 0)]).count == 2


def test_regions_disc():
    m = mask_from_regions(9, 9, [Disc(4, 4, 1)])
    assert m.count == 5


def test_regions_errors():
    with pytest.raises(DataError):
        mask_from_regions(8, 8, [])
    with pytest.raises(DataError):
        mask_from_regions(8, 8, [Rect(10, 12, 0, 1)])


def test_regions_permutation_invariant():
    regs = [Rect(0, 1, 0, 1), Disc(6, 2, 1.5), Rect(3, 5, 4, 7)]
    ref = mask_from_regions(8, 8, regs)
    for perm in itertools.permutations(regs):
        assert mask_from_regions(8, 8, perm) == ref


def test_parse_regions():
    regs = parse_regions("rect:0,3,0,3; disc:10,12,2.5")
    assert regs == [Rect(0, 3, 0, 3), Disc(10.0, 12.0, 2.5)]
    for bad in ("box:1,2", "rect:1,2,3", "rect:a,b,c,d", "rect:0.5,1,2,3"):
        with pytest.raises(DataError):
            parse_regions(bad)


def test_mask_bitmap(tmp_path):
    m = circular_lowpass_mask(6, 4, 5)
    m.save_pgm(tmp_path / "m.pgm")
    px = load_pgm(tmp_path / "m.pgm").pixels
    assert set(np.unique(px)) <= {0.0, 255.0}
    np.testing.assert_array_equal(px == 255, m.included)


def test_empty_mask_rejected():
    with pytest.raises(DataError):
        SpectralMask(np.zeros((3, 3), dtype=bool))
