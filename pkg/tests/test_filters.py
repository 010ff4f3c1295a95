import math

import numpy as np
import pytest

from wavestream.filters import (SUPPORTED_NUMBERS, UnsupportedWaveletError,
                                daubechies_filter, mirror)

SQRT2 = math.sqrt(2.0)


@pytest.mark.parametrize("number", SUPPORTED_NUMBERS)
def test_qmf_conditions(number):
    pair = daubechies_filter(number)
    h, g, W = pair.h, pair.g, pair.width
    assert W == 2 * number
    assert abs(h.sum() - SQRT2) < 1e-12
    assert abs(g.sum()) < 1e-12
    assert abs((h * h).sum() - 1.0) < 1e-12
    assert abs((g * g).sum() - 1.0) < 1e-12
    assert abs(np.dot(h, g)) < 1e-12
    for k in range(1, number):
        assert abs(np.dot(h[: W - 2 * k], h[2 * k:])) < 1e-10
        assert abs(np.dot(g[: W - 2 * k], g[2 * k:])) < 1e-10


@pytest.mark.parametrize("number", SUPPORTED_NUMBERS)
def test_vanishing_moments(number):
    g = daubechies_filter(number).g
    n = np.arange(g.size, dtype=float)
    for m in range(number):
        # relative to the cancellation mass: n**m reaches ~19**9 for number 10
        scale = np.dot(n**m, np.abs(g)) + 1.0
        assert abs(np.dot(n**m, g)) < 1e-12 * scale, f"moment {m} not annihilated"


def test_haar_taps_exact():
    pair = daubechies_filter(1)
    assert pair.h == pytest.approx([1 / SQRT2, 1 / SQRT2], abs=1e-15)
    assert pair.g == pytest.approx([1 / SQRT2, -1 / SQRT2], abs=1e-15)


def test_db2_against_second_qmf_route():
    # independently recompute db2 from its closed form
    s3 = math.sqrt(3.0)
    expected = np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * SQRT2)
    assert daubechies_filter(2).h == pytest.approx(expected, abs=1e-15)


def test_mirror_matches_formula():
    h = daubechies_filter(3).h
    g = mirror(h)
    W = h.size
    for n in range(W):
        assert g[n] == (-1.0) ** n * h[W - 1 - n]


def test_mirror_examples():
    assert mirror([1 / SQRT2, 1 / SQRT2]) == pytest.approx([1 / SQRT2, -1 / SQRT2])
    assert mirror([1.0, 0.0]) == pytest.approx([0.0, -1.0])
    e2 = np.zeros(6)
    e2[2] = 1.0
    out = mirror(e2)
    assert abs(out[3]) == 1.0 and np.count_nonzero(out) == 1


@pytest.mark.parametrize("width", [2, 4, 5, 6])
def test_mirror_involution_up_to_sign(width):
    rng = np.random.default_rng(width)
    h = rng.standard_normal(width)
    sign = (-1.0) ** (width - 1)
    assert mirror(mirror(h)) == pytest.approx(sign * h)


def test_mirror_rejects_empty():
    with pytest.raises(ValueError):
        mirror([])


@pytest.mark.parametrize("number", [0, 11, -3])
def test_out_of_range_number(number):
    with pytest.raises(UnsupportedWaveletError):
        daubechies_filter(number)


def test_pair_is_immutable():
    pair = daubechies_filter(2)
    with pytest.raises(ValueError):
        pair.h[0] = 0.0
    assert daubechies_filter(2).h[0] == pair.h[0]
