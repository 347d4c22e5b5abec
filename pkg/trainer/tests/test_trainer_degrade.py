import numpy as np
import pytest

from luttrainer.degrade import dct_quantize


def test_deterministic():
    rng = np.random.default_rng(0)
    plane = rng.integers(0, 256, (32, 48), dtype=np.uint8)
    assert np.array_equal(dct_quantize(plane), dct_quantize(plane))


def test_output_range_and_shape():
    rng = np.random.default_rng(1)
    plane = rng.integers(0, 256, (21, 35), dtype=np.uint8)  # non-multiple of 8
    out = dct_quantize(plane, step=24)
    assert out.shape == plane.shape
    assert out.dtype == np.uint8


def test_constant_plane_survives():
    plane = np.full((16, 16), 128, dtype=np.uint8)
    out = dct_quantize(plane, step=24)
    assert int(np.abs(out.astype(int) - 128).max()) <= 1


def test_stronger_step_degrades_more():
    rng = np.random.default_rng(2)
    base = rng.integers(0, 256, (64, 64), dtype=np.uint8)

    def mse(a, b):
        return float(np.mean((a.astype(float) - b.astype(float)) ** 2))

    weak = mse(dct_quantize(base, step=8), base)
    strong = mse(dct_quantize(base, step=40), base)
    assert 0 < weak < strong


def test_step_validation():
    with pytest.raises(ValueError):
        dct_quantize(np.zeros((8, 8), dtype=np.uint8), step=0)
