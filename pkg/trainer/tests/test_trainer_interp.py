import numpy as np
import pytest
import torch

from luttrainer.interp import simplex_interp, simplex_interp_rounded

# Cross-component invariant: the trainer's differentiable retrieval must
# agree with the filter engine bit-for-bit at integer inputs, or the
# finetuned tables would optimize a different function than ships.
from lutfilter.core import ClippedLut
from lutfilter.interp import interp_4d


@pytest.fixture(scope="module")
def random_lut():
    rng = np.random.default_rng(7)
    return rng.integers(0, 256, (17,) * 4, dtype=np.uint8)


def test_rounded_matches_engine_exactly(random_lut):
    rng = np.random.default_rng(8)
    engine_lut = ClippedLut(values=random_lut)
    lut_t = torch.from_numpy(random_lut.reshape(-1).astype(np.float64))
    q = rng.integers(0, 256, (4000, 4))
    ours = simplex_interp_rounded(lut_t, torch.from_numpy(q.astype(np.float64)))
    ref = np.array([interp_4d(engine_lut, tuple(int(v) for v in row)) for row in q])
    assert np.array_equal(ours.numpy().astype(int), ref)


def test_rounded_matches_engine_at_extremes(random_lut):
    engine_lut = ClippedLut(values=random_lut)
    lut_t = torch.from_numpy(random_lut.reshape(-1).astype(np.float64))
    extremes = [(0, 0, 0, 0), (255, 255, 255, 255), (255, 0, 240, 16), (249, 241, 254, 247)]
    for q in extremes:
        out = simplex_interp_rounded(lut_t, torch.tensor([q], dtype=torch.float64))
        assert int(out.item()) == interp_4d(engine_lut, q)


def test_smooth_mode_is_continuous_across_cells(random_lut):
    lut_t = torch.from_numpy(random_lut.reshape(-1).astype(np.float64))
    # approach a cell boundary from both sides
    for boundary in (16.0, 240.0):
        lo = simplex_interp(lut_t, torch.tensor([[boundary - 1e-6, 10, 20, 30]], dtype=torch.float64))
        hi = simplex_interp(lut_t, torch.tensor([[boundary + 1e-6, 10, 20, 30]], dtype=torch.float64))
        assert abs(float(lo) - float(hi)) < 1e-3


def test_gradients_flow_to_table_and_inputs(random_lut):
    lut = torch.from_numpy(random_lut.reshape(-1).astype(np.float64)).requires_grad_()
    x = torch.tensor([[74.3, 98.1, 3.7, 251.2]], dtype=torch.float64, requires_grad=True)
    out = simplex_interp(lut, x)
    out.sum().backward()
    assert lut.grad is not None and float(lut.grad.abs().sum()) > 0
    # table gradient is a convex combination: non-negative, sums to 1
    assert float(lut.grad.min()) >= 0
    assert float(lut.grad.sum()) == pytest.approx(1.0)
    assert x.grad is not None


def test_linear_table_reproduces_identity():
    # table value = first coordinate's sample -> interpolation returns input
    grid = np.array([min(16 * b, 255) for b in range(17)], dtype=np.float64)
    table = np.broadcast_to(grid[:, None, None, None], (17,) * 4).reshape(-1)
    lut_t = torch.from_numpy(table.copy())
    q = np.array([[74, 98, 3, 251], [0, 1, 2, 3], [255, 254, 0, 128]], dtype=np.float64)
    out = simplex_interp_rounded(lut_t, torch.from_numpy(q))
    assert np.array_equal(out.numpy(), q[:, 0])
