import numpy as np
import pytest

from luttrainer.formats import (
    dump_filename,
    lattice_sample,
    quantize_weights,
    read_pgm,
    write_dump,
    write_pgm,
    write_weights_config,
)

# The filter engine is the authority on these formats; its readers verify
# that the trainer's writers produce conforming files.
from lutfilter.lutio import load_dump, parse_config, read_pgm as engine_read_pgm


def test_lattice_samples_match_engine_grid():
    samples = [lattice_sample(b) for b in range(17)]
    assert samples == [0, 16, 32, 48, 64, 80, 96, 112, 128, 144, 160, 176, 192, 208, 224, 240, 255]
    with pytest.raises(ValueError):
        lattice_sample(17)


def test_dump_readable_by_engine(tmp_path):
    rng = np.random.default_rng(1)
    values = rng.integers(0, 256, 83521, dtype=np.uint8)
    path = tmp_path / dump_filename(1, 3)
    assert path.name == "stage1_pattern3.dump"
    write_dump(path, values, 1, 3, qp=22)
    loaded, si, pid, qp = load_dump(path)
    assert (si, pid, qp) == (1, 3, 22)
    assert np.array_equal(loaded, values)


def test_dump_size_check(tmp_path):
    with pytest.raises(ValueError):
        write_dump(tmp_path / "x.dump", np.zeros(10, dtype=np.uint8), 1, 1)


def test_pgm_readable_by_engine_and_back(tmp_path):
    rng = np.random.default_rng(2)
    plane = rng.integers(0, 256, (9, 13), dtype=np.uint8)
    path = tmp_path / "p.pgm"
    write_pgm(path, plane)
    assert np.array_equal(engine_read_pgm(path), plane)
    assert np.array_equal(read_pgm(path), plane)


def test_quantize_weights_sum_and_stability():
    w = quantize_weights([0.5, 0.3, 0.2])
    assert sum(w) == 256
    assert w[0] > w[1] > w[2]
    # already-integer distribution is preserved
    assert quantize_weights([128, 64, 64]) == (128, 64, 64)
    with pytest.raises(ValueError):
        quantize_weights([0.0, 0.0])


def test_weights_config_parseable_by_engine(tmp_path):
    path = tmp_path / "weights.cfg"
    write_weights_config(path, {1: (128, 64, 64), 2: (200, 28, 28)})
    cfg = parse_config(path.read_text())
    assert cfg["weights"][1] == (128, 64, 64)
    assert cfg["weights"][2] == (200, 28, 28)
