import numpy as np
import pytest

from lutfilter.core import LutSet, preset
from lutfilter.transfer import cache_clipped_lut, identity_oracle


def build_lut_set(oracle, preset_name="V", qp=0):
    pre = preset(preset_name)
    luts = {}
    cache = {}
    for si, stage in enumerate(pre.stages, start=1):
        for pattern in stage.patterns:
            # Same oracle per pattern: cache one table and retag it.
            if oracle not in cache:
                cache[oracle] = cache_clipped_lut(oracle).values
            from lutfilter.core import ClippedLut

            luts[(si, pattern.id)] = ClippedLut(
                values=cache[oracle], pattern_id=pattern.id, stage_index=si, qp=qp
            )
    return pre, LutSet(preset=pre, qp=qp, luts=luts)


def random_lut_set(preset_name, rng, qp=0):
    from lutfilter.core import ClippedLut

    pre = preset(preset_name)
    luts = {}
    for si, stage in enumerate(pre.stages, start=1):
        for pattern in stage.patterns:
            values = rng.integers(0, 256, (17,) * 4, dtype=np.uint8)
            luts[(si, pattern.id)] = ClippedLut(
                values=values, pattern_id=pattern.id, stage_index=si, qp=qp
            )
    return pre, LutSet(preset=pre, qp=qp, luts=luts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def identity_v_set():
    return build_lut_set(identity_oracle, "V")
