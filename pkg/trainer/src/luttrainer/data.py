"""Offline image corpus from scikit-image's bundled photographs."""

from __future__ import annotations

import numpy as np
from skimage import data as skdata
from skimage.color import rgb2gray

TRAIN_NAMES = ("astronaut", "chelsea", "coffee", "brick")
HELDOUT_NAMES = ("camera", "coins", "moon", "page", "clock")


def load_gray(name):
    img = getattr(skdata, name)()
    if img.ndim == 3:
        img = rgb2gray(img) * 255.0
    img = np.asarray(img, dtype=np.float64)
    if img.max() <= 1.0:
        img = img * 255.0
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def training_planes():
    return {name: load_gray(name) for name in TRAIN_NAMES}


def heldout_planes():
    return {name: load_gray(name) for name in HELDOUT_NAMES}
