"""Shared helpers: synthetic texture images and on-disk corpora."""

import numpy as np
import pytest

from lbpx import GrayImage, save_pgm_file

TEXTURE_KINDS = ("checker", "flat", "hstripes", "vstripes")


def texture_image(kind, size, rng, lo=80, hi=160, noise=20):
    """Two-level synthetic texture with uniform additive noise, clipped to 8 bits."""
    y, x = np.mgrid[0:size, 0:size]
    if kind == "flat":
        base = np.full((size, size), (lo + hi) // 2)
    elif kind == "vstripes":
        base = np.where(x % 2 == 0, lo, hi)
    elif kind == "hstripes":
        base = np.where(y % 2 == 0, lo, hi)
    elif kind == "checker":
        base = np.where((x + y) % 2 == 0, lo, hi)
    else:
        raise ValueError(f"unknown texture kind {kind!r}")
    jitter = rng.integers(-noise, noise + 1, size=(size, size))
    return GrayImage(np.clip(base + jitter, 0, 255).astype(np.uint8))


def random_image(rng, width, height, low=0, high=256):
    return GrayImage(rng.integers(low, high, size=(height, width), dtype=np.int64))


def write_texture_corpus(root, rng, per_class_train=4, per_class_test=4, size=32):
    """Write PGM files plus a manifest CSV under `root`; returns the manifest path."""
    rows = ["path,label,split"]
    for kind in TEXTURE_KINDS:
        for split, count in (("train", per_class_train), ("test", per_class_test)):
            for i in range(count):
                name = f"{kind}_{split}_{i}.pgm"
                save_pgm_file(texture_image(kind, size, rng), root / name)
                rows.append(f"{name},{kind},{split}")
    manifest_path = root / "manifest.csv"
    manifest_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return manifest_path


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
