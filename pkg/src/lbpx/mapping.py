"""Code-to-label mapping tables: raw, uniform (u2), rotation-invariant (ri), riu2.

A pattern is uniform when its circular bit string has at most 2 transitions
between 0 and 1. Label spaces:

  raw   -- identity, 2^P labels
  u2    -- one label per uniform code (ascending code order) plus a single
           shared non-uniform bin, P*(P-1) + 3 labels
  ri    -- codes grouped by their minimal bit-rotation, compacted in
           ascending representative order
  riu2  -- uniform codes labeled by their count of 1-bits, all non-uniform
           codes share label P+1, for P + 2 labels
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MAPPING_MODES = ("raw", "u2", "ri", "riu2")
MIN_NEIGHBORS = 2
MAX_NEIGHBORS = 24


def _check_neighbors(neighbors: int) -> None:
    if not MIN_NEIGHBORS <= neighbors <= MAX_NEIGHBORS:
        raise ParameterError(
            f"neighbor count must be in [{MIN_NEIGHBORS}, {MAX_NEIGHBORS}], got {neighbors}"
        )


@dataclass(frozen=True, eq=False)
class MappingTable:
    """Lookup table from raw P-bit codes to compacted labels."""

    neighbors: int
    mode: str
    table: np.ndarray
    label_count: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.table, dtype=np.int32)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def apply(self, codes: np.ndarray) -> np.ndarray:
        return self.table[codes]


def _rotate_right(codes: np.ndarray, neighbors: int) -> np.ndarray:
    return (codes >> 1) | ((codes & 1) << (neighbors - 1))


def uniformity(code: int, neighbors: int) -> int:
    """Number of 0<->1 transitions in the circular P-bit string of `code`."""
    _check_neighbors(neighbors)
    if not 0 <= code < (1 << neighbors):
        raise ParameterError(f"code {code} out of range for {neighbors} bits")
    rotated = (code >> 1) | ((code & 1) << (neighbors - 1))
    return int(bin(code ^ rotated).count("1"))


@functools.lru_cache(maxsize=None)
def build_mapping(neighbors: int, mode: str) -> MappingTable:
    """Build the full 2^P lookup table for the requested mapping mode."""
    _check_neighbors(neighbors)
    if mode not in MAPPING_MODES:
        raise ParameterError(f"unknown mapping mode {mode!r}, expected one of {MAPPING_MODES}")

    size = 1 << neighbors
    codes = np.arange(size, dtype=np.uint32)

    if mode == "raw":
        return MappingTable(neighbors, mode, codes.astype(np.int32), size)

    transitions = np.bitwise_count(codes ^ _rotate_right(codes, neighbors))
    uniform = transitions <= 2

    if mode == "u2":
        # uniform codes labeled in ascending code order, the rest share one bin
        n_uniform = int(uniform.sum())
        table = np.full(size, n_uniform, dtype=np.int32)
        table[uniform] = np.arange(n_uniform, dtype=np.int32)
        return MappingTable(neighbors, mode, table, n_uniform + 1)

    if mode == "riu2":
        table = np.full(size, neighbors + 1, dtype=np.int32)
        table[uniform] = np.bitwise_count(codes[uniform]).astype(np.int32)
        return MappingTable(neighbors, mode, table, neighbors + 2)

    # ri: minimal value over all P bit-rotations, compacted ascending
    reps = codes.copy()
    rotated = codes
    for _ in range(neighbors - 1):
        rotated = _rotate_right(rotated, neighbors)
        np.minimum(reps, rotated, out=reps)
    uniq = np.unique(reps)
    table = np.searchsorted(uniq, reps).astype(np.int32)
    return MappingTable(neighbors, mode, table, len(uniq))


def label_count(mode: str, neighbors: int) -> int:
    """Size of the label space for a mapping mode and neighbor count."""
    _check_neighbors(neighbors)
    if mode == "raw":
        return 1 << neighbors
    if mode == "u2":
        return neighbors * (neighbors - 1) + 3
    if mode == "riu2":
        return neighbors + 2
    if mode == "ri":
        return build_mapping(neighbors, "ri").label_count
    raise ParameterError(f"unknown mapping mode {mode!r}, expected one of {MAPPING_MODES}")
