"""Stable child-seed derivation for reproducible, order-free parallel runs."""
from __future__ import annotations

import hashlib
import random

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed, *parts):
    """Hash ``master_seed`` and a tuple of tags into a 64-bit child seed.

    Parts may be ints, floats or strings; floats are keyed by ``repr`` so that
    ``0.1`` and ``0.10000000000000002`` give different streams.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master_seed) & _MASK64).encode())
    for p in parts:
        h.update(b"\x1f")
        h.update(repr(p).encode())
    return int.from_bytes(h.digest(), "little")


def py_rng(seed):
    return random.Random(int(seed) & _MASK64)


def np_rng(seed):
    return np.random.default_rng(int(seed) & _MASK64)
