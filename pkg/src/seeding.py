from __future__ import annotations

import zlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _as_entropy(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    if key < 0:
        raise ValueError(f"seed keys must be non-negative, got {key}")
    return int(key)


def derive_seed(*keys: Key) -> int:
    """Derive a 64-bit seed from a tuple of ints and tags.

    The same keys always give the same seed, on every platform and in every process.
    """
    seq = np.random.SeedSequence([_as_entropy(k) for k in keys])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
