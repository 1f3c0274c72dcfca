"""Deterministic seed derivation.

Every stochastic operation takes an explicit integer seed. Nested stages
derive child seeds by mixing the parent seed with a sequence of tags
(ints or short strings), so any single cell of a large run can be
reproduced in isolation from (master seed, tags) alone.
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & _MASK64
    if isinstance(tag, str):
        digest = hashlib.sha256(tag.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    raise TypeError(f"seed tag must be int or str, got {type(tag).__name__}")


def derive_seed(seed: int, *tags) -> int:
    """Mix ``seed`` with ``tags`` into a new 64-bit seed (stable across runs)."""
    h = hashlib.sha256()
    h.update(int(seed & _MASK64).to_bytes(8, "little"))
    for tag in tags:
        h.update(_tag_to_int(tag).to_bytes(8, "little"))
    return int.from_bytes(h.digest()[:8], "little")


def make_rng(seed: int, *tags) -> np.random.Generator:
    """PCG64 generator for ``derive_seed(seed, *tags)``."""
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *tags)))
