"""Deterministic random stream derivation.

Every random consumer in this package (oracles, instance samplers,
algorithm-internal randomness) gets its own generator derived from a
master seed plus a tuple of tags. Streams with distinct tags are
statistically independent and do not depend on the order in which they
are created, so trials can run on any number of workers and still
reproduce bit-for-bit.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _entropy_words(part: int | str) -> list[int]:
    """Map a tag to 32-bit words suitable for SeedSequence entropy.

    Strings are hashed with sha256 so the mapping is stable across
    processes and platforms (the builtin ``hash`` is salted per process).
    """
    if isinstance(part, str):
        digest = hashlib.sha256(part.encode("utf-8")).digest()
        return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    if isinstance(part, (int, np.integer)):
        value = int(part)
        if value < 0:
            # fold negatives away from the non-negative ints
            value = (-value << 1) | 1
        words = []
        while True:
            words.append(value & 0xFFFFFFFF)
            value >>= 32
            if not value:
                return words
    raise TypeError(f"stream tag must be int or str, got {type(part).__name__}")


def seed_sequence(*parts: int | str) -> np.random.SeedSequence:
    """Build a SeedSequence from a master seed and tags.

    ``seed_sequence(seed, "oracle", trial)`` and
    ``seed_sequence(seed, "instance", trial)`` are independent streams;
    recreating either with the same arguments yields the same stream.
    """
    if not parts:
        raise ValueError("at least one entropy part is required")
    entropy: list[int] = []
    for part in parts:
        entropy.extend(_entropy_words(part))
    return np.random.SeedSequence(entropy)


def derive_rng(*parts: int | str) -> np.random.Generator:
    """Generator for the stream named by ``parts``."""
    return np.random.default_rng(seed_sequence(*parts))


def as_generator(
    rng: np.random.Generator | np.random.SeedSequence | int,
) -> np.random.Generator:
    """Coerce a seed, SeedSequence or Generator into a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer, np.random.SeedSequence)):
        return np.random.default_rng(rng)
    raise TypeError(f"expected Generator, SeedSequence or int, got {type(rng).__name__}")
