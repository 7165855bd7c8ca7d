"""Deterministic stream seeding.

Every stochastic trajectory draws its randomness from a counter-based
generator: a 64-bit stream seed (derived by hashing a master seed with
arbitrary tags such as code id, temperature index, trial index) is mixed
with a per-(sweep, site) counter through the splitmix64 finalizer.  The
same (seed, tags, sweep, site) tuple always yields the same uniform
variate, on every kernel and on every platform.
"""

from __future__ import annotations

import hashlib

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def derive_stream(master_seed: int, *tags) -> int:
    """Derive a 64-bit stream seed from a master seed and arbitrary tags."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master_seed)).encode())
    for t in tags:
        h.update(b"|")
        h.update(repr(t).encode())
    return int.from_bytes(h.digest(), "little")


def mix64(x: int) -> int:
    """splitmix64 finalizer."""
    x &= _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    x ^= x >> 31
    return x


def uniform_at(stream_seed: int, counter: int) -> float:
    """Uniform variate in [0, 1) for a given stream seed and counter."""
    x = (stream_seed + ((counter + 1) * _GOLDEN)) & _MASK
    return (mix64(x) >> 11) * (1.0 / 9007199254740992.0)
