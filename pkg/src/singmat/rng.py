"""Deterministic counter-based random number generation.

All randomness in the package flows through a SplitMix64-style generator
used in counter mode: the k-th output of a stream with seed ``s`` is

    value(s, k) = mix64((s + (k+1) * GAMMA) mod 2**64)

where ``mix64`` is the SplitMix64 finalizer (Steele, Lea & Flood's
constants).  Because each output is a pure function of (seed, counter),
streams can be evaluated out of order, in parallel, or in bulk with
numpy, and any implementation in any language that follows the formula
reproduces them bit for bit.

Child streams are derived with :func:`derive_seed`, which mixes the
parent seed with the child index under distinct constants so that child
streams do not trivially collide with the parent counter sequence.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# SplitMix64 increment and finalizer constants.
GAMMA = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB

# Distinct constants for child-seed derivation (from wyhash).
DERIVE_XOR = 0xA0761D6478BD642F
DERIVE_GAMMA = 0xE7037ED1A0B428DB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective mixing function."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_C2) & MASK64
    return z ^ (z >> 31)


def value_at(seed: int, counter: int) -> int:
    """The counter-th 64-bit output of the stream with the given seed."""
    return mix64((seed + (counter + 1) * GAMMA) & MASK64)


def derive_seed(seed: int, index: int) -> int:
    """Derive the seed of child stream ``index`` from a parent seed.

    Uses the same finalizer as the stream itself but a different
    increment and an xor salt, so child seeds land in an unrelated part
    of the state space.
    """
    return mix64(((seed ^ DERIVE_XOR) + (index + 1) * DERIVE_GAMMA) & MASK64)


def u64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized stream outputs [start, start+count) as uint64.

    Identical values to repeated :func:`value_at` calls; numpy uint64
    arithmetic wraps modulo 2**64 exactly as the scalar path does.
    """
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = (np.uint64(seed & MASK64) + k * np.uint64(GAMMA))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_C1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_C2)
    return z ^ (z >> np.uint64(31))


class Stream:
    """Sequential view of a counter-based stream.

    Thin stateful wrapper: keeps the next counter value and hands out
    consecutive outputs of ``value_at(seed, .)``.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        v = value_at(self.seed, self.counter)
        self.counter += 1
        return v

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; unbiased for any n >= 1."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        limit = MASK64 + 1 - ((MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def bit(self) -> int:
        """A fair coin: the top bit of the next output."""
        return self.next_u64() >> 63

    def bernoulli(self, threshold: int) -> bool:
        """True with probability threshold / 2**64 (threshold in [0, 2**64])."""
        if threshold > MASK64:
            return True
        return self.next_u64() < threshold


def bernoulli_threshold(num: int, den: int) -> int:
    """floor(p * 2**64) for p = num/den; realizes Bernoulli(p) from one u64.

    The event (u < threshold) has probability within 2**-64 of p, and is
    exact whenever p * 2**64 is an integer (in particular for p in
    {0, 1/2, 1}).
    """
    if not 0 <= num <= den or den <= 0:
        raise ValueError("need 0 <= num/den <= 1")
    return (num << 64) // den
