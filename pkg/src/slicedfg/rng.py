"""Deterministic, language-portable pseudorandom generator.

All stochastic pieces of the package (diagram sampling, orbit seeding, random
quadrature nodes) draw from this generator so that a given seed produces
bit-identical streams on every platform.  The algorithm is fully specified
here rather than delegated to a library RNG whose stream may change between
versions:

* state seeding: splitmix64 applied four times to the user seed,
* stream: xoshiro256** (Blackman/Vigna public-domain construction),
* doubles: the top 53 bits of each 64-bit word, i.e. ``u >> 11`` times 2^-53.
"""
from __future__ import annotations

import math

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** stream seeded from a single 64-bit integer via splitmix64."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state, word = _splitmix64(state)
            s.append(word)
        # An all-zero state is a fixed point of the recurrence.
        if not any(s):
            s[0] = 0x9E3779B97F4A7C15
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), bias-free via rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            u = self.next_u64()
            if u >= threshold:
                return u % n

    def gauss(self) -> float:
        """Standard normal via Box-Muller (two fresh uniforms per call)."""
        u1 = 1.0 - self.random()  # (0, 1]; keeps log() finite
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
