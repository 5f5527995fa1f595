"""Deterministic 64-bit RNG used for synthetic sequences and ambiguity fills.

xorshift64* (Vigna 2016): a 64-bit xorshift state scrambled by a single
multiplication on output.  Chosen over numpy's generators so that a given
seed produces byte-identical sequences on every platform and numpy version.
The seed is passed through one splitmix64 round so that seed 0 (a fixed
point of the raw xorshift map) is usable.
"""

MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class XorShift64Star:
    """Deterministic stream of 64-bit words, doubles in [0, 1), and bounded ints."""

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        state = _splitmix64(seed)
        self._state = state if state != 0 else 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def next_double(self) -> float:
        # 53 high bits -> uniform double in [0, 1)
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) for small n; derived from next_double."""
        return min(n - 1, int(self.next_double() * n))
