"""Splittable counter-based PRNG (SplitMix64).

All randomized operations in this package draw from this generator so that
results replicate bit-for-bit across platforms and implementations.  The
algorithm is the public SplitMix64 mixer: the state advances by the constant
0x9E3779B97F4A7C15 (the golden-ratio increment) and each output is finalized
with two xor-shift-multiply rounds.

Independent streams are derived, not shared: ``derive(key)`` folds an integer
key into the seed through the same finalizer, so per-vertex streams do not
depend on call order and are safe to use from parallel workers.
"""

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator with key-derived substreams."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection from the top 64-bit range."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = MASK64 - (MASK64 % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def derive(self, key: int) -> "SplitMix64":
        """Substream addressed by ``key``; independent of draw order."""
        return SplitMix64(_mix(self._state ^ _mix(key & MASK64)))
