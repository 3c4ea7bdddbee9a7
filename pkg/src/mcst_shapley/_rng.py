"""Counter-based permutation stream (pure-Python reference).

Sample ``k`` of a run seeded with ``seed`` has its own key
``mix64(seed ^ mix64((k + 1) * GAMMA))``; the t-th 64-bit draw of that sample
is ``mix64(key + (t + 1) * GAMMA)`` (SplitMix64 finaliser).  A permutation of
``1..n`` is produced by Fisher-Yates, swapping position ``p`` (from ``n-1``
down to 1) with ``floor(draw * (p + 1) / 2**64)``.  Because every sample is a
pure function of ``(seed, k)``, any partition of the sample range across
workers gives the same result.  The compiled kernel implements the same
stream; this module exists to test it.
"""

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def sample_key(seed: int, index: int) -> int:
    return mix64((seed & MASK) ^ mix64((index + 1) * GAMMA))


def permutation(seed: int, index: int, n: int) -> list[int]:
    key = sample_key(seed, index)
    perm = list(range(1, n + 1))
    for t, pos in enumerate(range(n - 1, 0, -1)):
        x = mix64(key + (t + 1) * GAMMA)
        j = (x * (pos + 1)) >> 64
        perm[pos], perm[j] = perm[j], perm[pos]
    return perm
