"""Reference schedules the seeded constructions are compared against.

The prime baseline has node v transmit every p_v steps after waking, where
p_v is the v-th prime; it needs no seed and no parameter knowledge, at the
cost of much longer hit times.  The always-transmit baseline exists purely
as a collision sanity check: two or more simultaneous nodes can never hit.

Both plug into the channel and network simulators through the same
bits_block interface as the seeded schedules.
"""

from __future__ import annotations

import threading

import numpy as np

from .errors import SizeLimitError, ValidationError

PRIME_INDEX_CAP = 10_000_000

_lock = threading.Lock()
_primes: list[int] = [2, 3, 5, 7, 11, 13]


def _grow_table(count: int) -> None:
    import math

    # Sieve bound from the nth-prime upper estimate n(ln n + ln ln n).
    n = max(count, 6)
    bound = int(n * (math.log(n) + math.log(math.log(n)))) + 10
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray((bound - p * p) // p + 1)
    found = [i for i in range(bound + 1) if sieve[i]]
    global _primes
    if len(found) > len(_primes):
        _primes = found


def nth_prime(i: int) -> int:
    """Exact i-th prime (1-based) from a cached sieve that grows on demand."""
    if i < 1:
        raise ValidationError("prime index starts at 1")
    if i > PRIME_INDEX_CAP:
        raise SizeLimitError(f"prime index {i} exceeds cap {PRIME_INDEX_CAP}")
    if i > len(_primes):
        with _lock:
            if i > len(_primes):
                _grow_table(i)
    return _primes[i - 1]


def prime_bit(v: int, rel_j: int) -> int:
    """1 iff the node has waited a whole number of p_v-step periods.

    The first transmission comes p_v steps after waking (rel_j = p_v), not
    at the wake step itself.
    """
    if rel_j < 0:
        raise ValidationError("rel_j must be nonnegative")
    return 1 if rel_j > 0 and rel_j % nth_prime(v) == 0 else 0


class PrimeSchedule:
    """Periodic prime-interval schedule on each node's local clock."""

    mode = "prime"
    uses_local_clock = True

    def __init__(self):
        self._periods = {}

    def bits_block(self, ids, wakes, j0: int, n: int) -> np.ndarray:
        periods = self._periods.get(tuple(ids))
        if periods is None:
            periods = np.array([[nth_prime(v)] for v in ids], dtype=np.int64)
            self._periods[tuple(ids)] = periods
        j = np.arange(j0, j0 + n, dtype=np.int64)[None, :]
        x = j - np.asarray(wakes, dtype=np.int64)[:, None]
        return (x > 0) & (x % periods == 0)


class AlwaysSchedule:
    """Transmit at every step once awake; collides forever for k >= 2."""

    mode = "always"
    uses_local_clock = True

    def bits_block(self, ids, wakes, j0: int, n: int) -> np.ndarray:
        j = np.arange(j0, j0 + n, dtype=np.int64)[None, :]
        return j >= np.asarray(wakes, dtype=np.int64)[:, None]


class SilentSchedule:
    """Never transmits; used to exercise the no-hit paths in tests."""

    mode = "silent"
    uses_local_clock = True

    def bits_block(self, ids, wakes, j0: int, n: int) -> np.ndarray:
        return np.zeros((len(ids), n), dtype=bool)
