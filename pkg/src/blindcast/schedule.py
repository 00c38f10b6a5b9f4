"""Deterministic transmission schedules and their numeric helpers.

Two schedule families are implemented as pure functions of a seed:

* the wake-up schedule, a per-node infinite bit stream indexed by steps
  since the node's own wake (local clock only);
* the broadcast schedule, indexed by the absolute step number, whose
  transmit probability additionally decays within short phases whose
  lengths grow triple-logarithmically.

Both draw their Bernoulli decisions from the keyed PRF in :mod:`prf`, so a
candidate schedule is just a 256-bit key.  All operations are stateless and
safe to evaluate concurrently.

Float-dependent bits are always computed by one vectorised code path (the
scalar entry points delegate to it with a length-1 block), so a bit's value
never depends on which caller asked for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .prf import (
    GOLDEN,
    KEY_BYTES,
    STREAM_SYNC,
    STREAM_TS_BASE,
    STREAM_TS_PHASE,
    mix64_np,
    subkey_array,
    uniform64,
)

WAKEUP = "wakeup"
BROADCAST = "broadcast"

DEFAULT_C = 9
DEFAULT_D = 34

_U64_SCALE = 2.0**-64


@dataclass(frozen=True)
class ScheduleSeed:
    """Master key plus the two schedule constants.

    Equal fields produce bit-identical schedules; there is no hidden state.
    """

    master_key: bytes
    c: int = DEFAULT_C
    d: int = DEFAULT_D

    def __post_init__(self):
        if len(self.master_key) != KEY_BYTES:
            raise ValidationError(f"master key must be {KEY_BYTES} bytes")
        if self.c < 1 or self.d < 1:
            raise ValidationError("schedule constants must be positive")

    @classmethod
    def from_hex(cls, hex_key: str, c: int = DEFAULT_C, d: int = DEFAULT_D) -> "ScheduleSeed":
        try:
            key = bytes.fromhex(hex_key)
        except ValueError as exc:
            raise ValidationError(f"bad seed hex: {exc}") from exc
        return cls(key, c=c, d=d)

    @property
    def hex(self) -> str:
        return self.master_key.hex()

    def with_key(self, key: bytes) -> "ScheduleSeed":
        return ScheduleSeed(key, c=self.c, d=self.d)


def lambda_weight(v: int) -> float:
    """Log-weight of a node id: log2(v + 1).

    The +1 shift keeps the weight strictly positive for id 1, so every
    valid id has a nonzero transmit probability.
    """
    if v < 1:
        raise ValidationError("node ids start at 1")
    return math.log2(v + 1)


def safe_log(k: int) -> float:
    """log2 clamped to stay >= 1: log2(max(k, 2))."""
    if k < 1:
        raise ValidationError("k must be positive")
    return math.log2(max(k, 2))


def safe_loglog(x: int) -> float:
    """Iterated log on a time offset, shifted to stay defined and >= 1.

    safe_loglog(x) = log2(log2(x + 4)); the shift makes the value exactly
    1 at x = 0.
    """
    if x < 0:
        raise ValidationError("offset must be nonnegative")
    return math.log2(math.log2(x + 4))


def _param_loglog(k: int) -> float:
    # loglog on the node-count parameter, floored at 1 so budgets stay
    # positive; distinct from safe_loglog, which shifts its argument.
    return max(1.0, math.log2(math.log2(max(k, 2))))


def z_phase(j: int) -> int:
    """Phase length at offset j: 2^ceil(1 + log2 log2 log2 j), min 2.

    Computed with exact integer thresholds (the value changes where j
    crosses 2^(2^(2^(m-1)))), so boundary indices never suffer float
    rounding.  For all i, z_phase(i) divides z_phase(i + 1).
    """
    if j < 0:
        raise ValidationError("offset must be nonnegative")
    if j <= 4:
        return 2
    m = 1
    while j > 2 ** (2 ** (2 ** (m - 1))):
        m += 1
    return 2**m


def z_phase_np(x: np.ndarray) -> np.ndarray:
    """Vectorised z_phase for offsets below 2^63, as uint64."""
    return np.select(
        [x <= 4, x <= 16, x <= 65536], [2, 4, 8], default=16
    ).astype(np.uint64)


def _offsets(wakes, j0: int, n: int):
    """Stream offsets x = j - wake for a block, clamped at 0 pre-wake.

    Returns (xs, pre) where xs is uint64 and pre is the awake mask, or None
    when every node is awake for the whole block.  A single shared row is
    returned when all wakes agree; broadcasting keeps per-element values
    identical to the per-node form.
    """
    wak = np.asarray(wakes, dtype=np.int64)
    if int(wak.min()) == int(wak.max()):
        lo = j0 - int(wak[0])
        if lo >= 0:
            return np.arange(lo, lo + n, dtype=np.uint64)[None, :], None
        x = np.arange(lo, lo + n, dtype=np.int64)[None, :]
        pre = x >= 0
        return np.where(pre, x, 0).astype(np.uint64), pre
    x = np.arange(j0, j0 + n, dtype=np.int64)[None, :] - wak[:, None]
    if j0 >= int(wak.max()):
        return x.astype(np.uint64), None
    pre = x >= 0
    return np.where(pre, x, 0).astype(np.uint64), pre


@dataclass(frozen=True)
class DelayBudget:
    """Step budget within which a schedule is expected to hit an instance."""

    mode: str
    r: int
    k: int
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValidationError("budget must be positive")


def delay_budget(seed: ScheduleSeed, mode: str, r: int, k: int) -> DelayBudget:
    """Delay budget: ceil(c^2 r log k / loglog k) for wake-up,
    ceil(d^2 r loglog k) for broadcast, with logs clamped to >= 1."""
    if r < 1 or k < 1:
        raise ValidationError("r and k must be positive")
    if mode == WAKEUP:
        value = math.ceil(seed.c * seed.c * r * safe_log(k) / _param_loglog(k))
    elif mode == BROADCAST:
        value = math.ceil(seed.d * seed.d * r * _param_loglog(k))
    else:
        raise ValidationError(f"unknown budget mode {mode!r}")
    return DelayBudget(mode=mode, r=r, k=k, value=value)


def prf_uniform(seed: ScheduleSeed, stream_tag: int, v: int, j: int) -> int:
    """Uniform 64-bit word of the seed's stream at (tag, v, j)."""
    return uniform64(seed.master_key, stream_tag, v, j)


def sync_probability(seed: ScheduleSeed, v: int, rel_j: int) -> float:
    """Transmit probability of the wake-up schedule at local step rel_j."""
    if rel_j < 0:
        raise ValidationError("rel_j must be nonnegative")
    a = seed.c * lambda_weight(v)
    return a / (rel_j + 2.0 * a)


def ts_probability(seed: ScheduleSeed, v: int, wake: int, global_j: int) -> float:
    """Transmit probability of the broadcast schedule at absolute step global_j."""
    if global_j < wake:
        return 0.0
    x = global_j - wake
    b = seed.d * lambda_weight(v) * safe_loglog(x)
    return b / (x + 2.0 * b) * 2.0 ** -(global_j % z_phase(x))


class SyncSchedule:
    """Wake-up schedule: bit streams indexed by steps since a node's wake."""

    mode = WAKEUP
    uses_local_clock = True

    def __init__(self, seed: ScheduleSeed):
        self.seed = seed
        self._lam = {}

    def _columns(self, ids):
        key = tuple(ids)
        cached = self._lam.get(key)
        if cached is None:
            lam = np.array([[lambda_weight(v)] for v in ids], dtype=np.float64)
            sk = subkey_array(self.seed.master_key, STREAM_SYNC, ids)
            cached = (self.seed.c * lam, sk)
            self._lam[key] = cached
        return cached

    def bits_block(self, ids, wakes, j0: int, n: int) -> np.ndarray:
        """Transmit bits for the given nodes over global steps j0..j0+n-1.

        ``wakes`` are the nodes' current wake steps; a node's stream index
        is its local step j - wake, and bits before the wake are 0.
        """
        a, sk = self._columns(ids)
        xs, pre = _offsets(wakes, j0, n)
        u = mix64_np(sk + (xs + np.uint64(1)) * np.uint64(GOLDEN), copy=False)
        thr = a / (xs.astype(np.float64) + 2.0 * a)
        bits = u.astype(np.float64) * _U64_SCALE < thr
        return bits if pre is None else bits & pre


class BroadcastSchedule:
    """Broadcast schedule: absolute-step bit streams with phase decay."""

    mode = BROADCAST
    uses_local_clock = False

    def __init__(self, seed: ScheduleSeed):
        self.seed = seed
        self._cols = {}

    def _columns(self, ids):
        key = tuple(ids)
        cached = self._cols.get(key)
        if cached is None:
            lam = np.array([[lambda_weight(v)] for v in ids], dtype=np.float64)
            sk_s = subkey_array(self.seed.master_key, STREAM_TS_BASE, ids)
            sk_p = subkey_array(self.seed.master_key, STREAM_TS_PHASE, ids)
            cached = (self.seed.d * lam, sk_s, sk_p)
            self._cols[key] = cached
        return cached

    def bits_block(self, ids, wakes, j0: int, n: int) -> np.ndarray:
        dl, sk_s, sk_p = self._columns(ids)
        xs, pre = _offsets(wakes, j0, n)
        counter = (xs + np.uint64(1)) * np.uint64(GOLDEN)
        u_s = mix64_np(sk_s + counter, copy=False)
        xf = xs.astype(np.float64)
        b = dl * np.log2(np.log2(xf + 4.0))
        thr = b / (xf + 2.0 * b)
        base = u_s.astype(np.float64) * _U64_SCALE < thr
        # Phase test: keep the draw iff p <= 2^-(j mod z(x)), compared as
        # 64-bit fixed point so the power-of-two cut is bit-exact.
        u_p = mix64_np(sk_p + counter, copy=False)
        z = z_phase_np(xs)
        j = np.arange(j0, j0 + n, dtype=np.uint64)[None, :]
        m = j % z
        shift = (np.uint64(64) - m) & np.uint64(63)
        lim = np.uint64(1) << shift
        phase_ok = (m == np.uint64(0)) | (u_p <= lim)
        base &= phase_ok
        return base if pre is None else base & pre


def sync_bit(seed: ScheduleSeed, v: int, rel_j: int) -> int:
    """Wake-up schedule bit for node v at local step rel_j (0 or 1)."""
    if rel_j < 0:
        raise ValidationError("rel_j must be nonnegative")
    block = SyncSchedule(seed).bits_block([v], [0], rel_j, 1)
    return int(block[0, 0])


def ts_bit(seed: ScheduleSeed, v: int, wake: int, global_j: int) -> int:
    """Broadcast schedule bit for node v woken at ``wake``, at absolute step
    global_j.  Always 0 before the node's wake."""
    if global_j < 0:
        raise ValidationError("global_j must be nonnegative")
    if global_j < wake:
        return 0
    block = BroadcastSchedule(seed).bits_block([v], [wake], global_j, 1)
    return int(block[0, 0])


def make_schedule(seed: ScheduleSeed, mode: str):
    """Schedule object for a mode name; baseline modes live in baselines."""
    if mode == WAKEUP:
        return SyncSchedule(seed)
    if mode == BROADCAST:
        return BroadcastSchedule(seed)
    if mode in ("prime", "always"):
        from . import baselines

        return baselines.PrimeSchedule() if mode == "prime" else baselines.AlwaysSchedule()
    raise ValidationError(f"unknown mode {mode!r}")


def budget_mode(mode: str) -> str:
    """Budget family used for a simulation mode (baselines compare against
    the wake-up budget)."""
    return BROADCAST if mode == BROADCAST else WAKEUP
