"""Single-hop (shared channel) simulation with exact collision semantics.

A step's transmission succeeds iff exactly one awake node transmits.  The
simulator evaluates every awake node's schedule bit at every step, in
chunks, so outcomes are exact rather than sampled; the first success is the
hit.  In wake-up mode a success also wakes every still-dormant node on the
next step, since all listeners on the channel hear it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .instances import Instance
from .prf import (
    GOLDEN,
    STREAM_SYNC,
    STREAM_TS_BASE,
    STREAM_TS_PHASE,
    mix64_np,
    subkey,
)
from .schedule import (
    BROADCAST,
    WAKEUP,
    DelayBudget,
    ScheduleSeed,
    budget_mode,
    delay_budget,
    make_schedule,
    sync_probability,
    ts_probability,
)

SILENCE = "silence"
COLLISION = "collision"
SUCCESS = "success"


@dataclass(frozen=True)
class StepOutcome:
    kind: str
    count: int = 0
    node: int | None = None

    def __post_init__(self):
        if self.kind == SUCCESS and (self.node is None or self.count != 1):
            raise ValidationError("success carries exactly one transmitter")
        if self.kind == COLLISION and self.count < 2:
            raise ValidationError("collision needs at least two transmitters")
        if self.kind == SILENCE and self.count != 0:
            raise ValidationError("silence has no transmitters")


def silence() -> StepOutcome:
    return StepOutcome(SILENCE)


def collision(count: int) -> StepOutcome:
    return StepOutcome(COLLISION, count=count)


def success(node: int) -> StepOutcome:
    return StepOutcome(SUCCESS, count=1, node=node)


@dataclass(frozen=True)
class HitResult:
    hit_step: int | None
    transcript: tuple | None
    horizon: int
    budget: DelayBudget


@dataclass(frozen=True)
class LoadProfile:
    mode: str
    f: tuple
    band: tuple
    good_steps: tuple


@dataclass(frozen=True)
class EmpiricalLoad:
    mean: float
    std_err: float
    n_keys: int


def _chunk_cap(k: int) -> int:
    return max(256, min(8192, (1 << 22) // max(k, 1)))


def default_horizon(inst: Instance, budget: DelayBudget) -> int:
    return inst.min_wake + 2 * budget.value


def simulate_mac(
    inst: Instance,
    seed: ScheduleSeed,
    mode: str = WAKEUP,
    horizon: int | None = None,
    keep_transcript: bool = False,
    schedule=None,
) -> HitResult:
    """Run one instance on the shared channel for ``horizon`` steps.

    Returns the first success step (None when there is none within the
    horizon, which is a valid outcome) and, optionally, the full per-step
    transcript.  ``schedule`` overrides the mode-derived schedule; it only
    needs a ``bits_block`` method and an ``uses_local_clock`` flag.
    """
    budget = delay_budget(seed, budget_mode(mode), inst.r, inst.k)
    if horizon is None:
        horizon = default_horizon(inst, budget)
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    sched = schedule if schedule is not None else make_schedule(seed, mode)
    reception = getattr(sched, "uses_local_clock", mode != BROADCAST)

    ids = list(inst.ids)
    ids_arr = np.array(ids, dtype=np.int64)[:, None]
    wakes = np.array(inst.wakes, dtype=np.int64)
    outcomes: list[StepOutcome] | None = [] if keep_transcript else None
    hit = None
    pos = 0
    chunk = 64
    cap = _chunk_cap(len(ids))
    while pos < horizon:
        n = min(chunk, horizon - pos)
        bits = sched.bits_block(ids, wakes, pos, n)
        counts = bits.sum(axis=0, dtype=np.int64)
        if hit is None:
            ones = np.nonzero(counts == 1)[0]
            if ones.size:
                hit = pos + int(ones[0])
                if outcomes is None:
                    break
                if reception and bool((wakes > hit).any()):
                    # Every dormant node hears the success and joins at the
                    # next step, which changes its stream from there on, so
                    # re-evaluate the remainder of the chunk.
                    upto = hit - pos + 1
                    _extend(outcomes, counts[:upto], bits[:, :upto], ids_arr)
                    wakes = np.minimum(wakes, hit + 1)
                    pos += upto
                    chunk = min(chunk * 4, cap)
                    continue
        if outcomes is not None:
            _extend(outcomes, counts, bits, ids_arr)
        pos += n
        chunk = min(chunk * 4, cap)
    return HitResult(
        hit_step=hit,
        transcript=tuple(outcomes) if outcomes is not None else None,
        horizon=horizon,
        budget=budget,
    )


def _extend(outcomes, counts, bits, ids_arr):
    if counts.size == 0:
        return
    winners = (bits * ids_arr).sum(axis=0, dtype=np.int64)
    for i in range(counts.size):
        c = int(counts[i])
        if c == 0:
            outcomes.append(silence())
        elif c == 1:
            outcomes.append(success(int(winners[i])))
        else:
            outcomes.append(collision(c))


def mac_window(
    inst: Instance,
    seed: ScheduleSeed,
    mode: str,
    lo: int,
    hi: int,
    schedule=None,
):
    """Per-step transmitter counts and id-sums over global steps [lo, hi).

    The pair (count, id-sum) determines the channel outcome of a step, and
    when the count is 1 the id-sum is the transmitter.  Wake times are taken
    as given (no wake-by-reception), which makes this the raw joint
    transcript of the schedule on the instance.
    """
    if hi < lo:
        raise ValidationError("empty window bounds")
    sched = schedule if schedule is not None else make_schedule(seed, mode)
    ids = list(inst.ids)
    ids_arr = np.array(ids, dtype=np.int64)[:, None]
    wakes = np.array(inst.wakes, dtype=np.int64)
    n = hi - lo
    counts = np.empty(n, dtype=np.int64)
    idsum = np.empty(n, dtype=np.int64)
    pos = 0
    cap = _chunk_cap(len(ids))
    while pos < n:
        m = min(cap, n - pos)
        bits = sched.bits_block(ids, wakes, lo + pos, m)
        counts[pos : pos + m] = bits.sum(axis=0, dtype=np.int64)
        idsum[pos : pos + m] = (bits * ids_arr).sum(axis=0, dtype=np.int64)
        pos += m
    return counts, idsum


def step_probabilities(inst: Instance, seed: ScheduleSeed, mode: str, j: int):
    """Analytic transmit probability of each awake node at step j."""
    if mode == WAKEUP:
        return [
            sync_probability(seed, v, j - w) for v, w in inst.nodes if w <= j
        ]
    if mode == BROADCAST:
        return [ts_probability(seed, v, w, j) for v, w in inst.nodes if w <= j]
    raise ValidationError(f"unknown mode {mode!r}")


def step_load(inst: Instance, seed: ScheduleSeed, mode: str, j: int) -> float:
    """Expected transmitter count at step j."""
    return float(sum(step_probabilities(inst, seed, mode, j)))


def step_load_variance(inst: Instance, seed: ScheduleSeed, mode: str, j: int) -> float:
    """Variance of the transmitter count at step j (independent Bernoullis)."""
    return float(sum(p * (1.0 - p) for p in step_probabilities(inst, seed, mode, j)))


def load_band(inst: Instance, seed: ScheduleSeed, mode: str) -> tuple:
    """Target band for per-step load on curtailed instances."""
    from .schedule import _param_loglog, safe_log

    if mode == WAKEUP:
        k = inst.k
        return (
            _param_loglog(k) / (2.0 * seed.c * safe_log(k)),
            _param_loglog(k) / 3.0,
        )
    if mode == BROADCAST:
        return (1.0 / (2.0 * seed.d), 1.0)
    raise ValidationError(f"unknown mode {mode!r}")


def load_profile(
    inst: Instance, seed: ScheduleSeed, mode: str, horizon: int
) -> LoadProfile:
    """Analytic per-step loads over steps 0..horizon-1, with the steps whose
    load falls inside the mode's band."""
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    f = [step_load(inst, seed, mode, j) for j in range(horizon)]
    lo, hi = load_band(inst, seed, mode)
    good = tuple(j for j, val in enumerate(f) if lo <= val <= hi)
    return LoadProfile(mode=mode, f=tuple(f), band=(lo, hi), good_steps=good)


def empirical_load(
    inst: Instance,
    seed: ScheduleSeed,
    mode: str,
    j: int,
    n_keys: int,
) -> EmpiricalLoad:
    """Mean transmitter count at step j over n_keys derived master keys.

    Deterministic given the seed; keys are children of the seed's master
    key, independent of how many are requested before this call.
    """
    from .prf import derive_key

    if n_keys < 100:
        raise ValidationError("need at least 100 keys for a stable estimate")
    keys = [derive_key(seed.master_key, b"load", i) for i in range(n_keys)]
    counts = np.zeros(n_keys, dtype=np.int64)
    for v, w in inst.nodes:
        if w > j:
            continue
        x = j - w
        ctr = np.uint64(((x + 1) * GOLDEN) & ((1 << 64) - 1))
        if mode == WAKEUP:
            sks = np.array(
                [subkey(kb, STREAM_SYNC, v) for kb in keys], dtype=np.uint64
            )
            u = mix64_np(sks + ctr)
            thr = sync_probability(seed, v, x)
            counts += (u.astype(np.float64) * 2.0**-64 < thr).astype(np.int64)
        elif mode == BROADCAST:
            sks = np.array(
                [subkey(kb, STREAM_TS_BASE, v) for kb in keys], dtype=np.uint64
            )
            skp = np.array(
                [subkey(kb, STREAM_TS_PHASE, v) for kb in keys], dtype=np.uint64
            )
            u_s = mix64_np(sks + ctr)
            u_p = mix64_np(skp + ctr)
            lam = math.log2(v + 1)
            # np.log2, not math.log2, so the threshold is bit-identical to
            # the block evaluator's
            b = float(seed.d * lam * np.log2(np.log2(np.float64(x) + 4.0)))
            thr = b / (x + 2.0 * b)
            base = u_s.astype(np.float64) * 2.0**-64 < thr
            from .schedule import z_phase

            m = j % z_phase(x)
            ok = np.ones(n_keys, dtype=bool) if m == 0 else u_p <= np.uint64(1 << (64 - m))
            counts += (base & ok).astype(np.int64)
        else:
            raise ValidationError(f"unknown mode {mode!r}")
    mean = float(counts.mean())
    std = float(counts.std(ddof=1)) if n_keys > 1 else 0.0
    return EmpiricalLoad(mean=mean, std_err=std / math.sqrt(n_keys), n_keys=n_keys)


def transcript_lines(result: HitResult):
    """Transcript as text lines 'j kind [detail]' for golden-file dumps."""
    if result.transcript is None:
        raise ValidationError("result has no transcript")
    lines = []
    for j, out in enumerate(result.transcript):
        if out.kind == SILENCE:
            lines.append(f"{j} silence")
        elif out.kind == SUCCESS:
            lines.append(f"{j} success {out.node}")
        else:
            lines.append(f"{j} collision {out.count}")
    return lines
