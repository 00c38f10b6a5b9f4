"""Construction, validation, enumeration and sampling of problem instances.

An instance is a finite set of node ids with a wake step for each node.
Its two summary parameters are k (node count) and r, the floor of the sum
of the nodes' log-weights, which folds id length and count into a single
size measure.  Instances are immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import SizeLimitError, ValidationError
from .prf import STREAM_GEN, uniform64
from .schedule import (
    BROADCAST,
    WAKEUP,
    ScheduleSeed,
    delay_budget,
    lambda_weight,
    z_phase,
)

PATTERNS = ("simultaneous", "uniform-stagger", "adversarial-chain")

MAX_CORPUS = 1_000_000


@dataclass(frozen=True)
class Instance:
    """Nodes as (id, wake) pairs, sorted by id; r and k precomputed."""

    nodes: tuple
    k: int
    r: int
    min_wake: int

    @property
    def ids(self):
        return tuple(v for v, _ in self.nodes)

    @property
    def wakes(self):
        return tuple(w for _, w in self.nodes)

    def shifted(self, delta: int) -> "Instance":
        """Same ids with every wake moved by delta steps."""
        if delta < 0 and self.min_wake + delta < 0:
            raise ValidationError("shift would make a wake negative")
        return make_instance([(v, w + delta) for v, w in self.nodes])


@dataclass(frozen=True)
class AwakeSet:
    """Prefix of an instance awake by some step, with its own (r, k)."""

    nodes: tuple
    k: int
    r: int


@dataclass(frozen=True)
class InstanceCorpus:
    instances: tuple
    provenance: dict

    def __len__(self):
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)


def _rank(pairs) -> int:
    return max(1, math.floor(sum(lambda_weight(v) for v, _ in pairs))) if pairs else 1


def make_instance(pairs) -> Instance:
    """Validated instance from (id, wake) pairs."""
    pairs = [(int(v), int(w)) for v, w in pairs]
    if not pairs:
        raise ValidationError("instance must have at least one node")
    ids = [v for v, _ in pairs]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate node id")
    for v, w in pairs:
        if v < 1:
            raise ValidationError("node ids start at 1")
        if w < 0:
            raise ValidationError("wake steps are nonnegative")
    nodes = tuple(sorted(pairs))
    return Instance(
        nodes=nodes,
        k=len(nodes),
        r=_rank(nodes),
        min_wake=min(w for _, w in nodes),
    )


def awake_set(inst: Instance, j: int) -> AwakeSet:
    """Nodes of ``inst`` with wake <= j, plus the prefix's r and k."""
    sub = tuple(nd for nd in inst.nodes if nd[1] <= j)
    return AwakeSet(nodes=sub, k=len(sub), r=_rank(sub))


def curtail(inst: Instance, mode: str, seed: ScheduleSeed) -> Instance:
    """Drop nodes that wake later than the budget of the prefix awake by then.

    Finds the earliest relative step t with t > budget(r_t, k_t), where the
    prefix is measured relative to the instance's first wake, and keeps the
    nodes awake strictly before t.  Idempotent; never empty.
    """
    w0 = inst.min_wake
    rel_wakes = sorted({w - w0 for _, w in inst.nodes})
    t = 0
    while True:
        aw = awake_set(inst, w0 + t)
        budget = delay_budget(seed, mode, aw.r, aw.k).value
        if t > budget:
            break
        # The awake prefix is constant until the next wake, so jump straight
        # to the crossing or to the next change, whichever is earlier.
        nxt = [rw for rw in rel_wakes if rw > t]
        t = budget + 1 if not nxt or budget + 1 < nxt[0] else nxt[0]
    keep = [nd for nd in inst.nodes if nd[1] - w0 < t]
    return make_instance(keep)


def _id_sets(r_max: int):
    """All ascending id tuples whose floored weight sum stays <= r_max."""
    limit = float(r_max + 1)
    id_cap = 2 ** (r_max + 1)
    out = []

    def extend(prefix, total, start):
        for v in range(start, id_cap + 1):
            s = total + lambda_weight(v)
            if s >= limit:
                break  # weights increase with id, so all later ids overflow too
            cand = prefix + (v,)
            out.append(cand)
            extend(cand, s, v + 1)

    extend((), 0.0, 1)
    return out


def enumerate_instances(
    r_max: int,
    wake_max: int,
    mode: str = WAKEUP,
    seed: ScheduleSeed | None = None,
    max_corpus: int = MAX_CORPUS,
) -> InstanceCorpus:
    """Deterministic corpus of every curtailed instance with r <= r_max and
    wakes in {0..wake_max}, normalised to first wake 0.

    Broadcast corpora additionally replicate each instance at every clock
    offset in {0 .. z(budget)-1}, since broadcast behaviour depends on the
    absolute step; offsets beyond that repeat behaviour in the checked
    window.
    """
    if r_max < 1 or wake_max < 0:
        raise ValidationError("r_max >= 1 and wake_max >= 0 required")
    if mode not in (WAKEUP, BROADCAST):
        raise ValidationError(f"unknown mode {mode!r}")
    seed = seed if seed is not None else ScheduleSeed(bytes(32))
    sets = _id_sets(r_max)
    total = sum((wake_max + 1) ** len(s) - wake_max ** len(s) for s in sets)
    if total > max_corpus:
        raise SizeLimitError(
            f"enumeration would produce {total} raw instances (cap {max_corpus})"
        )

    seen = set()
    base = []
    for ids in sets:
        k = len(ids)
        for wakes in _wake_tuples(k, wake_max):
            inst = curtail(make_instance(zip(ids, wakes)), mode, seed)
            if inst.nodes not in seen:
                seen.add(inst.nodes)
                base.append(inst)

    if mode == BROADCAST:
        out = []
        for inst in base:
            width = z_phase(delay_budget(seed, BROADCAST, inst.r, inst.k).value)
            out.extend(inst.shifted(delta) for delta in range(width))
        if len(out) > max_corpus:
            raise SizeLimitError(f"offset corpus has {len(out)} instances (cap {max_corpus})")
        base = out

    base.sort(key=lambda i: (i.k, i.nodes))
    provenance = {
        "kind": "exhaustive",
        "r_max": r_max,
        "wake_max": wake_max,
        "mode": mode,
    }
    return InstanceCorpus(instances=tuple(base), provenance=provenance)


def _wake_tuples(k: int, wake_max: int):
    """All wake assignments in {0..wake_max}^k whose minimum is 0."""
    if k == 1:
        yield (0,)
        return
    span = wake_max + 1

    def rec(prefix, has_zero):
        if len(prefix) == k:
            if has_zero:
                yield prefix
            return
        for w in range(span):
            yield from rec(prefix + (w,), has_zero or w == 0)

    yield from rec((), False)


def _gen_key(rng_seed: int) -> bytes:
    import hashlib

    return hashlib.blake2b(
        b"instance-gen" + int(rng_seed).to_bytes(16, "little", signed=True),
        digest_size=32,
    ).digest()


def _draw_below(key: bytes, tag_v: int, counter: int, n: int) -> tuple[int, int]:
    # Rejection sampling keeps draws exactly uniform on [0, n).
    lim = (1 << 64) - ((1 << 64) % n)
    while True:
        u = uniform64(key, STREAM_GEN, tag_v, counter)
        counter += 1
        if u < lim:
            return u % n, counter


def random_instance(
    k: int,
    L: int,
    pattern: str = "simultaneous",
    rng_seed: int = 0,
    stagger_window: int | None = None,
) -> Instance:
    """k distinct ids drawn uniformly from {1..L}, wakes per pattern.

    Patterns: ``simultaneous`` (all wake at 0), ``uniform-stagger``
    (independent wakes in {0..W}, W = stagger_window or 8k), and
    ``adversarial-chain`` (the i-th smallest id wakes at step i, one step
    after the previous node's first possible transmission).
    """
    if k < 1:
        raise ValidationError("k must be positive")
    if k > L:
        raise ValidationError("k cannot exceed the id range L")
    if pattern not in PATTERNS:
        raise ValidationError(f"unknown pattern {pattern!r}")
    key = _gen_key(rng_seed)
    ids: list[int] = []
    chosen = set()
    counter = 0
    while len(ids) < k:
        u, counter = _draw_below(key, 0, counter, L)
        v = u + 1
        if v not in chosen:
            chosen.add(v)
            ids.append(v)
    ids.sort()
    if pattern == "simultaneous":
        wakes = [0] * k
    elif pattern == "uniform-stagger":
        window = stagger_window if stagger_window is not None else 8 * k
        if window < 0:
            raise ValidationError("stagger window must be nonnegative")
        wakes = []
        counter = 0
        for _ in range(k):
            w, counter = _draw_below(key, 1, counter, window + 1)
            wakes.append(w)
    else:
        wakes = list(range(k))
    return make_instance(zip(ids, wakes))


def instance_to_obj(inst: Instance) -> dict:
    return {"nodes": [{"id": v, "wake": w} for v, w in inst.nodes]}


def instance_from_obj(obj) -> Instance:
    try:
        pairs = [(nd["id"], nd["wake"]) for nd in obj["nodes"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed instance object: {exc}") from exc
    return make_instance(pairs)


def dump_instance(inst: Instance) -> str:
    return json.dumps(instance_to_obj(inst), separators=(",", ":"))


def load_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad instance JSON: {exc}") from exc
    return instance_from_obj(obj)


def dump_corpus(corpus: InstanceCorpus) -> str:
    return json.dumps(
        [instance_to_obj(i) for i in corpus.instances], separators=(",", ":")
    )


def load_corpus(text: str, provenance: dict | None = None) -> InstanceCorpus:
    try:
        arr = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad corpus JSON: {exc}") from exc
    if not isinstance(arr, list):
        raise ValidationError("corpus JSON must be an array")
    return InstanceCorpus(
        instances=tuple(instance_from_obj(o) for o in arr),
        provenance=provenance or {"kind": "file"},
    )
