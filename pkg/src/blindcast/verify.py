"""Verification harness: corpus checking, seed search, and exact oracles.

The existence arguments behind the schedules are probabilistic, so their
operational form here is a search: derive candidate keys from a search key,
check each against every instance of an enumerated corpus, and report the
first key that hits them all within budget (or the best one).  A fixed
sampled key may legitimately fail; the report therefore carries per-key
pass counts rather than asserting universality of any single key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .channel import mac_window, simulate_mac
from .errors import ValidationError
from .instances import Instance, InstanceCorpus, enumerate_instances
from .prf import derive_key, fingerprint
from .schedule import (
    BROADCAST,
    ScheduleSeed,
    budget_mode,
    delay_budget,
    z_phase,
)


@dataclass(frozen=True)
class InstanceCheck:
    nodes: tuple
    r: int
    k: int
    min_wake: int
    hit_step: int | None
    budget: int
    passed: bool

    @property
    def ratio(self) -> float | None:
        if self.hit_step is None:
            return None
        return (self.hit_step - self.min_wake) / self.budget


@dataclass(frozen=True)
class VerifyReport:
    mode: str
    key: str
    kappa: float
    provenance: dict
    rows: tuple
    n_pass: int
    n_fail: int
    max_ratio: float | None
    failures: tuple

    @property
    def all_pass(self) -> bool:
        return self.n_fail == 0


@dataclass(frozen=True)
class SeedSearchResult:
    mode: str
    kappa: float
    n_instances: int
    pass_counts: tuple
    best_index: int
    best_key_hex: str
    all_pass: bool


def check_instance(
    seed: ScheduleSeed, mode: str, inst: Instance, kappa: float = 1.0, schedule=None
) -> InstanceCheck:
    """Simulate one instance and compare its hit offset against kappa x budget."""
    if kappa <= 0:
        raise ValidationError("kappa must be positive")
    budget = delay_budget(seed, budget_mode(mode), inst.r, inst.k)
    allowed = int(kappa * budget.value)
    horizon = inst.min_wake + allowed + 1
    res = simulate_mac(inst, seed, mode, horizon=horizon, schedule=schedule)
    hit = res.hit_step
    passed = hit is not None and hit - inst.min_wake <= kappa * budget.value
    return InstanceCheck(
        nodes=inst.nodes,
        r=inst.r,
        k=inst.k,
        min_wake=inst.min_wake,
        hit_step=hit,
        budget=budget.value,
        passed=passed,
    )


def verify_corpus(
    seed: ScheduleSeed,
    corpus: InstanceCorpus,
    mode: str,
    kappa: float = 1.0,
    schedule=None,
) -> VerifyReport:
    rows = tuple(
        check_instance(seed, mode, inst, kappa=kappa, schedule=schedule)
        for inst in corpus.instances
    )
    ratios = [row.ratio for row in rows if row.ratio is not None]
    failures = tuple(i for i, row in enumerate(rows) if not row.passed)
    return VerifyReport(
        mode=mode,
        key=fingerprint(seed.master_key),
        kappa=kappa,
        provenance=dict(corpus.provenance),
        rows=rows,
        n_pass=len(rows) - len(failures),
        n_fail=len(failures),
        max_ratio=max(ratios) if ratios else None,
        failures=failures,
    )


def exhaustive_verify(
    seed: ScheduleSeed,
    mode: str,
    r_max: int,
    wake_max: int,
    kappa: float = 1.0,
    schedule=None,
    max_corpus: int | None = None,
) -> VerifyReport:
    """Check the seed against every enumerated curtailed instance."""
    kwargs = {} if max_corpus is None else {"max_corpus": max_corpus}
    corpus = enumerate_instances(r_max, wake_max, mode=mode, seed=seed, **kwargs)
    return verify_corpus(seed, corpus, mode, kappa=kappa, schedule=schedule)


def seed_search(
    seed: ScheduleSeed,
    corpus: InstanceCorpus,
    mode: str,
    candidate_count: int,
    kappa: float = 1.0,
) -> SeedSearchResult:
    """Try candidate keys derived from the seed until one passes the corpus.

    Evaluates candidates in order; each is checked against every instance
    so the reported pass counts are complete.  Stops at the first candidate
    passing everything, else returns the best one.
    """
    if candidate_count < 1:
        raise ValidationError("need at least one candidate")
    n = len(corpus.instances)
    counts = []
    best_index = 0
    for i in range(candidate_count):
        cand = seed.with_key(derive_key(seed.master_key, b"candidate", i))
        passes = sum(
            1
            for inst in corpus.instances
            if check_instance(cand, mode, inst, kappa=kappa).passed
        )
        counts.append(passes)
        if passes > counts[best_index]:
            best_index = i
        if passes == n:
            best_index = i
            break
    best_key = derive_key(seed.master_key, b"candidate", best_index)
    return SeedSearchResult(
        mode=mode,
        kappa=kappa,
        n_instances=n,
        pass_counts=tuple(counts),
        best_index=best_index,
        best_key_hex=best_key.hex(),
        all_pass=counts[best_index] == n,
    )


def exactly_one_probability(probs) -> float:
    """Exact probability that exactly one of independent Bernoulli(p_i) fires."""
    probs = list(probs)
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise ValidationError("probabilities must lie in [0, 1]")
    total = 0.0
    for i, p in enumerate(probs):
        term = p
        for j, q in enumerate(probs):
            if j != i:
                term *= 1.0 - q
        total += term
    return total


def colhit_bound(probs) -> float:
    """Lower bound f * 4^-f on the exactly-one probability, valid for
    p_i <= 1/2."""
    probs = list(probs)
    for p in probs:
        if not 0.0 <= p <= 0.5:
            raise ValidationError("bound requires probabilities in [0, 1/2]")
    f = sum(probs)
    return f * 4.0**-f


def shift_invariance_check(
    seed: ScheduleSeed, inst: Instance, x: int, multiplier: int = 1
) -> bool:
    """Broadcast transcripts over the first x steps after the first wake are
    unchanged when every wake and the clock shift by multiplier * z_phase(x)."""
    if x < 1:
        raise ValidationError("window must be at least one step")
    if multiplier < 1:
        raise ValidationError("multiplier must be at least 1")
    delta = multiplier * z_phase(x)
    w0 = inst.min_wake
    base = mac_window(inst, seed, BROADCAST, w0, w0 + x)
    shifted = mac_window(inst.shifted(delta), seed, BROADCAST, w0 + delta, w0 + delta + x)
    return bool(
        (base[0] == shifted[0]).all() and (base[1] == shifted[1]).all()
    )


def report_to_obj(report: VerifyReport) -> dict:
    return {
        "mode": report.mode,
        "key": report.key,
        "kappa": report.kappa,
        "provenance": report.provenance,
        "n_instances": len(report.rows),
        "n_pass": report.n_pass,
        "n_fail": report.n_fail,
        "max_ratio": report.max_ratio,
        "failures": list(report.failures),
        "rows": [
            {
                "nodes": [[v, w] for v, w in row.nodes],
                "r": row.r,
                "k": row.k,
                "min_wake": row.min_wake,
                "hit_step": row.hit_step,
                "budget": row.budget,
                "passed": row.passed,
            }
            for row in report.rows
        ],
    }


def dump_report(report: VerifyReport) -> str:
    return json.dumps(report_to_obj(report), separators=(",", ":"))
