"""Seeded deterministic wake-up and broadcast schedules, with exact
channel/network simulators and a verification harness."""

from .baselines import AlwaysSchedule, PrimeSchedule, nth_prime, prime_bit
from .channel import (
    HitResult,
    LoadProfile,
    StepOutcome,
    empirical_load,
    load_profile,
    simulate_mac,
)
from .errors import SizeLimitError, ValidationError
from .instances import (
    Instance,
    InstanceCorpus,
    awake_set,
    curtail,
    enumerate_instances,
    make_instance,
    random_instance,
)
from .network import (
    LayerDecomposition,
    Network,
    NetworkResult,
    layer_decompose,
    layered_chain,
    leading_layer_trace,
    simulate_network,
)
from .schedule import (
    BROADCAST,
    WAKEUP,
    DelayBudget,
    ScheduleSeed,
    delay_budget,
    lambda_weight,
    prf_uniform,
    safe_log,
    safe_loglog,
    sync_bit,
    ts_bit,
    z_phase,
)
from .verify import (
    SeedSearchResult,
    VerifyReport,
    colhit_bound,
    exactly_one_probability,
    exhaustive_verify,
    seed_search,
    shift_invariance_check,
)

__all__ = [
    "AlwaysSchedule",
    "BROADCAST",
    "DelayBudget",
    "HitResult",
    "Instance",
    "InstanceCorpus",
    "LayerDecomposition",
    "LoadProfile",
    "Network",
    "NetworkResult",
    "PrimeSchedule",
    "ScheduleSeed",
    "SeedSearchResult",
    "SizeLimitError",
    "StepOutcome",
    "ValidationError",
    "VerifyReport",
    "WAKEUP",
    "awake_set",
    "colhit_bound",
    "curtail",
    "delay_budget",
    "empirical_load",
    "enumerate_instances",
    "exactly_one_probability",
    "exhaustive_verify",
    "lambda_weight",
    "layer_decompose",
    "layered_chain",
    "leading_layer_trace",
    "load_profile",
    "make_instance",
    "nth_prime",
    "prf_uniform",
    "prime_bit",
    "random_instance",
    "safe_log",
    "safe_loglog",
    "seed_search",
    "shift_invariance_check",
    "simulate_mac",
    "simulate_network",
    "sync_bit",
    "ts_bit",
    "z_phase",
]
