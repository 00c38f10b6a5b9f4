#!/usr/bin/env python3
"""Exhaustive desk-scale verification and seed search, both modes.

Reproduces the existence check: enumerate every curtailed instance up to
the given size, then search derived candidate keys until one hits all of
them within kappa x budget.
"""

import argparse
import time

from blindcast.cli import DEFAULT_SEED_HEX
from blindcast.instances import enumerate_instances
from blindcast.schedule import BROADCAST, WAKEUP, ScheduleSeed
from blindcast.verify import seed_search


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed-hex", default=DEFAULT_SEED_HEX)
    ap.add_argument("--r-max-wakeup", type=int, default=6)
    ap.add_argument("--r-max-broadcast", type=int, default=5)
    ap.add_argument("--wake-max", type=int, default=8)
    ap.add_argument("--candidates", type=int, default=64)
    ap.add_argument("--kappa", type=float, default=1.0)
    args = ap.parse_args()

    seed = ScheduleSeed.from_hex(args.seed_hex)
    for mode, r_max in ((WAKEUP, args.r_max_wakeup), (BROADCAST, args.r_max_broadcast)):
        t0 = time.perf_counter()
        corpus = enumerate_instances(r_max, args.wake_max, mode=mode, seed=seed)
        result = seed_search(seed, corpus, mode, args.candidates, kappa=args.kappa)
        dt = time.perf_counter() - t0
        print(
            f"{mode:9s} r_max={r_max} wake_max={args.wake_max} "
            f"instances={len(corpus):6d} candidates_tried={len(result.pass_counts):2d} "
            f"all_pass={result.all_pass} best={result.best_key_hex[:16]}... "
            f"({dt:.1f}s)"
        )


if __name__ == "__main__":
    main()
