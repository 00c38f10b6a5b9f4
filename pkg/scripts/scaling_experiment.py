#!/usr/bin/env python3
"""Produce the sweep CSVs behind the figures: hit time vs k, vs L, and the
prime-baseline comparison, plus the layered-chain leading-span CSV.

Everything goes through the command-line interface, so the outputs are the
same files a user would generate by hand; defaults are sized to finish in
about a minute (pass --full for the paper-scale grid).
"""

import argparse
import os

from blindcast.cli import DEFAULT_SEED_HEX, run_cli


def sh(argv) -> None:
    code = run_cli(argv)
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--seed-hex", default=DEFAULT_SEED_HEX)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--full", action="store_true", help="k up to 1024, L up to 2^20")
    args = ap.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    ks = "8,16,32,64,128,256,512,1024" if args.full else "4,8,16,32,64"
    Ls = "1024,4096,16384,65536,1048576" if args.full else "256,1024,4096,16384"
    fixed_L = "1048576" if args.full else "4096"
    trials = str(args.trials)
    common = ["--seed-hex", args.seed_hex, "--trials", trials]

    for mode in ("wakeup", "broadcast"):
        sh(["sweep", "--mode", mode, "--k", ks, "--L", fixed_L,
            "--out", f"{args.out_dir}/hit_vs_k_{mode}.csv"] + common)
    sh(["sweep", "--mode", "wakeup", "--k", "16", "--L", Ls,
        "--out", f"{args.out_dir}/hit_vs_L_wakeup.csv"] + common)
    sh(["sweep", "--mode", "prime", "--k", ks, "--L", fixed_L,
        "--out", f"{args.out_dir}/hit_vs_k_prime.csv"] + common)

    graph = f"{args.out_dir}/layered.json"
    sh(["gen-graph", "--kind", "layered", "--layers", "32", "--layer-size", "4",
        "--out", graph])
    sh(["layers", "--graph", graph, "--source", "1", "--target", "125",
        "--mode", "broadcast", "--seed-hex", args.seed_hex,
        "--out", f"{args.out_dir}/layers_broadcast.csv"])
    print(f"wrote CSVs under {args.out_dir}/")


if __name__ == "__main__":
    main()
