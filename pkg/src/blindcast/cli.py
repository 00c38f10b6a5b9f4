"""Command-line front end: generation, simulation, sweeps, verification.

Every command is reproducible: outputs are pure functions of the flags (the
wall_ms column of sweep CSVs being the one documented exception), per-trial
keys are derived from the master key by trial index so the --jobs setting
never changes results, and files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .channel import simulate_mac, transcript_lines
from .errors import SizeLimitError, ValidationError
from .instances import (
    PATTERNS,
    dump_instance,
    load_instance,
    make_instance,
    random_instance,
)
from .network import (
    directed_cycle,
    dump_network,
    layer_decompose,
    layered_chain,
    leading_layer_trace,
    load_network,
    random_strongly_connected,
    simulate_network,
)
from .prf import derive_key, fingerprint
from .schedule import (
    BROADCAST,
    DEFAULT_C,
    DEFAULT_D,
    WAKEUP,
    ScheduleSeed,
    budget_mode,
    delay_budget,
    lambda_weight,
)
from .verify import dump_report, exhaustive_verify, seed_search
from .instances import enumerate_instances

# Fixed default master key so every documented command reproduces exactly.
DEFAULT_SEED_HEX = "5eedb11dca570000a7c94f2d8e61b35a0d4c7e92f1386b5d20e9c4a8715f3db6"

SWEEP_HEADER = "mode,key,k,L,r,inst_seed,hit_step,budget,within_budget,wall_ms"
LAYERS_HEADER = "layer,size,r,first_leading,duration,budget"

SIM_MODES = (WAKEUP, BROADCAST, "prime", "always")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _atomic_write(path: str, data: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _load_config(path: str) -> dict:
    values = {}
    allowed = {
        "c": int,
        "d": int,
        "kappa": float,
        "jobs": int,
        "max_corpus": int,
        "max_nodes": int,
        "max_edges": int,
    }
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValidationError(f"{path}:{lineno}: expected key=value")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in allowed:
                    raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = allowed[key](val.strip())
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return values


@dataclass
class Settings:
    seed: ScheduleSeed
    kappa: float
    jobs: int
    max_corpus: int
    max_nodes: int
    max_edges: int


def _settings(args) -> Settings:
    from .instances import MAX_CORPUS
    from .network import MAX_EDGES, MAX_NODES

    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    c = args.c if args.c is not None else cfg.get("c", DEFAULT_C)
    d = args.d if args.d is not None else cfg.get("d", DEFAULT_D)
    kappa = args.kappa if args.kappa is not None else cfg.get("kappa", 1.0)
    if kappa <= 0:
        raise ValidationError("kappa must be positive")
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = cfg.get("jobs", int(os.environ.get("BLINDCAST_JOBS", "1")))
    if jobs < 1:
        raise ValidationError("jobs must be at least 1")
    seed = ScheduleSeed.from_hex(args.seed_hex, c=c, d=d)
    return Settings(
        seed=seed,
        kappa=kappa,
        jobs=jobs,
        max_corpus=cfg.get("max_corpus", MAX_CORPUS),
        max_nodes=cfg.get("max_nodes", MAX_NODES),
        max_edges=cfg.get("max_edges", MAX_EDGES),
    )


def _add_common(p):
    p.add_argument("--seed-hex", default=DEFAULT_SEED_HEX, help="64-hex master key")
    p.add_argument("--config", help="key=value settings file (flags override)")
    p.add_argument("--c", type=int, default=None, help="wake-up schedule constant")
    p.add_argument("--d", type=int, default=None, help="broadcast schedule constant")
    p.add_argument("--kappa", type=float, default=None, help="budget multiplier")


def _int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise ValidationError(f"bad integer list {text!r}") from exc


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def build_parser() -> _Parser:
    root = _Parser(prog="blindcast", description=__doc__)
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-instance", help="write a random instance as JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--pattern", choices=PATTERNS, default="simultaneous")
    p.add_argument("--stagger-window", type=int, default=None)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-graph", help="write a benchmark graph as JSON")
    p.add_argument("--kind", choices=("layered", "cycle", "random"), required=True)
    p.add_argument("--layers", type=int, default=8)
    p.add_argument("--layer-size", type=int, default=4)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--extra-edges", type=int, default=0)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="run one instance (or one network)")
    _add_common(p)
    p.add_argument("--mode", choices=SIM_MODES, default=WAKEUP)
    p.add_argument("--instance", required=True, help="instance JSON (initial wakes)")
    p.add_argument("--graph", help="graph JSON; if given, run the network simulator")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--transcript", help="write per-step outcomes to this file")

    p = sub.add_parser("sweep", help="grid of seeded trials to CSV")
    _add_common(p)
    p.add_argument("--mode", choices=SIM_MODES, default=WAKEUP)
    p.add_argument("--k", required=True, help="comma list of node counts")
    p.add_argument("--L", required=True, help="comma list of id ranges")
    p.add_argument("--pattern", default="simultaneous", help="comma list of patterns")
    p.add_argument("--stagger-window", type=int, default=None)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="exhaustively check enumerated instances")
    _add_common(p)
    p.add_argument("--mode", choices=(WAKEUP, BROADCAST), default=WAKEUP)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--wake-max", type=int, required=True)
    p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("search-seed", help="search derived keys for a full pass")
    _add_common(p)
    p.add_argument("--mode", choices=(WAKEUP, BROADCAST), default=WAKEUP)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--wake-max", type=int, required=True)
    p.add_argument("--candidates", type=int, default=64)
    p.add_argument("--out", help="write the JSON summary here")

    p = sub.add_parser("layers", help="layer decomposition and leading spans")
    _add_common(p)
    p.add_argument("--mode", choices=SIM_MODES, default=BROADCAST)
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--initial", help="instance JSON of spontaneous wakes; default: source at 0")
    p.add_argument("--horizon", type=int, default=1 << 20)
    p.add_argument("--out", required=True)

    return root


def _cmd_gen_instance(args) -> int:
    inst = random_instance(
        args.k, args.L, args.pattern, args.rng_seed, stagger_window=args.stagger_window
    )
    _atomic_write(args.out, dump_instance(inst) + "\n")
    print(f"instance k={inst.k} r={inst.r} -> {args.out}")
    return 0


def _cmd_gen_graph(args) -> int:
    if args.kind == "layered":
        net = layered_chain(args.layers, args.layer_size)
    elif args.kind == "cycle":
        net = directed_cycle(args.n)
    else:
        net = random_strongly_connected(args.n, args.extra_edges, args.rng_seed)
    _atomic_write(args.out, dump_network(net) + "\n")
    print(f"graph n={net.n} edges={len(net.edges)} -> {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    st = _settings(args)
    inst = load_instance(_read(args.instance))
    if args.graph:
        net = load_network(_read(args.graph), st.max_nodes, st.max_edges)
        res = simulate_network(
            net, inst.nodes, st.seed, args.mode,
            horizon=args.horizon if args.horizon else 1 << 20,
        )
        comp = res.completion_step if res.completion_step is not None else -1
        print(f"mode={args.mode} n={net.n} completion={comp}")
        return 0
    res = simulate_mac(
        inst, st.seed, args.mode,
        horizon=args.horizon,
        keep_transcript=bool(args.transcript),
    )
    hit = res.hit_step if res.hit_step is not None else -1
    within = int(
        hit >= 0 and hit - inst.min_wake <= st.kappa * res.budget.value
    )
    print(
        f"mode={args.mode} k={inst.k} r={inst.r} hit={hit} "
        f"budget={res.budget.value} within_budget={within} horizon={res.horizon}"
    )
    if args.transcript:
        _atomic_write(args.transcript, "\n".join(transcript_lines(res)) + "\n")
    return 0


def _instance_seed(master: bytes, index: int) -> int:
    return int.from_bytes(derive_key(master, b"inst-seed", index)[:8], "little") >> 1


def sweep_tasks(args, st: Settings):
    ks = _int_list(args.k)
    Ls = _int_list(args.L)
    patterns = [p for p in args.pattern.split(",") if p]
    for pat in patterns:
        if pat not in PATTERNS:
            raise ValidationError(f"unknown pattern {pat!r}")
    if args.trials < 1:
        raise ValidationError("trials must be at least 1")
    tasks = []
    idx = 0
    for k in ks:
        for L in Ls:
            for pat in patterns:
                for _ in range(args.trials):
                    tasks.append((idx, k, L, pat))
                    idx += 1
    return tasks


def _run_trial(task, args, st: Settings) -> str:
    idx, k, L, pat = task
    t0 = time.perf_counter()
    trial_key = derive_key(st.seed.master_key, b"trial", idx)
    seed_t = st.seed.with_key(trial_key)
    inst_seed = _instance_seed(st.seed.master_key, idx)
    inst = random_instance(k, L, pat, inst_seed, stagger_window=args.stagger_window)
    budget = delay_budget(seed_t, budget_mode(args.mode), inst.r, inst.k)
    horizon = inst.min_wake + int(st.kappa * budget.value) + 1
    res = simulate_mac(inst, seed_t, args.mode, horizon=horizon)
    hit = res.hit_step if res.hit_step is not None else -1
    within = int(hit >= 0 and hit - inst.min_wake <= st.kappa * budget.value)
    wall_ms = int((time.perf_counter() - t0) * 1000)
    return (
        f"{args.mode},{fingerprint(trial_key)},{k},{L},{inst.r},{inst_seed},"
        f"{hit},{budget.value},{within},{wall_ms}"
    )


def _cmd_sweep(args) -> int:
    st = _settings(args)
    tasks = sweep_tasks(args, st)
    rows: list[str | None] = [None] * len(tasks)
    if st.jobs == 1:
        for task in tasks:
            rows[task[0]] = _run_trial(task, args, st)
    else:
        with ThreadPoolExecutor(max_workers=st.jobs) as pool:
            for idx, row in zip(
                (t[0] for t in tasks),
                pool.map(lambda t: _run_trial(t, args, st), tasks),
            ):
                rows[idx] = row
    _atomic_write(args.out, "\n".join([SWEEP_HEADER] + rows) + "\n")
    print(f"sweep rows={len(rows)} -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    st = _settings(args)
    report = exhaustive_verify(
        st.seed, args.mode, args.r_max, args.wake_max,
        kappa=st.kappa, max_corpus=st.max_corpus,
    )
    if args.out:
        _atomic_write(args.out, dump_report(report) + "\n")
    ratio = f"{report.max_ratio:.4f}" if report.max_ratio is not None else "none"
    print(
        f"verify mode={args.mode} instances={len(report.rows)} "
        f"pass={report.n_pass} fail={report.n_fail} max_ratio={ratio}"
    )
    return 0


def _cmd_search_seed(args) -> int:
    st = _settings(args)
    corpus = enumerate_instances(
        args.r_max, args.wake_max, mode=args.mode, seed=st.seed,
        max_corpus=st.max_corpus,
    )
    result = seed_search(st.seed, corpus, args.mode, args.candidates, kappa=st.kappa)
    if args.out:
        obj = {
            "mode": result.mode,
            "kappa": result.kappa,
            "n_instances": result.n_instances,
            "pass_counts": list(result.pass_counts),
            "best_index": result.best_index,
            "best_key_hex": result.best_key_hex,
            "all_pass": result.all_pass,
        }
        _atomic_write(args.out, json.dumps(obj, separators=(",", ":")) + "\n")
    print(
        f"search mode={args.mode} candidates={len(result.pass_counts)} "
        f"best={result.best_key_hex} pass={result.pass_counts[result.best_index]}"
        f"/{result.n_instances} all_pass={int(result.all_pass)}"
    )
    return 0


def _cmd_layers(args) -> int:
    st = _settings(args)
    net = load_network(_read(args.graph), st.max_nodes, st.max_edges)
    if args.initial:
        initial = load_instance(_read(args.initial)).nodes
    else:
        initial = ((args.source, 0),)
    res = simulate_network(net, initial, st.seed, args.mode, horizon=args.horizon)
    if not res.complete:
        raise ValidationError(
            f"network run did not complete within horizon {args.horizon}"
        )
    decomp = layer_decompose(net, args.source, args.target)
    trace = leading_layer_trace(res, decomp)
    lines = [LAYERS_HEADER]
    for i, layer in enumerate(decomp.layers):
        size = len(layer)
        if size:
            r = max(1, math.floor(sum(lambda_weight(v) for v in layer)))
            budget = delay_budget(st.seed, budget_mode(args.mode), r, size).value
        else:
            r = 0
            budget = 0
        first = trace.first_leading[i]
        lines.append(
            f"{i},{size},{r},{first if first is not None else -1},"
            f"{trace.durations[i]},{budget}"
        )
    _atomic_write(args.out, "\n".join(lines) + "\n")
    print(
        f"layers path_len={len(decomp.path)} completion={res.completion_step} "
        f"spans_total={sum(trace.durations)} -> {args.out}"
    )
    return 0


_COMMANDS = {
    "gen-instance": _cmd_gen_instance,
    "gen-graph": _cmd_gen_graph,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "search-seed": _cmd_search_seed,
    "layers": _cmd_layers,
}


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SizeLimitError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
