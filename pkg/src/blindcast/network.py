"""Multi-hop directed radio-network simulation and layer analysis.

Reception follows the radio rule: a listening node hears a transmission in
a step iff exactly one of its in-neighbors transmitted.  A dormant node that
hears one joins at the next step.  On a bidirected clique this reduces to
the shared-channel model, which the tests exercise as an equivalence check.

The layer analysis fixes a shortest source-target path and classifies every
node by the furthest path position it can transmit into; tracking the
furthest layer containing an awake node ("leading") splits a run into
per-layer spans whose lengths tile the completion time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import SizeLimitError, ValidationError
from .schedule import ScheduleSeed, make_schedule

MAX_NODES = 100_000
MAX_EDGES = 1_000_000


class Network:
    """Directed graph over distinct node ids, strongly connected by contract."""

    def __init__(self, ids, edges, max_nodes: int = MAX_NODES, max_edges: int = MAX_EDGES):
        ids = [int(v) for v in ids]
        if not ids:
            raise ValidationError("network needs at least one node")
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate node id")
        if any(v < 1 for v in ids):
            raise ValidationError("node ids start at 1")
        if len(ids) > max_nodes:
            raise SizeLimitError(f"{len(ids)} nodes exceeds cap {max_nodes}")
        if len(edges) > max_edges:
            raise SizeLimitError(f"{len(edges)} edges exceeds cap {max_edges}")
        self.ids = tuple(sorted(ids))
        idset = set(self.ids)
        out: dict[int, list[int]] = {v: [] for v in self.ids}
        incoming: dict[int, list[int]] = {v: [] for v in self.ids}
        seen = set()
        for u, w in edges:
            u, w = int(u), int(w)
            if u not in idset or w not in idset:
                raise ValidationError(f"edge ({u},{w}) references unknown node")
            if u == w:
                raise ValidationError(f"self-loop on node {u}")
            if (u, w) in seen:
                continue
            seen.add((u, w))
            out[u].append(w)
            incoming[w].append(u)
        self.out = {v: tuple(sorted(ws)) for v, ws in out.items()}
        self.inc = {v: tuple(sorted(us)) for v, us in incoming.items()}
        self.edges = tuple(sorted(seen))
        self.n = len(self.ids)
        self._check_strongly_connected()

    def _check_strongly_connected(self):
        start = self.ids[0]
        if len(self._bfs_reach(start, self.out)) != self.n:
            raise ValidationError("not every node is reachable from every other")
        if len(self._bfs_reach(start, self.inc)) != self.n:
            raise ValidationError("not every node is reachable from every other")

    def _bfs_reach(self, start, adj):
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen


@dataclass(frozen=True)
class NetworkResult:
    wake_time: dict
    completion_step: int | None

    @property
    def complete(self) -> bool:
        return self.completion_step is not None


@dataclass(frozen=True)
class LayerDecomposition:
    path: tuple
    layers: tuple  # tuple of frozensets; index i holds nodes whose furthest
    # edge into the path lands on position i

    @property
    def sizes(self):
        return tuple(len(layer) for layer in self.layers)


@dataclass(frozen=True)
class LeadingTrace:
    durations: tuple
    first_leading: tuple
    start: int
    end: int


class _BitBuffer:
    """Lazily extended transmit bits for one node from its wake onward."""

    __slots__ = ("sched", "v", "wake", "bits")

    def __init__(self, sched, v, wake):
        self.sched = sched
        self.v = v
        self.wake = wake
        self.bits = []

    def transmit(self, j: int) -> bool:
        idx = j - self.wake
        while idx >= len(self.bits):
            grow = max(256, len(self.bits))
            block = self.sched.bits_block(
                [self.v], [self.wake], self.wake + len(self.bits), grow
            )
            self.bits.extend(block[0].tolist())
        return self.bits[idx]


def simulate_network(
    net: Network,
    initial,
    seed: ScheduleSeed,
    mode: str = "wakeup",
    horizon: int = 1 << 20,
    schedule=None,
) -> NetworkResult:
    """Run the network until every node is awake or the horizon is reached.

    ``initial`` lists spontaneous (id, wake) pairs; every other node starts
    dormant and joins one step after it first hears exactly one in-neighbor
    transmit.  A spontaneous node can also be woken earlier by reception.
    """
    initial = [(int(v), int(w)) for v, w in initial]
    if not initial:
        raise ValidationError("initial wake list must be nonempty")
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    idset = set(net.ids)
    for v, w in initial:
        if v not in idset:
            raise ValidationError(f"initial node {v} not in network")
        if w < 0:
            raise ValidationError("wake steps are nonnegative")
    sched = schedule if schedule is not None else make_schedule(seed, mode)

    spont = {}
    for v, w in initial:
        spont[v] = min(w, spont.get(v, w))
    wake: dict[int, int | None] = {v: None for v in net.ids}
    buffers: dict[int, _BitBuffer] = {}
    pending = dict(spont)  # earliest known future wake per still-dormant node
    n_awake = 0

    for j in range(horizon):
        for v, w in list(pending.items()):
            if w <= j:
                wake[v] = w
                buffers[v] = _BitBuffer(sched, v, w)
                del pending[v]
                n_awake += 1
        if n_awake == net.n:
            break
        transmitters = [v for v, buf in buffers.items() if buf.transmit(j)]
        heard: dict[int, int] = {}
        for u in transmitters:
            for w in net.out[u]:
                if wake[w] is None:
                    heard[w] = heard.get(w, 0) + 1
        for v, cnt in heard.items():
            if cnt == 1:
                prev = pending.get(v)
                if prev is None or j + 1 < prev:
                    pending[v] = j + 1

    for v, w in pending.items():
        if w <= horizon:
            wake[v] = w
    done = all(w is not None for w in wake.values())
    completion = max(wake.values()) if done else None
    return NetworkResult(wake_time=wake, completion_step=completion)


def layer_decompose(net: Network, source: int, target: int) -> LayerDecomposition:
    """Shortest path (BFS, lowest-id tie-breaking) and the node layers it
    induces; nodes with no edge into the path belong to no layer."""
    if source not in net.out or target not in net.out:
        raise ValidationError("source/target not in network")
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in net.out[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    if target not in dist:
        raise ValidationError("target not reachable from source")
    path = [target]
    while path[-1] != source:
        cur = path[-1]
        prev = min(u for u in net.inc[cur] if dist.get(u) == dist[cur] - 1)
        path.append(prev)
    path.reverse()
    pos = {p: i for i, p in enumerate(path)}
    layer_of: dict[int, int] = {}
    for v in net.ids:
        best = -1
        for w in net.out[v]:
            i = pos.get(w)
            if i is not None and i > best:
                best = i
        if best >= 0:
            layer_of[v] = best
    layers = [set() for _ in path]
    for v, i in layer_of.items():
        layers[i].add(v)
    return LayerDecomposition(
        path=tuple(path), layers=tuple(frozenset(s) for s in layers)
    )


def leading_layer_trace(result: NetworkResult, decomp: LayerDecomposition) -> LeadingTrace:
    """How long each layer stayed the furthest one containing an awake node.

    Spans are half-open [step the layer takes the lead, step a further layer
    does); the last leader's span ends at the completion step, so the
    durations tile [first lead, completion) exactly.
    """
    if not result.complete:
        raise ValidationError("run did not complete; no trace")
    completion = result.completion_step
    first_wake = []
    for layer in decomp.layers:
        times = [result.wake_time[v] for v in layer if result.wake_time[v] is not None]
        first_wake.append(min(times) if times else None)
    events = sorted(
        (t, i) for i, t in enumerate(first_wake) if t is not None and t <= completion
    )
    durations = [0] * len(decomp.layers)
    cur = None
    cur_start = 0
    for t, i in events:
        if cur is None or i > cur:
            if cur is not None:
                durations[cur] += t - cur_start
            cur, cur_start = i, t
    start = events[0][0] if events else completion
    if cur is not None:
        durations[cur] += completion - cur_start
    return LeadingTrace(
        durations=tuple(durations),
        first_leading=tuple(first_wake),
        start=start,
        end=completion,
    )


def layered_chain(depth: int, width: int) -> Network:
    """Directed chain of ``depth`` groups of ``width`` nodes, complete
    bipartite between consecutive groups and wrapping back to group 0 so the
    graph is strongly connected."""
    if depth < 2 or width < 1:
        raise ValidationError("need depth >= 2 and width >= 1")
    ids = list(range(1, depth * width + 1))
    group = lambda i: ids[i * width : (i + 1) * width]
    edges = []
    for i in range(depth):
        for u in group(i):
            for w in group((i + 1) % depth):
                edges.append((u, w))
    return Network(ids, edges)


def directed_cycle(n: int) -> Network:
    if n < 2:
        raise ValidationError("cycle needs at least 2 nodes")
    ids = list(range(1, n + 1))
    edges = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    return Network(ids, edges)


def random_strongly_connected(n: int, extra_edges: int, rng_seed: int) -> Network:
    """Random spanning cycle plus extra random edges; always strongly
    connected, deterministic in the seed."""
    from .instances import _draw_below, _gen_key

    if n < 2:
        raise ValidationError("need at least 2 nodes")
    key = _gen_key(rng_seed)
    ids = list(range(1, n + 1))
    order = ids[:]
    counter = 0
    for i in range(n - 1, 0, -1):
        u, counter = _draw_below(key, 10, counter, i + 1)
        order[i], order[u] = order[u], order[i]
    edges = {(order[i], order[(i + 1) % n]) for i in range(n)}
    counter = 0
    added = 0
    while added < extra_edges:
        a, counter = _draw_below(key, 11, counter, n)
        b, counter = _draw_below(key, 11, counter, n)
        u, w = ids[a], ids[b]
        if u != w and (u, w) not in edges:
            edges.add((u, w))
            added += 1
    return Network(ids, sorted(edges))


def network_to_obj(net: Network) -> dict:
    return {"ids": list(net.ids), "edges": [list(e) for e in net.edges]}


def network_from_obj(obj, max_nodes: int = MAX_NODES, max_edges: int = MAX_EDGES) -> Network:
    try:
        return Network(
            obj["ids"], [tuple(e) for e in obj["edges"]],
            max_nodes=max_nodes, max_edges=max_edges,
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed graph object: {exc}") from exc


def dump_network(net: Network) -> str:
    return json.dumps(network_to_obj(net), separators=(",", ":"))


def load_network(text: str, max_nodes: int = MAX_NODES, max_edges: int = MAX_EDGES) -> Network:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad graph JSON: {exc}") from exc
    return network_from_obj(obj, max_nodes=max_nodes, max_edges=max_edges)
