"""Acyclic directed multigraphs, their line-graph structure and unit-capacity cuts."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Network:
    """Acyclic directed multigraph on nodes ``0..n-1``.

    ``edges[i] = (tail, head)``; the index ``i`` is the edge's row/column in
    the coding matrices. ``orders`` is optional and 1-based when present.
    ``processes`` optionally maps each source process to the node where it
    is injected.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    sources: frozenset[int]
    receivers: frozenset[int]
    orders: tuple[int, ...] | None = None
    processes: tuple[int, ...] | None = None
    _topo: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def tail(self, e: int) -> int:
        return self.edges[e][0]

    def head(self, e: int) -> int:
        return self.edges[e][1]

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        lists = [[] for _ in range(self.n)]
        for i, (_, h) in enumerate(self.edges):
            lists[h].append(i)
        return tuple(tuple(x) for x in lists)

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        lists = [[] for _ in range(self.n)]
        for i, (t, _) in enumerate(self.edges):
            lists[t].append(i)
        return tuple(tuple(x) for x in lists)

    def in_edges(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def delta_in(self, v: int) -> int:
        return len(self._in[v])

    def delta_out(self, v: int) -> int:
        return len(self._out[v])

    @property
    def topological_order(self) -> tuple[int, ...]:
        return self._topo

    @cached_property
    def edge_order(self) -> tuple[int, ...]:
        """Edges sorted so every edge precedes the edges leaving its head."""
        rank = {v: i for i, v in enumerate(self._topo)}
        return tuple(sorted(range(len(self.edges)), key=lambda e: (rank[self.tail(e)], e)))

    def order(self, v: int) -> int | None:
        return None if self.orders is None else self.orders[v]

    def intermediate_nodes(self) -> list[int]:
        """Relays: at least one in- and one out-edge, neither source nor receiver."""
        return [
            v
            for v in range(self.n)
            if v not in self.sources
            and v not in self.receivers
            and self._in[v]
            and self._out[v]
        ]

    def active_nodes(self) -> list[int]:
        return [v for v in range(self.n) if self._in[v] or self._out[v]]

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "sources": sorted(self.sources),
            "receivers": sorted(self.receivers),
        }
        if self.orders is not None:
            d["orders"] = list(self.orders)
        if self.processes is not None:
            d["processes"] = list(self.processes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"


def _toposort(n: int, edges) -> list[int] | None:
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for t, h in edges:
        indeg[h] += 1
        succ[t].append(h)
    ready = deque(v for v in range(n) if indeg[v] == 0)
    out = []
    while ready:
        v = ready.popleft()
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return out if len(out) == n else None


def _reachable(n: int, edges, starts) -> set[int]:
    succ = [[] for _ in range(n)]
    for t, h in edges:
        succ[t].append(h)
    seen = set(starts)
    stack = list(starts)
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def build_network(
    n: int,
    edges,
    sources,
    receivers,
    orders=None,
    processes=None,
) -> Network:
    """Validate and freeze a network; rejects cycles and unreachable receivers."""
    edges = tuple((int(t), int(h)) for t, h in edges)
    if not edges:
        raise GraphError("edge list is empty")
    if n < 1:
        raise GraphError(f"node count must be positive, got {n}")
    for t, h in edges:
        if not (0 <= t < n and 0 <= h < n):
            raise GraphError(f"edge ({t}, {h}) has a node outside [0, {n})")
        if t == h:
            raise GraphError(f"self-loop at node {t}")
    sources = frozenset(int(s) for s in sources)
    receivers = frozenset(int(r) for r in receivers)
    if not sources:
        raise GraphError("at least one source is required")
    if not receivers:
        raise GraphError("at least one receiver is required")
    for v in sources | receivers:
        if not 0 <= v < n:
            raise GraphError(f"node {v} outside [0, {n})")
    topo = _toposort(n, edges)
    if topo is None:
        raise GraphError("graph contains a cycle")
    reach = _reachable(n, edges, sources)
    for r in sorted(receivers):
        if r not in reach:
            raise GraphError(f"receiver {r} is not reachable from any source")
    if orders is not None:
        orders = tuple(int(o) for o in orders)
        if len(orders) != n:
            raise GraphError("orders must list one label per node")
    if processes is not None:
        processes = tuple(int(p) for p in processes)
        for p in processes:
            if p not in sources:
                raise GraphError(f"process placed at non-source node {p}")
    return Network(n, edges, sources, receivers, orders, processes, tuple(topo))


def network_from_dict(d: dict) -> Network:
    return build_network(
        d["n"], d["edges"], d["sources"], d["receivers"], d.get("orders"), d.get("processes")
    )


def network_from_json(text: str) -> Network:
    return network_from_dict(json.loads(text))


def complete_dag(n: int, seed=None) -> Network:
    """Complete acyclic digraph: random labels, then an edge from every
    lower-order node to every higher-order one."""
    if n < 2:
        raise GraphError(f"complete DAG needs n >= 2, got {n}")
    node_of_order = np.random.default_rng(seed).permutation(n).tolist()
    orders = [0] * n
    for rank, v in enumerate(node_of_order):
        orders[v] = rank + 1
    edges = [
        (node_of_order[i], node_of_order[j]) for i in range(n) for j in range(i + 1, n)
    ]
    return build_network(n, edges, [node_of_order[0]], [node_of_order[-1]], orders)


def butterfly() -> Network:
    """The seven-node multicast example, nodes labelled 1..7.

    Node 0 is an unused placeholder so that ids match the usual figure.
    """
    edges = [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (2, 6), (5, 6), (3, 7), (5, 7)]
    return build_network(8, edges, [1], [6, 7])


@dataclass(frozen=True)
class LineGraphAdjacency:
    """Pairs (e', e) with head(e') == tail(e): the support of F."""

    pairs: tuple[tuple[int, int], ...]
    edge_order: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in set(self.pairs)


def line_graph_adjacency(net: Network) -> LineGraphAdjacency:
    pairs = []
    for e_in, (_, h) in enumerate(net.edges):
        for e_out in net.out_edges(h):
            pairs.append((e_in, e_out))
    return LineGraphAdjacency(tuple(sorted(pairs)), net.edge_order)


def max_flow(net: Network, supply: dict[int, int | None], sink: int) -> int:
    """Unit-capacity max flow from a super source (Edmonds-Karp).

    ``supply`` maps each source node to the capacity of its super-source
    arc; ``None`` means unbounded.
    """
    if sink in supply:
        raise GraphError("sink cannot be a source")
    big = len(net.edges) + 1
    S = net.n
    cap: dict[tuple[int, int], int] = {}
    adj = [set() for _ in range(net.n + 1)]
    for t, h in net.edges:
        cap[(t, h)] = cap.get((t, h), 0) + 1
        cap.setdefault((h, t), 0)
        adj[t].add(h)
        adj[h].add(t)
    for s, c in supply.items():
        cap[(S, s)] = big if c is None else c
        cap.setdefault((s, S), 0)
        adj[S].add(s)
        adj[s].add(S)
    flow = 0
    while True:
        parent = {S: None}
        queue = deque([S])
        while queue and sink not in parent:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in parent and cap[(u, w)] > 0:
                    parent[w] = u
                    queue.append(w)
        if sink not in parent:
            return flow
        path = []
        w = sink
        while parent[w] is not None:
            path.append((parent[w], w))
            w = parent[w]
        push = min(cap[a] for a in path)
        for u, w in path:
            cap[(u, w)] -= push
            cap[(w, u)] += push
        flow += push


def min_cut(net: Network, source: int, sink: int) -> int:
    """Minimum number of edges separating ``source`` from ``sink``."""
    if source == sink:
        raise GraphError("source and sink must differ")
    for v in (source, sink):
        if not 0 <= v < net.n:
            raise GraphError(f"node {v} not in graph")
    return max_flow(net, {source: None}, sink)

