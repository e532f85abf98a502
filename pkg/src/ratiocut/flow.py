"""Exact maximum flow / minimum s,t-cut.

Capacities are Fractions or ``INF``. Before solving, finite capacities are
scaled by the lcm of their denominators so the flow loop runs on Python ints;
infinite arcs keep a genuine ``math.inf`` residual and are never replaced by a
large finite number.

The solver is Dinic's algorithm. Antiparallel arcs share one residual pair.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import NoFiniteCutError
from .graph import INF, is_infinite

Capacity = Union[Fraction, float]


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cap: Capacity


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network on nodes ``0..node_count-1``."""

    node_count: int
    source: int
    sink: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        for v in (self.source, self.sink):
            if not 0 <= v < self.node_count:
                raise ValueError(f"terminal {v} out of range")
        for a in self.arcs:
            if not (0 <= a.tail < self.node_count and 0 <= a.head < self.node_count):
                raise ValueError(f"arc {a} has endpoint out of range")
            if is_infinite(a.cap):
                continue
            if not isinstance(a.cap, Fraction) or a.cap < 0:
                raise ValueError(f"arc {a} needs a nonnegative Fraction or INF capacity")

    @classmethod
    def build(cls, n: int, source: int, sink: int, arcs: Iterable[tuple]) -> "FlowNetwork":
        out = []
        for u, v, c in arcs:
            if not is_infinite(c):
                c = Fraction(c)
            out.append(Arc(u, v, c))
        return cls(n, source, sink, tuple(out))


@dataclass(frozen=True)
class CutResult:
    source_set: frozenset
    value: Fraction
    is_finite: bool = True
    lam: Optional[Fraction] = None


@dataclass(frozen=True)
class FlowResult:
    value: Fraction
    arc_flows: tuple[Fraction, ...]
    cut: CutResult
    maximal_source_set: frozenset = field(default=frozenset())


def cut_value(net: FlowNetwork, s_set) -> Capacity:
    """Total capacity of arcs leaving ``s_set``; ``INF`` if any infinite arc leaves it."""
    s_set = frozenset(s_set)
    if net.source not in s_set or net.sink in s_set:
        raise ValueError("cut set must contain the source and exclude the sink")
    total = Fraction(0)
    for a in net.arcs:
        if a.tail in s_set and a.head not in s_set:
            if is_infinite(a.cap):
                return INF
            total += a.cap
    return total


def _scale(net: FlowNetwork) -> int:
    lcm = 1
    for a in net.arcs:
        if not is_infinite(a.cap):
            lcm = math.lcm(lcm, a.cap.denominator)
    return lcm


class _Residual:
    """Residual graph with arc pairs ``2p`` / ``2p + 1``."""

    def __init__(self, net: FlowNetwork, scale: int):
        n = net.node_count
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.res: list = []
        self.pair_of: list[tuple[int, bool]] = []  # original arc -> (pair, forward?)
        pairs: dict[tuple[int, int], int] = {}
        for a in net.arcs:
            u, v = a.tail, a.head
            c = INF if is_infinite(a.cap) else a.cap.numerator * (scale // a.cap.denominator)
            if u == v:
                self.pair_of.append((-1, True))
                continue
            key = (u, v) if u < v else (v, u)
            p = pairs.get(key)
            if p is None:
                p = len(self.head) // 2
                pairs[key] = p
                self.head += [key[1], key[0]]
                self.res += [0, 0]
                self.adj[key[0]].append(2 * p)
                self.adj[key[1]].append(2 * p + 1)
            forward = u < v
            e = 2 * p if forward else 2 * p + 1
            self.res[e] = self.res[e] + c
            self.pair_of.append((p, forward))
        self.cap0 = list(self.res)
        self.flow = [0] * len(self.res)

    def dinic(self, s: int, t: int) -> tuple[int, list[int]]:
        adj, head, res, flow = self.adj, self.head, self.res, self.flow
        n = self.n
        total = 0
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                lu = level[u] + 1
                for e in adj[u]:
                    if res[e] > 0:
                        v = head[e]
                        if level[v] < 0:
                            level[v] = lu
                            q.append(v)
            if level[t] < 0:
                return total, level
            lt = level[t]
            it = [0] * n
            path: list[int] = []
            u = s
            while True:
                if u == t:
                    d = min(res[e] for e in path)
                    if d == INF:
                        raise NoFiniteCutError()
                    total += d
                    cut_at = -1
                    for k, e in enumerate(path):
                        res[e] -= d
                        res[e ^ 1] += d
                        flow[e] += d
                        flow[e ^ 1] -= d
                        if cut_at < 0 and res[e] == 0:
                            cut_at = k
                    del path[cut_at:]
                    u = head[path[-1]] if path else s
                    continue
                arcs = adj[u]
                i = it[u]
                nxt = level[u] + 1
                na = len(arcs)
                while i < na:
                    e = arcs[i]
                    if res[e] > 0:
                        v = head[e]
                        if level[v] == nxt and (nxt < lt or v == t):
                            break
                    i += 1
                it[u] = i
                if i < na:
                    e = arcs[i]
                    path.append(e)
                    u = head[e]
                elif u == s:
                    break
                else:
                    level[u] = -1
                    e = path.pop()
                    u = head[e ^ 1]
                    it[u] += 1

    def reaching(self, t: int) -> list[bool]:
        """Nodes that can still reach ``t`` in the residual graph."""
        adj, head, res = self.adj, self.head, self.res
        seen = [False] * self.n
        seen[t] = True
        q = deque([t])
        while q:
            v = q.popleft()
            for e in adj[v]:
                u = head[e]
                if not seen[u] and res[e ^ 1] > 0:
                    seen[u] = True
                    q.append(u)
        return seen


def max_flow(net: FlowNetwork, lam: Optional[Fraction] = None) -> FlowResult:
    """Maximum flow with a per-arc flow certificate and the minimal/maximal min-cut sets.

    Raises :class:`NoFiniteCutError` when every s,t-cut is infinite.
    """
    scale = _scale(net)
    r = _Residual(net, scale)
    total, level = r.dinic(net.source, net.sink)
    minimal = frozenset(v for v in range(net.node_count) if level[v] >= 0)
    reach_t = r.reaching(net.sink)
    maximal = frozenset(v for v in range(net.node_count) if not reach_t[v])
    value = Fraction(total, scale)

    # split each pair's net flow back over the original arcs, capacity-first
    remaining: dict[tuple[int, bool], Fraction] = {}
    flows = []
    for a, (p, forward) in zip(net.arcs, r.pair_of):
        if p < 0:
            flows.append(Fraction(0))
            continue
        key = (p, forward)
        if key not in remaining:
            f = r.flow[2 * p] if forward else r.flow[2 * p + 1]
            remaining[key] = Fraction(max(f, 0), scale)
        take = remaining[key] if is_infinite(a.cap) else min(a.cap, remaining[key])
        remaining[key] -= take
        flows.append(take)
    cut = CutResult(minimal, value, True, lam)
    return FlowResult(value, tuple(flows), cut, maximal)


def min_cut(net: FlowNetwork, lam: Optional[Fraction] = None) -> CutResult:
    """Minimum s,t-cut with the unique minimal source set."""
    return max_flow(net, lam).cut


def check_flow(net: FlowNetwork, flows) -> Fraction:
    """Verify capacity and conservation of ``flows``; return the net outflow of the source."""
    if len(flows) != len(net.arcs):
        raise ValueError("one flow value per arc required")
    balance = [Fraction(0)] * net.node_count
    for a, f in zip(net.arcs, flows):
        if f < 0 or (not is_infinite(a.cap) and f > a.cap):
            raise ValueError(f"flow {f} violates capacity of {a}")
        balance[a.tail] -= f
        balance[a.head] += f
    for v, b in enumerate(balance):
        if v not in (net.source, net.sink) and b != 0:
            raise ValueError(f"conservation violated at node {v}: {b}")
    return -balance[net.source]
