"""Reduction networks for the ratio problems and the maps back to graph node sets.

Every problem is handled as a minimisation of ``num(S) / den(S)`` over a
feasible family, linearised to ``g(lam) = min_S num(S) - lam * den(S)``.
For a minimum cut of the reduction network at ``lam``::

    g(lam) = cut_value - (offset_const + offset_slope * lam)

Maximum-density subgraph is posed as minimising ``-C(S) / V(S)``, so its
parameter runs over ``[-hi, 0]`` and equals minus the density threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InfeasibleError, RatioCutError, UndefinedRatioError
from .flow import CutResult
from .graph import INF, WeightedGraph, capacity, cut_capacity, node_weight_sum
from .parametric import Line, ParametricArc, ParametricNetwork

EdgeKey = tuple[int, int]


def _edge_key(e) -> EdgeKey:
    i, j = int(e[0]), int(e[1])
    if i == j:
        raise ValueError(f"seed edge ({i},{j}) is a self-loop")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class NormalizedCut:
    """min ``C(S, S^c) / C'(S)``; seeds fix one edge inside S and one inside S^c.

    ``None`` seeds describe the unseeded family (some edge inside S and some
    edge inside its complement); that family is only accepted by the oracle and
    by :func:`ratiocut.solver.solve_auto_seeds`.
    """

    seed_in: Optional[EdgeKey] = None
    seed_out: Optional[EdgeKey] = None

    def __post_init__(self):
        if self.seed_in is not None:
            object.__setattr__(self, "seed_in", _edge_key(self.seed_in))
        if self.seed_out is not None:
            object.__setattr__(self, "seed_out", _edge_key(self.seed_out))
        if self.seed_in is not None and self.seed_in == self.seed_out:
            raise InfeasibleError("seed_in and seed_out must be different edges")

    @property
    def seeded(self) -> bool:
        return self.seed_in is not None and self.seed_out is not None


@dataclass(frozen=True)
class NormalizedCutPrime(NormalizedCut):
    """min ``C(S, S^c) / C(S, V)`` with numerator weights on both sides."""


@dataclass(frozen=True)
class RatioRegions:
    """min ``C(S, S^c) / V(S)`` with ``source_seed`` in S and ``sink_seed`` outside."""

    source_seed: Optional[int] = None
    sink_seed: Optional[int] = None

    def __post_init__(self):
        if self.source_seed is not None and self.source_seed == self.sink_seed:
            raise InfeasibleError("source and sink seeds must differ")

    @property
    def seeded(self) -> bool:
        return self.source_seed is not None and self.sink_seed is not None


@dataclass(frozen=True)
class Densest:
    """Extremise ``C(S) / V(S)`` over nonempty S; ``direction`` is maximize or minimize."""

    direction: str = "maximize"

    def __post_init__(self):
        if self.direction not in ("maximize", "minimize"):
            raise ValueError("direction must be 'maximize' or 'minimize'")

    @property
    def seeded(self) -> bool:
        return True


ProblemKind = Union[NormalizedCut, NormalizedCutPrime, RatioRegions, Densest]


def maximizes(kind: ProblemKind) -> bool:
    return isinstance(kind, Densest) and kind.direction == "maximize"


# --- objective evaluation -------------------------------------------------


def evaluate_ratio(g: WeightedGraph, s, kind: ProblemKind) -> Fraction:
    """The problem's own objective value for node set ``s``."""
    s = frozenset(s)
    if isinstance(kind, NormalizedCutPrime):
        cut = cut_capacity(g, s)
        den = capacity(g, s, s) + cut
    elif isinstance(kind, NormalizedCut):
        cut = cut_capacity(g, s)
        den = capacity(g, s, s, "denominator")
    elif isinstance(kind, RatioRegions):
        cut = cut_capacity(g, s)
        den = node_weight_sum(g, s)
    elif isinstance(kind, Densest):
        cut = capacity(g, s, s)
        den = node_weight_sum(g, s)
    else:
        raise TypeError(f"unknown problem kind {kind!r}")
    if den == 0:
        raise UndefinedRatioError()
    return cut / den


def objective_parts(g: WeightedGraph, s, kind: ProblemKind) -> tuple[Fraction, Fraction]:
    """``(num, den)`` of the minimisation the solver works on.

    Identical to the ratio's own parts except for maximum density, where the
    numerator is negated.
    """
    s = frozenset(s)
    if isinstance(kind, NormalizedCutPrime):
        cut = cut_capacity(g, s)
        return cut, capacity(g, s, s) + cut
    if isinstance(kind, NormalizedCut):
        return cut_capacity(g, s), capacity(g, s, s, "denominator")
    if isinstance(kind, RatioRegions):
        return cut_capacity(g, s), node_weight_sum(g, s)
    if isinstance(kind, Densest):
        inner = capacity(g, s, s)
        return (-inner if maximizes(kind) else inner), node_weight_sum(g, s)
    raise TypeError(f"unknown problem kind {kind!r}")


def _edge_nodes(e: EdgeKey) -> frozenset:
    return frozenset(e)


def is_feasible(g: WeightedGraph, s, kind: ProblemKind) -> bool:
    """Seed/family constraints only; the denominator sign is checked separately."""
    s = frozenset(s)
    if isinstance(kind, NormalizedCut):
        if kind.seed_in is not None:
            if not _edge_nodes(kind.seed_in) <= s:
                return False
        if kind.seed_out is not None:
            if _edge_nodes(kind.seed_out) & s:
                return False
        if kind.seed_in is None and not any(e.i in s and e.j in s for e in g.edges):
            return False
        if kind.seed_out is None and not any(
            e.i not in s and e.j not in s for e in g.edges
        ):
            return False
        return True
    if isinstance(kind, RatioRegions):
        if kind.source_seed is not None and kind.source_seed not in s:
            return False
        if kind.sink_seed is not None and kind.sink_seed in s:
            return False
        if kind.source_seed is None and not s:
            return False
        if kind.sink_seed is None and len(s) == g.node_count:
            return False
        return True
    if isinstance(kind, Densest):
        return bool(s)
    raise TypeError(f"unknown problem kind {kind!r}")


# --- network assembly -----------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """A reduction network together with its back-map to the graph.

    ``x_node[v]`` is the network node of graph node ``v`` (absent when ``v``
    was merged into a terminal). ``edge_node[k]`` is the network node of edge
    ``k`` for constructions that have edge nodes.
    """

    graph: WeightedGraph
    kind: ProblemKind
    network: ParametricNetwork
    x_node: dict
    edge_node: dict
    in_source: frozenset
    in_sink: frozenset
    offset_const: Fraction
    offset_slope: Fraction

    def offset(self, lam: Fraction) -> Fraction:
        return self.offset_const + self.offset_slope * lam

    def g_value(self, cut: CutResult) -> Fraction:
        return cut.value - self.offset(cut.lam)

    def g_line(self, line: Line) -> Line:
        return Line(line.intercept - self.offset_const, line.slope - self.offset_slope)

    @property
    def node_count(self) -> int:
        return self.network.node_count

    def decode(self, cut_or_set) -> frozenset:
        """Graph node set of a finite cut's source side."""
        if isinstance(cut_or_set, CutResult):
            if not cut_or_set.is_finite:
                raise RatioCutError("cannot decode an infinite cut")
            side = cut_or_set.source_set
        else:
            side = frozenset(cut_or_set)
        s = set(self.in_source)
        for v, x in self.x_node.items():
            if x in side:
                s.add(v)
        for k, y in self.edge_node.items():
            if y in side:
                e = self.graph.edges[k]
                if e.i not in s or e.j not in s:
                    raise RatioCutError(
                        f"inconsistent cut: edge node ({e.i},{e.j}) on the source side without both endpoints"
                    )
        return frozenset(s)


class _Builder:
    SOURCE = 0
    SINK = 1

    def __init__(self):
        self.count = 2
        self.arcs: list[tuple[int, int, object, Fraction]] = []

    def node(self) -> int:
        self.count += 1
        return self.count - 1

    def arc(self, u: int, v: int, const=Fraction(0), slope=Fraction(0)) -> None:
        self.arcs.append((u, v, const, Fraction(slope)))

    def shrink(self, to_source: set, to_sink: set, lo: Fraction, hi: Fraction):
        """Merge node groups into the terminals, renumber, and fold s->t arcs.

        Returns the network, the old->new node map, and the dropped s->t
        capacity as ``(const, slope)``.
        """
        if to_source & to_sink:
            raise InfeasibleError("infeasible seeds: a node is forced to both sides")
        rep = {}
        for v in to_source:
            rep[v] = self.SOURCE
        for v in to_sink:
            rep[v] = self.SINK
        renum = {self.SOURCE: 0, self.SINK: 1}
        for v in range(2, self.count):
            if v not in rep:
                renum[v] = len(renum)
        dropped_c, dropped_k = Fraction(0), Fraction(0)
        arcs = []
        for u, v, c, k in self.arcs:
            u = rep.get(u, u)
            v = rep.get(v, v)
            if u == v or v == self.SOURCE or u == self.SINK:
                continue
            if u == self.SOURCE and v == self.SINK:
                if c == INF:
                    raise InfeasibleError("infeasible seeds: infinite source-sink arc")
                dropped_c += c
                dropped_k += k
                continue
            arcs.append(ParametricArc(renum[u], renum[v], c, k))
        net = ParametricNetwork(len(renum), 0, 1, tuple(arcs), lo, hi)
        return net, renum, dropped_c, dropped_k


def _lcm_den(values) -> int:
    out = 1
    for q in values:
        out = math.lcm(out, Fraction(q).denominator)
    return out


def _upper(u: Fraction, den_values) -> Fraction:
    """Strict upper bound on every breakpoint: ``U * D + 1``.

    Denominator sums differ by multiples of ``1/D`` and numerators by at
    most ``U``, so no two cut lines cross beyond ``U * D``.
    """
    return u * _lcm_den(den_values) + 1


def build_lambda_nc(g: WeightedGraph, seed_in, seed_out) -> Reduction:
    """Network whose min cut solves ``min C(S,S^c) - lam * C'(S)`` with seeds.

    One node per graph node and per edge. Edge ``[i,j]`` contributes arcs
    ``x_i <-> x_j`` of capacity ``w``, infinite arcs ``y_ij -> x_i, x_j`` and a
    source arc ``s -> y_ij`` of capacity ``lam * w'``. The ``seed_in`` edge node
    and its endpoints merge into the source; ``seed_out`` likewise into the sink.
    """
    kind = NormalizedCut(seed_in, seed_out)
    for e in (kind.seed_in, kind.seed_out):
        if not g.has_edge(*e):
            raise InfeasibleError(f"seed edge {e} is not an edge of the graph")
    if set(kind.seed_in) & set(kind.seed_out):
        raise InfeasibleError("infeasible seeds: seed edges share a node")
    b = _Builder()
    x = {v: b.node() for v in g.nodes}
    y = {}
    for k, e in enumerate(g.edges):
        yk = b.node()
        y[k] = yk
        b.arc(x[e.i], x[e.j], e.w)
        b.arc(x[e.j], x[e.i], e.w)
        b.arc(yk, x[e.i], INF)
        b.arc(yk, x[e.j], INF)
        b.arc(b.SOURCE, yk, Fraction(0), e.w_prime)
    k_in = g.edge_index(*kind.seed_in)
    k_out = g.edge_index(*kind.seed_out)
    to_source = {y[k_in], x[kind.seed_in[0]], x[kind.seed_in[1]]}
    to_sink = {y[k_out], x[kind.seed_out[0]], x[kind.seed_out[1]]}
    hi = _upper(g.total_weight(), (e.w_prime for e in g.edges))
    net, renum, dc, dk = b.shrink(to_source, to_sink, Fraction(0), hi)
    w_total = g.total_weight("denominator")
    return Reduction(
        graph=g,
        kind=kind,
        network=net,
        x_node={v: renum[x[v]] for v in g.nodes if x[v] in renum},
        edge_node={k: renum[y[k]] for k in y if y[k] in renum},
        in_source=frozenset(kind.seed_in),
        in_sink=frozenset(kind.seed_out),
        offset_const=-dc,
        offset_slope=w_total - dk,
    )


def build_lambda_rr(g: WeightedGraph, source_seed: int, sink_seed: int) -> Reduction:
    """s-excess network for ``min C(S,S^c) - lam * V(S)``.

    Positive node weights become source arcs ``s -> x_j`` of capacity ``lam*v_j``,
    negative ones sink arcs ``x_j -> t`` of capacity ``lam*|v_j|``.
    """
    kind = RatioRegions(source_seed, sink_seed)
    for v in (source_seed, sink_seed):
        if not 1 <= v <= g.node_count:
            raise InfeasibleError(f"seed node {v} out of range")
    b = _Builder()
    x = {v: b.node() for v in g.nodes}
    for e in g.edges:
        b.arc(x[e.i], x[e.j], e.w)
        b.arc(x[e.j], x[e.i], e.w)
    positive = Fraction(0)
    for v in g.nodes:
        wt = g.node_weights[v - 1]
        if wt > 0:
            b.arc(b.SOURCE, x[v], Fraction(0), wt)
            positive += wt
        elif wt < 0:
            b.arc(x[v], b.SINK, Fraction(0), -wt)
    hi = _upper(g.total_weight(), g.node_weights)
    net, renum, dc, dk = b.shrink({x[source_seed]}, {x[sink_seed]}, Fraction(0), hi)
    return Reduction(
        graph=g,
        kind=kind,
        network=net,
        x_node={v: renum[x[v]] for v in g.nodes if x[v] in renum},
        edge_node={},
        in_source=frozenset([source_seed]),
        in_sink=frozenset([sink_seed]),
        offset_const=-dc,
        offset_slope=positive - dk,
    )


def build_densest(g: WeightedGraph) -> Reduction:
    """Bipartite edge/node network for maximum density.

    ``s -> e`` with capacity ``w_e``, infinite arcs from ``e`` to its endpoints,
    and ``x_j -> t`` with capacity ``-lam * v_j`` for ``lam`` in ``[-hi, 0]``.
    Requires strictly positive node weights.
    """
    if not g.edges:
        raise InfeasibleError("densest subgraph needs at least one edge")
    if any(v <= 0 for v in g.node_weights):
        raise InfeasibleError("densest subgraph needs positive node weights")
    b = _Builder()
    x = {v: b.node() for v in g.nodes}
    y = {}
    for k, e in enumerate(g.edges):
        yk = b.node()
        y[k] = yk
        b.arc(b.SOURCE, yk, e.w)
        b.arc(yk, x[e.i], INF)
        b.arc(yk, x[e.j], INF)
    for v in g.nodes:
        b.arc(x[v], b.SINK, Fraction(0), -g.node_weights[v - 1])
    lo = -_upper(g.total_weight(), g.node_weights)
    net, renum, dc, dk = b.shrink(set(), set(), lo, Fraction(0))
    return Reduction(
        graph=g,
        kind=Densest("maximize"),
        network=net,
        x_node={v: renum[x[v]] for v in g.nodes},
        edge_node={k: renum[y[k]] for k in y},
        in_source=frozenset(),
        in_sink=frozenset(),
        offset_const=g.total_weight(),
        offset_slope=Fraction(0),
    )


def build(g: WeightedGraph, kind: ProblemKind) -> Reduction:
    """Reduction network for a seeded kind (normalized cut' uses ``w' := w``)."""
    if isinstance(kind, NormalizedCutPrime):
        red = build_lambda_nc(g.numerator_only(), kind.seed_in, kind.seed_out)
        return red
    if isinstance(kind, NormalizedCut):
        if not kind.seeded:
            raise ValueError("normalized cut needs both seeds; use solve_auto_seeds")
        return build_lambda_nc(g, kind.seed_in, kind.seed_out)
    if isinstance(kind, RatioRegions):
        if not kind.seeded:
            raise ValueError("ratio regions needs both seeds; use solve_auto_seeds")
        return build_lambda_rr(g, kind.source_seed, kind.sink_seed)
    if isinstance(kind, Densest):
        if kind.direction != "maximize":
            raise ValueError("minimum density has no reduction network")
        return build_densest(g)
    raise TypeError(f"unknown problem kind {kind!r}")


def decode(mapping: Reduction, cut: CutResult) -> frozenset:
    return mapping.decode(cut)
