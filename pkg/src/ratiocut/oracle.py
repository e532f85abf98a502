"""Brute-force reference answers by subset enumeration.

Nothing here touches the flow or construction code: objectives are summed
directly from edge lists with bitmasks, so agreement with the solver is
independent evidence. Subsets are visited in increasing bitmask order
(bit ``v-1`` for node ``v``) and ties keep the first, i.e. smallest, mask.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .constructions import (
    Densest,
    NormalizedCut,
    NormalizedCutPrime,
    ProblemKind,
    RatioRegions,
)
from .errors import InfeasibleError, InstanceTooLargeError, NoFiniteCutError
from .flow import CutResult, FlowNetwork
from .graph import WeightedGraph, is_infinite


@dataclass(frozen=True)
class OracleResult:
    best_set: frozenset
    best_ratio: Fraction
    evaluated_count: int


def _members(mask: int) -> frozenset:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@lru_cache(maxsize=64)
def _subset_table(g: WeightedGraph, objective: str):
    """Per subset mask: (numerator, denominator, has_inner_edge, has_outer_edge)."""
    n = g.node_count
    full = (1 << n) - 1
    edges = [((1 << (e.i - 1)) | (1 << (e.j - 1)), e.w, e.w_prime) for e in g.edges]
    weights = g.node_weights
    table = []
    for mask in range(1 << n):
        cut = inner = inner_prime = Fraction(0)
        has_in = has_out = False
        comp = full ^ mask
        for both, w, wp in edges:
            hit = mask & both
            if hit == both:
                inner += w
                inner_prime += wp
                has_in = True
            elif hit:
                cut += w
            elif comp & both == both:
                has_out = True
        vsum = sum((weights[v] for v in range(n) if mask >> v & 1), Fraction(0))
        if objective == "ncut":
            num, den = cut, inner_prime
        elif objective == "ncut_prime":
            num, den = cut, inner + cut
        elif objective == "rr":
            num, den = cut, vsum
        else:
            num, den = inner, vsum
        table.append((num, den, has_in, has_out))
    return table


def _objective(kind: ProblemKind) -> str:
    if isinstance(kind, NormalizedCutPrime):
        return "ncut_prime"
    if isinstance(kind, NormalizedCut):
        return "ncut"
    if isinstance(kind, RatioRegions):
        return "rr"
    if isinstance(kind, Densest):
        return "density"
    raise TypeError(f"unknown problem kind {kind!r}")


def _bit(v: int) -> int:
    return 1 << (v - 1)


def brute_force_ratio(g: WeightedGraph, kind: ProblemKind, limit: int = 20) -> OracleResult:
    """Exact extremum of ``kind``'s ratio over every feasible subset with positive denominator."""
    n = g.node_count
    if n > limit:
        raise InstanceTooLargeError(n, limit)
    table = _subset_table(g, _objective(kind))
    need_in = need_out = 0
    want_inner = want_outer = False
    nonempty = not_full = False
    if isinstance(kind, NormalizedCut):
        if kind.seed_in is not None:
            need_in = _bit(kind.seed_in[0]) | _bit(kind.seed_in[1])
        else:
            want_inner = True
        if kind.seed_out is not None:
            need_out = _bit(kind.seed_out[0]) | _bit(kind.seed_out[1])
        else:
            want_outer = True
    elif isinstance(kind, RatioRegions):
        if kind.source_seed is not None:
            need_in = _bit(kind.source_seed)
        else:
            nonempty = True
        if kind.sink_seed is not None:
            need_out = _bit(kind.sink_seed)
        else:
            not_full = True
    else:
        nonempty = True
    maximize = isinstance(kind, Densest) and kind.direction == "maximize"
    full = (1 << n) - 1

    best_mask = -1
    best = None
    count = 0
    for mask, (num, den, has_in, has_out) in enumerate(table):
        if mask & need_in != need_in or mask & need_out:
            continue
        if want_inner and not has_in or want_outer and not has_out:
            continue
        if nonempty and mask == 0 or not_full and mask == full:
            continue
        if den <= 0:
            continue
        count += 1
        r = num / den
        if best is None or (r > best if maximize else r < best):
            best, best_mask = r, mask
    if best is None:
        raise InfeasibleError("infeasible: no feasible subset with positive denominator")
    return OracleResult(_members(best_mask), best, count)


def brute_force_min_cut(net: FlowNetwork, limit: int = 20) -> CutResult:
    """Minimum s,t-cut by enumerating every source side; smallest mask wins ties.

    The smallest-mask minimum cut is the minimal source set, since the
    intersection of minimum cuts is a minimum cut and a subset has a smaller mask.
    """
    free = [v for v in range(net.node_count) if v not in (net.source, net.sink)]
    if len(free) > limit:
        raise InstanceTooLargeError(len(free), limit)
    arcs = [(a.tail, a.head, a.cap) for a in net.arcs]
    best = None
    best_set = None
    for mask in range(1 << len(free)):
        side = {net.source}
        for k, v in enumerate(free):
            if mask >> k & 1:
                side.add(v)
        total = Fraction(0)
        finite = True
        for u, v, c in arcs:
            if u in side and v not in side:
                if is_infinite(c):
                    finite = False
                    break
                total += c
        if finite and (best is None or total < best):
            best, best_set = total, frozenset(side)
    if best is None:
        raise NoFiniteCutError()
    return CutResult(best_set, best, True)
