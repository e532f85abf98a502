"""Optimal ratio solutions from the parametric cut reductions.

Three drivers share one lambda-question oracle: Dinkelbach iteration,
a full breakpoint sweep, and bisection with an exact finishing step. The
question at ``lam`` is answered *yes* iff ``g(lam) < 0``.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .constructions import (
    Densest,
    NormalizedCut,
    NormalizedCutPrime,
    ProblemKind,
    RatioRegions,
    Reduction,
    build,
    evaluate_ratio,
    is_feasible,
    maximizes,
    objective_parts,
)
from .errors import InfeasibleError, UndefinedRatioError
from .graph import WeightedGraph
from .parametric import Line, breakpoints, flow_at

METHODS = ("dinkelbach", "breakpoints", "binary_search")


@dataclass(frozen=True)
class Piece:
    """One parameter interval of the nested sequence, decoded to graph nodes."""

    start: Fraction
    nodes: frozenset
    line: Line  # g(lam) on this interval: num(S) - lam * den(S)
    ratio: Optional[Fraction]


@dataclass(frozen=True)
class NestedSolutions:
    lo: Fraction
    hi: Fraction
    initial_set: frozenset
    pieces: tuple[Piece, ...]

    @property
    def breakpoints(self) -> list[Piece]:
        """Pieces whose set differs from the set just before them."""
        out = []
        prev = self.initial_set
        for p in self.pieces:
            if p.nodes != prev:
                out.append(p)
            prev = p.nodes
        return out

    def g(self, lam) -> Fraction:
        lam = Fraction(lam)
        line = self.pieces[0].line
        for p in self.pieces[1:]:
            if p.start < lam:
                line = p.line
        return line(lam)


@dataclass(frozen=True)
class RatioSolution:
    """Optimal set and ratio.

    ``lambda_star`` is the root of the problem's own ``g`` and so equals
    ``ratio``. ``parameter`` is the root in the constructed network: for
    normalized cut' that network is the equivalent normalized cut, so
    ``ratio = r / (1 + r)`` with ``r = parameter``; for maximum density it
    minimises the negated ratio, so ``parameter = -ratio``.
    """

    kind: ProblemKind
    optimal_set: frozenset
    ratio: Fraction
    lambda_star: Fraction
    method: str
    parameter: Optional[Fraction] = None
    nested: Optional[NestedSolutions] = None
    iterates: tuple[Fraction, ...] = ()
    cut_calls: int = 0
    bisection_steps: int = 0


@dataclass(frozen=True)
class LambdaAnswer:
    lam: Fraction
    value: Fraction  # g(lam)
    nodes: frozenset  # decoded minimal source set
    maximal_nodes: frozenset


class _Problem:
    """A seeded kind bound to its reduction, in the solver's own (num, den) terms."""

    def __init__(self, g: WeightedGraph, kind: ProblemKind):
        self.graph = g
        self.kind = kind
        if isinstance(kind, NormalizedCutPrime):
            self.work_graph = g.numerator_only()
            self.work_kind: ProblemKind = NormalizedCut(kind.seed_in, kind.seed_out)
        else:
            self.work_graph = g
            self.work_kind = kind
        self.reduction: Reduction = build(g, kind)
        self.calls = 0

    def parts(self, s) -> tuple[Fraction, Fraction]:
        return objective_parts(self.work_graph, s, self.work_kind)

    def ask(self, lam: Fraction) -> LambdaAnswer:
        self.calls += 1
        red = self.reduction
        res = flow_at(red.network, lam)
        value = red.g_value(res.cut)
        nodes = red.decode(res.cut)
        num, den = self.parts(nodes)
        if num - lam * den != value:
            raise AssertionError(f"reduction identity failed at lambda={lam}")
        return LambdaAnswer(lam, value, nodes, red.decode(res.maximal_source_set))

    def user_ratio(self, lam: Fraction) -> Fraction:
        if isinstance(self.kind, NormalizedCutPrime):
            return lam / (1 + lam)
        if maximizes(self.kind):
            return -lam
        return lam

    def pick_set(self, ans: LambdaAnswer, fallback: Optional[frozenset]) -> frozenset:
        """Minimal source set at the root when it has positive denominator."""
        for cand in (ans.nodes, ans.maximal_nodes, fallback):
            if cand is None:
                continue
            num, den = self.parts(cand)
            if den > 0 and num == ans.lam * den and is_feasible(self.graph, cand, self.kind):
                return cand
        raise InfeasibleError("no feasible set with positive denominator")

    def start(self) -> frozenset:
        """A feasible set with positive denominator and ``g(hi) <= 0``."""
        hi = self.reduction.network.hi
        ans = self.ask(hi)
        for cand in (ans.nodes, ans.maximal_nodes):
            num, den = self.parts(cand)
            if den > 0 and num - hi * den <= 0:
                return cand
        raise InfeasibleError("no feasible set with positive denominator")

    def ratio_of(self, s) -> Fraction:
        num, den = self.parts(s)
        return num / den


def _dinkelbach(p: _Problem, s: frozenset, iterates: list) -> tuple[Fraction, frozenset]:
    while True:
        lam = p.ratio_of(s)
        iterates.append(lam)
        ans = p.ask(lam)
        if ans.value < 0:
            num, den = p.parts(ans.nodes)
            if den <= 0:
                raise AssertionError("negative g value from a set without positive denominator")
            s = ans.nodes
            continue
        return lam, p.pick_set(ans, s)


def _finish(p: _Problem, method: str, lam: Fraction, s: frozenset, **extra) -> RatioSolution:
    ratio = evaluate_ratio(p.graph, s, p.kind)
    if ratio != p.user_ratio(lam):
        raise AssertionError(f"ratio {ratio} does not match root {lam}")
    return RatioSolution(
        kind=p.kind,
        optimal_set=s,
        ratio=ratio,
        lambda_star=ratio,
        method=method,
        parameter=lam,
        cut_calls=p.calls,
        **extra,
    )


def _nested(p: _Problem) -> NestedSolutions:
    red = p.reduction
    seq = breakpoints(red.network)
    p.calls += seq.cut_calls
    raw = [(seq.lo, red.decode(seq.initial_set), red.g_line(seq.initial_line))]
    for start, nodes, line in seq.pieces():
        raw.append((start, red.decode(nodes), red.g_line(line)))
    initial = raw[0][1]
    pieces: list[Piece] = []
    for start, nodes, line in raw[1:]:
        if pieces and pieces[-1].nodes == nodes:
            prev = pieces[-1]
            pieces[-1] = Piece(prev.start, nodes, line, prev.ratio)
            continue
        pieces.append(Piece(start, nodes, line, _ratio_or_none(p, nodes)))
    return NestedSolutions(seq.lo, seq.hi, initial, tuple(pieces))


def _ratio_or_none(p: _Problem, nodes) -> Optional[Fraction]:
    if not is_feasible(p.graph, nodes, p.kind):
        return None
    try:
        return evaluate_ratio(p.graph, nodes, p.kind)
    except UndefinedRatioError:
        return None


def _root_from_nested(nested: NestedSolutions, p: _Problem) -> Fraction:
    best = None
    for piece in nested.pieces:
        den = -piece.line.slope
        if den > 0:
            r = piece.line.intercept / den
            if best is None or r < best:
                best = r
    if best is None:
        raise InfeasibleError("no feasible set with positive denominator")
    return best


def solve(
    g: WeightedGraph,
    kind: ProblemKind,
    method: str = "dinkelbach",
    tolerance: Optional[Fraction] = None,
) -> RatioSolution:
    """Exact optimum of ``kind`` on ``g``.

    Unseeded normalized cut / ratio regions kinds are routed to
    :func:`solve_auto_seeds` with every seed pair.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if isinstance(kind, Densest) and kind.direction == "minimize":
        return _min_density(g, kind, method)
    if not kind.seeded:
        return solve_auto_seeds(g, kind, method=method)
    if method == "binary_search":
        return binary_search_lambda(g, kind, tolerance)
    p = _Problem(g, kind)
    if method == "breakpoints":
        nested = _nested(p)
        lam = _root_from_nested(nested, p)
        ans = p.ask(lam)
        if ans.value != 0:
            raise AssertionError("breakpoint root is not a zero of g")
        s = p.pick_set(ans, None)
        return _finish(p, method, lam, s, nested=nested)
    iterates: list[Fraction] = []
    lam, s = _dinkelbach(p, p.start(), iterates)
    return _finish(p, method, lam, s, iterates=tuple(iterates))


def binary_search_lambda(
    g: WeightedGraph, kind: ProblemKind, tolerance: Optional[Fraction] = None
) -> RatioSolution:
    """Bisect on the sign of ``g`` until the bracket is below ``tolerance``, then
    finish exactly with Dinkelbach steps from the best set seen.

    The default tolerance ``1 / F^2`` (``F`` the total denominator weight in
    its smallest unit) separates distinct ratios of integer instances, so the
    finishing step is usually a single cut.
    """
    if isinstance(kind, Densest) and kind.direction == "minimize":
        return _min_density(g, kind, "binary_search")
    p = _Problem(g, kind)
    best = p.start()
    lo = p.reduction.network.lo
    hi = p.ratio_of(best)
    if tolerance is None:
        tolerance = default_tolerance(p)
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    steps = 0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        ans = p.ask(mid)
        steps += 1
        if ans.value < 0:
            hi = mid
            best = ans.nodes
        else:
            lo = mid
    iterates: list[Fraction] = []
    lam, s = _dinkelbach(p, best, iterates)
    return _finish(p, "binary_search", lam, s, iterates=tuple(iterates), bisection_steps=steps)


def default_tolerance(p: _Problem) -> Fraction:
    g = p.work_graph
    if isinstance(p.work_kind, NormalizedCut):
        weights = [e.w_prime for e in g.edges]
    else:
        weights = list(g.node_weights)
    unit = 1
    for w in weights:
        unit = math.lcm(unit, w.denominator)
    total = sum((abs(w) for w in weights), Fraction(0)) * unit
    return Fraction(1, max(int(total), 1) ** 2)


def nested_solutions(g: WeightedGraph, kind: ProblemKind) -> NestedSolutions:
    """Every breakpoint of ``g`` with the optimal set on each interval."""
    if isinstance(kind, Densest) and kind.direction == "minimize":
        raise ValueError("minimum density has no parametric sequence")
    return _nested(_Problem(g, kind))


def lambda_question(g: WeightedGraph, kind: ProblemKind, lam) -> LambdaAnswer:
    """Evaluate ``g(lam)`` exactly with one minimum cut."""
    return _Problem(g, kind).ask(Fraction(lam))


def _min_density(g: WeightedGraph, kind: Densest, method: str) -> RatioSolution:
    # C(S) >= 0 and V(S) > 0, and any single node has C({v}) = 0: the minimum
    # is 0, attained first by the lowest-numbered node of positive weight.
    if any(v <= 0 for v in g.node_weights):
        raise InfeasibleError("densest subgraph needs positive node weights")
    s = frozenset([1])
    return RatioSolution(kind, s, Fraction(0), Fraction(0), method, parameter=Fraction(0))


# --- seed enumeration -----------------------------------------------------


def seed_pairs(g: WeightedGraph, kind: ProblemKind) -> Iterator[ProblemKind]:
    """Feasible seeded kinds in a fixed order, honouring any seed already set."""
    if isinstance(kind, NormalizedCut):
        cls = type(kind)
        keys = [(e.i, e.j) for e in g.edges]
        ins = [kind.seed_in] if kind.seed_in is not None else keys
        outs = [kind.seed_out] if kind.seed_out is not None else keys
        for a, b in itertools.product(ins, outs):
            if set(a) & set(b):
                continue
            yield cls(a, b)
    elif isinstance(kind, RatioRegions):
        nodes = list(g.nodes)
        srcs = [kind.source_seed] if kind.source_seed is not None else nodes
        snks = [kind.sink_seed] if kind.sink_seed is not None else nodes
        for a, b in itertools.product(srcs, snks):
            if a != b:
                yield RatioRegions(a, b)
    else:
        raise ValueError(f"{type(kind).__name__} has no seeds to enumerate")


def count_seed_pairs(g: WeightedGraph, kind: ProblemKind) -> int:
    """Length of :func:`seed_pairs` without enumerating it when both seeds are free."""
    if isinstance(kind, NormalizedCut) and kind.seed_in is None and kind.seed_out is None:
        # ordered pairs of distinct edges minus those sharing a node
        m = len(g.edges)
        deg = [0] * (g.node_count + 1)
        for e in g.edges:
            deg[e.i] += 1
            deg[e.j] += 1
        return m * m - m - sum(d * (d - 1) for d in deg)
    if isinstance(kind, RatioRegions) and kind.source_seed is None and kind.sink_seed is None:
        return g.node_count * (g.node_count - 1)
    return sum(1 for _ in seed_pairs(g, kind))


def _solve_one(args):
    g, kind, method = args
    try:
        return solve(g, kind, method)
    except InfeasibleError:
        return None


def _better(a: RatioSolution, b: Optional[RatioSolution]) -> bool:
    if b is None:
        return True
    if maximizes(a.kind):
        if a.ratio != b.ratio:
            return a.ratio > b.ratio
    elif a.ratio != b.ratio:
        return a.ratio < b.ratio
    return sorted(a.optimal_set) < sorted(b.optimal_set)


def solve_auto_seeds(
    g: WeightedGraph,
    kind: ProblemKind = NormalizedCut(),
    budget: Optional[int] = None,
    method: str = "dinkelbach",
    jobs: int = 1,
) -> RatioSolution:
    """Best solution over the first ``budget`` feasible seed pairs (all by default).

    Ties go to the lexicographically smallest node set.
    """
    pairs = list(itertools.islice(seed_pairs(g, kind), budget))
    if not pairs:
        raise InfeasibleError("no feasible seed pair")
    tasks = [(g, k, method) for k in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_one, tasks, chunksize=8))
    else:
        results = [_solve_one(t) for t in tasks]
    best = None
    for r in results:
        if r is not None and _better(r, best):
            best = r
    if best is None:
        raise InfeasibleError("no feasible set with positive denominator")
    return best
