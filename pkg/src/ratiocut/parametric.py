"""Minimum cuts as a function of a scalar parameter.

Each arc capacity is ``constant + slope * lam``. A network is *monotone* when
source arcs have slope >= 0, sink arcs slope <= 0 and every other arc is
constant; then minimal source sets only grow as ``lam`` increases.
Non-monotone networks are accepted too (capacities must still be
nonnegative on the domain): the cut-value envelope stays concave and
piecewise linear, only the nesting of sets is lost.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .flow import Arc, CutResult, FlowNetwork, FlowResult, max_flow
from .graph import INF, is_infinite


@dataclass(frozen=True)
class ParametricArc:
    tail: int
    head: int
    constant: object  # Fraction or INF
    slope: Fraction = Fraction(0)

    def at(self, lam: Fraction):
        if is_infinite(self.constant):
            return INF
        return self.constant + self.slope * lam


@dataclass(frozen=True)
class Line:
    """``intercept + slope * lam``."""

    intercept: Fraction
    slope: Fraction

    def __call__(self, lam: Fraction) -> Fraction:
        return self.intercept + self.slope * lam


@dataclass(frozen=True)
class ParametricNetwork:
    node_count: int
    source: int
    sink: int
    arcs: tuple[ParametricArc, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty parameter domain")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        for a in self.arcs:
            if is_infinite(a.constant):
                if a.slope != 0:
                    raise ValueError(f"infinite arc {a} cannot be parametric")
                continue
            if a.at(self.lo) < 0 or a.at(self.hi) < 0:
                raise ValueError(f"arc {a} has negative capacity on [{self.lo}, {self.hi}]")

    @property
    def is_monotone(self) -> bool:
        for a in self.arcs:
            if a.slope == 0:
                continue
            if a.tail == self.source and a.slope > 0:
                continue
            if a.head == self.sink and a.slope < 0:
                continue
            return False
        return True

    def line_of(self, s_set) -> Optional[Line]:
        """Cut value of the fixed set ``s_set`` as a line in ``lam``; None if infinite."""
        s_set = frozenset(s_set)
        c = Fraction(0)
        k = Fraction(0)
        for a in self.arcs:
            if a.tail in s_set and a.head not in s_set:
                if is_infinite(a.constant):
                    return None
                c += a.constant
                k += a.slope
        return Line(c, k)


def instantiate(pnet: ParametricNetwork, lam) -> FlowNetwork:
    lam = Fraction(lam)
    if not pnet.lo <= lam <= pnet.hi:
        raise ValueError(f"lambda {lam} outside domain [{pnet.lo}, {pnet.hi}]")
    arcs = tuple(Arc(a.tail, a.head, a.at(lam)) for a in pnet.arcs)
    return FlowNetwork(pnet.node_count, pnet.source, pnet.sink, arcs)


def flow_at(pnet: ParametricNetwork, lam) -> FlowResult:
    lam = Fraction(lam)
    return max_flow(instantiate(pnet, lam), lam)


def min_cut_at(pnet: ParametricNetwork, lam) -> CutResult:
    return flow_at(pnet, lam).cut


@dataclass(frozen=True)
class Breakpoint:
    lam: Fraction
    source_set: frozenset
    line: Line


@dataclass(frozen=True)
class BreakpointSequence:
    """Minimal source sets over ``[lo, hi]``.

    ``initial_set`` is the minimal source set at ``lo`` itself. Each breakpoint
    carries the set valid on the open interval to its right together with
    the cut-value line there. Breakpoints are in ascending ``lam``; a
    breakpoint at ``lo`` appears when the set just right of ``lo`` differs
    from the set at ``lo``.
    """

    lo: Fraction
    hi: Fraction
    initial_set: frozenset
    initial_line: Line
    breakpoints: tuple[Breakpoint, ...]
    cut_calls: int = 0

    def __len__(self):
        return len(self.breakpoints)

    def pieces(self) -> list[tuple[Fraction, frozenset, Line]]:
        """``(start, set, line)`` per interval; the first starts at ``lo``."""
        out = [(self.lo, self.initial_set, self.initial_line)]
        for b in self.breakpoints:
            if b.lam == self.lo:
                out[0] = (self.lo, b.source_set, b.line)
                continue
            out.append((b.lam, b.source_set, b.line))
        return out

    def line_at(self, lam: Fraction) -> Line:
        lam = Fraction(lam)
        line = self.initial_line
        for b in self.breakpoints:
            if b.lam < lam:
                line = b.line
        return line

    def value_at(self, lam) -> Fraction:
        return self.line_at(lam)(Fraction(lam))

    def set_at(self, lam) -> frozenset:
        """Minimal source set at ``lam`` (exact at breakpoints only for monotone networks)."""
        lam = Fraction(lam)
        s = self.initial_set
        for b in self.breakpoints:
            if b.lam < lam:
                s = b.source_set
        return s


def breakpoints(pnet: ParametricNetwork) -> BreakpointSequence:
    """All parameter values in ``[lo, hi]`` where the minimal source set changes.

    Divide and conquer on the concave envelope: the lines of the cuts at two
    points are intersected and the network is solved at the intersection;
    if nothing lies below, the intersection is a kink, otherwise recurse on
    both sides with the new line. The set on each interval is then read off
    at the interval midpoint.
    """
    cache: dict[Fraction, CutResult] = {}

    def solve(lam: Fraction) -> tuple[CutResult, Line]:
        if lam not in cache:
            cache[lam] = min_cut_at(pnet, lam)
        cut = cache[lam]
        line = pnet.line_of(cut.source_set)
        return cut, line

    lo, hi = pnet.lo, pnet.hi
    cut_lo, line_lo = solve(lo)
    kinks: set[Fraction] = set()
    if lo < hi:
        _, line_hi = solve(hi)
        stack = [(lo, line_lo, hi, line_hi)]
        while stack:
            a, la, b, lb = stack.pop()
            if la.slope == lb.slope:
                continue  # parallel lines through g(a), g(b) coincide
            x = (lb.intercept - la.intercept) / (la.slope - lb.slope)
            cut_x, lx = solve(x)
            if cut_x.value == la(x):
                kinks.add(x)
                continue
            stack.append((a, la, x, lx))
            stack.append((x, lx, b, lb))

    points = sorted({lo, hi} | {k for k in kinks if lo <= k <= hi})
    found: list[Breakpoint] = []
    current = cut_lo.source_set
    for a, b in zip(points, points[1:]):
        cut_m, line_m = solve((a + b) / 2)
        if cut_m.source_set != current:
            found.append(Breakpoint(a, cut_m.source_set, line_m))
            current = cut_m.source_set
    return BreakpointSequence(lo, hi, cut_lo.source_set, line_lo, tuple(found), len(cache))
