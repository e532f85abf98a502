"""Undirected weighted graphs and the capacity functions evaluated on them.

All weights are :class:`fractions.Fraction`. Nodes are numbered ``1..n``.
Each undirected edge is stored once as ``(i, j, w, w_prime)`` with ``i < j``;
``w`` is the numerator (cut) weight and ``w_prime`` the denominator weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction, str]

#: Symbolic infinite capacity. ``Fraction`` arithmetic against it is exact:
#: ``INF + q == INF`` and ``q < INF`` for every rational ``q``.
INF = math.inf


def as_fraction(value: Number) -> Fraction:
    """Coerce ints, fractions and ``p/q`` strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        if not _is_int(p) or not _is_int(q):
            raise ValueError(f"bad rational {text!r}")
        if int(q) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(p), int(q))
    if not _is_int(text):
        raise ValueError(f"bad rational {text!r}")
    return Fraction(int(text))


def _is_int(s: str) -> bool:
    s = s.strip()
    if s[:1] in "+-":
        s = s[1:]
    return s.isdigit()


def format_rational(q: Fraction) -> str:
    """Always ``p/q`` form, so ``1`` prints as ``1/1``."""
    return f"{q.numerator}/{q.denominator}"


def is_infinite(cap) -> bool:
    return isinstance(cap, float) and math.isinf(cap) and cap > 0


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    w: Fraction
    w_prime: Fraction


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph with edge weights ``w``, ``w'`` and node weights ``v``."""

    node_count: int
    edges: tuple[Edge, ...]
    node_weights: tuple[Fraction, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.node_weights:
            object.__setattr__(self, "node_weights", (Fraction(1),) * self.node_count)
        object.__setattr__(
            self, "_index", {(e.i, e.j): k for k, e in enumerate(self.edges)}
        )

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple],
        node_weights: Iterable[Number] | None = None,
    ) -> "WeightedGraph":
        """Build from ``(i, j, w)`` or ``(i, j, w, w')`` tuples; ``w'`` defaults to ``w``.

        Endpoints are normalised to ``i < j``. The result is not validated; call
        :func:`validate_graph` or :meth:`checked` for that.
        """
        out = []
        for e in edges:
            if len(e) == 3:
                i, j, w = e
                wp = w
            else:
                i, j, w, wp = e
            if i > j:
                i, j = j, i
            out.append(Edge(int(i), int(j), as_fraction(w), as_fraction(wp)))
        nw = tuple(as_fraction(v) for v in node_weights) if node_weights is not None else ()
        return cls(n, tuple(out), nw)

    def checked(self) -> "WeightedGraph":
        problems = validate_graph(self)
        if problems:
            raise GraphError("; ".join(problems))
        return self

    @property
    def nodes(self) -> range:
        return range(1, self.node_count + 1)

    def edge_index(self, i: int, j: int) -> int:
        """Position of edge ``[i, j]`` in :attr:`edges`; raises ``KeyError`` if absent."""
        key = (i, j) if i < j else (j, i)
        return self._index[key]

    def has_edge(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self._index

    def with_denominator_weights(self, weights: Iterable[Number]) -> "WeightedGraph":
        ws = list(weights)
        edges = tuple(Edge(e.i, e.j, e.w, as_fraction(x)) for e, x in zip(self.edges, ws))
        return WeightedGraph(self.node_count, edges, self.node_weights)

    def numerator_only(self) -> "WeightedGraph":
        """Copy with ``w' := w`` on every edge."""
        return self.with_denominator_weights(e.w for e in self.edges)

    def total_weight(self, which: str = "numerator") -> Fraction:
        return sum((_pick(e, which) for e in self.edges), Fraction(0))


class GraphError(ValueError):
    pass


def validate_graph(g: WeightedGraph) -> list[str]:
    """Return a list of human-readable invariant violations (empty when valid)."""
    problems = []
    if g.node_count < 1:
        problems.append("node count must be positive")
    if len(g.node_weights) != g.node_count:
        problems.append(
            f"expected {g.node_count} node weights, got {len(g.node_weights)}"
        )
    seen = set()
    for k, e in enumerate(g.edges):
        tag = f"edge {k} ({e.i},{e.j})"
        if e.i == e.j:
            problems.append(f"{tag}: self-loop")
        if not (1 <= e.i <= g.node_count and 1 <= e.j <= g.node_count):
            problems.append(f"{tag}: node id out of range")
        if e.i > e.j:
            problems.append(f"{tag}: endpoints not ordered i<j")
        if e.w < 0 or e.w_prime < 0:
            problems.append(f"{tag}: negative weight")
        key = (min(e.i, e.j), max(e.i, e.j))
        if key in seen:
            problems.append(f"{tag}: duplicate edge")
        seen.add(key)
    return problems


def _pick(e: Edge, which: str) -> Fraction:
    if which == "numerator":
        return e.w
    if which == "denominator":
        return e.w_prime
    raise ValueError(f"which must be 'numerator' or 'denominator', not {which!r}")


def _check_nodes(g: WeightedGraph, nodes) -> None:
    for v in nodes:
        if not 1 <= v <= g.node_count:
            raise GraphError(f"node id {v} out of range 1..{g.node_count}")


def capacity(g: WeightedGraph, a, b, which: str = "numerator") -> Fraction:
    """``C(A, B)``: total weight of edges with one endpoint in A and the other in B.

    With ``A == B`` this is ``C(A)``, the weight of edges inside A, each edge
    counted once.
    """
    a, b = frozenset(a), frozenset(b)
    _check_nodes(g, a)
    _check_nodes(g, b)
    total = Fraction(0)
    if a == b:
        for e in g.edges:
            if e.i in a and e.j in a:
                total += _pick(e, which)
        return total
    for e in g.edges:
        if (e.i in a and e.j in b) or (e.j in a and e.i in b):
            total += _pick(e, which)
    return total


def cut_capacity(g: WeightedGraph, s, which: str = "numerator") -> Fraction:
    """``C(S, V \\ S)``."""
    s = frozenset(s)
    _check_nodes(g, s)
    return sum(
        (_pick(e, which) for e in g.edges if (e.i in s) != (e.j in s)), Fraction(0)
    )


def node_weight_sum(g: WeightedGraph, a) -> Fraction:
    """``V(A)``, the exact sum of node weights over A."""
    a = frozenset(a)
    _check_nodes(g, a)
    return sum((g.node_weights[v - 1] for v in a), Fraction(0))
