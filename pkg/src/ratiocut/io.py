"""Graph text files, PGM images, grid graphs, masks and breakpoint tables.

Graph file format, one directive per line, ``#`` starts a comment::

    nodes <n>
    node <id> <weight>
    edge <i> <j> <w> [<w'>]

Numbers are integers or ``p/q``; ``w'`` defaults to ``w`` and node weights to 1.
"""
from __future__ import annotations

import csv
import io as _io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graph import (
    Edge,
    GraphError,
    WeightedGraph,
    format_rational,
    parse_rational,
    validate_graph,
)

SIMILARITY_DENOMINATOR = 1 << 16


class ParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


# --- graph files ----------------------------------------------------------


def parse_graph(text: str) -> WeightedGraph:
    n = None
    node_w: dict[int, tuple[Fraction, int]] = {}
    edges: list[tuple[int, int, int, Fraction, Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word, args = parts[0], parts[1:]
        try:
            if word == "nodes":
                if len(args) != 1 or not args[0].isdigit():
                    raise ParseError("expected 'nodes <n>'", lineno)
                if n is not None:
                    raise ParseError("duplicate 'nodes' line", lineno)
                n = int(args[0])
                if n < 1:
                    raise ParseError("node count must be positive", lineno)
            elif word == "node":
                if len(args) != 2:
                    raise ParseError("expected 'node <id> <weight>'", lineno)
                node_w[_int(args[0], lineno)] = (parse_rational(args[1]), lineno)
            elif word == "edge":
                if len(args) not in (3, 4):
                    raise ParseError("expected 'edge <i> <j> <w> [<w'>]'", lineno)
                i, j = _int(args[0], lineno), _int(args[1], lineno)
                w = parse_rational(args[2])
                wp = parse_rational(args[3]) if len(args) == 4 else w
                edges.append((lineno, i, j, w, wp))
            else:
                raise ParseError(f"unknown directive {word!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None

    if n is None:
        ids = [v for _, i, j, _, _ in edges for v in (i, j)] + list(node_w)
        if not ids:
            raise ParseError("empty graph: missing 'nodes <n>'")
        n = max(ids)
    seen = set()
    out = []
    for lineno, i, j, w, wp in edges:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"edge ({i},{j}) has a node id outside 1..{n}", lineno)
        if i == j:
            raise ParseError("self-loop", lineno)
        if w < 0 or wp < 0:
            raise ParseError("negative weight", lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        out.append((i, j, w, wp))
    weights = [Fraction(1)] * n
    for v, (wt, lineno) in node_w.items():
        if not 1 <= v <= n:
            raise ParseError(f"node id {v} outside 1..{n}", lineno)
        weights[v - 1] = wt
    g = WeightedGraph.build(n, out, weights)
    problems = validate_graph(g)
    if problems:
        raise GraphError("; ".join(problems))
    return g


def _int(tok: str, lineno: int) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise ParseError(f"expected an integer node id, got {tok!r}", lineno)
    return int(tok)


def format_graph(g: WeightedGraph) -> str:
    lines = [f"nodes {g.node_count}"]
    for v in g.nodes:
        wt = g.node_weights[v - 1]
        if wt != 1:
            lines.append(f"node {v} {_num(wt)}")
    for e in g.edges:
        if e.w == e.w_prime:
            lines.append(f"edge {e.i} {e.j} {_num(e.w)}")
        else:
            lines.append(f"edge {e.i} {e.j} {_num(e.w)} {_num(e.w_prime)}")
    return "\n".join(lines) + "\n"


def _num(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else format_rational(q)


# --- PGM ------------------------------------------------------------------


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    maxval: int
    pixels: tuple[int, ...]  # row-major

    def __post_init__(self):
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel count does not match dimensions")
        if not 1 <= self.maxval <= 65535:
            raise ValueError("maxval out of range")
        if any(p < 0 or p > self.maxval for p in self.pixels):
            raise ValueError("pixel value outside [0, maxval]")

    def at(self, row: int, col: int) -> int:
        return self.pixels[row * self.width + col]

    def rows(self) -> list[list[int]]:
        w = self.width
        return [list(self.pixels[r * w:(r + 1) * w]) for r in range(self.height)]

    @classmethod
    def from_rows(cls, rows, maxval: int = 255) -> "GrayImage":
        rows = [list(r) for r in rows]
        return cls(len(rows[0]), len(rows), maxval, tuple(v for r in rows for v in r))


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise ParseError("truncated header")
        if data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> GrayImage:
    """Decode P2 (ASCII) or P5 (binary) PGM."""
    if data[:2] not in (b"P2", b"P5"):
        raise ParseError("bad magic: expected P2 or P5")
    magic = data[:2]
    tokens, pos = _header_tokens(data[2:], 3)
    pos += 2
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ParseError("non-integer header field") from None
    if width < 1 or height < 1:
        raise ParseError("image dimensions must be positive")
    if not 1 <= maxval <= 65535:
        raise ParseError("maxval out of range")
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte ends the header
        size = 2 if maxval > 255 else 1
        body = data[pos:pos + count * size]
        if len(body) < count * size:
            raise ParseError("truncated payload")
        if size == 1:
            pixels = tuple(body)
        else:
            pixels = tuple(body[k] << 8 | body[k + 1] for k in range(0, len(body), 2))
    else:
        body = re.sub(rb"#[^\r\n]*", b"", data[pos:]).split()
        if len(body) < count:
            raise ParseError("truncated payload")
        try:
            pixels = tuple(int(t) for t in body[:count])
        except ValueError:
            raise ParseError("non-integer pixel value") from None
    if any(p > maxval for p in pixels):
        raise ParseError("pixel value exceeds maxval")
    return GrayImage(width, height, maxval, pixels)


def format_pgm(img: GrayImage) -> bytes:
    """Binary P5 encoding."""
    header = f"P5\n{img.width} {img.height}\n{img.maxval}\n".encode()
    if img.maxval > 255:
        body = bytearray()
        for p in img.pixels:
            body += bytes((p >> 8, p & 0xFF))
        return header + bytes(body)
    return header + bytes(img.pixels)


# --- grid graphs ------------------------------------------------------------


def similarity(delta: float, sigma: float) -> Fraction:
    """``exp(-(delta/sigma)^2)`` rounded to the nearest multiple of ``2**-16``.

    Round-half-even at the grid; values below ``2**-17`` become 0.
    """
    x = math.exp(-((delta / sigma) ** 2))
    return Fraction(round(x * SIMILARITY_DENOMINATOR), SIMILARITY_DENOMINATOR)


def grid_graph(img: GrayImage, sigma=32, neighborhood: int = 4) -> WeightedGraph:
    """Pixel graph: node ``r * width + c + 1`` per pixel, similarity weights, unit node weights.

    Intensity differences are rescaled to a 0..255 range before ``sigma``
    applies.
    """
    sigma = Fraction(sigma)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if neighborhood not in (4, 8):
        raise ValueError("neighborhood must be 4 or 8")
    w, h = img.width, img.height
    scale = 255 / img.maxval
    sig = float(sigma)
    px = img.pixels
    offsets = [(0, 1), (1, 0)]
    if neighborhood == 8:
        offsets += [(1, 1), (1, -1)]
    cache: dict[int, Fraction] = {}
    edges = []
    for r in range(h):
        for c in range(w):
            u = r * w + c
            for dr, dc in offsets:
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w:
                    v = rr * w + cc
                    d = abs(px[u] - px[v])
                    if d not in cache:
                        cache[d] = similarity(d * scale, sig)
                    wt = cache[d]
                    edges.append(Edge(u + 1, v + 1, wt, wt) if u < v else Edge(v + 1, u + 1, wt, wt))
    return WeightedGraph(w * h, tuple(edges), (Fraction(1),) * (w * h))


# --- outputs ----------------------------------------------------------------


def mask_image(nodes, width: int, height: int) -> GrayImage:
    inside = frozenset(nodes)
    return GrayImage(
        width, height, 255, tuple(255 if k + 1 in inside else 0 for k in range(width * height))
    )


def mask_pgm(nodes, width: int, height: int) -> bytes:
    """P5 mask, 255 for pixels in the set."""
    return format_pgm(mask_image(nodes, width, height))


def mask_nodes(img: GrayImage) -> frozenset:
    return frozenset(k + 1 for k, p in enumerate(img.pixels) if p == img.maxval)


CSV_HEADER = ["lambda", "set_size", "ratio", "members"]


def breakpoints_csv(nested) -> str:
    """One row per parameter interval, ascending; header only when ``nested`` is None."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    if nested is not None:
        for p in nested.pieces:
            writer.writerow(
                [
                    format_rational(p.start),
                    len(p.nodes),
                    "" if p.ratio is None else format_rational(p.ratio),
                    " ".join(str(v) for v in sorted(p.nodes)),
                ]
            )
    return buf.getvalue()
