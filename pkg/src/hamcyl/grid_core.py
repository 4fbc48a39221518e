"""The thick grid cylinder P_{m+1} x C_n and its window lattice.

Coordinates: vertex rows run 0..m from the top rim, vertex columns 1..n.
Window w_{i,j} (rows 1..m, columns 1..n) is the cell whose top-left corner
is vertex (i-1, j).  Column arithmetic wraps modulo n into 1..n.

Edges are identified by ``(kind, row, col)``:

* ``("v", r, c)`` joins (r, c) and (r+1, c);
* ``("h", r, c)`` joins (r, c) and (r, c mod n + 1).

For n = 2 the edges ``("h", r, 1)`` and ``("h", r, 2)`` join the same pair of
vertices and stay distinct, so the graph is a multigraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

Vertex = tuple[int, int]
Window = tuple[int, int]


class Edge(NamedTuple):
    kind: str
    row: int
    col: int

    def sort_key(self) -> tuple[int, int, int]:
        # row-major, vertical before horizontal
        return (self.row, 0 if self.kind == "v" else 1, self.col)


def wrap(col: int, n: int) -> int:
    """Map any integer column onto 1..n."""
    return (col - 1) % n + 1


@dataclass(frozen=True)
class Cylinder:
    m: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise TypeError("m and n must be integers")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")

    @property
    def vertex_count(self) -> int:
        return (self.m + 1) * self.n

    @property
    def window_count(self) -> int:
        return self.m * self.n

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple((r, c) for r in range(self.m + 1) for c in range(1, self.n + 1))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        out = [Edge("v", r, c) for r in range(self.m) for c in range(1, self.n + 1)]
        out += [Edge("h", r, c) for r in range(self.m + 1) for c in range(1, self.n + 1)]
        return tuple(sorted(out, key=Edge.sort_key))

    @cached_property
    def windows(self) -> tuple[Window, ...]:
        return tuple((i, j) for i in range(1, self.m + 1) for j in range(1, self.n + 1))

    def endpoints(self, e: Edge) -> tuple[Vertex, Vertex]:
        if e.kind == "v":
            return (e.row, e.col), (e.row + 1, e.col)
        return (e.row, e.col), (e.row, wrap(e.col + 1, self.n))

    def check_window(self, w: Window) -> None:
        i, j = w
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise ValueError(f"window {w} outside 1..{self.m} x 1..{self.n}")


def build_cylinder(m: int, n: int) -> Cylinder:
    return Cylinder(m, n)


def window_neighbors(c: Cylinder, w: Window) -> list[Window]:
    """Neighbours of ``w`` in the window lattice W_{m,n} (each listed once)."""
    c.check_window(w)
    i, j = w
    out: list[Window] = []
    for cand in ((i - 1, j), (i + 1, j), (i, wrap(j - 1, c.n)), (i, wrap(j + 1, c.n))):
        if 1 <= cand[0] <= c.m and cand not in out:
            out.append(cand)
    return out


def window_boundary_edges(c: Cylinder, w: Window) -> list[Edge]:
    """The four edges around cell ``w``: top, bottom, left, right."""
    c.check_window(w)
    i, j = w
    return [
        Edge("h", i - 1, j),
        Edge("h", i, j),
        Edge("v", i - 1, j),
        Edge("v", i - 1, wrap(j + 1, c.n)),
    ]


def window_links(c: Cylinder) -> list[tuple[Window, Window, Edge, int]]:
    """Every adjacency of the window lattice with the edge it crosses.

    Each entry is ``(w, w2, edge, dx)`` where ``dx`` is the change of the
    unrolled column index when stepping from ``w`` to ``w2`` (0 vertical,
    +1 rightwards).  At n = 2 the two horizontal adjacencies of a row are
    different links, crossing different vertical edges.
    """
    links = []
    for i in range(1, c.m + 1):
        for j in range(1, c.n + 1):
            if i < c.m:
                links.append(((i, j), (i + 1, j), Edge("h", i, j), 0))
            links.append(((i, j), (i, wrap(j + 1, c.n)), Edge("v", i - 1, wrap(j + 1, c.n)), 1))
    return links
