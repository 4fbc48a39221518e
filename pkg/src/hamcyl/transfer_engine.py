"""Exact walk counting on the column digraphs.

phi(m, k) is the number of contractible cycles on m x (k+2) whose split
tree has its up root at w_{1,1}; h_c(m, n) = n * phi(m, n-2).

* exterior coding: sum over triples (l, f, s) of walks s -> l of length k;
* interior coding: sum over pairs (f, l) of walks f -> l of length k+1.

Counting is vector propagation over the arc lists with Python integers, one
sweep per source vertex, reading off every length in the same pass.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .brute_oracle import DEFAULT_MAX_VERTICES, oracle_counts
from .columns import EXT, INT, ColumnDigraph
from .ext_coding import build_ext_digraph
from .grid_core import build_cylinder
from .int_coding import build_int_digraph

ORACLE = "oracle"
METHODS = (EXT, INT, ORACLE)


def count_walks(succ: Sequence[Sequence[int]], length: int,
                sources: Mapping[int, int], sinks: Iterable[int]) -> int:
    """Number of walks of exactly ``length`` arcs from weighted sources to sinks."""
    if length < 0:
        raise ValueError("walk length must be non-negative")
    return walk_profile(succ, sources, {v: 1 for v in sinks}, length)[length]


def walk_profile(succ: Sequence[Sequence[int]], sources: Mapping[int, int],
                 sinks: Mapping[int, int], max_length: int) -> list[int]:
    """Weighted walk counts for every length 0..max_length in one sweep."""
    vec = {v: w for v, w in sources.items() if w}
    out = []
    for step in range(max_length + 1):
        out.append(sum(w * vec.get(v, 0) for v, w in sinks.items()))
        if step == max_length:
            break
        nxt: dict[int, int] = {}
        for v, c in vec.items():
            for y in succ[v]:
                nxt[y] = nxt.get(y, 0) + c
        vec = nxt
    return out


@lru_cache(maxsize=None)
def digraph(m: int, coding: str) -> ColumnDigraph:
    """Digraph for (m, coding), built once per process."""
    if coding == EXT:
        return build_ext_digraph(m)
    if coding == INT:
        return build_int_digraph(m)
    raise ValueError(f"unknown coding {coding!r}")


def _sweeps(d: ColumnDigraph) -> list[tuple[int, dict[int, int]]]:
    """(source, weighted sinks) per source vertex, walk length offset aside."""
    groups: dict[int, dict[int, int]] = {}
    if d.coding == EXT:
        for l, _f, s in d.boundary:
            g = groups.setdefault(s, {})
            g[l] = g.get(l, 0) + 1
    else:
        for f, l in d.boundary:
            g = groups.setdefault(f, {})
            g[l] = g.get(l, 0) + 1
    return sorted(groups.items())


def _one_sweep(args) -> list[int]:
    succ, src, sinks, max_length = args
    return walk_profile(succ, {src: 1}, sinks, max_length)


def phi_profile(d: ColumnDigraph, k_max: int, workers: int = 1) -> list[int]:
    """phi(k) for k = 0..k_max."""
    if k_max < 0:
        return []
    offset = 0 if d.coding == EXT else 1
    total = [0] * (k_max + 1 + offset)
    jobs = [(d.succ, s, sinks, k_max + offset) for s, sinks in _sweeps(d)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_one_sweep, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        parts = [_one_sweep(j) for j in jobs]
    for part in parts:
        for i, c in enumerate(part):
            total[i] += c
    return total[offset:]


def phi(m: int, k: int, coding: str) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    return phi_profile(digraph(m, coding), k)[k]


def h_contractible(m: int, n: int, method: str, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """Number of contractible Hamiltonian cycles of the m x n cylinder."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if method == ORACLE:
        return oracle_counts(build_cylinder(m, n), max_vertices).h_c
    return n * phi(m, n - 2, method)


@dataclass
class SeriesPrefix:
    m: int
    method: str
    values: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for n, h in self.values:
            if h % n:
                raise AssertionError(f"h_c({self.m},{n}) = {h} not divisible by n")
            if self.m % 2 == 0 and n % 2 and h:
                raise AssertionError(f"h_c({self.m},{n}) must vanish for even m and odd n")

    def coefficients(self) -> list[int]:
        return [h for _, h in self.values]

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "method": self.method,
                           "values": [{"n": n, "h_c": str(h)} for n, h in self.values]})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "method", "h_c"])
        for n, h in self.values:
            w.writerow([self.m, n, self.method, str(h)])
        return buf.getvalue()


def series(m: int, n_max: int, method: str, workers: int = 1,
           max_vertices: int = DEFAULT_MAX_VERTICES) -> SeriesPrefix:
    """h_c(m, n) for n = 2..n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if method == ORACLE:
        vals = [(n, h_contractible(m, n, ORACLE, max_vertices)) for n in range(2, n_max + 1)]
    elif method in (EXT, INT):
        prof = phi_profile(digraph(m, method), n_max - 2, workers)
        vals = [(n, n * prof[n - 2]) for n in range(2, n_max + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return SeriesPrefix(m, method, vals)
