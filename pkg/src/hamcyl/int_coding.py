"""Interior coding: columns label the interior tree only.

Cells are ``(b, r)`` with ``b = 0`` outside the interior tree and
``b >= 2`` an ordinal of a joined class inside it.  Every column of a valid
matrix is a vertex of the digraph, first columns included; a cycle is a
walk of length n-1 from a first column to a last column that closes back
across the seam.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .brute_oracle import HamCycle, is_rooted
from .coding_common import joined_at_own_threshold, lift
from .columns import (
    BAD_SQUARES,
    INT,
    Column,
    ColumnDigraph,
    assemble,
    block_rolls,
    blocks,
    factors,
    first_seen_in_order,
    harmonized,
    interlaced,
    label_choices,
    propagate,
    roll_choices,
    support,
)


@dataclass(frozen=True)
class IntRules:
    """Knobs for the literal column filters.

    ``roll_cap`` overrides the default bound floor(m/2) on |r|.
    ``interlace_skip_top`` excludes row 1 from the non-interlacing test.
    """

    roll_cap: int | None = None
    interlace_skip_top: bool = True

    def rmax(self, m: int) -> int:
        return m // 2 if self.roll_cap is None else self.roll_cap


DEFAULT_RULES = IntRules()


def column_valid_int(m: int, cells: Sequence[tuple[int, int]], first: bool = False,
                     rules: IntRules = DEFAULT_RULES) -> bool:
    """Single-column properties; ``first`` relaxes the roll-word opening."""
    col = tuple(tuple(c) for c in cells)
    if len(col) != m:
        raise ValueError(f"column has {len(col)} cells, expected {m}")
    rmax = rules.rmax(m)
    for b, r in col:
        if b < 0:
            raise ValueError(f"label {b} outside the interior alphabet")
        if b == 1 or abs(r) > rmax:
            return False
    if not harmonized(col):
        return False
    fs = factors(col)
    rw = [f[3] for f in fs]
    if first:
        if rw and rw[0] not in (0, 1):
            return False
    elif not rw or rw[0] != 0:
        return False
    if any(abs(a - b) > 1 for a, b in zip(rw, rw[1:])):
        return False
    lo = 1 if rules.interlace_skip_top else 0
    for r in set(rw):
        if not first_seen_in_order((f[2] for f in fs if f[3] == r), 2):
            return False
        cells_r = [(i, b) for i, (b, rr) in enumerate(col) if b and rr == r and i >= lo]
        if interlaced(cells_r):
            return False
    return True


def is_first_column(m: int, col: Column, rules: IntRules = DEFAULT_RULES) -> bool:
    if any(col[i] != (0, 0) for i in range(min(2, m))):
        return False
    return column_valid_int(m, col, first=True, rules=rules)


def _pair_ok(u_sup: Sequence[int], v_sup: Sequence[int]) -> bool:
    m = len(u_sup)
    if u_sup[0] == v_sup[0] == 0 or u_sup[m - 1] == v_sup[m - 1] == 0:
        return False
    return all((u_sup[i - 1], u_sup[i], v_sup[i - 1], v_sup[i]) not in BAD_SQUARES for i in range(1, m))


def _supports(u_sup: Sequence[int], m: int, first: bool) -> Iterator[tuple[int, ...]]:
    out = [0] * m

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            yield tuple(out)
            return
        for x in ((0,) if first and i < 2 else (0, 1)):
            if (i == 0 or i == m - 1) and u_sup[i] == 0 and x == 0:
                continue
            if i and (u_sup[i - 1], u_sup[i], out[i - 1], x) in BAD_SQUARES:
                continue
            out[i] = x
            yield from rec(i + 1)

    yield from rec(0)


def successors(m: int, u: Column, rules: IntRules = DEFAULT_RULES, wrap: bool = False) -> Iterator[Column]:
    """Every column that may follow ``u``; across the seam when ``wrap``."""
    u_sup = support(u)
    shift = 1 if wrap else 0
    rmax = rules.rmax(m)
    for sup in _supports(u_sup, m, first=wrap):
        vb = blocks(sup)
        if not vb and not wrap:
            continue
        forced: list[int | None] = [None] * len(vb)
        ok = True
        for k, (s, e, _) in enumerate(vb):
            for i in range(s, e + 1):
                if u_sup[i]:
                    want = u[i][1] + shift
                    if forced[k] is None:
                        forced[k] = want
                    elif forced[k] != want:
                        ok = False
        if not ok:
            continue
        opening = (0, 1) if wrap else (0,)
        for rolls in roll_choices(vb, forced, rmax, INT, opening):
            v = propagate(u, sup, rolls, INT, shift=shift, closing=wrap)
            if v is None:
                continue
            if (is_first_column(m, v, rules) if wrap else column_valid_int(m, v, rules=rules)):
                yield v


def arc_valid_int(m: int, u: Column, v: Column, rules: IntRules = DEFAULT_RULES) -> bool:
    """Adjacency properties for ``u`` directly followed by ``v``."""
    if not _pair_ok(support(u), support(v)):
        return False
    if not column_valid_int(m, v, rules=rules):
        return False
    return propagate(u, support(v), block_rolls(v), INT) == v


def fl_valid(m: int, f: Column, l: Column, rules: IntRules = DEFAULT_RULES) -> bool:
    """Buckle properties: ``l`` (column n) closes onto ``f`` (column 1)."""
    if l[0] != (2, 0) or not is_first_column(m, f, rules):
        return False
    if not _pair_ok(support(l), support(f)):
        return False
    return propagate(l, support(f), block_rolls(f), INT, shift=1, closing=True) == f


def first_columns(m: int, rules: IntRules = DEFAULT_RULES) -> list[Column]:
    """All admissible first columns, in a fixed order."""
    out = []
    rmax = rules.rmax(m)
    for bits in range(1 << max(0, m - 2)):
        sup = [0] * min(m, 2) + [(bits >> (m - 3 - i)) & 1 for i in range(m - 2)]
        vb = blocks(sup)
        for rolls in roll_choices(vb, [None] * len(vb), rmax, INT, (0, 1)):
            for labels in label_choices(vb, rolls, INT):
                col = assemble(m, vb, labels, rolls)
                if is_first_column(m, col, rules):
                    out.append(col)
    return sorted(set(out))


def build_int_digraph(m: int, rules: IntRules = DEFAULT_RULES, max_vertices: int | None = None) -> ColumnDigraph:
    """Forward closure of the first columns under admissible arcs."""
    from .brute_oracle import GuardError

    firsts = first_columns(m, rules)
    seen = {f: None for f in firsts}
    queue = deque(firsts)
    arcs: dict[Column, list[Column]] = {}
    while queue:
        u = queue.popleft()
        arcs[u] = sorted(set(successors(m, u, rules)))
        for v in arcs[u]:
            if v not in seen:
                seen[v] = None
                queue.append(v)
                if max_vertices is not None and len(seen) > max_vertices:
                    raise GuardError(f"interior digraph for m={m} exceeds {max_vertices} vertices")
    vertices = sorted(seen)
    index = {v: k for k, v in enumerate(vertices)}
    succ = [tuple(index[v] for v in arcs[u]) for u in vertices]
    first_set = set(firsts)
    reach = {index[f]: _reachable(succ, index[f]) for f in firsts}
    pairs = []
    for l in vertices:
        if l[0] != (2, 0):
            continue
        for f in successors(m, l, rules, wrap=True):
            # a pair only counts if some walk leads from f to l
            if f in first_set and index[l] in reach[index[f]]:
                pairs.append((index[f], index[l]))
    return ColumnDigraph(INT, m, vertices, succ, [vertices[index[f]] for f in firsts], sorted(pairs))


def _reachable(succ: Sequence[Sequence[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for y in succ[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def first_indices(d: ColumnDigraph) -> list[int]:
    index = {v: k for k, v in enumerate(d.vertices)}
    return [index[f] for f in d.first]


def encode_hc_int(hc: HamCycle) -> list[Column]:
    """Columns of the interior-coding matrix of a rooted contractible cycle."""
    if not is_rooted(hc):
        raise ValueError("cycle must have w_{1,1} as the up root of its split tree")
    c = hc.cylinder
    lf = lift(hc, INT)
    info = joined_at_own_threshold(lf)
    columns = []
    for j in range(1, c.n + 1):
        ordinals: dict[int, dict] = {}
        cells = []
        for i in range(1, c.m + 1):
            w = (i, j)
            if w not in lf.strip:
                cells.append((0, 0))
                continue
            r = lf.roll(w)
            per = ordinals.setdefault(r, {})
            key = info.cls[w]
            if key not in per:
                per[key] = len(per) + 2
            cells.append((per[key], r))
        columns.append(tuple(cells))
    return columns
