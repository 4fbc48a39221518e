"""Exterior coding: columns label the exterior trees.

Cells are ``(b, r)``: 0 inside the interior tree, +-1 for windows joined
with a root (down roots for positive trees, up roots for negative ones),
and +-2, +-3, ... for the remaining joined classes.  First columns (with
``b_1 = b_2 > 0``, the split tree's up root at w_{1,1}) form a separate set
F; the digraph itself holds columns 2..n.  A cycle is a walk of length n-2
from a second column s to a last column l such that (l, f, s) is an
admissible triple for some f in F.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .brute_oracle import GuardError, HamCycle, is_rooted
from .coding_common import joined_at_own_threshold, lift
from .columns import (
    BAD_SQUARES,
    EXT,
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
    sign,
    support,
    truncated_words,
)

MIDDLE, SECOND, FIRST = "middle", "second", "first"


@dataclass(frozen=True)
class ExtRules:
    """Knobs for the literal column filters.

    ``positive_end``: which positive factor must carry a roll in
    {-1, 0, 1}: the one nearest the bottom rim or the top one.
    ``sparse_rule``: which negative label the sparse-column ordering test
    compares ("deepest" = most negative, "shallowest" = -2, "off").
    ``literal_seam``: apply the first-column root-link test on (l, f) as
    stated, on top of the transfer rule.
    """

    roll_cap: int | None = None
    positive_end: str = "bottom"
    sparse_rule: str = "off"
    literal_seam: bool = True

    def rmax(self, m: int) -> int:
        return m // 2 if self.roll_cap is None else self.roll_cap


DEFAULT_RULES = ExtRules()


def _nonroot_ones(col: Column) -> bool:
    m = len(col)
    for i, (b, _) in enumerate(col):
        if b == 1 and i != m - 1:
            return True
        if b == -1 and i != 0:
            return True
    return False


def _sparse_order_ok(col: Column, rule: str) -> bool:
    """Negative and positive classes of one roll cannot cross (no +-1 present)."""
    if rule == "off" or _nonroot_ones(col):
        return True
    m = len(col)
    for r in {rr for b, rr in col if b and rr <= 0}:
        neg = [(i, b) for i, (b, rr) in enumerate(col) if b < 0 and rr == r and 0 < i < m - 1]
        pos = [(i, b) for i, (b, rr) in enumerate(col) if b > 0 and rr == r and i < m - 1]
        if not neg or not pos:
            continue
        target_neg = min(b for _, b in neg) if rule == "deepest" else max(b for _, b in neg)
        top = max(b for _, b in pos)
        first_neg = min(i for i, b in neg if b == target_neg)
        last_pos = max(i for i, (b, rr) in enumerate(col) if b == top and rr == r)
        if first_neg > last_pos:
            return False
    return True


def column_valid_ext(m: int, cells: Sequence[tuple[int, int]], position: str = MIDDLE,
                     rules: ExtRules = DEFAULT_RULES) -> bool:
    """Single-column properties.

    ``position`` is ``"first"`` for column 1 (where the top cell is the
    split tree's up root and may carry any positive label and roll) and
    ``"middle"`` otherwise.
    """
    col = tuple(tuple(c) for c in cells)
    if len(col) != m:
        raise ValueError(f"column has {len(col)} cells, expected {m}")
    rmax = rules.rmax(m)
    if any(abs(r) > rmax for _, r in col):
        return False
    sup = support(col)
    if any(sup[i] * sup[i + 1] == -1 for i in range(m - 1)):
        return False
    if not harmonized(col):
        return False
    top, bottom = col[0], col[m - 1]
    if position == FIRST:
        if sup[0] <= 0 or (m > 1 and sup[1] <= 0):
            return False
    elif top[0] > 0 or top not in ((0, 0), (-1, 0)):
        return False
    if bottom[0] < 0 or (bottom[0] > 0 and bottom != (1, 0)):
        return False
    for b, r in col:
        if abs(b) == 1 and r < 0:
            return False
    rolls_present = {r for b, r in col if b}
    for r in rolls_present:
        if r >= 1:
            if (2, r) in col and (1, r) not in col:
                return False
            if (-2, r) in col and (-1, r) not in col:
                return False
    for sg in (1, -1):
        labels, rw = truncated_words(col, sg, bottom_up=sg > 0)
        if rw:
            if sg < 0 and rw[0] not in (-1, 0, 1):
                return False
            if sg > 0:
                end = rw[0] if rules.positive_end == "bottom" else rw[-1]
                if end not in (-1, 0, 1):
                    return False
        if any(abs(a - b) > 1 for a, b in zip(rw, rw[1:])):
            return False
        for r in set(rw):
            seq = [b for b, rr in zip(labels, rw) if rr == r and abs(b) >= 2]
            if not first_seen_in_order(seq, 2):
                return False
    # non-interlacing and no x,1,x pattern within one roll
    for r in rolls_present:
        neg = [(i, b) for i, (b, rr) in enumerate(col) if b < -1 and rr == r and 0 < i < m - 1]
        pos = [(i, b) for i, (b, rr) in enumerate(col) if b > 1 and rr == r and i < m - 1]
        if interlaced(neg) or interlaced(pos):
            return False
        for sg, hi in ((-1, m - 1), (1, m)):
            cells_r = [(i, b) for i, (b, rr) in enumerate(col) if sign(b) == sg and rr == r and i < hi]
            for k, (i, b) in enumerate(cells_r):
                if abs(b) < 2:
                    continue
                mids = [bb for _, bb in cells_r[k + 1:]]
                for p, bb in enumerate(mids):
                    if bb == sg and b in mids[p + 1:]:
                        return False
    ones_neg = [r for b, r in col if b == -1]
    ones_pos = [r for b, r in col if b == 1]
    if any(a > b for a, b in zip(ones_neg, ones_neg[1:])):
        return False
    if any(a < b for a, b in zip(ones_pos, ones_pos[1:])):
        return False
    rows_neg = [i for i, (b, _) in enumerate(col) if b == -1]
    rows_pos = [i for i, (b, _) in enumerate(col) if b == 1]
    if rows_neg and rows_pos and max(rows_neg) > min(rows_pos):
        return False
    return _sparse_order_ok(col, rules.sparse_rule)


def _first_column_extras(m: int, col: Column) -> bool:
    """First-column constraints that do not involve column n."""
    for i, (b, r) in enumerate(col):
        if b and r < 0:
            if not any(j >= 2 and j != i and sign(col[j][0]) == sign(b) and col[j][1] == 0 for j in range(m)):
                return False
    fs = factors(col)
    for s, e, b, r in fs:
        if b == -1 and r == 0:
            return False
        if b == 1 and r == 0 and e < m - 1:
            # needs a roll-0 root factor below it in this column
            last = fs[-1]
            if not (last[2] == 1 and last[3] == 0 and last[1] == m - 1 and last[0] > e):
                return False
    return True


def is_first_column(m: int, col: Column, rules: ExtRules = DEFAULT_RULES) -> bool:
    return column_valid_ext(m, col, FIRST, rules) and _first_column_extras(m, col)


def _row_options(i: int, m: int, mode: str) -> tuple[int, ...]:
    opts = [-1, 0, 1]
    if i == 0:
        opts = {MIDDLE: [-1, 0], SECOND: [0], FIRST: [1]}[mode]
    elif i == 1 and mode == FIRST:
        opts = [1]
    if i == m - 1:
        opts = [x for x in opts if x >= 0]
    return tuple(opts)


def _pair_ok(u_sup: Sequence[int], v_sup: Sequence[int]) -> bool:
    m = len(u_sup)
    for i in range(m):
        if u_sup[i] * v_sup[i] == -1:
            return False
        if i and (abs(u_sup[i - 1]), abs(u_sup[i]), abs(v_sup[i - 1]), abs(v_sup[i])) in BAD_SQUARES:
            return False
    if u_sup[0] == v_sup[0] == -1 or u_sup[m - 1] == v_sup[m - 1] == 1:
        return False
    return True


def _supports(u_sup: Sequence[int], m: int, mode: str) -> Iterator[tuple[int, ...]]:
    out = [0] * m

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            yield tuple(out)
            return
        for x in _row_options(i, m, mode):
            if u_sup[i] * x == -1:
                continue
            if i and out[i - 1] * x == -1:
                continue
            if i == 0 and u_sup[0] == x == -1:
                continue
            if i == m - 1 and u_sup[i] == x == 1:
                continue
            if i and (abs(u_sup[i - 1]), abs(u_sup[i]), abs(out[i - 1]), abs(x)) in BAD_SQUARES:
                continue
            out[i] = x
            yield from rec(i + 1)

    yield from rec(0)


def _forced_rolls(u: Column, vb, m: int, shift: int) -> list[int | None] | None:
    forced: list[int | None] = [None] * len(vb)
    for k, (s, e, sg) in enumerate(vb):
        if (sg > 0 and e == m - 1) or (sg < 0 and s == 0):
            forced[k] = 0
        for i in range(s, e + 1):
            if sign(u[i][0]) == sg:
                want = u[i][1] + shift
                if forced[k] is None:
                    forced[k] = want
                elif forced[k] != want:
                    return None
    return forced


def successors(m: int, u: Column, mode: str = MIDDLE, rules: ExtRules = DEFAULT_RULES) -> Iterator[Column]:
    """Columns that may follow ``u``.

    ``mode`` selects the target position: ``"middle"`` (columns 3..n),
    ``"second"`` (column 2, after a first column) or ``"first"`` (column 1,
    across the seam after a last column).
    """
    u_sup = support(u)
    shift = 1 if mode == FIRST else 0
    rmax = rules.rmax(m)
    for sup in _supports(u_sup, m, mode):
        vb = blocks(sup)
        forced = _forced_rolls(u, vb, m, shift)
        if forced is None:
            continue
        for rolls in roll_choices(vb, forced, rmax, EXT):
            v = propagate(u, sup, rolls, EXT, shift=shift)
            if v is None:
                continue
            if mode == FIRST:
                if is_first_column(m, v, rules) and seam_extras_ok(m, u, v, rules):
                    yield v
            elif column_valid_ext(m, v, MIDDLE, rules):
                yield v


def arc_valid_ext(m: int, u: Column, v: Column, rules: ExtRules = DEFAULT_RULES) -> bool:
    """Adjacency properties for ``u`` directly followed by ``v`` (no seam)."""
    if not _pair_ok(support(u), support(v)):
        return False
    if not column_valid_ext(m, v, MIDDLE, rules):
        return False
    return propagate(u, support(v), block_rolls(v), EXT) == v


def seam_extras_ok(m: int, l: Column, f: Column, rules: ExtRules = DEFAULT_RULES) -> bool:
    """Buckle conditions on the last column and its pairing with column 1."""
    if l[0] != (0, 0):
        return False
    if (2, 0) in l and (1, 0) not in l:
        return False
    if (-2, 0) in l and (-1, 0) not in l:
        return False
    if not rules.literal_seam:
        return True
    for s, e, b, r in factors(f):
        if b != 1 or r != 0 or e == m - 1:
            continue
        bottom = factors(f)[-1]
        if not (bottom[2] == 1 and bottom[3] == 0 and bottom[1] == m - 1 and bottom[0] > e):
            return False
        j1 = bottom[0]
        ok = any(
            l[i][0] == l[j][0] and l[i][0] != 0 and l[i][1] == l[j][1] == -1
            for i in range(s, e + 1)
            for j in range(j1, m - 1)
        )
        if not ok:
            return False
    return True


def seam_valid(m: int, l: Column, f: Column, rules: ExtRules = DEFAULT_RULES) -> bool:
    """``l`` as column n followed by ``f`` as column 1."""
    if not is_first_column(m, f, rules) or not _pair_ok(support(l), support(f)):
        return False
    if not seam_extras_ok(m, l, f, rules):
        return False
    return propagate(l, support(f), block_rolls(f), EXT, shift=1) == f


def second_valid(m: int, f: Column, s: Column, rules: ExtRules = DEFAULT_RULES) -> bool:
    if s[0] != (0, 0):
        return False
    return arc_valid_ext(m, f, s, rules)


def first_columns(m: int, rules: ExtRules = DEFAULT_RULES) -> list[Column]:
    """All admissible first columns, in a fixed order."""
    out = set()
    rmax = rules.rmax(m)
    for sup in itertools.product(*(_row_options(i, m, FIRST) for i in range(m))):
        if any(sup[i] * sup[i + 1] == -1 for i in range(m - 1)):
            continue
        vb = blocks(sup)
        forced: list[int | None] = [0 if (sg > 0 and e == m - 1) else None for s, e, sg in vb]
        for rolls in roll_choices(vb, forced, rmax, EXT):
            for labels in label_choices(vb, rolls, EXT):
                col = assemble(m, vb, labels, rolls)
                if is_first_column(m, col, rules):
                    out.add(col)
    return sorted(out)


def build_ext_digraph(m: int, rules: ExtRules = DEFAULT_RULES, max_vertices: int | None = None) -> ColumnDigraph:
    """Columns 2..n reachable from second columns, with F and the triples."""
    firsts = first_columns(m, rules)
    seconds: dict[Column, list[int]] = {}
    for k, f in enumerate(firsts):
        for s in successors(m, f, SECOND, rules):
            seconds.setdefault(s, []).append(k)
    seen = dict.fromkeys(sorted(seconds))
    queue = deque(seen)
    arcs: dict[Column, list[Column]] = {}
    while queue:
        u = queue.popleft()
        arcs[u] = sorted(set(successors(m, u, MIDDLE, rules)))
        for v in arcs[u]:
            if v not in seen:
                seen[v] = None
                queue.append(v)
                if max_vertices is not None and len(seen) > max_vertices:
                    raise GuardError(f"exterior digraph for m={m} exceeds {max_vertices} vertices")
    vertices = sorted(seen)
    index = {v: k for k, v in enumerate(vertices)}
    succ = [tuple(index[v] for v in arcs[u]) for u in vertices]
    f_index = {f: k for k, f in enumerate(firsts)}
    lasts: dict[int, list[int]] = {}
    for l in vertices:
        if l[0] != (0, 0):
            continue
        for f in successors(m, l, FIRST, rules):
            if f in f_index:
                lasts.setdefault(f_index[f], []).append(index[l])
    triples = []
    for s, fs in seconds.items():
        for f in fs:
            for l in lasts.get(f, ()):
                triples.append((l, f, index[s]))
    # keep only first columns that close into at least one triple
    live = sorted({f for _, f, _ in triples})
    renum = {f: k for k, f in enumerate(live)}
    triples = [(l, renum[f], s) for l, f, s in triples]
    return ColumnDigraph(EXT, m, vertices, succ, [firsts[f] for f in live], sorted(triples))


def encode_hc_ext(hc: HamCycle) -> list[Column]:
    """Columns of the exterior-coding matrix of a rooted contractible cycle."""
    if not is_rooted(hc):
        raise ValueError("cycle must have w_{1,1} as the up root of its split tree")
    c = hc.cylinder
    lf = lift(hc, EXT)
    info = joined_at_own_threshold(lf)
    columns = []
    for j in range(1, c.n + 1):
        cells: list[tuple[int, int]] = [(0, 0)] * c.m
        for sg, rows in ((1, range(c.m, 0, -1)), (-1, range(1, c.m + 1))):
            ordinals: dict[int, dict] = {}
            for i in rows:
                w = (i, j)
                if lf.sign(w) != sg:
                    continue
                r = lf.roll(w)
                if info.rooted[w]:
                    cells[i - 1] = (sg, r)
                    continue
                per = ordinals.setdefault(r, {})
                key = info.cls[w]
                if key not in per:
                    per[key] = len(per) + 2
                cells[i - 1] = (sg * per[key], r)
        columns.append(tuple(cells))
    return columns
