"""Labelled columns and the left-to-right transfer rule shared by both codings.

A column is a tuple of ``(b, r)`` cells, top row first.  ``b`` is the colour
(sign gives the tree type, magnitude the class ordinal) and ``r`` the roll.

The core routine is :func:`propagate`.  Given the previous column ``u`` and
the support and per-block rolls of the next column, it rebuilds the only
labelling the next column can carry: blocks are merged through the classes
of ``u`` they touch, components touching a root become +-1, the rest get
ordinals in scan order.  It returns ``None`` when the step would close a
cycle, join two roots, strand a class of ``u`` or break roll continuity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Cell = tuple[int, int]
Column = tuple[Cell, ...]

EXT = "ext"
INT = "int"


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


def support(col: Column) -> tuple[int, ...]:
    return tuple(sign(b) for b, _ in col)


def blocks(sup: Sequence[int]) -> list[tuple[int, int, int]]:
    """Maximal runs of equal non-zero sign as ``(first_row, last_row, sign)``."""
    out = []
    i, m = 0, len(sup)
    while i < m:
        s = sup[i]
        j = i
        while j + 1 < m and sup[j + 1] == s:
            j += 1
        if s:
            out.append((i, j, s))
        i = j + 1
    return out


def factors(col: Column) -> list[tuple[int, int, int, int]]:
    """Maximal non-zero factors as ``(first_row, last_row, b, r)``."""
    out = []
    i, m = 0, len(col)
    while i < m:
        j = i
        while j + 1 < m and col[j + 1] == col[i]:
            j += 1
        if col[i][0]:
            out.append((i, j, col[i][0], col[i][1]))
        i = j + 1
    return out


def harmonized(col: Column) -> bool:
    """Same-sign neighbours carry equal labels; zero cells have roll 0."""
    for k, (b, r) in enumerate(col):
        if b == 0 and r != 0:
            return False
        if k and sign(b) == sign(col[k - 1][0]) and (b, r) != col[k - 1]:
            return False
    return True


def truncated_words(col: Column, sgn: int, bottom_up: bool = False) -> tuple[list[int], list[int]]:
    """Colour word and roll word of the factors with the given sign."""
    fs = [f for f in factors(col) if sign(f[2]) == sgn]
    if bottom_up:
        fs.reverse()
    return [f[2] for f in fs], [f[3] for f in fs]


def first_seen_in_order(labels: Iterable[int], start: int) -> bool:
    """Labels (by magnitude) make their first appearance as start, start+1, ..."""
    nxt = start
    for b in labels:
        b = abs(b)
        if b == nxt:
            nxt += 1
        elif b > nxt:
            return False
    return True


def interlaced(pairs: Sequence[tuple[int, int]]) -> bool:
    """True if a scattered pattern a..b..a..b with a != b occurs.

    ``pairs`` is a sequence of (row, label); the pattern must use rows in
    increasing order.
    """
    seq = [b for _, b in pairs]
    for a_pos, a in enumerate(seq):
        seen_b: set[int] = set()
        for k in range(a_pos + 1, len(seq)):
            x = seq[k]
            if x == a:
                for y in seen_b:
                    if y in seq[k + 1:]:
                        return True
            else:
                seen_b.add(x)
    return False


def render(col: Column) -> str:
    """The b^r tuple notation, e.g. ``(0^0,2^{-1},0^0)``."""
    parts = []
    for b, r in col:
        rs = str(r) if 0 <= r <= 9 else "{" + str(r) + "}"
        parts.append(f"{b}^{rs}")
    return "(" + ",".join(parts) + ")"


def parse(text: str) -> Column:
    """Inverse of :func:`render`."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"not a column: {text!r}")
    cells = []
    for part in body[1:-1].split(","):
        b, r = part.split("^")
        cells.append((int(b), int(r.strip("{}"))))
    return tuple(cells)


@dataclass
class _UnionFind:
    parent: list[int]

    @classmethod
    def of(cls, size: int) -> "_UnionFind":
        return cls(list(range(size)))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def propagate(
    u: Column,
    sup: Sequence[int],
    rolls: Sequence[int],
    coding: str,
    shift: int = 0,
    closing: bool = False,
) -> Column | None:
    """Canonical labelling of the column that follows ``u``.

    ``sup`` is the next column's support, ``rolls`` one roll per block of
    ``sup`` (see :func:`blocks`).  ``shift`` is 1 across the seam from
    column n to column 1, where rolls step up by one.  ``closing`` marks
    ``u`` as the last column (this only matters for interior coding, where a
    lone roll-0 class may end there).
    """
    m = len(u)
    vb = blocks(sup)
    if len(rolls) != len(vb):
        raise ValueError("one roll per block expected")
    block_of = [-1] * m
    for k, (s, e, _) in enumerate(vb):
        for i in range(s, e + 1):
            block_of[i] = k

    # nodes: next-column blocks, then classes / rooted factors of u
    node_id: dict = {}
    u_block = [0] * m
    kb = 0
    for i in range(m):
        if i and u[i] != u[i - 1]:
            kb += 1
        u_block[i] = kb

    def unode(i: int) -> int:
        b, r = u[i]
        key = ("root", u_block[i]) if abs(b) == 1 else ("cls", b, r)
        if key not in node_id:
            node_id[key] = len(vb) + len(node_id)
        return node_id[key]

    links = []
    continued: set = set()
    for i in range(m):
        bu, ru = u[i]
        if bu == 0 or sign(bu) != sup[i]:
            continue
        if rolls[block_of[i]] != ru + shift:
            return None
        links.append((block_of[i], unode(i)))
        continued.add((bu, ru))

    uf = _UnionFind.of(len(vb) + len(node_id))
    for a, b in links:
        if not uf.union(a, b):
            return None  # cycle, or one class entering a block twice

    # classes of u that must carry on into the next column
    classes = {cell for cell in u if abs(cell[0]) >= 2}
    if coding == INT:
        present = [r for b, r in classes]
        top = max(present) if present else None
        for b, r in classes:
            if (b, r) in continued:
                continue
            lone = b == 2 and r == top and (3, r) not in classes
            if lone and (r > 0 or (closing and r == 0)):
                continue
            return None
        for r in set(rolls):
            if r > 0 and not any(rolls[a] == r for a, _ in links):
                return None
    else:
        if not classes <= continued:
            return None

    # roots of exterior trees: row-m positive block, row-1 negative block
    root_count: dict[int, int] = {}
    if coding == EXT:
        for key, nid in node_id.items():
            if key[0] == "root":
                c = uf.find(nid)
                root_count[c] = root_count.get(c, 0) + 1
        for k, (s, e, sg) in enumerate(vb):
            if (sg > 0 and e == m - 1) or (sg < 0 and s == 0):
                if rolls[k] != 0:
                    return None
                c = uf.find(k)
                root_count[c] = root_count.get(c, 0) + 1
        if any(v > 1 for v in root_count.values()):
            return None

    label = [0] * len(vb)
    if coding == INT:
        seen: dict[int, dict[int, int]] = {}
        for k in range(len(vb)):
            c = uf.find(k)
            per = seen.setdefault(rolls[k], {})
            if c not in per:
                per[c] = len(per) + 2
            label[k] = per[c]
    else:
        for sg, order in ((1, range(len(vb) - 1, -1, -1)), (-1, range(len(vb)))):
            seen = {}
            for k in order:
                if vb[k][2] != sg:
                    continue
                c = uf.find(k)
                if root_count.get(c):
                    label[k] = sg
                    continue
                per = seen.setdefault(rolls[k], {})
                if c not in per:
                    per[c] = len(per) + 2
                label[k] = sg * per[c]

    out = [(0, 0)] * m
    for k, (s, e, _) in enumerate(vb):
        for i in range(s, e + 1):
            out[i] = (label[k], rolls[k])
    return tuple(out)


def roll_choices(
    vb: Sequence[tuple[int, int, int]],
    forced: Sequence[int | None],
    rmax: int,
    coding: str,
    opening: Sequence[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Roll assignments to blocks, honouring forced rolls.

    Consecutive factors of one truncated roll word differ by at most one;
    for interior coding the word is the whole column, for exterior coding
    there is one word per sign.  ``opening`` restricts the first letter of
    the interior roll word.
    """
    n = len(vb)
    out = [0] * n

    def rec(k: int, last: dict[int, int | None]) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(out)
            return
        key = 0 if coding == INT else vb[k][2]
        prev = last.get(key)
        if forced[k] is not None:
            cands: Iterable[int] = (forced[k],)
        elif prev is None:
            cands = range(-rmax, rmax + 1)
        else:
            cands = range(max(-rmax, prev - 1), min(rmax, prev + 1) + 1)
        for r in cands:
            if prev is not None and abs(r - prev) > 1:
                continue
            if prev is None and coding == INT and opening is not None and r not in opening:
                continue
            out[k] = r
            saved = last.get(key)
            last[key] = r
            yield from rec(k + 1, last)
            last[key] = saved

    yield from rec(0, {})


def label_choices(
    vb: Sequence[tuple[int, int, int]],
    rolls: Sequence[int],
    coding: str,
    allow_one: bool = True,
) -> Iterator[tuple[int, ...]]:
    """Labels for the blocks of a column that respect first-appearance order.

    Interior labels are 2, 3, ... in top-down order per roll.  Exterior
    positive labels are 2, 3, ... bottom-up per roll, negative labels are
    -2, -3, ... top-down per roll; +-1 (joined with a root) is always
    available unless ``allow_one`` is false.
    """
    n = len(vb)
    if coding == INT:
        order = list(range(n))
    else:
        order = [k for k in range(n - 1, -1, -1) if vb[k][2] > 0]
        order += [k for k in range(n) if vb[k][2] < 0]
    out = [0] * n

    def rec(pos: int, top: dict) -> Iterator[tuple[int, ...]]:
        if pos == len(order):
            yield tuple(out)
            return
        k = order[pos]
        sg = vb[k][2]
        key = (sg, rolls[k])
        hi = top.get(key, 1)
        cands = list(range(2, hi + 2))
        if coding == EXT and allow_one:
            cands.insert(0, 1)
        for b in cands:
            out[k] = sg * b
            saved = top.get(key)
            if b > hi:
                top[key] = b
            yield from rec(pos + 1, top)
            if saved is None:
                top.pop(key, None)
            else:
                top[key] = saved

    yield from rec(0, {})


def assemble(m: int, vb: Sequence[tuple[int, int, int]], labels: Sequence[int], rolls: Sequence[int]) -> Column:
    out = [(0, 0)] * m
    for (s, e, _), b, r in zip(vb, labels, rolls):
        for i in range(s, e + 1):
            out[i] = (b, r)
    return tuple(out)


def block_rolls(col: Column) -> tuple[int, ...]:
    """One roll per block of the column's support."""
    return tuple(col[s][1] for s, _, _ in blocks(support(col)))


# 2x2 windows patterns (|a| values, left column then right column) that
# would leave a vertex of the grid with degree other than two
BAD_SQUARES = frozenset({(1, 1, 1, 1), (0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1)})


@dataclass
class ColumnDigraph:
    """Column digraph of one coding for one m.

    ``boundary`` holds ``(l, f, s)`` triples for the exterior coding (``l``
    and ``s`` index ``vertices``, ``f`` indexes ``first``) and ``(f, l)``
    pairs for the interior coding (both index ``vertices``).
    """

    coding: str
    m: int
    vertices: list[Column]
    succ: list[tuple[int, ...]]
    first: list[Column]
    boundary: list[tuple[int, ...]]

    @property
    def arc_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def summary(self) -> dict:
        out = {"coding": self.coding, "m": self.m, "vertices": len(self.vertices), "arcs": self.arc_count}
        if self.coding == EXT:
            out["first_columns"] = len(self.first)
            out["lfs_triples"] = len(self.boundary)
        else:
            out["fl_pairs"] = len(self.boundary)
        return out

    def to_json(self) -> dict:
        out = self.summary()
        out["vertex_labels"] = [render(v) for v in self.vertices]
        out["arc_list"] = [[a, b] for a, row in enumerate(self.succ) for b in row]
        out["first_labels"] = [render(f) for f in self.first]
        out["boundary"] = [list(t) for t in self.boundary]
        return out

    def to_dot(self) -> str:
        lines = [f'digraph "{self.coding}_{self.m}" {{']
        for k, v in enumerate(self.vertices):
            lines.append(f'  v{k} [label="{render(v)}"];')
        for k, f in enumerate(self.first):
            if self.coding == EXT:
                lines.append(f'  f{k} [label="{render(f)}", shape=box];')
        for a, row in enumerate(self.succ):
            for b in row:
                lines.append(f"  v{a} -> v{b};")
        if self.coding == EXT:
            arcs = sorted({(f"v{l}", f"f{f}") for l, f, _ in self.boundary})
            arcs += sorted({(f"f{f}", f"v{s}") for _, f, s in self.boundary})
            lines += [f"  {a} -> {b} [style=dashed];" for a, b in arcs]
        else:
            lines += [f"  v{l} -> v{f} [style=dashed];" for f, l in self.boundary]
        lines.append("}")
        return "\n".join(lines) + "\n"
