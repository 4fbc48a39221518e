"""Roll numbers and k^r-joined classes of a contractible Hamiltonian cycle.

Every non-zero tree (exterior trees for the exterior coding, the interior
tree for the interior coding) is lifted to the universal-cover strip, where
window w_{i,j} of copy t sits at strip column X = j + n*t.  One copy of each
tree is kept (the basis of the rolling imprint):

* split tree: the copy whose down root lies in strip columns 1..n;
* other exterior trees: the copy whose root lies in 1..n;
* interior tree: the copy whose leftmost first-row window lies in 1..n.

The roll of a window is the t of its kept copy; zero windows have roll 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .brute_oracle import HamCycle, decompose_regions, passable_links
from .columns import EXT, INT
from .grid_core import Window


@dataclass
class Tree:
    windows: frozenset[Window]
    sign: int
    anchor: Window
    roots: tuple[Window, ...]  # roots that relabel joined windows to +-1
    is_split: bool = False


@dataclass
class Lift:
    """Basis copy positions: strip column of every non-zero window."""

    m: int
    n: int
    coding: str
    trees: list[Tree]
    strip: dict[Window, int] = field(default_factory=dict)
    tree_of: dict[Window, int] = field(default_factory=dict)
    adjacency: dict[Window, list[tuple[Window, int]]] = field(default_factory=dict)

    def roll(self, w: Window) -> int:
        if w not in self.strip:
            return 0
        return (self.strip[w] - w[1]) // self.n

    def sign(self, w: Window) -> int:
        k = self.tree_of.get(w)
        return 0 if k is None else self.trees[k].sign


def _trees(hc: HamCycle, coding: str) -> list[Tree]:
    dec = decompose_regions(hc)
    c = hc.cylinder
    if coding == INT:
        inner = dec.interior_windows
        if not inner:
            return []
        top = [w for w in inner if w[0] == 1]
        return [Tree(inner, 1, top[0], ())]
    out = []
    for k, comp in enumerate(dec.exterior_components):
        split = k == dec.split_tree_index
        if split or c.m == 1:
            # at m = 1 the lone exterior window is its own down root
            out.append(Tree(comp.windows, 1, comp.down_roots[0], comp.down_roots, split))
        elif comp.up_roots:
            out.append(Tree(comp.windows, -1, comp.up_roots[0], comp.up_roots))
        else:
            out.append(Tree(comp.windows, 1, comp.down_roots[0], comp.down_roots))
    return out


def lift(hc: HamCycle, coding: str) -> Lift:
    """Place each non-zero tree's basis copy in the strip."""
    c = hc.cylinder
    adjacency: dict[Window, list[tuple[Window, int]]] = {w: [] for w in c.windows}
    for a, b, dx in passable_links(hc):
        adjacency[a].append((b, dx))
        adjacency[b].append((a, -dx))
    out = Lift(c.m, c.n, coding, _trees(hc, coding), adjacency=adjacency)
    for k, tree in enumerate(out.trees):
        pos = {tree.anchor: tree.anchor[1]}
        queue = deque([tree.anchor])
        while queue:
            w = queue.popleft()
            for x, dx in adjacency[w]:
                if x not in tree.windows:
                    continue
                want = pos[w] + dx
                if x in pos:
                    if pos[x] != want:
                        raise ValueError("tree wraps around the cylinder")
                    continue
                pos[x] = want
                queue.append(x)
        if coding == INT:
            # anchor on the leftmost first-row window of this copy
            lead = min((p, w) for w, p in pos.items() if w[0] == 1)
            offset = lead[0] - ((lead[0] - 1) % c.n + 1)
            pos = {w: p - offset for w, p in pos.items()}
        for w, p in pos.items():
            out.strip[w] = p
            out.tree_of[w] = k
    return out


def compute_rolls(hc: HamCycle, coding: str) -> dict[Window, int]:
    """Roll of every window under the chosen coding."""
    lf = lift(hc, coding)
    return {w: lf.roll(w) for w in hc.cylinder.windows}


@dataclass
class JoinInfo:
    """Class identity of each non-zero window at its own (column, roll)."""

    cls: dict[Window, tuple[int, int]]
    rooted: dict[Window, bool]


def joined_at_own_threshold(lf: Lift) -> JoinInfo:
    """For each window w^r_{i,j}, its j^r-joined class and root contact.

    Windows are added to a union-find in strip order; after a whole strip
    column X has been added, the windows in column X read off their class.
    """
    cls: dict[Window, tuple[int, int]] = {}
    rooted: dict[Window, bool] = {}
    for k, tree in enumerate(lf.trees):
        order = sorted(tree.windows, key=lambda w: lf.strip[w])
        parent = {w: w for w in order}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        added: set = set()
        idx = 0
        while idx < len(order):
            x0 = lf.strip[order[idx]]
            batch = []
            while idx < len(order) and lf.strip[order[idx]] == x0:
                batch.append(order[idx])
                idx += 1
            for w in batch:
                added.add(w)
            for w in batch:
                for y, dx in lf.adjacency[w]:
                    if y in added and lf.tree_of.get(y) == k:
                        parent[find(y)] = find(w)
            roots = {find(r) for r in tree.roots if r in added}
            for w in batch:
                rep = find(w)
                cls[w] = (k, rep)
                rooted[w] = rep in roots
    return JoinInfo(cls, rooted)


def kr_joined_classes(hc: HamCycle, coding: str, k: int, r: int) -> list[frozenset[Window]]:
    """Partition of eligible non-zero windows into k^r-joined classes.

    Eligible windows have roll < r, or roll = r and column <= k; classes
    are connected components of their basis copies of equal sign.
    """
    c = hc.cylinder
    if not 1 <= k <= c.n:
        raise ValueError(f"column {k} outside 1..{c.n}")
    bound = c.m // 2 + 1
    if abs(r) > bound:
        raise ValueError(f"roll {r} outside +-{bound}")
    lf = lift(hc, coding)
    limit = k + c.n * r
    eligible = [w for w in lf.strip if lf.strip[w] <= limit]
    seen: set = set()
    out = []
    for w in sorted(eligible):
        if w in seen:
            continue
        comp = {w}
        queue = deque([w])
        while queue:
            x = queue.popleft()
            for y, _ in lf.adjacency[x]:
                if y in comp or y not in lf.strip or lf.strip[y] > limit:
                    continue
                if lf.tree_of[y] != lf.tree_of[x]:
                    continue
                comp.add(y)
                queue.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out
