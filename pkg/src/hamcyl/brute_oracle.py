"""Exhaustive Hamiltonian-cycle enumeration on small cylinders.

This is the ground truth every transfer count is checked against.  Cycles
are found by extending a path from the anchor vertex (0, 1); each cycle is
reported once (the direction whose first edge sorts before its closing
edge).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .grid_core import Cylinder, Edge, Window, build_cylinder, window_links

DEFAULT_MAX_VERTICES = 60


class GuardError(RuntimeError):
    """Raised when a request exceeds a configured resource guard."""


class Kind(Enum):
    CONTRACTIBLE = "contractible"
    NON_CONTRACTIBLE = "non-contractible"


@dataclass(frozen=True)
class HamCycle:
    cylinder: Cylinder
    edges: frozenset[Edge]
    winding: int

    def __post_init__(self) -> None:
        deg: dict = {}
        for e in self.edges:
            for v in self.cylinder.endpoints(e):
                deg[v] = deg.get(v, 0) + 1
        if len(deg) != self.cylinder.vertex_count or any(d != 2 for d in deg.values()):
            raise ValueError("edge set is not 2-regular on all vertices")

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=Edge.sort_key)

    def to_json(self) -> dict:
        c = self.cylinder
        return {
            "edges": [[list(p) for p in c.endpoints(e)] for e in self.sorted_edges()],
            "edge_ids": [list(e) for e in self.sorted_edges()],
            "winding": self.winding,
            "classification": classify(self).value,
        }

    def rotated(self, shift: int = 1) -> "HamCycle":
        n = self.cylinder.n
        moved = frozenset(Edge(e.kind, e.row, (e.col - 1 + shift) % n + 1) for e in self.edges)
        return HamCycle(self.cylinder, moved, self.winding)


@dataclass
class Region:
    windows: frozenset[Window]
    up_roots: tuple[Window, ...]
    down_roots: tuple[Window, ...]


@dataclass
class RegionDecomposition:
    interior_windows: frozenset[Window]
    exterior_components: list[Region] = field(default_factory=list)
    split_tree_index: int = -1

    @property
    def split_tree(self) -> Region:
        return self.exterior_components[self.split_tree_index]


def _graph(c: Cylinder):
    index = {v: k for k, v in enumerate(c.vertices)}
    adj: list[list[tuple[int, int, int]]] = [[] for _ in c.vertices]
    edge_list = list(c.edges)
    for eid, e in enumerate(edge_list):
        a, b = (index[p] for p in c.endpoints(e))
        dx = 1 if e.kind == "h" else 0
        adj[a].append((b, eid, dx))
        adj[b].append((a, eid, -dx))
    return adj, edge_list


def enumerate_hamiltonian_cycles(c: Cylinder, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[HamCycle]:
    """All Hamiltonian cycles of ``c``, each exactly once, in a fixed order."""
    if c.vertex_count > max_vertices:
        raise GuardError(f"(m+1)*n = {c.vertex_count} exceeds oracle guard {max_vertices}")
    adj, edge_list = _graph(c)
    total = len(adj)
    nbr_sets = [frozenset(b for b, _, _ in row) for row in adj]
    anchor = 0
    out: list[HamCycle] = []
    visited = [False] * total
    visited[anchor] = True
    path_edges: list[int] = []

    def available(v: int, head: int) -> int:
        # distinct neighbours that could still supply a cycle edge to v
        cnt = 0
        for w in nbr_sets[v]:
            if not visited[w] or w == head or w == anchor:
                cnt += 1
        return cnt

    def connected_rest(head: int, remaining: int) -> bool:
        # unvisited vertices must all be reachable from head
        seen = {head}
        stack = [head]
        reached = 0
        while stack:
            v = stack.pop()
            for w in nbr_sets[v]:
                if w not in seen and not visited[w]:
                    seen.add(w)
                    reached += 1
                    stack.append(w)
        return reached == remaining

    def dfs(head: int, depth: int, wind: int) -> None:
        if depth == total:
            for w, eid, dx in adj[head]:
                if w == anchor and path_edges[0] < eid:
                    edges = frozenset(edge_list[k] for k in path_edges + [eid])
                    out.append(HamCycle(c, edges, (wind + dx) // c.n))
            return
        for w, eid, dx in adj[head]:
            if visited[w]:
                continue
            visited[w] = True
            path_edges.append(eid)
            ok = True
            for x in nbr_sets[head]:
                if not visited[x] and available(x, w) < 2:
                    ok = False
                    break
            if ok and depth + 1 < total and (depth & 3) == 0:
                ok = connected_rest(w, total - depth - 1)
            if ok:
                dfs(w, depth + 1, wind + dx)
            path_edges.pop()
            visited[w] = False

    dfs(anchor, 1, 0)
    return out


def classify(hc: HamCycle) -> Kind:
    return Kind.CONTRACTIBLE if hc.winding == 0 else Kind.NON_CONTRACTIBLE


def decompose_regions(hc: HamCycle) -> RegionDecomposition:
    """Split the windows into the interior tree and the exterior trees."""
    if classify(hc) is not Kind.CONTRACTIBLE:
        raise ValueError("region decomposition needs a contractible cycle")
    c = hc.cylinder
    links = passable_links(hc)
    top, bottom = ("rim", 0), ("rim", c.m + 1)
    graph: dict = {w: [] for w in c.windows}
    graph[top], graph[bottom] = [], []
    for a, b, _ in links:
        graph[a].append(b)
        graph[b].append(a)
    for j in range(1, c.n + 1):
        if Edge("h", 0, j) not in hc.edges:
            graph[top].append((1, j))
            graph[(1, j)].append(top)
        if Edge("h", c.m, j) not in hc.edges:
            graph[bottom].append((c.m, j))
            graph[(c.m, j)].append(bottom)
    outside = _reach(graph, [top, bottom])
    interior = frozenset(w for w in c.windows if w not in outside)

    inner_graph = {w: [] for w in c.windows}
    for a, b, _ in links:
        inner_graph[a].append(b)
        inner_graph[b].append(a)
    seen: set = set()
    comps: list[Region] = []
    for w in c.windows:
        if w in interior or w in seen:
            continue
        comp = _reach(inner_graph, [w])
        seen |= comp
        ups = tuple(sorted(x for x in comp if x[0] == 1))
        downs = tuple(sorted(x for x in comp if x[0] == c.m))
        comps.append(Region(frozenset(comp), ups, downs))
    dec = RegionDecomposition(interior, comps)
    _check_decomposition(hc, dec, links)
    return dec


def passable_links(hc: HamCycle) -> list[tuple[Window, Window, int]]:
    """Window adjacencies whose shared edge is not on the cycle."""
    return [(a, b, dx) for a, b, e, dx in window_links(hc.cylinder) if e not in hc.edges]


def _reach(graph: dict, starts: list) -> set:
    seen = set(starts)
    queue = deque(starts)
    while queue:
        v = queue.popleft()
        for w in graph[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return {v for v in seen if not (isinstance(v, tuple) and v[0] == "rim")}


def _is_tree(windows: frozenset, links) -> bool:
    inner = sum(1 for a, b, _ in links if a in windows and b in windows)
    return inner == len(windows) - 1


def _check_decomposition(hc: HamCycle, dec: RegionDecomposition, links) -> None:
    if dec.interior_windows and not _is_tree(dec.interior_windows, links):
        raise AssertionError("interior windows do not form a tree")
    if hc.cylinder.m == 1:
        # every exterior window touches both rims, so the lone exterior
        # window is the split tree
        comps = dec.exterior_components
        if len(comps) != 1 or len(comps[0].windows) != 1:
            raise AssertionError("m = 1 contractible cycle must have one exterior window")
        dec.split_tree_index = 0
        return
    split = []
    for k, comp in enumerate(dec.exterior_components):
        if not _is_tree(comp.windows, links):
            raise AssertionError("exterior component is not a tree")
        nu, nd = len(comp.up_roots), len(comp.down_roots)
        if nu == 1 and nd == 1:
            split.append(k)
        elif nu + nd != 1:
            raise AssertionError(f"exterior tree with {nu} up and {nd} down roots")
    if len(split) != 1:
        raise AssertionError(f"expected one split tree, found {len(split)}")
    dec.split_tree_index = split[0]


def is_rooted(hc: HamCycle, dec: RegionDecomposition | None = None) -> bool:
    """True when the split tree's up root is w_{1,1}."""
    dec = dec or decompose_regions(hc)
    return dec.split_tree.up_roots == ((1, 1),)


@dataclass(frozen=True)
class OracleCounts:
    h_c: int
    h_nc: int
    phi_rooted: int

    @property
    def total(self) -> int:
        return self.h_c + self.h_nc


def oracle_counts(c: Cylinder, max_vertices: int = DEFAULT_MAX_VERTICES) -> OracleCounts:
    cycles = enumerate_hamiltonian_cycles(c, max_vertices)
    h_c = h_nc = rooted = 0
    for hc in cycles:
        if classify(hc) is Kind.CONTRACTIBLE:
            h_c += 1
            if is_rooted(hc):
                rooted += 1
        else:
            h_nc += 1
    return OracleCounts(h_c, h_nc, rooted)


def rooted_contractible_cycles(c: Cylinder, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[HamCycle]:
    out = []
    for hc in enumerate_hamiltonian_cycles(c, max_vertices):
        if classify(hc) is Kind.CONTRACTIBLE and is_rooted(hc):
            out.append(hc)
    return out


def cycles_to_json(cycles: list[HamCycle]) -> str:
    return json.dumps([hc.to_json() for hc in cycles])


__all__ = [
    "GuardError",
    "HamCycle",
    "Kind",
    "OracleCounts",
    "Region",
    "RegionDecomposition",
    "build_cylinder",
    "classify",
    "cycles_to_json",
    "decompose_regions",
    "enumerate_hamiltonian_cycles",
    "is_rooted",
    "oracle_counts",
    "passable_links",
    "rooted_contractible_cycles",
]
