"""Shared checks used by several test modules."""

from fractions import Fraction
from itertools import combinations

from hamcyl.grid_core import build_cylinder


def subset_cycle_counts(m, n):
    """(contractible, non-contractible) Hamiltonian cycles by edge-subset search.

    Independent of the backtracking enumerator: every |V|-edge subset is tested
    for 2-regularity and connectivity, and the winding parity is read from how
    many horizontal edges cross the seam between column n and column 1.
    """
    c = build_cylinder(m, n)
    edges = list(c.edges)
    ends = [c.endpoints(e) for e in edges]
    nv = c.vertex_count
    c_count = nc_count = 0
    for sub in combinations(range(len(edges)), nv):
        deg = {}
        for k in sub:
            for v in ends[k]:
                deg[v] = deg.get(v, 0) + 1
        if len(deg) != nv or any(d != 2 for d in deg.values()):
            continue
        adj = {}
        for k in sub:
            a, b = ends[k]
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        start = ends[sub[0]][0]
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != nv:
            continue
        seam = sum(1 for k in sub if edges[k].kind == "h" and edges[k].col == n)
        if seam % 2:
            nc_count += 1
        else:
            c_count += 1
    return c_count, nc_count


def charpoly(rows):
    """Coefficients (low degree first) of det(M - xI), by Faddeev-LeVerrier."""
    size = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    ident = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    coeffs = [Fraction(1)]  # monic det(xI - M), highest degree first
    mk = [[Fraction(0)] * size for _ in range(size)]
    for k in range(1, size + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prev = [[mk[i][j] + coeffs[-1] * ident[i][j] for j in range(size)] for i in range(size)]
        mk = [[sum(a[i][t] * prev[t][j] for t in range(size)) for j in range(size)] for i in range(size)]
        coeffs.append(-sum(mk[i][i] for i in range(size)) / k)
    # det(M - xI) = (-1)^size det(xI - M)
    sgn = -1 if size % 2 else 1
    return [sgn * c for c in reversed(coeffs)]


def accepts_ext(d, cols):
    """Column-by-column and arc-by-arc acceptance of an exterior matrix."""
    idx = {v: k for k, v in enumerate(d.vertices)}
    fidx = {f: k for k, f in enumerate(d.first)}
    if cols[0] not in fidx or any(c not in idx for c in cols[1:]):
        return False
    if any(idx[b] not in d.succ[idx[a]] for a, b in zip(cols[1:], cols[2:])):
        return False
    return (idx[cols[-1]], fidx[cols[0]], idx[cols[1]]) in set(d.boundary)


def accepts_int(d, cols):
    idx = {v: k for k, v in enumerate(d.vertices)}
    if cols[0] not in d.first or any(c not in idx for c in cols):
        return False
    if any(idx[b] not in d.succ[idx[a]] for a, b in zip(cols, cols[1:])):
        return False
    return (idx[cols[0]], idx[cols[-1]]) in set(d.boundary)
