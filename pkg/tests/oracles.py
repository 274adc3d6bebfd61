"""Independent reference implementations the library is judged against.

Everything here is written the slow, obvious way on purpose: plain dicts,
plain loops, no shared code with the package.  When a test compares the
library to one of these, agreement means two separate routes reached the
same answer.
"""

import itertools
import math

import numpy as np


def dense_from_coo(m):
    """Dense array accumulated entry by entry (duplicates add)."""
    a = np.zeros((m.n, m.n))
    for i, j, v in zip(m.row.tolist(), m.col.tolist(), m.val.tolist()):
        a[i, j] += v
    return a


def dense_from_sss(s):
    """Dense array expanded from skyline storage, mirror signs applied."""
    a = np.zeros((s.n, s.n))
    for i in range(s.n):
        a[i, i] = s.diags[i]
        for k in range(s.row_ptr[i], s.row_ptr[i + 1]):
            c = int(s.col_ind[k])
            v = float(s.off_diags[k])
            a[i, c] = v
            a[c, i] = -v
    return a


def normalize_oracle(n, rows, cols, vals):
    """Duplicate-summed, (row, col)-sorted triplets; explicit zeros kept."""
    acc = {}
    for i, j, v in zip(list(rows), list(cols), list(vals)):
        key = (int(i), int(j))
        acc[key] = acc.get(key, 0.0) + float(v)
    items = sorted(acc.items())
    r = np.array([k[0] for k, _ in items], dtype=np.int64)
    c = np.array([k[1] for k, _ in items], dtype=np.int64)
    v = np.array([w for _, w in items], dtype=np.float64)
    return r, c, v


def permute_entries_oracle(n, entries, forward):
    """Relabel triplets through the permutation and resort."""
    moved = [(int(forward[i]), int(forward[j]), float(v)) for i, j, v in entries]
    return sorted(moved)


def adjacency_oracle(m):
    """Symmetrized off-diagonal adjacency as sorted neighbor lists."""
    nbr = {i: set() for i in range(m.n)}
    for i, j, _ in zip(m.row.tolist(), m.col.tolist(), m.val.tolist()):
        if i != j:
            nbr[i].add(j)
            nbr[j].add(i)
    return {i: sorted(s) for i, s in nbr.items()}


def bandwidth_oracle(entries):
    """Max |i - j| over a triplet iterable, 0 when nothing is off-diagonal."""
    width = 0
    for i, j, _ in entries:
        width = max(width, abs(i - j))
    return width


def bandwidth_of_order(adj, forward):
    """Bandwidth the pattern would have after relabeling by ``forward``."""
    width = 0
    for i, nbrs in adj.items():
        for j in nbrs:
            width = max(width, abs(int(forward[i]) - int(forward[j])))
    return width


def _bfs_levels(adj, root, component):
    """Level sets of a BFS from root, restricted to one component."""
    level = {root: 0}
    frontier = [root]
    levels = [[root]]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if u in component and u not in level:
                    level[u] = level[v] + 1
                    nxt.append(u)
        if nxt:
            levels.append(sorted(nxt))
        frontier = nxt
    return levels


def _pseudo_peripheral_root(adj, deg, component):
    """Root search per the classic recipe: walk to a min-degree vertex of
    the deepest BFS level until the eccentricity stops growing."""
    root = min(component)
    levels = _bfs_levels(adj, root, component)
    while True:
        candidate = min(levels[-1], key=lambda v: (deg[v], v))
        cand_levels = _bfs_levels(adj, candidate, component)
        if len(cand_levels) > len(levels):
            root, levels = candidate, cand_levels
        else:
            return root


def textbook_rcm(n, adj):
    """Reference RCM coded from the textbook description, independently.

    Pseudo-peripheral root per component, Cuthill-McKee BFS with neighbors
    taken in (degree, index) order, global reversal at the end.  Plain
    Python sets and dicts throughout; shares no structure with the library
    implementation, which is the point of using it as an oracle.
    """
    deg = {i: len(adj[i]) for i in range(n)}
    visited = [False] * n
    order = []
    while len(order) < n:
        component = set()
        seed = next(i for i in range(n) if not visited[i])
        stack = [seed]
        component.add(seed)
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in component:
                    component.add(u)
                    stack.append(u)
        start = _pseudo_peripheral_root(adj, deg, component)
        visited[start] = True
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(adj[v], key=lambda u: (deg[u], u)):
                if not visited[u]:
                    visited[u] = True
                    queue.append(u)
    order.reverse()
    forward = np.empty(n, dtype=np.int64)
    for new, old in enumerate(order):
        forward[old] = new
    return forward


def brute_force_min_bandwidth(n, adj):
    """Exact minimum bandwidth over all n! labelings; keep n tiny."""
    best = n
    for perm in itertools.permutations(range(n)):
        forward = np.array(perm, dtype=np.int64)
        best = min(best, bandwidth_of_order(adj, forward))
    return best


def binom_bounds(slots, p):
    """(mean, 3 sigma) of a Binomial(slots, p) count."""
    mean = slots * p
    sigma = math.sqrt(slots * p * (1.0 - p))
    return mean, 3.0 * sigma


def path_matrix_entries(n, weight=1.0):
    """Strictly-lower triples of a path graph 0-1-2-...-(n-1)."""
    return [(i, i - 1, weight) for i in range(1, n)]


def grid_adjacency(k):
    """5-point k x k grid adjacency (vertex r*k+c)."""
    adj = {i: [] for i in range(k * k)}
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if r + 1 < k:
                adj[v].append((r + 1) * k + c)
                adj[(r + 1) * k + c].append(v)
            if c + 1 < k:
                adj[v].append(v + 1)
                adj[v + 1].append(v)
    return {i: sorted(s) for i, s in adj.items()}
