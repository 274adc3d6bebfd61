"""Bandwidth reduction by reverse Cuthill-McKee reordering.

The ordering works on the symmetrized off-diagonal pattern only; values and
the diagonal play no role.  Every choice is made deterministic: components
are processed by smallest original index, each component starts from a
pseudo-peripheral node found by repeated breadth-first sweeps, and children
are enqueued by ascending degree with ties broken by ascending original
index.  The complete Cuthill-McKee labeling is reversed at the end.

BFS internals are numba-jitted; the drivers stay in plain Python.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .formats import CooMatrix, SssMatrix, StructuralError, coo_normalize

__all__ = [
    "AdjacencyPattern",
    "Permutation",
    "pattern_from_coo",
    "compute_bandwidth",
    "rcm_order",
    "apply_permutation",
    "write_permutation",
    "read_permutation",
]


@dataclass(frozen=True, eq=False)
class AdjacencyPattern:
    """Undirected adjacency in compressed form.

    ``indices[indptr[u]:indptr[u + 1]]`` lists the neighbors of node ``u``
    in ascending order.  Self-loops are excluded; edges appear in both
    endpoint lists.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        ip = np.array(self.indptr, dtype=np.int64, copy=True).ravel()
        ix = np.array(self.indices, dtype=np.int64, copy=True).ravel()
        if ip.size != self.n + 1 or ip.size == 0 or ip[0] != 0 or ip[-1] != ix.size:
            raise StructuralError("indptr must run from 0 to len(indices) with n + 1 entries")
        if np.any(np.diff(ip) < 0):
            raise StructuralError("indptr must be non-decreasing")
        if ix.size and (ix.min() < 0 or ix.max() >= self.n):
            raise StructuralError("neighbor index out of range")
        ip.setflags(write=False)
        ix.setflags(write=False)
        object.__setattr__(self, "indptr", ip)
        object.__setattr__(self, "indices", ix)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


@dataclass(frozen=True, eq=False)
class Permutation:
    """A relabeling of ``n`` indices.

    ``forward[old] = new`` and ``inverse[new] = old``.  Applying the
    permutation to a matrix moves the entry at ``(i, j)`` to
    ``(forward[i], forward[j])``.
    """

    forward: np.ndarray
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        fw = np.array(self.forward, dtype=np.int64, copy=True).ravel()
        n = fw.size
        seen = np.zeros(n, dtype=bool)
        if n and (fw.min() < 0 or fw.max() >= n):
            raise StructuralError("permutation image out of range")
        seen[fw] = True
        if not np.all(seen):
            raise StructuralError("permutation is not a bijection")
        inv = np.empty(n, dtype=np.int64)
        inv[fw] = np.arange(n, dtype=np.int64)
        fw.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "forward", fw)
        object.__setattr__(self, "inverse", inv)

    @property
    def n(self) -> int:
        return int(self.forward.size)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=np.int64))


def pattern_from_coo(m: CooMatrix) -> AdjacencyPattern:
    """Symmetrized off-diagonal adjacency of a triplet matrix.

    Explicit zeros count as edges: the pattern, not the values, drives the
    reordering.
    """
    m = coo_normalize(m)
    off = m.row != m.col
    r = m.row[off]
    c = m.col[off]
    key = np.unique(np.concatenate((r * m.n + c, c * m.n + r)))
    rows = key // m.n
    counts = np.bincount(rows, minlength=m.n)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    return AdjacencyPattern(m.n, indptr, key % m.n)


def compute_bandwidth(m) -> int:
    """Largest off-diagonal distance ``|i - j|`` of a stored entry.

    Accepts :class:`CooMatrix` or :class:`SssMatrix`; returns 0 for
    diagonal-only and empty matrices.
    """
    if isinstance(m, SssMatrix):
        if m.nnz_offdiag == 0:
            return 0
        return int(np.max(m.row_indices() - m.col_ind))
    if isinstance(m, CooMatrix):
        if m.nnz == 0:
            return 0
        return int(np.max(np.abs(m.row - m.col)))
    raise TypeError(f"expected CooMatrix or SssMatrix, got {type(m).__name__}")


@njit(cache=True)
def _collect_component(indptr, indices, start, claimed, queue):
    """Breadth-first flood from ``start``; marks ``claimed``.

    Returns the number of nodes found; they occupy ``queue[:count]``.
    """
    queue[0] = start
    claimed[start] = True
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if not claimed[w]:
                claimed[w] = True
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def _bfs_stats(indptr, indices, degree, start, level, queue):
    """Level structure rooted at ``start``.

    ``level`` must hold -1 for every node of the component and is restored
    to -1 before returning.  Returns ``(eccentricity, best)`` where ``best``
    is the minimum-degree node of the deepest level, ties broken by
    smallest index.
    """
    queue[0] = start
    level[start] = 0
    head, tail = 0, 1
    ecc = 0
    while head < tail:
        u = queue[head]
        head += 1
        lu = level[u]
        if lu > ecc:
            ecc = lu
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if level[w] < 0:
                level[w] = lu + 1
                queue[tail] = w
                tail += 1
    best = -1
    for t in range(tail):
        u = queue[t]
        if level[u] == ecc and (
            best < 0
            or degree[u] < degree[best]
            or (degree[u] == degree[best] and u < best)
        ):
            best = u
    for t in range(tail):
        level[queue[t]] = -1
    return ecc, best


@njit(cache=True)
def _order_component(indptr, indices, degree, start, placed, out, base, buf):
    """Cuthill-McKee ordering of one component into ``out[base:]``.

    Children of each dequeued node are appended by ascending degree, equal
    degrees by ascending index.  Returns the new fill position.
    """
    out[base] = start
    placed[start] = True
    head = base
    tail = base + 1
    while head < tail:
        u = out[head]
        head += 1
        cnt = 0
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if not placed[w]:
                placed[w] = True
                buf[cnt] = w
                cnt += 1
        for a in range(1, cnt):
            wv = buf[a]
            b = a - 1
            while b >= 0 and (
                degree[buf[b]] > degree[wv]
                or (degree[buf[b]] == degree[wv] and buf[b] > wv)
            ):
                buf[b + 1] = buf[b]
                b -= 1
            buf[b + 1] = wv
        for a in range(cnt):
            out[tail] = buf[a]
            tail += 1
    return tail


def _pseudo_peripheral(indptr, indices, degree, members, level, queue) -> int:
    """Pseudo-peripheral start node for one component.

    Starts from the minimum-degree member and walks to the far side of the
    level structure while the eccentricity keeps growing.
    """
    deg_m = degree[members]
    x = int(members[np.lexsort((members, deg_m))[0]])
    ecc_x, y = _bfs_stats(indptr, indices, degree, x, level, queue)
    while True:
        ecc_y, z = _bfs_stats(indptr, indices, degree, int(y), level, queue)
        if ecc_y > ecc_x:
            x, ecc_x, y = int(y), ecc_y, z
        else:
            return x


def rcm_order(pattern: AdjacencyPattern) -> Permutation:
    """Reverse Cuthill-McKee permutation for an adjacency pattern.

    Returns
    -------
    Permutation
        ``forward[old] = new`` labels; relabeling a banded-after-reordering
        matrix with them concentrates entries near the diagonal.
    """
    n = pattern.n
    indptr = pattern.indptr
    indices = pattern.indices
    degree = pattern.degrees
    claimed = np.zeros(n, dtype=np.bool_)
    placed = np.zeros(n, dtype=np.bool_)
    level = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    buf = np.empty(n, dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    base = 0
    for s in range(n):
        if claimed[s]:
            continue
        if degree[s] == 0:
            claimed[s] = True
            out[base] = s
            base += 1
            continue
        cnt = _collect_component(indptr, indices, s, claimed, queue)
        members = queue[:cnt].copy()
        start = _pseudo_peripheral(indptr, indices, degree, members, level, queue)
        base = _order_component(indptr, indices, degree, start, placed, out, base, buf)
    order = out[::-1]  # reverse the complete labeling
    forward = np.empty(n, dtype=np.int64)
    forward[order] = np.arange(n, dtype=np.int64)
    return Permutation(forward)


def apply_permutation(m: CooMatrix, perm: Permutation) -> CooMatrix:
    """Relabel a matrix: entry ``(i, j, v)`` moves to ``(forward[i], forward[j], v)``.

    The result is normalized; values are untouched, so skew symmetry is
    preserved exactly.
    """
    if perm.n != m.n:
        raise ValueError(f"permutation is over {perm.n} indices, matrix has {m.n}")
    return coo_normalize(CooMatrix(m.n, perm.forward[m.row], perm.forward[m.col], m.val))


def write_permutation(path, perm: Permutation) -> None:
    """Write a permutation as text: a count line, then ``old new`` pairs."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{perm.n}\n")
        for old, new in enumerate(perm.forward):
            fh.write(f"{old} {new}\n")


def read_permutation(path) -> Permutation:
    """Read a permutation written by :func:`write_permutation`."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln for ln in (s.strip() for s in fh) if ln]
    if not lines:
        raise StructuralError("empty permutation file")
    try:
        n = int(lines[0])
    except ValueError:
        raise StructuralError(f"first line must be the index count, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise StructuralError(f"expected {n} pairs after the count line, got {len(lines) - 1}")
    forward = np.empty(n, dtype=np.int64)
    filled = np.zeros(n, dtype=bool)
    for ln in lines[1:]:
        fields = ln.split()
        if len(fields) != 2:
            raise StructuralError(f"malformed pair {ln!r}")
        old, new = int(fields[0]), int(fields[1])
        if not 0 <= old < n:
            raise StructuralError(f"source index {old} out of range")
        if filled[old]:
            raise StructuralError(f"source index {old} listed twice")
        filled[old] = True
        forward[old] = new
    return Permutation(forward)
