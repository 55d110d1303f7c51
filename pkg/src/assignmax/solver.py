"""Exact linear assignment: shortest augmenting paths with dual potentials,
plus an enumeration oracle for small matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numba
import numpy as np

BRUTE_FORCE_MAX_N = 9


class Sense(str, Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class AssignmentResult:
    permutation: np.ndarray  # permutation[i] = column assigned to row i (0-based)
    value: float
    sense: Sense


def as_cost_matrix(matrix) -> np.ndarray:
    """Validate and return a square, finite, C-contiguous float64 array."""
    a = np.ascontiguousarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise MatrixError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise MatrixError("matrix entries must be finite")
    return a


def check_permutation(permutation, n: int) -> np.ndarray:
    p = np.asarray(permutation)
    if p.shape != (n,) or not np.issubdtype(p.dtype, np.integer):
        raise MatrixError(f"permutation must be {n} integers")
    seen = np.zeros(n, dtype=bool)
    for j in p:
        if j < 0 or j >= n or seen[j]:
            raise MatrixError("permutation is not a bijection on 0..n-1")
        seen[j] = True
    return p.astype(np.int64)


@numba.njit(cache=True, nogil=True)
def _row_order_sum(a, perm):
    s = 0.0
    for i in range(a.shape[0]):
        s += a[i, perm[i]]
    return s


def evaluate(matrix, permutation) -> float:
    """S(pi): sum of ``matrix[i, permutation[i]]`` accumulated in row order."""
    a = as_cost_matrix(matrix)
    return float(_row_order_sum(a, check_permutation(permutation, a.shape[0])))


@numba.njit(cache=True, nogil=True)
def _lap_min(cost):
    """Minimum-cost perfect matching on a dense square matrix.

    Rows are inserted one at a time; each insertion runs Dijkstra over the
    reduced costs ``cost[i, j] - u[i] - v[j]`` (kept non-negative) and
    augments along the shortest alternating path. Returns ``col_of_row``.
    """
    n = cost.shape[0]
    inf = np.inf
    u = np.empty(n)
    for i in range(n):
        m = cost[i, 0]
        for j in range(1, n):
            if cost[i, j] < m:
                m = cost[i, j]
        u[i] = m
    v = np.zeros(n)
    row_of_col = np.full(n, -1, np.int64)
    col_of_row = np.full(n, -1, np.int64)
    dist = np.empty(n)
    pred = np.empty(n, np.int64)
    done = np.empty(n, np.bool_)
    for start in range(n):
        for j in range(n):
            dist[j] = inf
            done[j] = False
        i = start
        delta = 0.0  # length of the shortest path to the current frontier row
        sink = -1
        while sink < 0:
            best = inf
            best_j = -1
            for j in range(n):
                if done[j]:
                    continue
                d = delta + cost[i, j] - u[i] - v[j]
                if d < dist[j]:
                    dist[j] = d
                    pred[j] = i
                if dist[j] < best:
                    best = dist[j]
                    best_j = j
            j = best_j
            done[j] = True
            delta = best
            if row_of_col[j] < 0:
                sink = j
            else:
                i = row_of_col[j]
        # update potentials on the scanned tree so reduced costs stay >= 0
        u[start] += delta
        for j in range(n):
            if done[j] and j != sink:
                r = row_of_col[j]
                u[r] += delta - dist[j]
                v[j] -= delta - dist[j]
        j = sink
        while True:
            r = pred[j]
            row_of_col[j] = r
            prev = col_of_row[r]
            col_of_row[r] = j
            if r == start:
                break
            j = prev
    return col_of_row


def solve(matrix, sense: Sense | str = Sense.MAXIMIZE) -> AssignmentResult:
    """Optimal assignment of ``matrix`` in O(n^3).

    Maximisation is carried out as minimisation of the negated matrix.
    """
    sense = Sense(sense)
    a = as_cost_matrix(matrix)
    cost = -a if sense is Sense.MAXIMIZE else a
    perm = _lap_min(cost)
    return AssignmentResult(perm, float(_row_order_sum(a, perm)), sense)


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def brute_force(matrix, sense: Sense | str = Sense.MAXIMIZE) -> AssignmentResult:
    """Enumerate all n! permutations (n <= 9).

    Ties go to the lexicographically smallest permutation.
    """
    sense = Sense(sense)
    a = as_cost_matrix(matrix)
    n = a.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise MatrixError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    perms = _all_permutations(n)
    totals = np.zeros(len(perms))
    for i in range(n):
        totals += a[i, perms[:, i]]
    k = int(np.argmax(totals) if sense is Sense.MAXIMIZE else np.argmin(totals))
    perm = perms[k].astype(np.int64)
    return AssignmentResult(perm, float(_row_order_sum(a, perm)), sense)


def read_matrix_csv(path) -> np.ndarray:
    """Load an n x n matrix written as n lines of n comma-separated decimals."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError:
                raise MatrixError(f"{path}:{lineno}: non-numeric entry") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise MatrixError(f"{path}: expected n rows of n values")
    return as_cost_matrix(rows)
