"""Greedy row-by-row permutation and the row-maximum upper bound."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .solver import as_cost_matrix


@dataclass(frozen=True)
class GreedyTrace:
    permutation: np.ndarray
    step_values: np.ndarray  # step_values[i] = matrix[i, permutation[i]]
    total: float


@numba.njit(cache=True, nogil=True)
def _greedy(a):
    n = a.shape[0]
    used = np.zeros(n, np.bool_)
    perm = np.empty(n, np.int64)
    steps = np.empty(n)
    total = 0.0
    for i in range(n):
        best_j = -1
        best = 0.0
        for j in range(n):
            # strict '>' keeps the smallest column index among ties
            if not used[j] and (best_j < 0 or a[i, j] > best):
                best = a[i, j]
                best_j = j
        used[best_j] = True
        perm[i] = best_j
        steps[i] = best
        total += best
    return perm, steps, total


@numba.njit(cache=True, nogil=True)
def _row_max_sum(a):
    s = 0.0
    for i in range(a.shape[0]):
        m = a[i, 0]
        for j in range(1, a.shape[1]):
            if a[i, j] > m:
                m = a[i, j]
        s += m
    return s


def greedy_assign(matrix) -> GreedyTrace:
    """Process rows in order, each taking its largest entry among the columns
    not yet claimed by earlier rows.

    The total never exceeds the exact maximum; the i-th step (0-based) is a
    maximum over ``n - i`` untouched entries.
    """
    perm, steps, total = _greedy(as_cost_matrix(matrix))
    return GreedyTrace(perm, steps, float(total))


def row_max_sum(matrix) -> float:
    """Sum over rows of the row maximum, an upper bound on every S(pi)."""
    return float(_row_max_sum(as_cost_matrix(matrix)))
