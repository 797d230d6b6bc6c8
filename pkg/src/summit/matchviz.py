"""Comparison view between two successive solutions: shared-tuple counts
and the crossing-minimizing ordering of the new clusters.

The old side keeps its display order; the new side is ordered by solving
an exact minimum-cost assignment of new clusters to display slots, where
placing cluster u at slot v costs the weighted band displacement
sum_i M[i][u] * |p_a[i] - v|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .model import Cluster, Dataset, Solution, coverage


@dataclass
class OverlapMatrix:
    """Shared-tuple counts between old and new clusters, plus the fixed
    old-side positions."""

    M: np.ndarray          # (m_old, n_new) nonnegative ints
    p_a: np.ndarray        # position of each old cluster

    @property
    def m_old(self) -> int:
        return int(self.M.shape[0])

    @property
    def n_new(self) -> int:
        return int(self.M.shape[1])


@dataclass
class Placement:
    p_b: np.ndarray
    total_cost: int


def display_order(sol: Solution, ds: Dataset) -> list[int]:
    """Cluster indices sorted for display: per-cluster average value
    descending, creation order on ties."""
    avgs = []
    for i, c in enumerate(sol.clusters):
        rows = coverage(c, ds)
        avgs.append(float(ds.values[rows].sum() / len(rows)) if rows else 0.0)
    return sorted(range(len(sol.clusters)), key=lambda i: (-avgs[i], i))


def overlap_matrix(old: Solution, new: Solution, ds: Dataset) -> OverlapMatrix:
    """Count shared covered tuples between every (old, new) cluster pair."""
    old_rows = [set(coverage(c, ds)) for c in old.clusters]
    new_rows = [set(coverage(c, ds)) for c in new.clusters]
    M = np.zeros((len(old_rows), len(new_rows)), dtype=np.int64)
    for i, a in enumerate(old_rows):
        for j, b in enumerate(new_rows):
            M[i, j] = len(a & b)
    order = display_order(old, ds)
    p_a = np.zeros(len(old_rows), dtype=np.int64)
    for pos, i in enumerate(order):
        p_a[i] = pos
    return OverlapMatrix(M=M, p_a=p_a)


def _assignment_cost(om: OverlapMatrix) -> np.ndarray:
    """cost[u, v]: total band displacement if new cluster u sits at slot v."""
    n = om.n_new
    cost = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(n):
            cost[u, v] = int(np.sum(om.M[:, u] * np.abs(om.p_a - v)))
    return cost


def min_cost_assignment(cost: np.ndarray) -> tuple[list[int], int]:
    """Exact minimum-cost perfect matching on a square integer matrix
    (O(n^3) shortest augmenting paths with potentials).

    Returns (column assigned to each row, total cost).
    """
    n = cost.shape[0]
    if n == 0:
        return [], 0
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)      # p[j] = row matched to column j (1-based)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        if p[j]:
            assign[p[j] - 1] = j - 1
    total = int(sum(cost[i][assign[i]] for i in range(n)))
    return assign, total


def optimal_order(om: OverlapMatrix) -> Placement:
    """Slot each new cluster to globally minimize band displacement;
    among equal-cost assignments, return the lexicographically smallest
    position vector."""
    n = om.n_new
    if n == 0:
        return Placement(p_b=np.empty(0, dtype=np.int64), total_cost=0)
    cost = _assignment_cost(om)
    _, best = min_cost_assignment(cost)

    p_b = np.full(n, -1, dtype=np.int64)
    free_cols = list(range(n))
    fixed_cost = 0
    for u in range(n):
        rest_rows = list(range(u + 1, n))
        for v in free_cols:
            trial = fixed_cost + int(cost[u, v])
            if rest_rows:
                cols = [c for c in free_cols if c != v]
                sub = cost[np.ix_(rest_rows, cols)]
                _, sub_cost = min_cost_assignment(sub)
                trial += sub_cost
            if trial == best:
                p_b[u] = v
                fixed_cost += int(cost[u, v])
                free_cols.remove(v)
                break
        else:
            raise AssertionError("no completion matches the optimal cost")
    return Placement(p_b=p_b, total_cost=best)


def crossing_cost(om: OverlapMatrix, p_b) -> int:
    """Band displacement of an explicit new-side ordering."""
    arr = np.asarray(p_b, dtype=np.int64)
    if sorted(arr.tolist()) != list(range(om.n_new)):
        raise ParameterError(f"p_b {arr.tolist()} is not a permutation of "
                             f"[0, {om.n_new})")
    total = 0
    for i in range(om.m_old):
        for j in range(om.n_new):
            total += int(om.M[i, j]) * abs(int(om.p_a[i]) - int(arr[j]))
    return total
