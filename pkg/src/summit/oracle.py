"""Exact solver: enumerate every candidate subset of size at most k and
return the feasible one with the highest average value.

Only practical at desk scale; used as ground truth in tests and for
optimality-gap reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .algorithms import AlgoParams
from .errors import CapacityError
from .model import (
    CoverageIndex,
    Dataset,
    Solution,
    covers,
    distance,
    generate_candidates,
)


@dataclass
class OracleLimits:
    max_subsets: int = 10_000_000


@dataclass
class OracleResult:
    optimal: Solution | None
    feasible_count: int
    evaluated_count: int


def brute_force(ds: Dataset, params: AlgoParams,
                limits: OracleLimits | None = None,
                index: CoverageIndex | None = None) -> OracleResult:
    """Search all subsets of the candidate universe with at most k
    clusters.

    Subsets are enumerated depth-first in candidate order (level-ascending
    star masks, patterns lexicographic within a mask); among equal-valued
    optima the first one found is kept, which makes results deterministic.
    Branches that already violate the distance or incomparability
    constraints are pruned, since no superset can repair them.
    """
    params.validate(ds)
    limits = limits or OracleLimits()
    index = index if index is not None else generate_candidates(ds, params.L)
    cands = index.clusters
    ncand = len(cands)
    total = sum(comb(ncand, i) for i in range(1, params.k + 1))
    if total > limits.max_subsets:
        raise CapacityError(
            f"{total} subsets of {ncand} candidates exceed the limit "
            f"{limits.max_subsets}")

    rows_of = [index.rows_by_id[i] for i in range(ncand)]
    values = ds.values
    top = [int(r) for r in index.top_rows]
    top_mask = np.zeros(ds.n, dtype=bool)
    top_mask[top] = True

    cover_count = np.zeros(ds.n, dtype=np.int64)
    covered_top = 0
    cov_sum = 0.0
    cov_cnt = 0
    chosen: list[int] = []

    best_obj = -np.inf
    best_subset: list[int] | None = None

    feasible_count = 0
    evaluated_count = 0

    def push(ci: int):
        nonlocal cov_sum, cov_cnt, covered_top
        rows = rows_of[ci]
        fresh = rows[cover_count[rows] == 0]
        cover_count[rows] += 1
        cov_sum += float(values[fresh].sum())
        cov_cnt += int(fresh.size)
        covered_top += int(top_mask[fresh].sum())

    def pop(ci: int):
        nonlocal cov_sum, cov_cnt, covered_top
        rows = rows_of[ci]
        cover_count[rows] -= 1
        gone = rows[cover_count[rows] == 0]
        cov_sum -= float(values[gone].sum())
        cov_cnt -= int(gone.size)
        covered_top -= int(top_mask[gone].sum())

    def compatible(ci: int) -> bool:
        c = cands[ci]
        for cj in chosen:
            other = cands[cj]
            if distance(c, other) < params.D:
                return False
            if covers(c, other) or covers(other, c):
                return False
        return True

    def dfs(start: int):
        nonlocal feasible_count, evaluated_count, best_obj, best_subset
        for ci in range(start, ncand):
            if not compatible(ci):
                continue
            chosen.append(ci)
            push(ci)
            evaluated_count += 1
            if covered_top == len(top):
                feasible_count += 1
                obj = cov_sum / cov_cnt
                if obj > best_obj:
                    best_obj = obj
                    best_subset = list(chosen)
            if len(chosen) < params.k:
                dfs(ci + 1)
            pop(ci)
            chosen.pop()

    dfs(0)

    if best_subset is None:
        return OracleResult(None, feasible_count, evaluated_count)
    clusters = tuple(cands[i] for i in best_subset)
    covered: set[int] = set()
    for i in best_subset:
        covered.update(int(r) for r in rows_of[i])
    optimal = Solution(clusters, params.k, params.L, params.D,
                       frozenset(covered), float(best_obj))
    return OracleResult(optimal, feasible_count, evaluated_count)
