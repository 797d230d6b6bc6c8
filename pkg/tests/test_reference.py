"""End-to-end cross-checks against slow reference implementations.

The references reimplement the greedy runs directly from the procedure
definitions with plain sets and exact sums: no coverage index, no
incremental deltas, no vectorization. Agreement on random instances
validates the whole production path, tie-breaking included.
"""

import math

import numpy as np
import pytest

from conftest import make_dataset
from summit.algorithms import AlgoParams, bottom_up, fixed_order, hybrid
from summit.model import STAR, Cluster, coverage, covers, distance, lca


def _trivial(ds):
    return math.fsum(float(v) for v in ds.values) / ds.n


def _avg(rows, ds):
    return math.fsum(float(ds.values[r]) for r in rows) / len(rows)


class _RefState:
    """Live clusters with creation ids; coverage recomputed from scratch."""

    def __init__(self, ds):
        self.ds = ds
        self.live = {}  # creation id -> cluster
        self.next_id = 0

    def covered(self):
        out = set()
        for c in self.live.values():
            out |= set(coverage(c, self.ds))
        return out

    def insert(self, c):
        for i in [i for i, lc in self.live.items() if covers(c, lc)]:
            del self.live[i]
        self.live[self.next_id] = c
        self.next_id += 1

    def merge_pair(self, i1, c2):
        parent = lca(self.live[i1], c2)
        for i in [i for i, lc in self.live.items() if covers(parent, lc)]:
            del self.live[i]
        self.live[self.next_id] = parent
        self.next_id += 1

    def best_merge(self, pairs):
        """pairs: list of (id1, id2-or-None, other-cluster). Picks the pair
        maximizing avg(covered + lca coverage), ties to smallest ids."""
        covered = self.covered()
        best = None
        for (i1, i2, other) in pairs:
            parent = lca(self.live[i1], other)
            rows = covered | set(coverage(parent, self.ds))
            val = _avg(rows, self.ds)
            key = (-val, i1, i2 if i2 is not None else self.next_id)
            if best is None or key < best[0]:
                best = (key, i1, other)
        self.merge_pair(best[1], best[2])

    def finish(self, params):
        clusters = set(self.live.values())
        obj = _avg(self.covered(), self.ds)
        trivial = _trivial(self.ds)
        if obj < trivial - 1e-9 * max(1.0, abs(trivial)):
            return {Cluster((STAR,) * self.ds.m)}, trivial
        return clusters, obj


def ref_bottom_up(ds, params):
    state = _RefState(ds)
    for r in ds.top_rows(params.L):
        c = Cluster(tuple(int(v) for v in ds.codes[r]))
        if not any(covers(lc, c) for lc in state.live.values()):
            state.insert(c)
    while True:
        ids = sorted(state.live)
        close = [(a, b, state.live[b]) for x, a in enumerate(ids)
                 for b in ids[x + 1:]
                 if distance(state.live[a], state.live[b]) < params.D]
        if not close:
            break
        state.best_merge(close)
    while len(state.live) > params.k:
        ids = sorted(state.live)
        everything = [(a, b, state.live[b]) for x, a in enumerate(ids)
                      for b in ids[x + 1:]]
        state.best_merge(everything)
    return state.finish(params)


def ref_fixed_order(ds, params, budget=None):
    budget = budget if budget is not None else params.k
    state = _RefState(ds)
    for r in ds.top_rows(params.L):
        item = Cluster(tuple(int(v) for v in ds.codes[r]))
        if any(covers(lc, item) for lc in state.live.values()):
            continue
        if len(state.live) < budget:
            close = [i for i in sorted(state.live)
                     if distance(state.live[i], item) < params.D]
            if not close:
                state.insert(item)
            else:
                state.best_merge([(i, None, item) for i in close])
        else:
            state.best_merge([(i, None, item) for i in sorted(state.live)])
    return state.finish(params)


def ref_hybrid(ds, params):
    budget = math.ceil(params.hybrid_c * params.k)
    state = _RefState(ds)
    for r in ds.top_rows(params.L):
        item = Cluster(tuple(int(v) for v in ds.codes[r]))
        if any(covers(lc, item) for lc in state.live.values()):
            continue
        if len(state.live) < budget:
            close = [i for i in sorted(state.live)
                     if distance(state.live[i], item) < params.D]
            if not close:
                state.insert(item)
            else:
                state.best_merge([(i, None, item) for i in close])
        else:
            state.best_merge([(i, None, item) for i in sorted(state.live)])
    while len(state.live) > params.k:
        ids = sorted(state.live)
        everything = [(a, b, state.live[b]) for x, a in enumerate(ids)
                      for b in ids[x + 1:]]
        state.best_merge(everything)
    return state.finish(params)


def _random_params(rng, ds):
    return AlgoParams(k=int(rng.integers(1, 7)),
                      L=int(rng.integers(1, min(10, ds.n) + 1)),
                      D=int(rng.integers(0, ds.m + 1)))


@pytest.mark.parametrize("algo,reference", [
    (bottom_up, ref_bottom_up),
    (fixed_order, ref_fixed_order),
    (hybrid, ref_hybrid),
])
def test_matches_reference(algo, reference):
    rng = np.random.default_rng(70)
    for trial in range(30):
        ds = make_dataset(rng, max_n=22, max_m=4)
        params = _random_params(rng, ds)
        got = algo(ds, params)
        want_clusters, want_obj = reference(ds, params)
        assert set(got.clusters) == want_clusters, (
            trial, params.k, params.L, params.D)
        assert abs(got.objective - want_obj) <= 1e-9 * max(1.0, abs(want_obj))
