"""Summarization heuristics and their shared greedy-merge machinery.

Three heuristics produce feasible solutions: a bottom-up pass that starts
from the top-L singletons and merges greedily (first to enforce the
pairwise distance, then to enforce the size limit), a single-pass variant
that folds top-L elements into the running solution in rank order, and a
hybrid that runs the single pass with an enlarged budget and then merges
down to k.

All objective evaluation goes through one incremental evaluator: every
candidate cluster's marginal contribution to the covered set is cached as
a (sum, count) delta with a round indicator, refreshed against the rows
added by the latest merge, and fully recomputed only when stale.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import MergeError, ParameterError
from .model import (
    STAR,
    Cluster,
    CoverageIndex,
    Dataset,
    Solution,
    covers,
    distance,
    generate_candidates,
    lca,
)

logger = logging.getLogger(__name__)

SEEDING_MODES = (None, "random", "kmodes")


@dataclass
class AlgoParams:
    """Run parameters: the (k, L, D) triple plus heuristic knobs."""

    k: int
    L: int
    D: int
    seeding: str | None = None
    seed: int = 0
    kmodes_iters: int = 50
    hybrid_c: float = 2.0

    def validate(self, ds: Dataset) -> None:
        if self.k < 1:
            raise ParameterError(f"k={self.k} must be >= 1")
        if not 1 <= self.L <= ds.n:
            raise ParameterError(f"L={self.L} out of range [1, {ds.n}]")
        if not 0 <= self.D <= ds.m:
            raise ParameterError(f"D={self.D} out of range [0, {ds.m}]")
        if self.hybrid_c <= 1:
            raise ParameterError(f"hybrid_c={self.hybrid_c} must be > 1")
        if self.seeding not in SEEDING_MODES:
            raise ParameterError(f"unknown seeding mode {self.seeding!r}")


class MergeState:
    """Mutable state of one greedy run over a candidate index.

    Tracks the live clusters (by creation id, in creation order), the
    covered row set with its running value sum, the round counter, the
    rows added per round, and the per-candidate delta cache.
    """

    def __init__(self, index: CoverageIndex):
        self.index = index
        self.ds = index.ds
        self.live: dict[int, Cluster] = {}
        self._next_id = 0
        self.covered_mask = np.zeros(self.ds.n, dtype=bool)
        self.covered_sum = 0.0
        self.covered_count = 0
        self.round = 0
        self._diffs: list[np.ndarray] = [np.empty(0, dtype=np.int64)]
        npat = len(index)
        self._dsum = np.zeros(npat, dtype=np.float64)
        self._dcnt = np.zeros(npat, dtype=np.int64)
        self._asof = np.full(npat, -2, dtype=np.int64)
        self._cache_round = 0

    # -- read access ----------------------------------------------------

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(int(r) for r in np.flatnonzero(self.covered_mask))

    @property
    def diff_list(self) -> np.ndarray:
        """Rows newly covered in the latest round."""
        return self._diffs[self.round]

    @property
    def objective(self) -> float:
        return self.covered_sum / self.covered_count

    def live_ids(self) -> list[int]:
        return list(self.live)

    def clusters(self) -> tuple[Cluster, ...]:
        return tuple(self.live.values())

    # -- mutation -------------------------------------------------------

    def _grow(self, pid: int) -> np.ndarray:
        rows = self.index.rows_by_id[pid]
        new = rows[~self.covered_mask[rows]]
        self.covered_mask[new] = True
        self.covered_sum += float(self.ds.values[new].sum())
        self.covered_count += int(new.size)
        self.round += 1
        self._diffs.append(new)
        return new

    def add(self, c: Cluster) -> int:
        """Insert a candidate cluster, dropping live clusters it covers."""
        pid = self.index.id_of(c)
        doomed = [i for i, lc in self.live.items() if covers(c, lc)]
        for i in doomed:
            del self.live[i]
        self._grow(pid)
        cid = self._next_id
        self._next_id += 1
        self.live[cid] = c
        return cid

    def merge_ids(self, id1: int, id2: int) -> int:
        if id1 == id2:
            raise MergeError("cannot merge a cluster with itself")
        if id1 not in self.live or id2 not in self.live:
            raise MergeError("both clusters must be live")
        return self.absorb(id1, self.live[id2])

    def absorb(self, cid: int, other: Cluster) -> int:
        """Replace the live cluster ``cid`` by its LCA with ``other``,
        removing every live cluster the new cluster covers."""
        if cid not in self.live:
            raise MergeError("cluster is not live")
        c_new = lca(self.live[cid], other)
        pid = self.index.id_of(c_new)
        doomed = [i for i, lc in self.live.items() if covers(c_new, lc)]
        for i in doomed:
            del self.live[i]
        self._grow(pid)
        new_id = self._next_id
        self._next_id += 1
        self.live[new_id] = c_new
        return new_id

    # -- incremental objective evaluation --------------------------------

    def _advance_cache(self) -> None:
        # Bring every non-stale cache entry up to the current round, one
        # recorded diff at a time: entries covering a newly covered row
        # lose that row's contribution, all others are unchanged.
        while self._cache_round < self.round:
            step = self._cache_round + 1
            diff = self._diffs[step]
            fresh = self._asof == step - 1
            if diff.size:
                ids = []
                vals = []
                for r in diff:
                    pids = self.index.pattern_ids_for_row(int(r))
                    ids.append(pids)
                    vals.append(np.full(pids.size, self.ds.values[r]))
                ids = np.concatenate(ids)
                vals = np.concatenate(vals)
                sel = fresh[ids]
                np.subtract.at(self._dsum, ids[sel], vals[sel])
                np.subtract.at(self._dcnt, ids[sel], 1)
            self._asof[fresh] = step
            self._cache_round = step

    def _recompute(self, pid: int) -> None:
        rows = self.index.rows_by_id[pid]
        un = ~self.covered_mask[rows]
        self._dcnt[pid] = int(un.sum())
        self._dsum[pid] = float(self.ds.values[rows[un]].sum())
        self._asof[pid] = self.round

    def tentative_many(self, pids: np.ndarray) -> np.ndarray:
        """Objective of the solution if each candidate were added now."""
        self._advance_cache()
        stale = np.unique(pids[self._asof[pids] != self.round])
        for pid in stale:
            self._recompute(int(pid))
        return ((self.covered_sum + self._dsum[pids])
                / (self.covered_count + self._dcnt[pids]))

    def tentative(self, c: Cluster) -> float:
        pid = self.index.id_of(c)
        return float(self.tentative_many(np.array([pid], dtype=np.int64))[0])

    def check_invariants(self) -> None:
        """Compare incremental accounting against direct recomputation."""
        rows = np.flatnonzero(self.covered_mask)
        exact = float(self.ds.values[rows].sum())
        assert self.covered_count == rows.size
        assert abs(self.covered_sum - exact) <= 1e-9 * max(1.0, abs(exact))


# -- public operations ------------------------------------------------------


def merge(state: MergeState, c1: Cluster, c2: Cluster) -> MergeState:
    """Merge two live clusters into their LCA (removing anything the LCA
    covers) and return the mutated state."""
    if c1 == c2:
        raise MergeError("cannot merge a cluster with itself")
    ids = _resolve_live(state, [c1, c2])
    state.merge_ids(ids[0], ids[1])
    return state


def delta_eval(state: MergeState, c: Cluster) -> float:
    """Tentative objective of ``state`` with ``c`` added, maintained
    incrementally from the cached marginal (sum, count) of ``c``."""
    return state.tentative(c)


def update_solution(state: MergeState,
                    pairs: list[tuple[Cluster, Cluster]]) -> MergeState:
    """Greedily merge the pair whose LCA yields the highest tentative
    objective; ties break on smallest creation-index pair."""
    if not pairs:
        raise ParameterError("update_solution needs at least one pair")
    a_ids = []
    b_ids = []
    pids = []
    for c1, c2 in pairs:
        i1, i2 = _resolve_live(state, [c1, c2])
        lo, hi = min(i1, i2), max(i1, i2)
        a_ids.append(lo)
        b_ids.append(hi)
        pids.append(state.index.id_of(lca(c1, c2)))
    _merge_best(state,
                np.array(a_ids, dtype=np.int64),
                np.array(b_ids, dtype=np.int64),
                np.array(pids, dtype=np.int64))
    return state


def _resolve_live(state: MergeState, cs: list[Cluster]) -> list[int]:
    out = []
    used: set[int] = set()
    for c in cs:
        found = None
        for i, lc in state.live.items():
            if i not in used and lc == c:
                found = i
                break
        if found is None:
            raise MergeError(f"{c!r} is not live in this state")
        used.add(found)
        out.append(found)
    return out


def _merge_best(state: MergeState, a_ids: np.ndarray, b_ids: np.ndarray,
                pids: np.ndarray) -> int:
    tent = state.tentative_many(pids)
    best = np.flatnonzero(tent == tent.max())
    order = np.lexsort((b_ids[best], a_ids[best]))
    j = int(best[order[0]])
    return state.merge_ids(int(a_ids[j]), int(b_ids[j]))


def _absorb_best(state: MergeState, cand_ids: list[int],
                 item: Cluster) -> int:
    """Greedy variant for folding an outside cluster into the solution:
    each pair is (live cluster, item)."""
    ids = np.array(cand_ids, dtype=np.int64)
    pids = np.array([state.index.id_of(lca(state.live[i], item))
                     for i in cand_ids], dtype=np.int64)
    tent = state.tentative_many(pids)
    best = np.flatnonzero(tent == tent.max())
    j = int(np.sort(ids[best])[0])
    return state.absorb(j, item)


class _PairPool:
    """All unordered live-cluster pairs with their merge-pattern ids,
    maintained incrementally across merges."""

    def __init__(self, state: MergeState):
        self.state = state
        ids = np.array(sorted(state.live), dtype=np.int64)
        if ids.size < 2:
            self.a = np.empty(0, dtype=np.int64)
            self.b = np.empty(0, dtype=np.int64)
            self.pid = np.empty(0, dtype=np.int64)
            return
        mat = np.array([state.live[int(i)].slots for i in ids], dtype=np.int64)
        iu, ju = np.triu_indices(ids.size, 1)
        self.a = ids[iu]
        self.b = ids[ju]
        self.pid = _lca_pattern_ids(state.index, mat[iu], mat[ju])

    def __len__(self) -> int:
        return int(self.a.size)

    def apply_merge(self) -> None:
        """Call after the state merged: drop dead pairs, pair the newest
        cluster with every survivor."""
        state = self.state
        live = set(state.live)
        keep = np.isin(self.a, list(live)) & np.isin(self.b, list(live))
        self.a, self.b, self.pid = self.a[keep], self.b[keep], self.pid[keep]
        new_id = max(state.live)
        others = [i for i in sorted(state.live) if i != new_id]
        if not others:
            return
        new_c = state.live[new_id]
        add_a = np.array(others, dtype=np.int64)
        add_b = np.full(len(others), new_id, dtype=np.int64)
        add_pid = np.array(
            [state.index.id_of(lca(state.live[i], new_c)) for i in others],
            dtype=np.int64)
        self.a = np.concatenate([self.a, add_a])
        self.b = np.concatenate([self.b, add_b])
        self.pid = np.concatenate([self.pid, add_pid])


def _lca_pattern_ids(index: CoverageIndex, A: np.ndarray,
                     B: np.ndarray) -> np.ndarray:
    both = (A == B) & (A != STAR)
    lcas = np.where(both, A, STAR)
    pid_map = index.pattern_ids
    return np.fromiter((pid_map[tuple(row)] for row in lcas.tolist()),
                       dtype=np.int64, count=len(lcas))


def _distance_pairs(state: MergeState, D: int):
    """Live pairs at distance < D, or None when none remain."""
    ids = np.array(sorted(state.live), dtype=np.int64)
    if ids.size < 2:
        return None
    mat = np.array([state.live[int(i)].slots for i in ids], dtype=np.int64)
    iu, ju = np.triu_indices(ids.size, 1)
    A, B = mat[iu], mat[ju]
    dist = ((A == STAR) | (B == STAR) | (A != B)).sum(axis=1)
    sel = dist < D
    if not sel.any():
        return None
    return ids[iu[sel]], ids[ju[sel]], _lca_pattern_ids(state.index, A[sel], B[sel])


# -- heuristics ------------------------------------------------------------


def baseline_beats(objective: float, trivial_obj: float) -> bool:
    """True when the all-wildcard baseline is strictly better than the
    greedy objective (beyond float accumulation noise)."""
    return objective < trivial_obj - 1e-9 * max(1.0, abs(trivial_obj))


def _finalize(state: MergeState, params: AlgoParams) -> Solution:
    """Build the Solution, falling back to the all-wildcard cluster when
    it is strictly better (it is always feasible)."""
    ds = state.ds
    objective = state.objective
    trivial_obj = float(ds.values.sum()) / ds.n
    clusters = state.clusters()
    all_star = Cluster((STAR,) * ds.m)
    if baseline_beats(objective, trivial_obj) and clusters != (all_star,):
        logger.warning(
            "greedy result (avg %.6g) is below the all-wildcard baseline "
            "(avg %.6g); returning the baseline", objective, trivial_obj)
        return Solution((all_star,), params.k, params.L, params.D,
                        frozenset(range(ds.n)), trivial_obj)
    if clusters == (all_star,):
        logger.info("merging collapsed to the all-wildcard cluster")
    return Solution(clusters, params.k, params.L, params.D,
                    state.covered, objective)


def _seed_state(ds: Dataset, params: AlgoParams,
                index: CoverageIndex) -> MergeState:
    """Fresh state holding the top-L singletons (duplicates folded)."""
    state = MergeState(index)
    for r in index.top_rows:
        c = Cluster(tuple(int(v) for v in ds.codes[r]))
        if any(covers(lc, c) for lc in state.live.values()):
            continue
        state.add(c)
    return state


def bottom_up(ds: Dataset, params: AlgoParams,
              index: CoverageIndex | None = None) -> Solution:
    """Greedy merge from the top-L singletons: first merge pairs closer
    than D until none remain, then merge down to at most k clusters."""
    params.validate(ds)
    index = index if index is not None else generate_candidates(ds, params.L)
    state = _seed_state(ds, params, index)
    while True:
        found = _distance_pairs(state, params.D)
        if found is None:
            break
        _merge_best(state, *found)
    _reduce_to(state, params.k)
    return _finalize(state, params)


def _reduce_to(state: MergeState, k: int) -> None:
    pool = _PairPool(state)
    while len(state.live) > k:
        _merge_best(state, pool.a, pool.b, pool.pid)
        pool.apply_merge()


def _fixed_order_state(ds: Dataset, params: AlgoParams,
                       index: CoverageIndex, budget: int,
                       seed_count: int | None = None) -> MergeState:
    state = MergeState(index)
    items: list[Cluster] = []
    if params.seeding is not None:
        items.extend(seed_clusters(ds, params, index, count=seed_count))
    items.extend(Cluster(tuple(int(v) for v in ds.codes[r]))
                 for r in index.top_rows)
    for item in items:
        if any(covers(lc, item) for lc in state.live.values()):
            continue
        if len(state.live) < budget:
            offending = [i for i, lc in state.live.items()
                         if distance(lc, item) < params.D]
            if not offending:
                state.add(item)
            else:
                _absorb_best(state, offending, item)
        else:
            _absorb_best(state, sorted(state.live), item)
    return state


def fixed_order(ds: Dataset, params: AlgoParams,
                index: CoverageIndex | None = None) -> Solution:
    """Single pass over the top-L elements in rank order: skip covered
    ones, insert as singletons while there is room and the distance
    constraint allows, otherwise merge greedily into the best cluster.

    With seeding enabled, seed clusters are folded in before the pass.
    """
    params.validate(ds)
    index = index if index is not None else generate_candidates(ds, params.L)
    state = _fixed_order_state(ds, params, index, params.k)
    return _finalize(state, params)


def seed_clusters(ds: Dataset, params: AlgoParams,
                  index: CoverageIndex | None = None,
                  count: int | None = None) -> list[Cluster]:
    """Initial clusters for the seeded single-pass variants.

    random: k distinct top-L elements as singletons (all L when k > L).
    kmodes: k-modes over the top-L code vectors; each seed is the minimal
    pattern covering one resulting group.  ``count`` overrides how many
    seeds are drawn (defaults to k).
    """
    if params.seeding is None:
        raise ParameterError("seeding mode is none")
    index = index if index is not None else generate_candidates(ds, params.L)
    top = [int(r) for r in index.top_rows]
    want = count if count is not None else params.k
    if params.seeding == "random":
        import random as _random

        rng = _random.Random(params.seed)
        rows = rng.sample(top, min(want, len(top)))
        return [Cluster(tuple(int(v) for v in ds.codes[r])) for r in rows]

    groups = _kmodes_groups(ds.codes[top], min(want, len(top)),
                            params.seed, params.kmodes_iters)
    seeds = []
    for members in groups:
        if members.size == 0:
            continue
        fold = Cluster(tuple(int(v) for v in ds.codes[top[int(members[0])]]))
        for j in members[1:]:
            fold = lca(fold, Cluster(tuple(int(v) for v in ds.codes[top[int(j)]])))
        seeds.append(fold)
    return seeds


def _kmodes_groups(points: np.ndarray, k: int, seed: int,
                   iters: int) -> list[np.ndarray]:
    """Plain k-modes on integer code vectors: Hamming assignment,
    per-attribute mode update (ties to the smallest code), capped
    iterations, deterministic for a given seed."""
    n, m = points.shape
    uniq = np.unique(points, axis=0)
    rng = np.random.default_rng(seed)
    if len(uniq) <= k:
        centroids = uniq.copy()
    else:
        pick = np.sort(rng.choice(len(uniq), size=k, replace=False))
        centroids = uniq[pick]
    kk = len(centroids)
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(max(1, iters)):
        dists = (points[:, None, :] != centroids[None, :, :]).sum(axis=2)
        assign = dists.argmin(axis=1)
        new_centroids = centroids.copy()
        for j in range(kk):
            members = points[assign == j]
            if members.size == 0:
                continue
            for col in range(m):
                counts = np.bincount(members[:, col])
                new_centroids[j, col] = int(counts.argmax())
        if np.array_equal(new_centroids, centroids):
            break
        centroids = new_centroids
    dists = (points[:, None, :] != centroids[None, :, :]).sum(axis=2)
    assign = dists.argmin(axis=1)
    return [np.flatnonzero(assign == j) for j in range(kk)]


def hybrid(ds: Dataset, params: AlgoParams,
           index: CoverageIndex | None = None,
           phase_a_k: int | None = None) -> Solution:
    """Single pass with an enlarged budget, then greedy merges down to k.

    ``phase_a_k`` is the size parameter the insertion phase is configured
    for: it sets both the budget ceil(hybrid_c * phase_a_k) and the seed
    count, and defaults to k.  The parameter store pins it to the top of
    its k range so any grid point can be reproduced by a fresh run.
    """
    params.validate(ds)
    index = index if index is not None else generate_candidates(ds, params.L)
    pk = phase_a_k if phase_a_k is not None else params.k
    budget = math.ceil(params.hybrid_c * pk)
    if budget < params.k:
        raise ParameterError(
            f"insertion budget {budget} (phase_a_k={pk}) is below k={params.k}")
    state = _fixed_order_state(ds, params, index, budget, seed_count=pk)
    _reduce_to(state, params.k)
    return _finalize(state, params)


ALGORITHMS = {
    "bottomup": bottom_up,
    "fixedorder": fixed_order,
    "hybrid": hybrid,
}


def run_algorithm(name: str, ds: Dataset, params: AlgoParams,
                  index: CoverageIndex | None = None) -> Solution:
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise ParameterError(
            f"unknown algorithm {name!r}; pick one of {sorted(ALGORITHMS)}") from None
    return fn(ds, params, index=index)


def trivial_solution(ds: Dataset, params: AlgoParams) -> Solution:
    """The all-wildcard single cluster; feasible for any parameters."""
    all_star = Cluster((STAR,) * ds.m)
    return Solution((all_star,), params.k, params.L, params.D,
                    frozenset(range(ds.n)), float(ds.values.sum()) / ds.n)
