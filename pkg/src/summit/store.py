"""Batch precomputation over a (k, D) grid for a fixed L, with
interval-tree storage and retrieval.

One merge chain is run per D value: the D-independent preprocessing
(encoding, candidate generation, top-L ranking) happens once, the
insertion phase once per D, and the merge rounds walk k from the top of
the range downward.  Because a merged-away cluster never returns, each
cluster is live for one contiguous k interval, which is what the
interval trees index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algorithms import (
    AlgoParams,
    MergeState,
    baseline_beats,
    _distance_pairs,
    _fixed_order_state,
    _merge_best,
    _PairPool,
    _seed_state,
)
from .errors import (
    BuildBudgetExceeded,
    DatasetMismatchError,
    ParameterError,
    StoreFormatError,
    StoreVersionError,
    SummitError,
)
from .model import (
    STAR,
    Cluster,
    CoverageIndex,
    Dataset,
    Solution,
    generate_candidates,
)

FORMAT_VERSION = 1
_MAGIC = "summit-store"

CHAIN_ALGORITHMS = ("hybrid", "bottomup")


class IntervalTree:
    """Static centered interval tree over integer intervals.

    Entries are (lo, hi, payload); a stabbing query at k returns the
    payloads of every interval with lo <= k <= hi.
    """

    def __init__(self, entries: list[tuple[int, int, Any]]):
        self.entries = list(entries)
        self._root = self._build(self.entries)

    @staticmethod
    def _build(entries):
        if not entries:
            return None
        points = sorted(p for lo, hi, _ in entries for p in (lo, hi))
        center = points[len(points) // 2]
        left = [e for e in entries if e[1] < center]
        right = [e for e in entries if e[0] > center]
        here = [e for e in entries if e[0] <= center <= e[1]]
        return {
            "center": center,
            "by_lo": sorted(here, key=lambda e: e[0]),
            "by_hi": sorted(here, key=lambda e: -e[1]),
            "left": IntervalTree._build(left),
            "right": IntervalTree._build(right),
        }

    def stab(self, k: int) -> list[Any]:
        out: list[Any] = []
        node = self._root
        while node is not None:
            if k < node["center"]:
                for lo, hi, payload in node["by_lo"]:
                    if lo > k:
                        break
                    out.append(payload)
                node = node["left"]
            elif k > node["center"]:
                for lo, hi, payload in node["by_hi"]:
                    if hi < k:
                        break
                    out.append(payload)
                node = node["right"]
            else:
                out.extend(p for _, _, p in node["by_lo"])
                node = None
        return out


@dataclass
class ParamStore:
    """Per-L precomputed structure: an interval tree of clusters per D
    plus the (k, D) objective grid."""

    L: int
    k_range: tuple[int, int]
    d_range: tuple[int, int]
    trees: dict[int, IntervalTree]
    objective_grid: dict[tuple[int, int], float]
    phase_a_sizes: dict[int, int]
    build_meta: dict[str, Any]
    dataset: Dataset | None = None
    merge_logs: dict[int, list[dict]] = field(default_factory=dict)
    _index: CoverageIndex | None = None

    def attach_dataset(self, ds: Dataset) -> None:
        fp = self.build_meta.get("fingerprint")
        if fp and ds.fingerprint() != fp:
            raise DatasetMismatchError(
                "dataset fingerprint does not match the one this store was built over")
        self.dataset = ds
        self._index = None

    def index(self) -> CoverageIndex:
        if self.dataset is None:
            raise DatasetMismatchError(
                "store has no dataset attached; load it with its source data")
        if self._index is None:
            self._index = generate_candidates(self.dataset, self.L)
        return self._index

    def checkpoint_clusters(self, k: int, D: int) -> tuple[Cluster, ...]:
        """Raw recorded cluster set at a grid point, in creation order."""
        self._check_range(k, D)
        hits = sorted(self.trees[D].stab(k))
        return tuple(c for _, c in hits)

    def _check_range(self, k: int, D: int) -> None:
        if not self.k_range[0] <= k <= self.k_range[1]:
            raise ParameterError(f"k={k} outside stored range {self.k_range}")
        if not self.d_range[0] <= D <= self.d_range[1]:
            raise ParameterError(f"D={D} outside stored range {self.d_range}")


def _final_objective(chain_obj: float, ds: Dataset) -> float:
    trivial = float(ds.values.sum()) / ds.n
    return trivial if baseline_beats(chain_obj, trivial) else chain_obj


def precompute(ds: Dataset, L: int, k_range: tuple[int, int],
               d_range: tuple[int, int], algo: str = "hybrid",
               seeding: str | None = None, seed: int = 0,
               kmodes_iters: int = 50, hybrid_c: float = 2.0,
               index: CoverageIndex | None = None,
               deadline: float | None = None) -> ParamStore:
    """Run one merge chain per D and record every (k, D) solution.

    The insertion phase is configured for k_max (budget
    ceil(hybrid_c * k_max), seed count k_max) so one chain serves the
    whole k range; phase_a_k is recorded in the build metadata and a
    fresh ``hybrid(..., phase_a_k=...)`` run reproduces any grid point.
    """
    k_min, k_max = k_range
    d_min, d_max = d_range
    if not 1 <= k_min <= k_max:
        raise ParameterError(f"bad k range {k_range}")
    if not 0 <= d_min <= d_max <= ds.m:
        raise ParameterError(f"bad D range {d_range} for m={ds.m}")
    if algo not in CHAIN_ALGORITHMS:
        raise ParameterError(
            f"algo {algo!r} cannot be chained; pick one of {CHAIN_ALGORITHMS}")

    t_start = time.perf_counter()
    index = index if index is not None else generate_candidates(ds, L)
    budget = math.ceil(hybrid_c * k_max)

    trees: dict[int, IntervalTree] = {}
    grid: dict[tuple[int, int], float] = {}
    phase_a_sizes: dict[int, int] = {}
    merge_logs: dict[int, list[dict]] = {}
    timings: dict[str, float] = {}

    for D in range(d_min, d_max + 1):
        _check_deadline(deadline)
        t_d = time.perf_counter()
        params = AlgoParams(k=k_max, L=L, D=D, seeding=seeding, seed=seed,
                            kmodes_iters=kmodes_iters, hybrid_c=hybrid_c)
        params.validate(ds)
        if algo == "hybrid":
            state = _fixed_order_state(ds, params, index, budget,
                                       seed_count=k_max)
        else:
            state = _seed_state(ds, params, index)
            while True:
                found = _distance_pairs(state, D)
                if found is None:
                    break
                _merge_best(state, *found)
        phase_a_sizes[D] = len(state.live)

        presence: dict[int, list[int]] = {}
        id_to_cluster = dict(state.live)
        log: list[dict] = []
        pool = _PairPool(state)
        for k in range(k_max, k_min - 1, -1):
            _check_deadline(deadline)
            while len(state.live) > k:
                before = set(state.live)
                _merge_best(state, pool.a, pool.b, pool.pid)
                pool.apply_merge()
                after = set(state.live)
                new_id = max(after - before)
                id_to_cluster[new_id] = state.live[new_id]
                log.append({
                    "k_target": k,
                    "removed": sorted(before - after),
                    "added": new_id,
                })
            for cid in state.live:
                presence.setdefault(cid, []).append(k)
            grid[(k, D)] = state.objective

        entries = []
        for cid, ks in presence.items():
            lo, hi = min(ks), max(ks)
            if len(ks) != hi - lo + 1:
                raise SummitError(
                    f"continuity violated for cluster {cid} at D={D}: "
                    f"k values {sorted(ks)} are not contiguous")
            entries.append((lo, hi, (cid, id_to_cluster[cid])))
        trees[D] = IntervalTree(entries)
        merge_logs[D] = log
        timings[f"D={D}"] = time.perf_counter() - t_d

    timings["total"] = time.perf_counter() - t_start
    build_meta = {
        "algo": algo,
        "seeding": seeding,
        "seed": seed,
        "kmodes_iters": kmodes_iters,
        "hybrid_c": hybrid_c,
        "phase_a_k": k_max,
        "phase_a_budget": budget,
        "fingerprint": ds.fingerprint(),
        "timings": timings,
    }
    store = ParamStore(L=L, k_range=(k_min, k_max), d_range=(d_min, d_max),
                       trees=trees, objective_grid=grid,
                       phase_a_sizes=phase_a_sizes, build_meta=build_meta,
                       dataset=ds, merge_logs=merge_logs)
    store._index = index
    return store


def _check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise BuildBudgetExceeded("store build exceeded its time budget")


def retrieve(store: ParamStore, k: int, D: int) -> Solution:
    """Reconstruct the recorded solution for (k, D) by stabbing the
    D tree at k; identical to the checkpoint taken during the build."""
    store._check_range(k, D)
    ds = store.dataset
    if ds is None:
        raise DatasetMismatchError(
            "store has no dataset attached; load it with its source data")
    clusters = store.checkpoint_clusters(k, D)
    chain_obj = store.objective_grid[(k, D)]
    trivial = float(ds.values.sum()) / ds.n
    if baseline_beats(chain_obj, trivial):
        all_star = Cluster((STAR,) * ds.m)
        return Solution((all_star,), k, store.L, D,
                        frozenset(range(ds.n)), trivial)
    index = store.index()
    if clusters:
        rows = np.unique(np.concatenate(
            [index.rows_of(c) for c in clusters]))
    else:
        rows = np.empty(0, dtype=np.int64)
    covered = frozenset(int(r) for r in rows)
    return Solution(clusters, k, store.L, D, covered, chain_obj)


def guidance_matrix(store: ParamStore) -> dict[int, list[tuple[int, float]]]:
    """The objective grid reshaped for plotting: one series per D,
    points sorted by k ascending."""
    out: dict[int, list[tuple[int, float]]] = {}
    ds = store.dataset
    for D in range(store.d_range[0], store.d_range[1] + 1):
        series = []
        for k in range(store.k_range[0], store.k_range[1] + 1):
            obj = store.objective_grid[(k, D)]
            if ds is not None:
                obj = _final_objective(obj, ds)
            series.append((k, obj))
        out[D] = series
    return out


# -- persistence -----------------------------------------------------------


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _pattern_str(c: Cluster) -> str:
    return ",".join("*" if s == STAR else str(s) for s in c.slots)


def _parse_pattern(text: str) -> Cluster:
    slots = tuple(STAR if t == "*" else int(t) for t in text.split(","))
    return Cluster(slots)


def save_store(store: ParamStore, path: str) -> None:
    """Write the store as a versioned, self-describing text record file."""
    lines = [f"{_MAGIC} {FORMAT_VERSION}"]
    meta = store.build_meta
    lines.append(f"meta L={store.L} k_min={store.k_range[0]} k_max={store.k_range[1]} "
                 f"d_min={store.d_range[0]} d_max={store.d_range[1]}")
    lines.append(f"meta algo={meta.get('algo', 'hybrid')} "
                 f"seeding={meta.get('seeding') or 'none'} "
                 f"seed={meta.get('seed', 0)} "
                 f"hybrid_c={_fmt_float(meta.get('hybrid_c', 2.0))} "
                 f"phase_a_k={meta.get('phase_a_k', 0)} "
                 f"phase_a_budget={meta.get('phase_a_budget', 0)}")
    lines.append(f"meta fingerprint={meta.get('fingerprint', '')}")
    for D in sorted(store.phase_a_sizes):
        lines.append(f"phase-a D={D} size={store.phase_a_sizes[D]}")
    for D in sorted(store.trees):
        for lo, hi, (cid, cluster) in sorted(store.trees[D].entries,
                                             key=lambda e: e[2][0]):
            lines.append(f"interval D={D} lo={lo} hi={hi} order={cid} "
                         f"pattern={_pattern_str(cluster)}")
    for (k, D) in sorted(store.objective_grid):
        lines.append(f"grid D={D} k={k} "
                     f"objective={_fmt_float(store.objective_grid[(k, D)])}")
    lines.append(f"end {len(lines) - 1}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def _kv(parts: list[str]) -> dict[str, str]:
    out = {}
    for p in parts:
        if "=" not in p:
            raise StoreFormatError(f"malformed field {p!r}")
        key, val = p.split("=", 1)
        out[key] = val
    return out


def load_store(path: str, dataset: Dataset | None = None) -> ParamStore:
    """Read a store file written by :func:`save_store`.

    Truncated or malformed files raise StoreFormatError; files written by
    a newer format version raise StoreVersionError.
    """
    with open(path, encoding="utf-8") as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    if not lines:
        raise StoreFormatError(f"{path} is empty")
    head = lines[0].split()
    if len(head) != 2 or head[0] != _MAGIC:
        raise StoreFormatError(f"{path} is not a summit store file")
    version = int(head[1])
    if version != FORMAT_VERSION:
        raise StoreVersionError(
            f"store format version {version} is not supported "
            f"(this build reads version {FORMAT_VERSION})")
    if not lines[-1].startswith("end "):
        raise StoreFormatError(f"{path} is truncated (missing end record)")
    declared = int(lines[-1].split()[1])
    body = lines[1:-1]
    if len(body) != declared:
        raise StoreFormatError(
            f"{path} is corrupt: {len(body)} records, header declares {declared}")

    meta: dict[str, Any] = {}
    ranges: dict[str, int] = {}
    phase_a_sizes: dict[int, int] = {}
    intervals: dict[int, list[tuple[int, int, tuple[int, Cluster]]]] = {}
    grid: dict[tuple[int, int], float] = {}
    for ln in body:
        parts = ln.split()
        kind = parts[0]
        fields = _kv(parts[1:])
        if kind == "meta":
            for key, val in fields.items():
                if key in ("L", "k_min", "k_max", "d_min", "d_max"):
                    ranges[key] = int(val)
                elif key in ("seed", "phase_a_k", "phase_a_budget"):
                    meta[key] = int(val)
                elif key == "hybrid_c":
                    meta[key] = float(val)
                elif key == "seeding":
                    meta[key] = None if val == "none" else val
                else:
                    meta[key] = val
        elif kind == "phase-a":
            phase_a_sizes[int(fields["D"])] = int(fields["size"])
        elif kind == "interval":
            D = int(fields["D"])
            intervals.setdefault(D, []).append(
                (int(fields["lo"]), int(fields["hi"]),
                 (int(fields["order"]), _parse_pattern(fields["pattern"]))))
        elif kind == "grid":
            grid[(int(fields["k"]), int(fields["D"]))] = float(fields["objective"])
        else:
            raise StoreFormatError(f"unknown record kind {kind!r}")

    for key in ("L", "k_min", "k_max", "d_min", "d_max"):
        if key not in ranges:
            raise StoreFormatError(f"store file is missing {key}")
    trees = {D: IntervalTree(entries) for D, entries in intervals.items()}
    store = ParamStore(
        L=ranges["L"],
        k_range=(ranges["k_min"], ranges["k_max"]),
        d_range=(ranges["d_min"], ranges["d_max"]),
        trees=trees,
        objective_grid=grid,
        phase_a_sizes=phase_a_sizes,
        build_meta=meta,
    )
    if dataset is not None:
        store.attach_dataset(dataset)
    return store
