import numpy as np
import pytest

from conftest import make_dataset
from summit.algorithms import AlgoParams, bottom_up, hybrid
from summit.errors import (
    DatasetMismatchError,
    ParameterError,
    StoreFormatError,
    StoreVersionError,
)
from summit.model import STAR, Cluster, check_feasible
from summit.store import (
    IntervalTree,
    guidance_matrix,
    load_store,
    precompute,
    retrieve,
    save_store,
)


class TestIntervalTree:
    def test_stab_matches_scan(self):
        rng = np.random.default_rng(40)
        for _ in range(20):
            entries = []
            for i in range(int(rng.integers(1, 40))):
                lo = int(rng.integers(0, 30))
                hi = lo + int(rng.integers(0, 10))
                entries.append((lo, hi, i))
            tree = IntervalTree(entries)
            for k in range(-2, 45):
                expect = sorted(p for lo, hi, p in entries if lo <= k <= hi)
                assert sorted(tree.stab(k)) == expect

    def test_empty(self):
        assert IntervalTree([]).stab(3) == []


class TestPrecompute:
    def test_singleton_k_range(self, t1):
        store = precompute(t1, 2, (1, 1), (0, 1))
        for D in (0, 1):
            sol = retrieve(store, 1, D)
            assert len(sol.clusters) <= 1 or sol.is_trivial
            assert check_feasible(sol, t1).feasible

    def test_t1_grid_matches_fresh_runs(self, t1):
        store = precompute(t1, 2, (1, 2), (0, 1))
        pak = store.build_meta["phase_a_k"]
        assert len(store.objective_grid) == 4
        for k in (1, 2):
            for D in (0, 1):
                got = retrieve(store, k, D)
                fresh = hybrid(t1, AlgoParams(k=k, L=2, D=D),
                               phase_a_k=pak)
                assert set(got.clusters) == set(fresh.clusters)
                assert got.objective == fresh.objective

    def test_intervals_contiguous_and_single(self):
        rng = np.random.default_rng(41)
        for _ in range(5):
            ds = make_dataset(rng, n=25, m=3)
            store = precompute(ds, min(10, ds.n), (1, 8), (0, ds.m))
            for D, tree in store.trees.items():
                seen = {}
                for lo, hi, (cid, cluster) in tree.entries:
                    assert lo <= hi
                    assert cluster.slots not in seen, "two intervals for one cluster"
                    seen[cluster.slots] = (lo, hi)

    def test_every_checkpoint_feasible(self):
        rng = np.random.default_rng(42)
        ds = make_dataset(rng, n=20, m=3)
        L = min(8, ds.n)
        store = precompute(ds, L, (1, 6), (0, ds.m))
        for D in range(0, ds.m + 1):
            for k in range(1, 7):
                sol = retrieve(store, k, D)
                assert check_feasible(sol, ds).feasible, (k, D)

    def test_range_validation(self, t1):
        with pytest.raises(ParameterError):
            precompute(t1, 2, (2, 1), (0, 0))
        with pytest.raises(ParameterError):
            precompute(t1, 2, (0, 2), (0, 0))
        with pytest.raises(ParameterError):
            precompute(t1, 2, (1, 2), (0, 9))

    def test_seeded_chains_reproducible_and_continuous(self):
        rng = np.random.default_rng(47)
        ds = make_dataset(rng, n=24, m=3)
        L = min(10, ds.n)
        for seeding in ("random", "kmodes"):
            store = precompute(ds, L, (1, 6), (0, 2), seeding=seeding, seed=9)
            pak = store.build_meta["phase_a_k"]
            for D in range(0, 3):
                for k in range(1, 7):
                    got = retrieve(store, k, D)
                    fresh = hybrid(ds, AlgoParams(k=k, L=L, D=D,
                                                  seeding=seeding, seed=9),
                                   phase_a_k=pak)
                    assert set(got.clusters) == set(fresh.clusters), (seeding, k, D)

    def test_concurrent_builds_identical(self):
        from concurrent.futures import ThreadPoolExecutor

        rng = np.random.default_rng(48)
        ds = make_dataset(rng, n=25, m=3)
        L = min(10, ds.n)

        def build(_):
            return precompute(ds, L, (1, 6), (0, 2))

        with ThreadPoolExecutor(max_workers=4) as pool:
            stores = list(pool.map(build, range(4)))
        first = stores[0]
        for other in stores[1:]:
            assert other.objective_grid == first.objective_grid
            for D in first.trees:
                assert sorted(other.trees[D].entries, key=lambda e: e[2][0]) == \
                       sorted(first.trees[D].entries, key=lambda e: e[2][0])

    def test_bottomup_chain_matches_plain_runs(self):
        rng = np.random.default_rng(43)
        ds = make_dataset(rng, n=18, m=3)
        L = min(8, ds.n)
        store = precompute(ds, L, (1, 5), (0, 2), algo="bottomup")
        for D in range(0, 3):
            for k in range(1, 6):
                got = retrieve(store, k, D)
                fresh = bottom_up(ds, AlgoParams(k=k, L=L, D=D))
                assert set(got.clusters) == set(fresh.clusters), (k, D)
                assert got.objective == fresh.objective


class TestRetrieve:
    def test_k_max_is_insertion_phase_end(self, t1):
        # phase A of the toy build ends with two singletons, inside range
        store = precompute(t1, 2, (1, 2), (0, 0))
        assert store.phase_a_sizes[0] == 2
        sol = retrieve(store, 2, 0)
        assert set(sol.clusters) == {Cluster((0, 0)), Cluster((0, 1))}

    def test_union_consistency_with_merge_log(self):
        rng = np.random.default_rng(44)
        ds = make_dataset(rng, n=25, m=3)
        L = min(10, ds.n)
        store = precompute(ds, L, (1, 8), (1, 1))
        log = store.merge_logs[1]
        for k in range(1, 8):
            lower = set(store.checkpoint_clusters(k, 1))
            upper = set(store.checkpoint_clusters(k + 1, 1))
            if lower == upper:
                continue
            # the recorded merges between the two checkpoints explain the diff
            steps = [e for e in log if e["k_target"] <= k]
            assert steps, f"diff at k={k} without recorded merges"

    def test_out_of_range(self, t1):
        store = precompute(t1, 2, (1, 2), (0, 1))
        with pytest.raises(ParameterError):
            retrieve(store, 3, 0)
        with pytest.raises(ParameterError):
            retrieve(store, 1, 2)

    def test_flat_tail_when_phase_a_small(self, t1):
        # phase A ends with 2 clusters; every k >= 2 sees the same solution
        store = precompute(t1, 2, (1, 5), (0, 0))
        objs = {k: retrieve(store, k, 0).objective for k in range(2, 6)}
        assert len(set(objs.values())) == 1
        sets = {k: frozenset(retrieve(store, k, 0).clusters) for k in range(2, 6)}
        assert len(set(sets.values())) == 1


class TestGuidance:
    def test_one_point_grid(self, t1):
        store = precompute(t1, 2, (1, 1), (0, 0))
        matrix = guidance_matrix(store)
        assert list(matrix) == [0]
        assert len(matrix[0]) == 1

    def test_values_agree_with_retrieve(self):
        rng = np.random.default_rng(45)
        ds = make_dataset(rng, n=20, m=3)
        store = precompute(ds, min(8, ds.n), (1, 6), (0, 2))
        matrix = guidance_matrix(store)
        for D, series in matrix.items():
            assert [k for k, _ in series] == sorted(k for k, _ in series)
            for k, obj in series:
                assert obj == retrieve(store, k, D).objective


class TestSaveLoad:
    def test_round_trip(self, t1, tmp_path):
        store = precompute(t1, 2, (1, 2), (0, 1))
        path = tmp_path / "t1.summit"
        save_store(store, str(path))
        loaded = load_store(str(path), t1)
        assert loaded.L == store.L
        assert loaded.k_range == store.k_range
        assert loaded.d_range == store.d_range
        assert loaded.objective_grid == store.objective_grid
        assert loaded.phase_a_sizes == store.phase_a_sizes
        for k in (1, 2):
            for D in (0, 1):
                a, b = retrieve(store, k, D), retrieve(loaded, k, D)
                assert a.clusters == b.clusters
                assert a.objective == b.objective

    def test_truncated_file(self, t1, tmp_path):
        store = precompute(t1, 2, (1, 2), (0, 1))
        path = tmp_path / "t1.summit"
        save_store(store, str(path))
        text = path.read_text().splitlines()
        path.write_text("\n".join(text[:-2]) + "\n")
        with pytest.raises(StoreFormatError):
            load_store(str(path))

    def test_future_version(self, t1, tmp_path):
        store = precompute(t1, 2, (1, 1), (0, 0))
        path = tmp_path / "t1.summit"
        save_store(store, str(path))
        text = path.read_text().replace("summit-store 1", "summit-store 2", 1)
        path.write_text(text)
        with pytest.raises(StoreVersionError, match="version 2"):
            load_store(str(path))

    def test_not_a_store(self, tmp_path):
        path = tmp_path / "nope.summit"
        path.write_text("hello world\n")
        with pytest.raises(StoreFormatError):
            load_store(str(path))

    def test_dataset_mismatch(self, t1, tmp_path):
        rng = np.random.default_rng(46)
        other = make_dataset(rng, n=8, m=2)
        store = precompute(t1, 2, (1, 1), (0, 0))
        path = tmp_path / "t1.summit"
        save_store(store, str(path))
        with pytest.raises(DatasetMismatchError):
            load_store(str(path), other)

    def test_retrieve_requires_dataset(self, t1, tmp_path):
        store = precompute(t1, 2, (1, 1), (0, 0))
        path = tmp_path / "t1.summit"
        save_store(store, str(path))
        loaded = load_store(str(path))
        with pytest.raises(DatasetMismatchError):
            retrieve(loaded, 1, 0)
