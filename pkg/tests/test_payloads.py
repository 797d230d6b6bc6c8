import json

import numpy as np
import pytest

from summit.payloads import canonical_json, solution_payload
from summit.algorithms import AlgoParams, hybrid


def random_blob(rng, depth=0):
    roll = rng.random()
    if depth > 3 or roll < 0.35:
        return rng.choice([
            None, True, False, int(rng.integers(-10**6, 10**6)),
            float(rng.uniform(-1e6, 1e6)), float(rng.uniform(0, 1)),
            "text", "uniçode ☃", ""])
    if roll < 0.7:
        return {f"key{i}": random_blob(rng, depth + 1)
                for i in range(int(rng.integers(0, 5)))}
    return [random_blob(rng, depth + 1) for _ in range(int(rng.integers(0, 5)))]


class TestCanonicalJson:
    def test_idempotent_through_parse(self):
        rng = np.random.default_rng(80)
        for _ in range(100):
            blob = random_blob(rng)
            first = canonical_json(blob)
            parsed = json.loads(first)
            assert canonical_json(parsed) == first

    def test_sorted_keys_no_whitespace(self):
        got = canonical_json({"b": 1, "a": {"z": [1, 2], "y": None}})
        assert got == '{"a":{"y":null,"z":[1,2]},"b":1}'

    def test_numpy_scalars_and_arrays(self):
        got = canonical_json({"a": np.int64(3), "b": np.float64(0.5),
                              "c": np.array([1, 2])})
        assert got == '{"a":3,"b":0.5,"c":[1,2]}'

    def test_float_precision_round_trips(self):
        value = 0.1 + 0.2  # not exactly 0.3
        text = canonical_json({"v": value})
        assert json.loads(text)["v"] == value

    def test_unserializable_rejected(self):
        with pytest.raises(TypeError):
            canonical_json({"f": object()})


class TestSolutionPayload:
    def test_member_ranks_sorted_and_consistent(self, t1):
        sol = hybrid(t1, AlgoParams(k=1, L=2, D=0))
        payload = solution_payload(sol, t1)
        cluster = payload["clusters"][0]
        ranks = [member["rank"] for member in cluster["members"]]
        assert ranks == sorted(ranks)
        assert cluster["size"] == len(cluster["members"])
        assert cluster["topL_count"] == sum(
            1 for member in cluster["members"] if member["rank"] <= 2)

    def test_display_order_by_cluster_average(self, t1):
        sol = hybrid(t1, AlgoParams(k=2, L=3, D=0))
        payload = solution_payload(sol, t1)
        avgs = [c["avg"] for c in payload["clusters"]]
        assert avgs == sorted(avgs, reverse=True)
