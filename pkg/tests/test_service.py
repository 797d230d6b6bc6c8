import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from conftest import make_dataset
from summit.ingest import load_csv
from summit.model import encode
from summit.service import CLIENT_TOKEN_HEADER, SummitApp, make_server

T1_CSV = """A,B,val
a1,b1,10
a1,b2,8
a2,b1,6
a2,b2,0
"""


@pytest.fixture
def t1_ds(tmp_path):
    path = tmp_path / "t1.csv"
    path.write_text(T1_CSV)
    return load_csv(str(path))


@pytest.fixture
def server(t1_ds):
    app = SummitApp(t1_ds)
    srv = make_server(app, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield app, f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


def call(base, method, path, body=None, token=None):
    headers = {"Content-Type": "application/json"}
    if token:
        headers[CLIENT_TOKEN_HEADER] = token
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, method=method, data=data,
                                 headers=headers)
    try:
        with urllib.request.urlopen(req) as r:
            return r.status, r.read()
    except urllib.error.HTTPError as e:
        return e.code, e.read()


class TestMeta:
    def test_meta(self, server):
        _, base = server
        status, body = call(base, "GET", "/meta")
        assert status == 200
        payload = json.loads(body)
        assert payload["m"] == 2 and payload["n"] == 4
        assert payload["attributes"] == ["A", "B"]

    def test_503_without_dataset(self):
        app = SummitApp(None)
        srv = make_server(app, port=0)
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{srv.server_address[1]}"
        try:
            status, _ = call(base, "GET", "/meta")
            assert status == 503
        finally:
            srv.shutdown()
            srv.server_close()

    def test_unknown_endpoint(self, server):
        _, base = server
        status, _ = call(base, "GET", "/nope")
        assert status == 404

    def test_cors_preflight(self, server):
        _, base = server
        req = urllib.request.Request(base + "/summarize", method="OPTIONS")
        with urllib.request.urlopen(req) as r:
            assert r.headers["Access-Control-Allow-Origin"] == "*"
            assert "X-Client-Token" in r.headers["Access-Control-Allow-Headers"]


class TestSummarize:
    def test_t1(self, server):
        _, base = server
        status, body = call(base, "POST", "/summarize",
                            {"k": 2, "L": 2, "D": 0})
        assert status == 200
        payload = json.loads(body)
        assert len(payload["clusters"]) == 2

    def test_idempotent(self, server):
        _, base = server
        args = {"k": 1, "L": 2, "D": 0}
        _, a = call(base, "POST", "/summarize", args)
        _, b = call(base, "POST", "/summarize", args)
        assert a == b

    def test_invalid_params_422(self, server):
        _, base = server
        status, _ = call(base, "POST", "/summarize", {"k": 1, "L": 2, "D": 9})
        assert status == 422
        status, _ = call(base, "POST", "/summarize", {"k": 1})
        assert status == 422

    def test_bad_json_422(self, server):
        _, base = server
        req = urllib.request.Request(base + "/summarize", method="POST",
                                     data=b"{nope",
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as r:
                status = r.status
        except urllib.error.HTTPError as e:
            status = e.code
        assert status == 422


class TestGuidance:
    def test_grid(self, server):
        _, base = server
        status, body = call(base, "GET",
                            "/guidance?L=2&kmin=1&kmax=2&dmin=0&dmax=1")
        assert status == 200
        payload = json.loads(body)
        assert [s["D"] for s in payload["series"]] == [0, 1]
        for s in payload["series"]:
            assert all(p["retrievable"] for p in s["points"])

    def test_cached_second_call_identical(self, server):
        app, base = server
        path = "/guidance?L=2&kmin=1&kmax=2&dmin=0&dmax=0"
        _, a = call(base, "GET", path)
        builds = app.store_builds
        _, b = call(base, "GET", path)
        assert a == b
        assert app.store_builds == builds  # reused, not rebuilt

    def test_bad_query_422(self, server):
        _, base = server
        status, _ = call(base, "GET", "/guidance?L=2")
        assert status == 422

    def test_racing_clients_share_one_build(self, server):
        from concurrent.futures import ThreadPoolExecutor

        app, base = server
        path = "/guidance?L=3&kmin=1&kmax=3&dmin=0&dmax=1"
        with ThreadPoolExecutor(max_workers=6) as pool:
            results = list(pool.map(
                lambda _: call(base, "GET", path), range(6)))
        assert all(status == 200 for status, _ in results)
        assert len({body for _, body in results}) == 1
        assert app.store_builds == 1

    def test_budget_413(self, t1_ds):
        app = SummitApp(t1_ds, build_budget=0.0)
        srv = make_server(app, port=0)
        threading.Thread(target=srv.serve_forever, daemon=True).start()
        base = f"http://127.0.0.1:{srv.server_address[1]}"
        try:
            status, body = call(base, "GET",
                                "/guidance?L=2&kmin=1&kmax=2&dmin=0&dmax=1")
            assert status == 413
            assert b"precompute" in body
        finally:
            srv.shutdown()
            srv.server_close()


class TestCompare:
    def test_self_compare_zero(self, server):
        _, base = server
        status, body = call(base, "POST", "/compare", {
            "previous": {"k": 2, "L": 2, "D": 0},
            "current": {"k": 2, "L": 2, "D": 0}})
        assert status == 200
        assert json.loads(body)["total_cost"] == 0

    def test_uses_previous_from_token(self, server):
        _, base = server
        call(base, "POST", "/summarize", {"k": 2, "L": 2, "D": 0}, token="c1")
        status, body = call(base, "POST", "/compare",
                            {"current": {"k": 1, "L": 2, "D": 0}}, token="c1")
        assert status == 200
        payload = json.loads(body)
        assert payload["M"] == [[1], [1]]

    def test_missing_previous_404(self, server):
        _, base = server
        status, _ = call(base, "POST", "/compare",
                         {"current": {"k": 1, "L": 2, "D": 0}}, token="fresh")
        assert status == 404
        status, _ = call(base, "POST", "/compare",
                         {"current": {"k": 1, "L": 2, "D": 0}})
        assert status == 404

    def test_fan_in_band_structure(self):
        # six top rows grouping pairwise on some attribute; k=4 -> k=3
        # merges exactly one more pair, so one new column overlaps two
        # old rows
        ds = encode(
            ["A", "B", "C"],
            [("a", "p", "1"), ("a", "q", "1"), ("b", "p", "2"),
             ("b", "q", "2"), ("c", "s", "3"), ("d", "t", "3")],
            [10.0, 9.0, 8.0, 7.0, 6.0, 5.0])
        app = SummitApp(ds)
        app.post_summarize({"k": 4, "L": 6, "D": 0}, "tok")
        payload = app.post_compare({"current": {"k": 3, "L": 6, "D": 0}}, "tok")
        M = np.array(payload["M"])
        assert M.shape[0] == 4 and M.shape[1] == 3
        fan_in = [j for j in range(M.shape[1]) if (M[:, j] > 0).sum() >= 2]
        assert fan_in, "expected one new cluster fed by two old ones"


class TestStoreAgreement:
    def test_summarize_agrees_with_store_when_budget_unbinding(self):
        # with L <= ceil(c*k_min) the insertion phase never hits either
        # budget, so ad-hoc runs and grid checkpoints coincide
        rng = np.random.default_rng(61)
        ds = make_dataset(rng, n=30, m=3)
        L = 6
        app = SummitApp(ds)
        from summit.store import precompute, retrieve

        store = precompute(ds, L, (3, 8), (0, 2))
        for k in range(3, 9):
            for D in range(0, 3):
                body = app.post_summarize({"k": k, "L": L, "D": D}, None)
                stored = retrieve(store, k, D)
                got = {tuple(c["pattern"]) for c in body["clusters"]}
                from summit.model import decode

                want = {decode(c, ds) for c in stored.clusters}
                assert got == want, (k, D)
                tol = 1e-9 * max(1.0, abs(stored.objective))
                assert abs(body["objective"] - stored.objective) <= tol

    def test_lru_previous_map_bounded(self, t1_ds):
        from summit.service import LRU_CAPACITY

        app = SummitApp(t1_ds)
        for i in range(LRU_CAPACITY + 10):
            app.post_summarize({"k": 1, "L": 2, "D": 0}, f"tok{i}")
        assert len(app.previous._map) == LRU_CAPACITY
        assert app.previous.get("tok0") is None
        assert app.previous.get(f"tok{LRU_CAPACITY + 9}") is not None


class TestDeterminism:
    def test_replaying_requests_identical_bodies(self):
        rng = np.random.default_rng(60)
        ds = make_dataset(rng, n=25, m=3)
        app1, app2 = SummitApp(ds), SummitApp(ds)
        log = [
            ("summarize", {"k": 2, "L": 5, "D": 1}),
            ("summarize", {"k": 3, "L": 6, "D": 0, "algo": "bottomup"}),
            ("summarize", {"k": 2, "L": 5, "D": 1, "algo": "fixedorder",
                           "seeding": "random", "seed": 3}),
        ]
        from summit.payloads import canonical_json

        for name, body in log:
            a = canonical_json(app1.post_summarize(body, "t"))
            b = canonical_json(app2.post_summarize(body, "t"))
            assert a == b
