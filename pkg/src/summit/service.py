"""HTTP/JSON API over an immutable loaded dataset and optional prebuilt
parameter stores.

Endpoints:
    GET  /meta                      dataset schema and value stats
    POST /summarize                 run a heuristic for {k, L, D, ...}
    GET  /guidance?L=&kmin=&kmax=&dmin=&dmax=   objective grid
    POST /compare                   band-diagram payload for two solutions

The only mutable state is a bounded map from client token to the last
solution served, used to resolve "compare against my previous result".
Responses are pure functions of (dataset, request body, seed).
"""

from __future__ import annotations

import json
import threading
import time
from collections import OrderedDict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .algorithms import AlgoParams, run_algorithm
from .errors import BuildBudgetExceeded, ParameterError, SummitError
from .model import Dataset, Solution
from .payloads import (
    canonical_bytes,
    compare_payload,
    guidance_payload,
    meta_payload,
    solution_payload,
)
from .store import ParamStore, precompute

CLIENT_TOKEN_HEADER = "X-Client-Token"
LRU_CAPACITY = 256


class _Lru:
    def __init__(self, cap: int):
        self.cap = cap
        self._map: OrderedDict[str, Solution] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: str) -> Solution | None:
        with self._lock:
            sol = self._map.get(key)
            if sol is not None:
                self._map.move_to_end(key)
            return sol

    def put(self, key: str, sol: Solution) -> None:
        with self._lock:
            self._map[key] = sol
            self._map.move_to_end(key)
            while len(self._map) > self.cap:
                self._map.popitem(last=False)


class SummitApp:
    """Request handling, independent of the HTTP plumbing."""

    def __init__(self, dataset: Dataset | None = None,
                 store: ParamStore | None = None,
                 build_budget: float | None = None):
        self.dataset = dataset
        self.prebuilt = store
        self.build_budget = build_budget
        self.previous = _Lru(LRU_CAPACITY)
        self._stores: dict[tuple, ParamStore] = {}
        self._store_locks: dict[tuple, threading.Lock] = {}
        self._stores_guard = threading.Lock()
        self.store_builds = 0  # observability: how many grids were built

    # -- helpers ---------------------------------------------------------

    def _require_dataset(self) -> Dataset:
        if self.dataset is None:
            raise _HttpError(503, "no dataset loaded")
        return self.dataset

    def _params_from(self, body: dict) -> AlgoParams:
        try:
            params = AlgoParams(
                k=int(body["k"]), L=int(body["L"]), D=int(body["D"]),
                seeding=body.get("seeding"),
                seed=int(body.get("seed", 0)),
                hybrid_c=float(body.get("hybrid_c", 2.0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise _HttpError(422, f"bad parameters: {e}") from e
        try:
            params.validate(self._require_dataset())
        except ParameterError as e:
            raise _HttpError(422, str(e)) from e
        return params

    def _solve(self, body: dict) -> Solution:
        ds = self._require_dataset()
        params = self._params_from(body)
        algo = body.get("algo", "hybrid")
        try:
            return run_algorithm(algo, ds, params)
        except ParameterError as e:
            raise _HttpError(422, str(e)) from e

    def _store_for(self, L: int, kmin: int, kmax: int,
                   dmin: int, dmax: int) -> ParamStore:
        ds = self._require_dataset()
        if (self.prebuilt is not None and self.prebuilt.L == L
                and self.prebuilt.k_range == (kmin, kmax)
                and self.prebuilt.d_range == (dmin, dmax)):
            return self.prebuilt
        key = (L, kmin, kmax, dmin, dmax)
        with self._stores_guard:
            if key in self._stores:
                return self._stores[key]
            lock = self._store_locks.setdefault(key, threading.Lock())
        with lock:
            with self._stores_guard:
                if key in self._stores:
                    return self._stores[key]
            deadline = (time.monotonic() + self.build_budget
                        if self.build_budget is not None else None)
            try:
                store = precompute(ds, L, (kmin, kmax), (dmin, dmax),
                                   deadline=deadline)
            except BuildBudgetExceeded as e:
                raise _HttpError(
                    413, f"{e}; precompute this grid offline and pass it "
                         f"to the server") from e
            except ParameterError as e:
                raise _HttpError(422, str(e)) from e
            with self._stores_guard:
                self._stores[key] = store
                self.store_builds += 1
            return store

    # -- endpoints --------------------------------------------------------

    def get_meta(self) -> dict:
        return meta_payload(self._require_dataset())

    def post_summarize(self, body: dict, token: str | None) -> dict:
        sol = self._solve(body)
        if token:
            self.previous.put(token, sol)
        return solution_payload(sol, self.dataset)

    def get_guidance(self, query: dict) -> dict:
        try:
            L = int(query["L"][0])
            kmin = int(query["kmin"][0])
            kmax = int(query["kmax"][0])
            dmin = int(query["dmin"][0])
            dmax = int(query["dmax"][0])
        except (KeyError, ValueError, IndexError) as e:
            raise _HttpError(422, f"bad guidance query: {e}") from e
        store = self._store_for(L, kmin, kmax, dmin, dmax)
        return guidance_payload(store)

    def post_compare(self, body: dict, token: str | None) -> dict:
        ds = self._require_dataset()
        current_req = body.get("current")
        if current_req is None:
            raise _HttpError(422, "compare needs a 'current' parameter triple")
        current = self._solve(current_req)
        prev_req = body.get("previous")
        if prev_req is not None:
            previous = self._solve(prev_req)
        else:
            previous = self.previous.get(token) if token else None
            if previous is None:
                raise _HttpError(
                    404, "no previous solution for this client token")
        payload = compare_payload(previous, current, ds)
        if token:
            self.previous.put(token, current)
        return payload


class _HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class _Handler(BaseHTTPRequestHandler):
    app: SummitApp  # set by make_server

    def log_message(self, fmt, *args):  # keep tests quiet
        pass

    def _send(self, status: int, payload) -> None:
        body = canonical_bytes(payload)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers",
                         f"Content-Type, {CLIENT_TOKEN_HEADER}")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _fail(self, status: int, message: str) -> None:
        self._send(status, {"error": message})

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            body = json.loads(raw.decode("utf-8") or "{}")
        except json.JSONDecodeError as e:
            raise _HttpError(422, f"request body is not valid JSON: {e}") from e
        if not isinstance(body, dict):
            raise _HttpError(422, "request body must be a JSON object")
        return body

    def _token(self) -> str | None:
        return self.headers.get(CLIENT_TOKEN_HEADER)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers",
                         f"Content-Type, {CLIENT_TOKEN_HEADER}")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()

    def do_GET(self):
        url = urlparse(self.path)
        try:
            if url.path == "/meta":
                self._send(200, self.app.get_meta())
            elif url.path == "/guidance":
                self._send(200, self.app.get_guidance(parse_qs(url.query)))
            else:
                self._fail(404, f"no such endpoint: {url.path}")
        except _HttpError as e:
            self._fail(e.status, e.message)
        except SummitError as e:
            self._fail(400, str(e))
        except Exception as e:  # never crash the server thread
            self._fail(500, f"{type(e).__name__}: {e}")

    def do_POST(self):
        url = urlparse(self.path)
        try:
            body = self._body()
            if url.path == "/summarize":
                self._send(200, self.app.post_summarize(body, self._token()))
            elif url.path == "/compare":
                self._send(200, self.app.post_compare(body, self._token()))
            else:
                self._fail(404, f"no such endpoint: {url.path}")
        except _HttpError as e:
            self._fail(e.status, e.message)
        except SummitError as e:
            self._fail(400, str(e))
        except Exception as e:
            self._fail(500, f"{type(e).__name__}: {e}")


def make_server(app: SummitApp, host: str = "127.0.0.1",
                port: int = 8765) -> ThreadingHTTPServer:
    handler = type("SummitHandler", (_Handler,), {"app": app})
    return ThreadingHTTPServer((host, port), handler)


def serve(app: SummitApp, host: str = "127.0.0.1", port: int = 8765) -> None:
    server = make_server(app, host, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()
