"""Precompute solutions over a (k, D) grid and read the guidance view.

A single merge chain per D value serves the whole k range: each cluster
is alive for one contiguous k interval, so the chain is stored as an
interval tree and any (k, D) solution is a stabbing query away.  The
objective grid is what a UI plots to spot flat regions (not worth
exploring) versus knee points (interesting parameter changes).

Run: python demos/02_guidance_grid.py
"""

import time

import numpy as np

from summit import AlgoParams, encode, guidance_matrix, hybrid, precompute, retrieve

rng = np.random.default_rng(3)

m, n = 5, 400
domains = [5, 4, 6, 3, 4]
rows, seen = [], set()
while len(rows) < n:
    r = tuple(f"v{rng.integers(d)}" for d in domains)
    if r not in seen:
        seen.add(r)
        rows.append(r)
vals = rng.uniform(0, 100, n).tolist()
ds = encode([f"A{i}" for i in range(m)], rows, vals)

L = 60
t0 = time.perf_counter()
store = precompute(ds, L, k_range=(2, 20), d_range=(0, 4))
print(f"grid build: {time.perf_counter() - t0:.2f}s "
      f"({(20 - 2 + 1) * 5} parameter combinations)")

# the guidance view: one series per D, objective as a function of k
print(f"\n{'k':>4}", *(f"D={d:>5}" for d in range(5)))
matrix = guidance_matrix(store)
for k in range(2, 21, 2):
    row = [dict(matrix[d])[k] for d in range(5)]
    print(f"{k:>4}", *(f"{v:7.2f}" for v in row))

# retrieval is a stabbing query, fast enough to drive a slider
t0 = time.perf_counter()
sol = retrieve(store, 11, 2)
dt = (time.perf_counter() - t0) * 1000
print(f"\nretrieve(k=11, D=2): {len(sol.clusters)} clusters, "
      f"objective {sol.objective:.2f}, {dt:.2f}ms")

# and it reproduces a fresh run with the chain's insertion budget
fresh = hybrid(ds, AlgoParams(k=11, L=L, D=2),
               phase_a_k=store.build_meta["phase_a_k"])
print("matches a fresh run:", set(sol.clusters) == set(fresh.clusters))
