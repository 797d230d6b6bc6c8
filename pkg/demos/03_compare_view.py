"""Compare two successive solutions with the band-diagram layout.

When a parameter changes, the UI shows old clusters on the left, new on
the right, and bands whose thickness is the number of shared tuples.
The right side's vertical order comes from an exact minimum-cost
assignment that minimizes weighted band crossings.

Run: python demos/03_compare_view.py
"""

import numpy as np

from summit import AlgoParams, decode, encode, hybrid
from summit.matchviz import crossing_cost, optimal_order, overlap_matrix

rng = np.random.default_rng(11)

m, n = 4, 150
domains = [6, 5, 4, 5]
rows, seen = [], set()
while len(rows) < n:
    r = tuple(int(rng.integers(d)) for d in domains)
    if r not in seen:
        seen.add(r)
        rows.append(r)
# values carry structure: two attribute values are worth a premium, so
# clusters naming them stay above the all-wildcard floor
vals = [5.0 + 3.0 * (r[0] == 0) + 2.0 * (r[2] == 1)
        + float(rng.uniform(-0.5, 0.5)) for r in rows]
ds = encode([f"A{i}" for i in range(m)],
            [tuple(f"v{x}" for x in r) for r in rows], vals)

old = hybrid(ds, AlgoParams(k=8, L=30, D=1))
new = hybrid(ds, AlgoParams(k=6, L=30, D=1))
print(f"old: k=8 -> {len(old.clusters)} clusters, obj {old.objective:.3f}")
print(f"new: k=6 -> {len(new.clusters)} clusters, obj {new.objective:.3f}")

om = overlap_matrix(old, new, ds)
placement = optimal_order(om)
default = list(range(om.n_new))
print(f"\ncrossing cost, value-ordered default: {crossing_cost(om, default)}")
print(f"crossing cost, matched ordering:      {placement.total_cost}")

# sketch the bands: old display position -> new display position
pos_old = {int(p): i for i, p in enumerate(om.p_a)}
pos_new = {int(p): j for j, p in enumerate(placement.p_b)}
print("\nbands (thickness = shared tuples):")
for slot_a in range(om.m_old):
    i = pos_old[slot_a]
    left = "|".join(decode(old.clusters[i], ds))
    for slot_b in range(om.n_new):
        j = pos_new[slot_b]
        shared = int(om.M[i, j])
        if shared:
            right = "|".join(decode(new.clusters[j], ds))
            print(f"  [{slot_a}] {left:28} =={shared:>3}==> [{slot_b}] {right}")
