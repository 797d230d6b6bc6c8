import numpy as np
import pytest

from summit.model import Cluster, Dataset, STAR, encode


def make_dataset(rng, n=None, m=None, max_n=30, max_m=4, max_domain=4,
                 values=None) -> Dataset:
    """Random dataset: distinct categorical rows, uniform float values."""
    m = m if m is not None else int(rng.integers(1, max_m + 1))
    want = n if n is not None else int(rng.integers(4, max_n + 1))
    domains = [int(rng.integers(2, max_domain + 1)) for _ in range(m)]
    rows, seen = [], set()
    tries = 0
    while len(rows) < want and tries < 60 * want:
        r = tuple(f"x{int(rng.integers(0, domains[i]))}" for i in range(m))
        tries += 1
        if r in seen:
            continue
        seen.add(r)
        rows.append(r)
    if values is None:
        values = [float(v) for v in rng.uniform(0, 100, size=len(rows))]
    return encode([f"A{i}" for i in range(m)], rows, values)


def random_cluster(rng, ds: Dataset) -> Cluster:
    """Random pattern over the dataset's dictionaries (stars included)."""
    slots = []
    for i in range(ds.m):
        if rng.random() < 0.4:
            slots.append(STAR)
        else:
            slots.append(int(rng.integers(0, len(ds.dicts[i]))))
    return Cluster(tuple(slots))


@pytest.fixture
def t1() -> Dataset:
    """Four-row toy dataset: values 10, 8, 6, 0; top-2 = rows 0, 1."""
    return encode(
        ["A", "B"],
        [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")],
        [10.0, 8.0, 6.0, 0.0],
    )
