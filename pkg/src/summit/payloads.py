"""JSON payload builders shared by the CLI and the HTTP service, plus the
canonical JSON encoder that makes their outputs byte-identical.

Canonical form: object keys sorted, no whitespace, floats rendered with
17 significant digits.
"""

from __future__ import annotations

import json

import numpy as np

from .model import Cluster, Dataset, Solution, coverage, decode
from .matchviz import optimal_order, overlap_matrix
from .oracle import OracleResult
from .store import ParamStore, _final_objective, guidance_matrix


def canonical_json(obj) -> str:
    return _dump(_plain(obj))


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")


def _plain(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _dump(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        return "[" + ",".join(_dump(x) for x in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_dump(v)}" for k, v in items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _rank_of(ds: Dataset) -> np.ndarray:
    out = np.empty(ds.n, dtype=np.int64)
    out[ds.rank] = np.arange(1, ds.n + 1)
    return out


def cluster_payload(c: Cluster, ds: Dataset, top_rows: set[int],
                    rank_of: np.ndarray, with_members: bool = True) -> dict:
    rows = coverage(c, ds)
    avg = float(ds.values[rows].sum() / len(rows)) if rows else 0.0
    out = {
        "pattern": list(decode(c, ds)),
        "size": len(rows),
        "topL_count": sum(1 for r in rows if r in top_rows),
        "avg": avg,
    }
    if with_members:
        members = sorted(rows, key=lambda r: int(rank_of[r]))
        out["members"] = [
            {
                "row": int(r),
                "rank": int(rank_of[r]),
                "values": [ds.dicts[i][ds.rows[r].codes[i]] for i in range(ds.m)],
                "value": float(ds.values[r]),
            }
            for r in members
        ]
    return out


def solution_payload(sol: Solution, ds: Dataset) -> dict:
    """Two-layer solution: clusters in display order, each expandable
    into its member tuples with their global ranks."""
    from .matchviz import display_order

    top_rows = {int(r) for r in ds.top_rows(sol.L)}
    ranks = _rank_of(ds)
    order = display_order(sol, ds)
    return {
        "params": {"k": sol.k, "L": sol.L, "D": sol.D},
        "objective": float(sol.objective),
        "covered_count": len(sol.covered),
        "trivial": sol.is_trivial,
        "clusters": [cluster_payload(sol.clusters[i], ds, top_rows, ranks)
                     for i in order],
    }


def compare_payload(old: Solution, new: Solution, ds: Dataset) -> dict:
    """Overlap matrix plus the crossing-minimizing new-side ordering and
    the display attributes the band diagram needs."""
    om = overlap_matrix(old, new, ds)
    placement = optimal_order(om)
    top_old = {int(r) for r in ds.top_rows(old.L)}
    top_new = {int(r) for r in ds.top_rows(new.L)}
    ranks = _rank_of(ds)
    return {
        "old": {
            "params": {"k": old.k, "L": old.L, "D": old.D},
            "clusters": [cluster_payload(c, ds, top_old, ranks, with_members=False)
                         for c in old.clusters],
        },
        "new": {
            "params": {"k": new.k, "L": new.L, "D": new.D},
            "clusters": [cluster_payload(c, ds, top_new, ranks, with_members=False)
                         for c in new.clusters],
        },
        "M": [[int(x) for x in row] for row in om.M],
        "p_a": [int(x) for x in om.p_a],
        "p_b": [int(x) for x in placement.p_b],
        "total_cost": int(placement.total_cost),
    }


def guidance_payload(store: ParamStore) -> dict:
    series = []
    matrix = guidance_matrix(store)
    for D in sorted(matrix):
        series.append({
            "D": D,
            "points": [{"k": k, "objective": obj, "retrievable": True}
                       for k, obj in matrix[D]],
        })
    return {
        "L": store.L,
        "k_range": list(store.k_range),
        "d_range": list(store.d_range),
        "series": series,
    }


def guidance_csv(store: ParamStore) -> str:
    lines = ["D,k,objective"]
    ds = store.dataset
    for (k, D) in sorted(store.objective_grid, key=lambda kd: (kd[1], kd[0])):
        obj = store.objective_grid[(k, D)]
        if ds is not None:
            obj = _final_objective(obj, ds)
        lines.append(f"{D},{k},{format(obj, '.17g')}")
    return "\n".join(lines) + "\n"


def meta_payload(ds: Dataset) -> dict:
    return {
        "attributes": list(ds.attr_names),
        "m": ds.m,
        "n": ds.n,
        "value_stats": {
            "min": float(ds.values.min()),
            "max": float(ds.values.max()),
            "mean": float(ds.values.sum() / ds.n),
        },
    }


def oracle_payload(result: OracleResult, ds: Dataset) -> dict:
    out = {
        "feasible_count": result.feasible_count,
        "evaluated_count": result.evaluated_count,
    }
    if result.optimal is None:
        out["optimal"] = None
    else:
        out["optimal"] = solution_payload(result.optimal, ds)
    return out
