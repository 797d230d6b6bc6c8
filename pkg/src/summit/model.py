"""Core domain types: elements, wildcard clusters, the cluster metric,
coverage indexing, and dictionary encoding.

A dataset is the materialized output of an aggregate query: rows of
categorical attribute values plus one numeric value per row.  A cluster is
an m-slot template mixing concrete (dictionary-encoded) attribute values
and the wildcard; it covers every row that matches all of its concrete
slots.  Everything downstream (the summarization heuristics, the exact
solver, the parameter store) works on these types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    DimensionMismatch,
    EmptyCoverageError,
    IngestError,
    ParameterError,
)

#: Slot value standing for the wildcard in an encoded cluster pattern.
STAR = -1

#: Default cap on the attribute count; candidate generation enumerates
#: 2^m star masks per covered row.
DEFAULT_MAX_ATTRIBUTES = 16


@dataclass(frozen=True)
class Cluster:
    """An m-slot pattern; each slot is an attribute code or ``STAR``."""

    slots: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.slots)

    @property
    def level(self) -> int:
        """Number of wildcard slots."""
        return sum(1 for s in self.slots if s == STAR)

    @property
    def is_singleton(self) -> bool:
        return all(s != STAR for s in self.slots)

    def __repr__(self) -> str:  # compact: Cluster(a0, *, 2)
        inner = ", ".join("*" if s == STAR else str(s) for s in self.slots)
        return f"Cluster({inner})"


@dataclass(frozen=True)
class Element:
    """One original result tuple: encoded attribute codes plus its value."""

    codes: tuple[int, ...]
    value: float

    def as_cluster(self) -> Cluster:
        """The singleton cluster with this element's exact pattern."""
        return Cluster(self.codes)


class Dataset:
    """Encoded aggregate-query output.

    Attributes
    ----------
    m : number of grouping attributes.
    attr_names : the m column names.
    dicts : per attribute, the list of raw strings indexed by code
        (code -> raw); the inverse map is kept internally for encoding.
    rows : the elements, in input order.
    rank : row indices sorted by value descending, ties by input order.
    """

    def __init__(self, attr_names: list[str], dicts: list[list[str]],
                 rows: list[Element]):
        if not rows:
            raise IngestError("dataset is empty")
        self.attr_names = list(attr_names)
        self.m = len(attr_names)
        self.dicts = [list(d) for d in dicts]
        self._encode_maps = [{raw: code for code, raw in enumerate(d)}
                             for d in self.dicts]
        self.rows = list(rows)
        for r, row in enumerate(self.rows):
            if len(row.codes) != self.m:
                raise IngestError(f"row {r} has {len(row.codes)} codes, expected {self.m}")
            for i, code in enumerate(row.codes):
                if not 0 <= code < len(self.dicts[i]):
                    raise IngestError(
                        f"row {r} attribute {attr_names[i]}: code {code} has "
                        f"no dictionary entry")
            if not math.isfinite(row.value):
                raise IngestError(f"row {r} has non-finite value {row.value!r}")
        self.values = np.array([row.value for row in rows], dtype=np.float64)
        self.codes = np.array([row.codes for row in rows], dtype=np.int64)
        order = sorted(range(len(rows)), key=lambda i: (-self.values[i], i))
        self.rank = np.array(order, dtype=np.int64)

    @property
    def n(self) -> int:
        return len(self.rows)

    def top_rows(self, L: int) -> np.ndarray:
        """Row indices of the L highest-valued rows, best first."""
        if not 1 <= L <= self.n:
            raise ParameterError(f"L={L} out of range [1, {self.n}]")
        return self.rank[:L]

    def fingerprint(self) -> str:
        """Content hash of the encoded dataset (used by stores)."""
        import hashlib

        h = hashlib.sha256()
        h.update("|".join(self.attr_names).encode())
        for d in self.dicts:
            h.update("\x1f".join(d).encode())
            h.update(b"\x1e")
        h.update(self.codes.tobytes())
        h.update(self.values.tobytes())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Dataset)
                and self.attr_names == other.attr_names
                and self.dicts == other.dicts
                and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, m={self.m})"


def _check_same_m(c1: Cluster, c2: Cluster) -> None:
    if len(c1.slots) != len(c2.slots):
        raise DimensionMismatch(
            f"clusters have {len(c1.slots)} and {len(c2.slots)} slots")


def distance(c1: Cluster, c2: Cluster) -> int:
    """Cluster metric: count of slots where either side is a wildcard or
    the concrete values differ."""
    _check_same_m(c1, c2)
    return sum(1 for a, b in zip(c1.slots, c2.slots)
               if a == STAR or b == STAR or a != b)


def covers(c1: Cluster, c2: Cluster) -> bool:
    """True iff every concrete slot of ``c1`` matches ``c2`` exactly."""
    _check_same_m(c1, c2)
    return all(a == STAR or a == b for a, b in zip(c1.slots, c2.slots))


def lca(c1: Cluster, c2: Cluster) -> Cluster:
    """Least common ancestor: keep slots where both agree concretely,
    wildcard everywhere else."""
    _check_same_m(c1, c2)
    return Cluster(tuple(a if (a == b and a != STAR) else STAR
                         for a, b in zip(c1.slots, c2.slots)))


def coverage(c: Cluster, ds: Dataset) -> list[int]:
    """Sorted indices of all rows covered by ``c`` (direct scan)."""
    if c.m != ds.m:
        raise DimensionMismatch(f"cluster has {c.m} slots, dataset has {ds.m}")
    mask = np.ones(ds.n, dtype=bool)
    for i, s in enumerate(c.slots):
        if s != STAR:
            mask &= ds.codes[:, i] == s
    return [int(r) for r in np.flatnonzero(mask)]


def avg_value(rows, ds: Dataset) -> float:
    """Arithmetic mean of the values of the given rows."""
    idx = np.asarray(sorted(rows), dtype=np.int64)
    if idx.size == 0:
        raise EmptyCoverageError("cannot average an empty row set")
    return float(ds.values[idx].sum() / idx.size)


@dataclass(frozen=True)
class Solution:
    """A cluster set together with its parameters and objective.

    ``clusters`` keeps creation order; it is a set semantically.
    ``objective`` is the average value over ``covered``, every covered
    row counted once.
    """

    clusters: tuple[Cluster, ...]
    k: int
    L: int
    D: int
    covered: frozenset[int]
    objective: float

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.k, self.L, self.D)

    @property
    def is_trivial(self) -> bool:
        return (len(self.clusters) == 1
                and all(s == STAR for s in self.clusters[0].slots))


@dataclass
class FeasibilityReport:
    """Outcome of the four feasibility checks for a solution."""

    size_ok: bool
    coverage_ok: bool
    distance_ok: bool
    antichain_ok: bool
    missing_top_rows: list[int] = field(default_factory=list)
    distance_violations: list[tuple[int, int, int]] = field(default_factory=list)
    antichain_violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return (self.size_ok and self.coverage_ok
                and self.distance_ok and self.antichain_ok)


def check_feasible(sol: Solution, ds: Dataset) -> FeasibilityReport:
    """Check the four solution constraints: size, top-L coverage,
    pairwise distance, and incomparability (antichain)."""
    clusters = list(sol.clusters)
    size_ok = len(clusters) <= sol.k

    covered: set[int] = set()
    for c in clusters:
        covered.update(coverage(c, ds))
    missing = [int(r) for r in ds.top_rows(sol.L) if int(r) not in covered]

    dist_viol = []
    anti_viol = []
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            d = distance(clusters[i], clusters[j])
            if d < sol.D:
                dist_viol.append((i, j, d))
            if covers(clusters[i], clusters[j]):
                anti_viol.append((i, j))
            elif covers(clusters[j], clusters[i]):
                anti_viol.append((j, i))

    return FeasibilityReport(
        size_ok=size_ok,
        coverage_ok=not missing,
        distance_ok=not dist_viol,
        antichain_ok=not anti_viol,
        missing_top_rows=missing,
        distance_violations=dist_viol,
        antichain_violations=anti_viol,
    )


class CoverageIndex:
    """Candidate clusters for a given L, with coverage in both directions.

    The candidate universe is the set of distinct star-maskings of the
    top-L rows; every candidate covers at least one top-L row, and the
    universe is closed under ``lca``.  The index maps each candidate to
    the sorted array of rows it covers, and each row to the candidates
    covering it.
    """

    def __init__(self, ds: Dataset, L: int, patterns, rows_by_id,
                 row_pat_indptr, row_pat_ids):
        self.ds = ds
        self.L = L
        self.top_rows = ds.top_rows(L)
        self.patterns: list[tuple[int, ...]] = patterns
        self.pattern_ids: dict[tuple[int, ...], int] = {
            p: i for i, p in enumerate(patterns)}
        self.rows_by_id: list[np.ndarray] = rows_by_id
        self._row_pat_indptr = row_pat_indptr
        self._row_pat_ids = row_pat_ids
        self.sums_by_id = np.array(
            [ds.values[rows].sum() for rows in rows_by_id], dtype=np.float64)
        self.counts_by_id = np.array(
            [rows.size for rows in rows_by_id], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, c: Cluster) -> bool:
        return c.slots in self.pattern_ids

    @property
    def clusters(self) -> list[Cluster]:
        return [Cluster(p) for p in self.patterns]

    def id_of(self, c: Cluster) -> int:
        try:
            return self.pattern_ids[c.slots]
        except KeyError:
            raise KeyError(f"{c!r} is not a candidate cluster") from None

    def cluster_of(self, pid: int) -> Cluster:
        return Cluster(self.patterns[pid])

    def rows_of(self, c: Cluster) -> np.ndarray:
        """Sorted row indices covered by a candidate cluster."""
        return self.rows_by_id[self.id_of(c)]

    def pattern_ids_for_row(self, r: int) -> np.ndarray:
        """Ids of all candidate clusters covering row ``r``."""
        lo, hi = self._row_pat_indptr[r], self._row_pat_indptr[r + 1]
        return self._row_pat_ids[lo:hi]

    def clusters_for_row(self, r: int) -> list[Cluster]:
        return [Cluster(self.patterns[pid])
                for pid in self.pattern_ids_for_row(r)]


def generate_candidates(ds: Dataset, L: int,
                        max_attributes: int = DEFAULT_MAX_ATTRIBUTES) -> CoverageIndex:
    """Build the candidate universe for top-L coverage.

    Candidates are the distinct patterns obtained by starring any subset
    of slots of any top-L row.  For every star mask the rows of the
    dataset are grouped by their masked pattern, so each candidate's
    coverage and each row's candidate list come out of one pass.
    """
    if ds.m > max_attributes:
        raise CapacityError(
            f"m={ds.m} exceeds the attribute cap {max_attributes} "
            f"(candidate count grows as 2^m per covered row)")
    top = ds.top_rows(L)
    top_mask = np.zeros(ds.n, dtype=bool)
    top_mask[top] = True

    patterns: list[tuple[int, ...]] = []
    rows_by_id: list[np.ndarray] = []
    pair_rows: list[np.ndarray] = []   # rows, aligned with pair_pids
    pair_pids: list[np.ndarray] = []

    codes = ds.codes
    for mask_bits in range(1 << ds.m):
        masked = codes.copy()
        for i in range(ds.m):
            if mask_bits >> i & 1:
                masked[:, i] = STAR
        uniq, inverse = np.unique(masked, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        is_cand = np.zeros(len(uniq), dtype=bool)
        is_cand[inverse[top_mask]] = True

        order = np.argsort(inverse, kind="stable")
        grouped = inverse[order]
        starts = np.flatnonzero(np.r_[True, grouped[1:] != grouped[:-1]])
        ends = np.r_[starts[1:], grouped.size]
        for g in range(len(uniq)):
            if not is_cand[g]:
                continue
            rows = order[starts[g]:ends[g]].astype(np.int64)
            pid = len(patterns)
            patterns.append(tuple(int(v) for v in uniq[g]))
            rows_by_id.append(rows)
            pair_rows.append(rows)
            pair_pids.append(np.full(rows.size, pid, dtype=np.int64))

    all_rows = np.concatenate(pair_rows)
    all_pids = np.concatenate(pair_pids)
    order = np.argsort(all_rows, kind="stable")
    row_pat_ids = all_pids[order]
    counts = np.bincount(all_rows, minlength=ds.n)
    row_pat_indptr = np.r_[0, np.cumsum(counts)]

    return CoverageIndex(ds, L, patterns, rows_by_id, row_pat_indptr, row_pat_ids)


def encode(attr_names: list[str], raw_rows: list[tuple],
           values: list[float]) -> Dataset:
    """Dictionary-encode raw string rows into a Dataset.

    Codes are assigned densely per attribute in first-appearance order,
    so identical input always encodes identically.
    """
    if len(raw_rows) != len(values):
        raise IngestError("row/value count mismatch")
    m = len(attr_names)
    dicts: list[list[str]] = [[] for _ in range(m)]
    maps: list[dict[str, int]] = [{} for _ in range(m)]
    rows: list[Element] = []
    for r, (raw, val) in enumerate(zip(raw_rows, values)):
        if len(raw) != m:
            raise IngestError(f"row {r} has {len(raw)} attributes, expected {m}")
        codes = []
        for i, cell in enumerate(raw):
            cell = str(cell)
            code = maps[i].get(cell)
            if code is None:
                code = len(dicts[i])
                dicts[i].append(cell)
                maps[i][cell] = code
            codes.append(code)
        try:
            fval = float(val)
        except (TypeError, ValueError):
            raise IngestError(f"row {r}: value {val!r} is not numeric") from None
        if not math.isfinite(fval):
            raise IngestError(f"row {r}: value {val!r} is not finite")
        rows.append(Element(tuple(codes), fval))
    return Dataset(attr_names, dicts, rows)


def decode(c: Cluster, ds: Dataset) -> tuple[str, ...]:
    """Raw-string pattern of a cluster; wildcard slots render as ``"*"``."""
    if c.m != ds.m:
        raise DimensionMismatch(f"cluster has {c.m} slots, dataset has {ds.m}")
    out = []
    for i, s in enumerate(c.slots):
        if s == STAR:
            out.append("*")
        else:
            out.append(ds.dicts[i][s])
    return tuple(out)
