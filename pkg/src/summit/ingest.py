"""Load aggregate-query output into a Dataset from CSV files or a SQL
row source.

Both paths funnel through the same encoder, so identical rows yield
bit-identical datasets regardless of source.  The SQL side is a thin
adapter behind a row-source interface; a file-backed fake implements the
same interface for tests, and sqlite is supported out of the box.
"""

from __future__ import annotations

import csv
import os
import sqlite3
from dataclasses import dataclass

from .errors import IngestError, ParameterError, SourceConnectionError
from .model import Dataset, encode

#: Environment variable consulted for a default DSN.
DSN_ENV_VAR = "SUMMIT_DSN"


@dataclass
class IngestConfig:
    value_column: str = "val"
    attribute_columns: list[str] | None = None
    L_default: int | None = None
    allow_duplicates: bool = False

    def __post_init__(self):
        if self.attribute_columns and self.value_column in self.attribute_columns:
            raise ParameterError(
                f"value column {self.value_column!r} cannot also be an attribute")


def _build_dataset(header: list[str], rows: list[tuple], config: IngestConfig) -> Dataset:
    if config.value_column not in header:
        raise IngestError(f"value column {config.value_column!r} not in columns {header}")
    if config.attribute_columns is not None:
        missing = [c for c in config.attribute_columns if c not in header]
        if missing:
            raise IngestError(f"attribute columns not found: {missing}")
        attr_names = list(config.attribute_columns)
    else:
        attr_names = [c for c in header if c != config.value_column]
    if not attr_names:
        raise IngestError("need at least one attribute column")

    attr_pos = [header.index(c) for c in attr_names]
    val_pos = header.index(config.value_column)

    raw_rows = []
    values = []
    seen: dict[tuple, int] = {}
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise IngestError(
                f"row {r + 1} has {len(row)} cells, header has {len(header)}")
        raw = tuple(str(row[p]) for p in attr_pos)
        try:
            val = float(row[val_pos])
        except (TypeError, ValueError):
            raise IngestError(
                f"row {r + 1}: value {row[val_pos]!r} is not numeric") from None
        if not config.allow_duplicates:
            if raw in seen:
                raise IngestError(
                    f"row {r + 1} duplicates row {seen[raw] + 1} "
                    f"({', '.join(raw)}); pass allow_duplicates to keep both")
            seen[raw] = r
        raw_rows.append(raw)
        values.append(val)
    if not raw_rows:
        raise IngestError("dataset is empty")
    return encode(attr_names, raw_rows, values)


def load_csv(path: str, config: IngestConfig | None = None) -> Dataset:
    """Load an RFC-4180 CSV file (UTF-8, header row) into a Dataset."""
    config = config or IngestConfig()
    if not os.path.exists(path):
        raise IngestError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path} is empty (no header row)") from None
        rows = [tuple(row) for row in reader if row]
    return _build_dataset([h.strip() for h in header], rows, config)


class RowSource:
    """Minimal interface the SQL loader needs from a database."""

    def fetch(self, query: str) -> tuple[list[str], list[tuple]]:
        """Run ``query`` verbatim; return (column names, rows)."""
        raise NotImplementedError


class SqliteRowSource(RowSource):
    def __init__(self, path: str):
        self.path = path

    def fetch(self, query: str) -> tuple[list[str], list[tuple]]:
        uri = f"file:{self.path}?mode=ro"
        try:
            con = sqlite3.connect(uri, uri=True)
        except sqlite3.Error as e:
            raise SourceConnectionError(f"cannot open sqlite db {self.path}: {e}") from e
        try:
            cur = con.execute(query)
            header = [d[0] for d in cur.description] if cur.description else []
            rows = [tuple(r) for r in cur.fetchall()]
        except sqlite3.Error as e:
            raise IngestError(f"query failed: {e}") from e
        finally:
            con.close()
        return header, rows


class CsvFileRowSource(RowSource):
    """File-backed fake database: serves a CSV file's rows for any query."""

    def __init__(self, path: str):
        if not os.path.exists(path):
            raise SourceConnectionError(f"no such file: {path}")
        self.path = path

    def fetch(self, query: str) -> tuple[list[str], list[tuple]]:
        with open(self.path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            try:
                header = [h.strip() for h in next(reader)]
            except StopIteration:
                raise IngestError(f"{self.path} is empty") from None
            rows = [tuple(row) for row in reader if row]
        return header, rows


def open_row_source(dsn: str) -> RowSource:
    """Resolve a DSN into a row source.

    Supported schemes: ``sqlite:///path/to.db`` and ``file:///path.csv``
    (the file-backed fake).  An empty DSN falls back to ``SUMMIT_DSN``.
    """
    if not dsn:
        dsn = os.environ.get(DSN_ENV_VAR, "")
    if not dsn:
        raise SourceConnectionError(
            f"no DSN given and {DSN_ENV_VAR} is not set")
    if dsn.startswith("sqlite://"):
        path = dsn[len("sqlite://"):]
        if path.startswith("/") and not os.path.exists(path) and os.path.exists(path[1:]):
            path = path[1:]
        if not os.path.exists(path):
            raise SourceConnectionError(f"sqlite database not found: {path}")
        return SqliteRowSource(path)
    if dsn.startswith("file://"):
        return CsvFileRowSource(dsn[len("file://"):])
    raise SourceConnectionError(f"unsupported DSN scheme: {dsn!r}")


def load_sql(dsn: str, query: str, config: IngestConfig | None = None,
             source: RowSource | None = None) -> Dataset:
    """Run ``query`` against a row source and encode the result.

    The query is passed through verbatim, never rewritten.  Semantics are
    identical to :func:`load_csv` over the same rows.
    """
    config = config or IngestConfig()
    src = source if source is not None else open_row_source(dsn)
    header, rows = src.fetch(query)
    if not rows:
        raise IngestError("query returned no rows")
    return _build_dataset(header, rows, config)


def rank_topL(ds: Dataset, L: int) -> list[int]:
    """The first L entries of the dataset's value-descending rank."""
    return [int(r) for r in ds.top_rows(L)]
