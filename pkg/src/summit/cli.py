"""Command-line front door.

Subcommands: summarize, precompute, guidance, compare, oracle, serve.
Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
JSON output is canonical (sorted keys, 17-significant-digit floats) and
matches the HTTP service bodies byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys

from .algorithms import AlgoParams, run_algorithm
from .errors import ParameterError, SummitError
from .ingest import DSN_ENV_VAR, IngestConfig, load_csv, load_sql
from .model import Dataset, Solution
from .oracle import OracleLimits, brute_force
from .payloads import (
    canonical_json,
    compare_payload,
    guidance_csv,
    guidance_payload,
    oracle_payload,
    solution_payload,
)
from .store import load_store, precompute, retrieve, save_store

PORT_ENV_VAR = "SUMMIT_PORT"


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", help="CSV file with the aggregate query output")
    p.add_argument("--dsn", help=f"database DSN (default: ${DSN_ENV_VAR})")
    p.add_argument("--query", help="SQL query to run verbatim against --dsn")
    p.add_argument("--value-column", default="val")
    p.add_argument("--allow-duplicates", action="store_true",
                   help="keep rows with identical attribute values")


def _add_algo_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", default="hybrid",
                   choices=["bottomup", "fixedorder", "hybrid"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeding", default=None, choices=["random", "kmodes"])
    p.add_argument("--hybrid-c", type=float, default=2.0)


def _load_dataset(args) -> Dataset:
    config = IngestConfig(value_column=args.value_column,
                          allow_duplicates=args.allow_duplicates)
    if args.csv and args.dsn:
        raise UsageError("pass either --csv or --dsn, not both")
    if args.csv:
        return load_csv(args.csv, config)
    dsn = args.dsn or os.environ.get(DSN_ENV_VAR)
    if dsn:
        if not args.query:
            raise UsageError("--dsn needs --query")
        return load_sql(dsn, args.query, config)
    raise UsageError("no input source: pass --csv or --dsn/--query")


class UsageError(Exception):
    pass


def _params(args, ds: Dataset) -> AlgoParams:
    params = AlgoParams(k=args.k, L=args.L, D=args.D, seeding=args.seeding,
                        seed=args.seed, hybrid_c=args.hybrid_c)
    params.validate(ds)
    return params


def _solution_table(sol: Solution, ds: Dataset, expand: bool) -> str:
    payload = solution_payload(sol, ds)
    header = list(ds.attr_names) + ["avg val", "size", "topL"]
    rows = []
    for cl in payload["clusters"]:
        rows.append(cl["pattern"] + [f"{cl['avg']:.4g}", str(cl["size"]),
                                     str(cl["topL_count"])])
        if expand:
            for member in cl["members"]:
                rows.append(["  " + member["values"][0]] + member["values"][1:]
                            + [f"{member['value']:.4g}", "", f"#{member['rank']}"])
    widths = [max(len(str(r[i])) for r in [header] + rows)
              for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    lines.append(f"objective: {payload['objective']:.6g}   "
                 f"covered: {payload['covered_count']} rows")
    return "\n".join(lines)


def cmd_summarize(args) -> int:
    ds = _load_dataset(args)
    params = _params(args, ds)
    sol = run_algorithm(args.algo, ds, params)
    if args.format == "json":
        print(canonical_json(solution_payload(sol, ds)))
    else:
        print(_solution_table(sol, ds, args.expand))
    return 0


def cmd_precompute(args) -> int:
    ds = _load_dataset(args)
    store = precompute(ds, args.L, (args.k_min, args.k_max),
                       (args.d_min, args.d_max), algo=args.algo,
                       seeding=args.seeding, seed=args.seed,
                       hybrid_c=args.hybrid_c)
    save_store(store, args.out)
    took = store.build_meta["timings"]["total"]
    print(f"wrote {args.out}: L={args.L} k=[{args.k_min},{args.k_max}] "
          f"D=[{args.d_min},{args.d_max}] in {took:.2f}s", file=sys.stderr)
    return 0


def _store_from_args(args, ds: Dataset):
    if args.store:
        return load_store(args.store, ds)
    missing = [name for name, val in [("--L", args.L), ("--k-min", args.k_min),
                                      ("--k-max", args.k_max),
                                      ("--d-min", args.d_min),
                                      ("--d-max", args.d_max)] if val is None]
    if missing:
        raise UsageError(f"need {' '.join(missing)} (or --store)")
    return precompute(ds, args.L, (args.k_min, args.k_max),
                      (args.d_min, args.d_max), algo=args.algo,
                      seeding=args.seeding, seed=args.seed,
                      hybrid_c=args.hybrid_c)


def cmd_guidance(args) -> int:
    ds = _load_dataset(args)
    store = _store_from_args(args, ds)
    if args.format == "json":
        print(canonical_json(guidance_payload(store)))
    else:
        sys.stdout.write(guidance_csv(store))
    return 0


def _parse_triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected k,L,D triple, got {text!r}")
    try:
        k, L, D = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"expected integers in triple {text!r}") from None
    return k, L, D


def cmd_compare(args) -> int:
    ds = _load_dataset(args)
    k1, L1, D1 = _parse_triple(args.old)
    k2, L2, D2 = _parse_triple(args.new)
    if args.store:
        store = load_store(args.store, ds)
        old = retrieve(store, k1, D1)
        new = retrieve(store, k2, D2)
    else:
        old = run_algorithm(args.algo, ds, AlgoParams(
            k=k1, L=L1, D=D1, seeding=args.seeding, seed=args.seed,
            hybrid_c=args.hybrid_c))
        new = run_algorithm(args.algo, ds, AlgoParams(
            k=k2, L=L2, D=D2, seeding=args.seeding, seed=args.seed,
            hybrid_c=args.hybrid_c))
    print(canonical_json(compare_payload(old, new, ds)))
    return 0


def cmd_oracle(args) -> int:
    ds = _load_dataset(args)
    params = AlgoParams(k=args.k, L=args.L, D=args.D)
    params.validate(ds)
    result = brute_force(ds, params,
                         OracleLimits(max_subsets=args.max_subsets))
    print(canonical_json(oracle_payload(result, ds)))
    return 0


def cmd_serve(args) -> int:
    from .service import SummitApp, serve

    has_source = args.csv or args.dsn or (
        args.query and os.environ.get(DSN_ENV_VAR))
    ds = _load_dataset(args) if has_source else None
    store = None
    if args.store:
        if ds is None:
            raise UsageError("--store needs a dataset (--csv or --dsn)")
        store = load_store(args.store, ds)
    port = args.port or int(os.environ.get(PORT_ENV_VAR, "8765"))
    app = SummitApp(ds, store, build_budget=args.build_budget)
    print(f"summit service on http://{args.host}:{port}", file=sys.stderr)
    serve(app, args.host, port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="summit",
        description="Summarize top aggregate query answers as diverse "
                    "wildcard clusters.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="run one summarization")
    _add_source_args(p)
    _add_algo_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--expand", action="store_true",
                   help="show member tuples with their global ranks")
    p.add_argument("--format", default="table", choices=["table", "json"])
    p.set_defaults(fn=cmd_summarize)

    p = sub.add_parser("precompute", help="build a (k, D) grid store")
    _add_source_args(p)
    _add_algo_args(p)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--d-min", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--out", required=True, help="store file to write")
    p.set_defaults(fn=cmd_precompute)

    p = sub.add_parser("guidance", help="emit the (k, D) objective grid")
    _add_source_args(p)
    _add_algo_args(p)
    p.add_argument("--store", help="use a prebuilt store file")
    p.add_argument("--L", type=int)
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--d-min", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(fn=cmd_guidance)

    p = sub.add_parser("compare", help="compare two solutions")
    _add_source_args(p)
    _add_algo_args(p)
    p.add_argument("--old", required=True, metavar="K,L,D")
    p.add_argument("--new", required=True, metavar="K,L,D")
    p.add_argument("--store", help="retrieve both solutions from this store")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("oracle", help="exact brute-force solution")
    _add_source_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--max-subsets", type=int, default=10_000_000)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("serve", help="start the HTTP service")
    _add_source_args(p)
    p.add_argument("--store", help="prebuilt store file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None,
                   help=f"port (default: ${PORT_ENV_VAR} or 8765)")
    p.add_argument("--build-budget", type=float, default=None,
                   help="seconds allowed for on-demand guidance builds")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (UsageError, ParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SummitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())
