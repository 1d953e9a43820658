"""Command-line driver.  Reports are JSON lines on stdout, a summary on stderr.

Exit codes: 0 all checks pass, 1 usage or I/O error, 2 at least one failing
check (theorem-violation report), 3 internal consistency failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import experiments as ex
from .catalog import CatalogEntry, ingest_catalog, resolve_entry
from .errors import AlgroupsError, ParseError, SumOfSquaresMismatch, TheoremViolation, TooLarge, ValidationError
from .irred import base_change, enumerate_irreps
from .k1norm import CheckResult, norm_map, verify_norm_properties

log = logging.getLogger("algroups")

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def record(check: str, algebra: str, params: dict | None, passed: bool, witness=None, runtime_ms: int = 0) -> dict:
    return {"check": check, "algebra": algebra, "params": params or {}, "pass": bool(passed),
            "witness": witness, "runtime_ms": int(runtime_ms)}


def _from_result(name: str, r: CheckResult, ms: int) -> dict:
    return record(r.check, name, r.params, r.passed, r.witness, ms)


def _internal(name: str, e: BaseException, params=None) -> dict:
    return record("internal-error", name, params, False, {"error": type(e).__name__, "message": str(e)})


def _ints(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}")
    if not vals or min(vals) < 1:
        raise UsageError(f"extension degrees must be positive: {text!r}")
    return vals


# ---------------------------------------------------------------------------
# subcommands; each returns a list of records

def cmd_validate(entry: CatalogEntry, args) -> list[dict]:
    A = entry.algebra
    return [record("validate", entry.name,
                   {"dim": A.dim, "nclass": A.nclass, "field": A.field.to_json(), "order": A.q ** A.dim,
                    "defined_over": A.defined_over, "tags": list(entry.tags)}, True)]


def cmd_irreps(entry: CatalogEntry, args) -> list[dict]:
    A = entry.algebra
    t0 = time.perf_counter()
    chains = enumerate_irreps(A)
    ms = int((time.perf_counter() - t0) * 1000)
    return [record("irrep", entry.name, dict(index=i, **c.summary()), True, None, ms)
            for i, c in enumerate(chains)]


def cmd_norm(entry: CatalogEntry, args) -> list[dict]:
    A = entry.algebra
    n = args.ext[0]
    t0 = time.perf_counter()
    res = verify_norm_properties(A, args.ext)
    ms = int((time.perf_counter() - t0) * 1000)
    out = [_from_result(entry.name, r, ms) for r in res]
    if args.tabulate:
        Nt = norm_map(A, n)
        out.append(record("norm-table", entry.name, {"ext": n, "table": Nt.to_json()}, True))
    return out


def cmd_base_change(entry: CatalogEntry, args) -> list[dict]:
    A = entry.algebra
    n = args.ext[0]
    out = []
    for i, c in enumerate(enumerate_irreps(A)):
        t0 = time.perf_counter()
        try:
            d = base_change(c, n)
        except TheoremViolation as e:
            out.append(record(e.check, entry.name, {"index": i, "ext": n}, False,
                              {"message": str(e), "data": e.witness}))
            continue
        ms = int((time.perf_counter() - t0) * 1000)
        ok = d.fdim == c.fdim and d.sh == c.sh
        out.append(record("base-change", entry.name,
                          {"index": i, "ext": n, "degree": c.degree, "image_degree": d.degree,
                           "fdim": c.fdim, "sh": c.sh, "image_fdim": d.fdim, "image_sh": d.sh},
                          ok, None if ok else {"before": c.summary(), "after": d.summary()}, ms))
    return out


def cmd_verify(entry: CatalogEntry, args) -> list[dict]:
    return [_from_result(entry.name, r, ms) for r, ms in ex.run_checks(entry.algebra, args.ext, args.checks)]


SEARCH_CHECKS = ("orders", "surjectivity", "conditional")


def search_entry(entry: CatalogEntry, max_ext: int) -> list[dict]:
    """Orders equality for every ext in 2..max_ext, plus full surjectivity where small."""
    try:
        exts = list(range(2, max_ext + 1))
        return [_from_result(entry.name, r, ms) for r, ms in ex.run_checks(entry.algebra, exts, SEARCH_CHECKS)]
    except (SumOfSquaresMismatch, AssertionError) as e:
        return [_internal(entry.name, e)]


def cmd_search(args) -> list[dict]:
    entries = ingest_catalog(args.catalog)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(search_entry, entries, [args.max_ext] * len(entries)))
    else:
        chunks = [search_entry(e, args.max_ext) for e in entries]
    return [r for chunk in chunks for r in chunk]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="algroups", description="Representations of finite algebra groups and base change.")
    p.add_argument("--catalog", default=None, help="catalog directory used to resolve entry names")
    p.add_argument("--no-timings", action="store_true", help="write runtime_ms = 0 (byte-reproducible output)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def entry_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("entry", help="catalog entry name or JSON file")
        s.add_argument("--catalog", default=argparse.SUPPRESS)
        s.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS)
        return s

    entry_cmd("validate", "load and validate an entry")
    entry_cmd("irreps", "enumerate irreducible characters")
    s = entry_cmd("norm", "norm map checks")
    s.add_argument("--ext", type=_ints, required=True)
    s.add_argument("--tabulate", action="store_true")
    s = entry_cmd("base-change", "base change of every irreducible")
    s.add_argument("--ext", type=_ints, required=True)
    s = entry_cmd("verify", "run a list of checks")
    s.add_argument("--ext", type=_ints, required=True)
    s.add_argument("--checks", type=_checks, default=list(ex.ALL_CHECKS))
    s = sub.add_parser("search-surjectivity", help="search a catalog for failures of the orders equality")
    s.add_argument("--catalog", required=True)
    s.add_argument("--max-ext", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS)
    return p


def _checks(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in ex.ALL_CHECKS]
    if bad or not names:
        raise UsageError(f"unknown checks: {', '.join(bad) or text!r}")
    return names


COMMANDS = {"validate": cmd_validate, "irreps": cmd_irreps, "norm": cmd_norm,
            "base-change": cmd_base_change, "verify": cmd_verify}


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "search-surjectivity" and (args.max_ext < 1 or args.jobs < 1):
            raise UsageError("--max-ext and --jobs must be positive")
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
    name = getattr(args, "entry", args.catalog)
    code = EXIT_OK
    try:
        if args.command == "search-surjectivity":
            recs = cmd_search(args)
        else:
            entry = resolve_entry(args.entry, args.catalog)
            name = entry.name
            recs = COMMANDS[args.command](entry, args)
    except (OSError, ParseError, ValidationError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except TheoremViolation as e:
        recs = [record(e.check, name, {}, False, {"message": str(e), "data": e.witness})]
    except TooLarge as e:
        recs = [record(args.command, name, {}, True, "skipped: size")]
        print(f"skipped: {e}", file=err)
    except (SumOfSquaresMismatch, AssertionError) as e:
        recs = [_internal(name, e)]
    except AlgroupsError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    for r in recs:
        if args.no_timings:
            r["runtime_ms"] = 0
        out.write(json.dumps(r, sort_keys=False, default=_jsonable) + "\n")
    out.flush()
    failed = [r for r in recs if not r["pass"]]
    if any(r["check"] == "internal-error" for r in failed):
        code = EXIT_INTERNAL
    elif failed:
        code = EXIT_VIOLATION
    skipped = sum(1 for r in recs if r["witness"] == "skipped: size")
    print(f"{len(recs)} records, {len(failed)} failed, {skipped} skipped (size)", file=err)
    return code


def _jsonable(o):
    import numpy as np
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
