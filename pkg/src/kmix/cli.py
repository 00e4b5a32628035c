"""Command-line interface: build, query, stats, selftest."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any

from kmix.core.config import settings
from kmix.core.errors import IndexFormatError
from kmix.harness.container import IndexParams
from kmix.harness.registry import build_index, list_kinds, load_index
from kmix.harness.selftest import SUITES, run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


def _jsonable(value: Any) -> Any:
    # numpy scalars in stats
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def _wildcard_byte(char: str | None) -> int:
    if char is None:
        return -1
    raw = char.encode("latin-1")
    if len(raw) != 1:
        raise ValueError(f"--wildcard-char must be a single byte, got {char!r}")
    return raw[0]


def cmd_build(args: argparse.Namespace) -> int:
    text = Path(args.text).read_bytes()
    params = IndexParams(
        k=args.k,
        mu=args.mu or 0,
        h=args.h or 0,
        gamma=args.gamma or 0,
        wildcard=_wildcard_byte(args.wildcard_char),
    )
    built = build_index(args.index, text, params)
    Path(args.output).write_bytes(built.to_bytes())
    logger.info("wrote %s index to %s", built.kind.name, args.output)
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    built = load_index(Path(args.index_file).read_bytes())
    pattern = bytes.fromhex(args.pattern) if args.hex else args.pattern.encode("latin-1")
    positions = built.query(pattern)
    if args.json:
        payload = {"pattern_len": len(pattern), "k": built.params.k, "occurrences": positions}
        print(json.dumps(payload))
    else:
        for p in positions:
            print(p)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    built = load_index(Path(args.index_file).read_bytes())
    stats = {"params": asdict(built.params), **built.stats()}
    print(json.dumps(stats, indent=2 if not args.json else None, default=_jsonable))
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    report = run_selftest(args.n, args.sigma, args.k, args.seed, args.suite)
    if not report.summary.empty:
        print(report.summary.to_string(index=False))
    if report.space is not None:
        print(report.space.to_string(index=False))
    for failure in report.failures:
        print(failure.describe())
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kmix", description="k-mismatch and k-wildcard text indexes")
    sub = ap.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Build an index over a text file")
    build.add_argument("-t", "--text", required=True)
    build.add_argument("-k", type=int, required=True)
    build.add_argument("--index", default="compact", choices=list_kinds())
    build.add_argument("--mu", type=int, default=None)
    build.add_argument("--h", type=int, default=None)
    build.add_argument("--gamma", type=int, default=None)
    build.add_argument("--wildcard-char", default=None)
    build.add_argument("-o", "--output", required=True)
    build.set_defaults(handler=cmd_build)

    query = sub.add_parser("query", help="Report occurrences of a pattern")
    query.add_argument("-i", "--index-file", required=True)
    query.add_argument("-p", "--pattern", required=True)
    query.add_argument("--hex", action="store_true", help="Pattern is given as hex digits")
    query.add_argument("--json", action="store_true")
    query.set_defaults(handler=cmd_query)

    stats = sub.add_parser("stats", help="Print structure sizes of an index file")
    stats.add_argument("-i", "--index-file", required=True)
    stats.add_argument("--json", action="store_true", help="Compact single-line JSON")
    stats.set_defaults(handler=cmd_stats)

    selftest = sub.add_parser("selftest", help="Compare every index kind with the oracles")
    selftest.add_argument("--n", type=int, default=500)
    selftest.add_argument("--sigma", type=int, default=4)
    selftest.add_argument("--k", type=int, default=2)
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--suite", default="oracle", choices=list(SUITES))
    selftest.set_defaults(handler=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except IndexFormatError as exc:
        print(f"kmix: malformed index: {exc}", file=sys.stderr)
    except (ValueError, OSError) as exc:
        print(f"kmix: {exc}", file=sys.stderr)
    return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
