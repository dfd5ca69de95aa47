"""Command-line front end: ``ckforms check|list|sweep``.

Exit status: 0 for any completed verdict, 2 for bad user input, 1 for an
internal failure.
"""

from __future__ import annotations

import argparse
import itertools
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .catalog import (
    FAMILIES,
    FAMILY_ARITY,
    CatalogEntry,
    build_pair,
    builtin_entries,
    load_pair,
)
from .obstruction import DEFAULT_MAX_DEGREE, PairSpec, check_obstruction
from .report import build_report, render_text, summarize, summary_line, to_json

ENV_MAX_DEGREE = "CKFORMS_MAX_DEGREE"


class UsageError(Exception):
    """Bad user input; reported with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_max_degree() -> int:
    raw = os.environ.get(ENV_MAX_DEGREE)
    if raw is None or raw == "":
        return DEFAULT_MAX_DEGREE
    try:
        return _positive(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{ENV_MAX_DEGREE}: {exc}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _instance_selector(selector: str):
    m = re.fullmatch(r"([a-z0-9-]+)\(([\d,\s]*)\)", selector)
    if not m or m.group(1) not in FAMILIES:
        return None
    params = tuple(int(x) for x in m.group(2).split(",") if x.strip())
    return m.group(1), params


def resolve_pair(selector: str | None, spec_path: str | None) -> tuple[PairSpec, str]:
    """Pair and description for ``--pair`` (builtin id, alias, family instance or file) or ``--spec``."""
    if (selector is None) == (spec_path is None):
        raise UsageError("give exactly one of --pair or --spec")
    if selector is not None:
        for e in builtin_entries():
            if selector == e.id or selector in e.aliases:
                return e.pair, e.description
        inst = _instance_selector(selector)
        if inst is not None:
            try:
                return build_pair(*inst)
            except ValueError as exc:
                raise UsageError(f"{selector}: {exc}") from None
        if Path(selector).is_file():
            spec_path = selector
        else:
            raise UsageError(f"unknown pair {selector!r} (see `ckforms list`)")
    try:
        text = Path(spec_path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {spec_path}: {exc.strerror}") from None
    try:
        return load_pair(text), ""
    except ValueError as exc:
        raise UsageError(f"{spec_path}: {exc}") from None


def run_check(
    pair: PairSpec,
    max_degree: int,
    *,
    description: str = "",
    params=None,
    force: bool = False,
    timing: bool = False,
) -> dict:
    start = time.perf_counter()
    result = check_obstruction(pair, max_degree, force=force)
    elapsed = round((time.perf_counter() - start) * 1000) if timing else None
    return build_report(pair, result, description=description, params=params, elapsed_ms=elapsed)


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    pair, description = resolve_pair(args.pair, args.spec)
    report = run_check(
        pair, args.max_degree, description=description, force=args.force, timing=args.timing
    )
    _emit(to_json(report) if args.format == "json" else render_text(report), args.out)
    return 0


def entry_row(e: CatalogEntry) -> dict:
    return {
        "id": e.id,
        "aliases": list(e.aliases),
        "description": e.description,
        "source": e.source,
        "family": e.family,
        "expected": {
            "verdict": e.expected.verdict.value,
            "witness": e.expected.witness,
            "poly_degree": e.expected.degree,
            "reason": e.expected.reason,
            "tentative": e.expected.tentative,
        },
        "annotations": list(e.annotations),
    }


def cmd_list(args) -> int:
    entries = builtin_entries()
    if args.filter:
        needle = args.filter.lower()
        entries = [
            e
            for e in entries
            if needle in e.id.lower()
            or needle in e.description.lower()
            or needle in e.source.lower()
            or any(needle in a for a in e.aliases)
        ]
    if args.format == "json":
        text = to_json([entry_row(e) for e in entries])
    else:
        lines = ["id | source | G/H | expected"]
        for e in entries:
            expected = e.expected.verdict.value
            if e.expected.witness:
                expected += f" [{e.expected.witness}, degree {e.expected.degree}]"
            if e.expected.tentative:
                expected += " (tentative)"
            lines.append(f"{e.id} | {e.source} | {e.description} | {expected}")
        text = "".join(line + "\n" for line in lines)
    _emit(text, args.out)
    return 0


def parse_range(text: str) -> list[int]:
    """``1,3,5`` or ``1..5`` or ``1..5/2`` (step); empty text is an empty range."""
    values: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = re.fullmatch(r"(\d+)\.\.(\d+)(?:/(\d+))?", part)
        if m:
            lo, hi, step = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
            if step < 1:
                raise UsageError(f"bad step in {part!r}")
            values.extend(range(lo, hi + 1, step))
        elif part.isdigit():
            values.append(int(part))
        else:
            raise UsageError(f"bad range {part!r}")
    return values


def sweep_instances(family: str, param_args: list[str], tuple_args: list[str]):
    """Parameter tuples in sorted order, without duplicates."""
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}, catalog")
    tuples = [tuple(parse_range(t)) for t in tuple_args]
    if param_args:
        names = FAMILY_ARITY[family]
        if names is None:
            raise UsageError(f"{family} takes a variable number of parameters; use --tuple")
        ranges = {}
        for item in param_args:
            name, sep, spec = item.partition("=")
            if not sep or name not in names:
                raise UsageError(f"--param expects one of {', '.join(names)} as name=values")
            ranges[name] = parse_range(spec)
        missing = [n for n in names if n not in ranges]
        if missing:
            raise UsageError(f"missing --param for {', '.join(missing)}")
        tuples += list(itertools.product(*(ranges[n] for n in names)))
    return sorted(set(tuples))


def _sweep_job(job):
    kind, key, max_degree, timing = job
    if kind == "entry":
        e = next(x for x in builtin_entries() if x.id == key)
        return run_check(e.pair, max_degree, description=e.description, timing=timing)
    family, params = key
    pair, description = build_pair(family, params)
    return run_check(pair, max_degree, description=description, params=params, timing=timing)


def cmd_sweep(args) -> int:
    if args.family == "catalog":
        if args.param or args.tuple:
            raise UsageError("the catalog sweep takes no parameters")
        jobs = [("entry", e.id, args.max_degree, args.timing) for e in builtin_entries()]
    else:
        instances = sweep_instances(args.family, args.param or [], args.tuple or [])
        for params in instances:
            try:
                build_pair(args.family, params)
            except ValueError as exc:
                raise UsageError(f"{args.family}{params}: {exc}") from None
        jobs = [("family", (args.family, p), args.max_degree, args.timing) for p in instances]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_sweep_job, jobs))
    else:
        reports = [_sweep_job(j) for j in jobs]
    counts = summarize(reports)
    if args.format == "json":
        text = to_json(
            {
                "tool": "ckforms",
                "version": __version__,
                "family": args.family,
                "max_degree": args.max_degree,
                "reports": reports,
                "summary": counts,
            }
        )
    else:
        text = "".join(render_text(r) + "\n" for r in reports) + summary_line(counts) + "\n"
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ckforms", description="Obstruction checker for compact Clifford-Klein forms.")
    parser.add_argument("--version", action="version", version=f"ckforms {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, degree=True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        if degree:
            p.add_argument(
                "--max-degree",
                type=_positive,
                default=None,
                help=f"highest polynomial degree searched (default {ENV_MAX_DEGREE} or {DEFAULT_MAX_DEGREE})",
            )
            p.add_argument("--timing", action="store_true", help="include elapsed milliseconds")

    check = sub.add_parser("check", help="check one pair")
    check.add_argument("--pair", help="builtin id or alias, family instance like 'sl-pq-so-pq(5,5)', or file")
    check.add_argument("--spec", help="pair-spec JSON file")
    check.add_argument("--force", action="store_true", help="search even when the criterion is inapplicable")
    common(check)
    check.set_defaults(func=cmd_check)

    lst = sub.add_parser("list", help="list builtin pairs")
    lst.add_argument("--filter", help="case-insensitive substring of id, alias, description or source")
    common(lst, degree=False)
    lst.set_defaults(func=cmd_list)

    sweep = sub.add_parser("sweep", help="check a family over parameter ranges")
    sweep.add_argument("--family", required=True, help="family name, or 'catalog' for every builtin")
    sweep.add_argument("--param", action="append", help="name=values, e.g. p=1,3,5 or q=1..5/2")
    sweep.add_argument("--tuple", action="append", help="one explicit parameter tuple, e.g. 3,3,2")
    sweep.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    common(sweep)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_degree", 0) is None:
            args.max_degree = default_max_degree()
        return args.func(args)
    except UsageError as exc:
        print(f"ckforms: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"ckforms: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
