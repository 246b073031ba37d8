"""Command line entry point: ``edskit run`` and ``edskit parse``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .dsl import ParseError, parse_file, to_text
from .dsl.runner import CheckResult, Options, Report, run

EXIT_PASS, EXIT_FAIL, EXIT_REFUSED, EXIT_ERROR = 0, 1, 2, 3


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("EDSKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"edskit: EDSKIT_SEED must be an integer, got {env!r}")


def run_file(path: str, options: Options) -> tuple[Report, str]:
    """Parse and evaluate one file; returns the report and any parse diagnostic."""
    try:
        doc = parse_file(path)
    except ParseError as exc:
        return Report(path, [], str(exc)), str(exc)
    except OSError as exc:
        return Report(path, [], f"cannot read {path}: {exc.strerror}"), f"{path}: {exc.strerror}"
    return run(doc, options), ""


def _run_job(job: tuple[str, int, int]) -> tuple[Report, str]:
    path, seed, mix = job
    return run_file(path, Options(seed, mix))


def render_json(report: Report) -> str:
    return json.dumps(report.as_json(), indent=2, ensure_ascii=False)


def _text_block(result: CheckResult) -> list[str]:
    tag = result.verdict.upper()
    head = f"[{tag}] {result.name}"
    if result.expected != "pass":
        head += f"  (expected {result.expected}, got {result.outcome})"
    lines = [head]
    for label, value in (("witness", result.witness), ("residue", result.residue)):
        if value is None:
            continue
        items = value if isinstance(value, list) else [value]
        for item in items:
            lines.append(f"    {label}: {item if not isinstance(item, dict) else json.dumps(item)}")
    if result.side_conditions:
        lines.append(f"    assuming nonzero: {', '.join(result.side_conditions)}")
    return lines


def render_text(report: Report) -> str:
    lines = [f"== {report.file}"]
    for r in report.checks:
        lines.extend(_text_block(r))
    if report.error is not None:
        lines.append(f"[ERROR] {report.error}")
    n = len(report.checks)
    passed = sum(r.verdict == "pass" for r in report.checks)
    lines.append(f"{passed}/{n} checks pass")
    return "\n".join(lines)


def cmd_run(args: argparse.Namespace) -> int:
    seed = _seed(args.seed)
    jobs = [(p, seed, args.mix_degree) for p in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_run_job, jobs))
    else:
        outcomes = [_run_job(j) for j in jobs]
    code = EXIT_PASS
    reports = []
    for report, diagnostic in outcomes:
        if diagnostic:
            print(diagnostic, file=sys.stderr)
        reports.append(report)
        code = max(code, report.exit_code)
    if args.json:
        if len(reports) == 1:
            print(render_json(reports[0]))
        else:
            bundle = {"version": __version__, "reports": [r.as_json() for r in reports]}
            print(json.dumps(bundle, indent=2, ensure_ascii=False))
    else:
        print("\n\n".join(render_text(r) for r in reports))
    return code


def cmd_parse(args: argparse.Namespace) -> int:
    try:
        doc = parse_file(args.file)
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_REFUSED
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_REFUSED
    if args.dump:
        sys.stdout.write(to_text(doc))
    else:
        print(f"{args.file}: {len(doc.statements)} statements")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edskit", description="Check exterior differential systems and graded Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate .eds files and report every check")
    r.add_argument("files", nargs="+", metavar="FILE")
    r.add_argument("--json", action="store_true", help="print the report as JSON")
    r.add_argument("--seed", type=int, default=None, help="seed for randomized probes (default: $EDSKIT_SEED or 0)")
    r.add_argument("--mix-degree", type=int, default=2, metavar="D",
                   help="degree bound for mixing coefficients in express checks (default 2)")
    r.add_argument("--jobs", type=int, default=1, metavar="N", help="files evaluated in parallel")
    r.set_defaults(func=cmd_run)
    p = sub.add_parser("parse", help="parse a file and optionally print its canonical form")
    p.add_argument("--dump", action="store_true", help="print the canonical text")
    p.add_argument("file", metavar="FILE")
    p.set_defaults(func=cmd_parse)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
