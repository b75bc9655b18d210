"""Command-line suite runner.

Prints a JSON report (or a text table) on stdout and exits with status 0
exactly when every check passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .catalog import DEFAULT_IDS
from .suites import FORMATS, SUITES, SuiteConfig, VerificationReport, build_tasks, run_suite


def load_schema() -> dict:
    return json.loads(resources.files("skewricci").joinpath("report.schema.json").read_text())


def emit_report(report: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [(c.id, c.anchor, str(c.samples), f"{c.max_err:.3e}", f"{c.threshold:.1e}",
             "PASS" if c.passed else "FAIL") for c in report.checks]
    header = ("check", "anchor", "samples", "max_err", "threshold", "result")
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in [header] + rows]
    failed = sum(not c.passed for c in report.checks)
    lines.append(f"suite {report.suite}  seed {report.seed}  checks {len(report.checks)}  "
                 f"failed {failed}  wall {report.wall_ms} ms")
    return ("\n".join(lines) + "\n").encode()


def _tolerance(text: str) -> tuple[str, float]:
    pattern, sep, value = text.rpartition("=")
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None
    if not number > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive: {text!r}")
    return (pattern if sep else "*", number)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewricci", description=__doc__.splitlines()[0])
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--samples", type=_positive, default=100, help="sample points per check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="[GLOB=]VALUE",
                   help="threshold override for all checks or for check ids matching GLOB (repeatable)")
    p.add_argument("--format", default="json", choices=FORMATS)
    p.add_argument("--catalog", action="append", metavar="ID",
                   help="catalog connection id (repeatable; default: the full catalog)")
    p.add_argument("--jobs", type=_positive, default=1, help="run tasks in this many threads")
    p.add_argument("--no-timing", action="store_true", help="report wall_ms as 0 for byte-stable output")
    p.add_argument("--list", action="store_true", help="list suites, catalog ids and tasks, then exit")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = SuiteConfig(suite=args.suite, catalog=tuple(args.catalog or DEFAULT_IDS),
                          samples=args.samples, seed=args.seed, tolerances=tuple(args.tol),
                          format=args.format, jobs=args.jobs)
    except ValueError as err:
        parser.error(str(err))
    if args.list:
        print("suites:", " ".join(SUITES + ("all",)))
        print("catalog:", " ".join(cfg.catalog))
        for task in build_tasks(cfg):
            print(f"  {task.id}  [{', '.join(task.suites)}]")
        return 0
    report = run_suite(cfg)
    if args.no_timing:
        report.wall_ms = 0
    sys.stdout.buffer.write(emit_report(report, cfg.format))
    sys.stdout.flush()
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
