"""Command line entry point: ``sflab run`` and ``sflab cohomology``."""

from __future__ import annotations

import argparse
import sys

from ..errors import ManifestError
from .parser import Manifest, load_manifest, parse_slope
from .report import emit_report
from .tasks import run_tasks


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sflab", description="Exact checks for deformations of symplectic foliations.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the checks listed in a manifest")
    run.add_argument("manifest")
    run.add_argument("--out", help="write the report to this file instead of stdout")
    run.add_argument("--seed", type=int)
    run.add_argument("--order", type=int)
    coh = sub.add_parser("cohomology", help="truncated cohomology of the slope-lambda example")
    coh.add_argument("--lambda", dest="lam", required=True)
    coh.add_argument("--cutoff", type=int, required=True)
    coh.add_argument("--profile", action="store_true", help="also report the inverse-divisor profile")
    coh.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            man = load_manifest(args.manifest)
            report = run_tasks(man, seed=args.seed, order=args.order)
        else:
            man = Manifest(checks=["cohomology"] + (["profile"] if args.profile else []))
            man.params["lambda"] = parse_slope(args.lam)
            man.params["cutoff"] = args.cutoff
            report = run_tasks(man)
    except ManifestError as exc:
        print(f"sflab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sflab: {exc}", file=sys.stderr)
        return 2
    text = emit_report(report, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
