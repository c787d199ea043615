#!/usr/bin/env python3
"""Run every pipeline on one scenario config and print the merged table.

Usage: python3 scripts/run_benchmark.py scenario/run.yaml [--sweep]
       [--pipelines w2v,mlm,...]

Endpoints are mocked, so results demonstrate plumbing and relative
behavior on synthetic corpora rather than real-model quality.
"""

import argparse
from pathlib import Path

from earshot.cli import PIPELINES, main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("config")
    ap.add_argument("--sweep", action="store_true")
    ap.add_argument("--pipelines", default=",".join(PIPELINES))
    args = ap.parse_args()

    base = Path(args.config).resolve().parent / "runs"
    run_dirs: list[str] = []
    for pipe in args.pipelines.split(","):
        pipe = pipe.strip()
        if pipe not in PIPELINES:
            raise SystemExit(f"unknown pipeline {pipe!r}")
        out = base / pipe
        argv = ["run", "--config", args.config, "--pipeline", pipe,
                "--mock-endpoints", "--out", str(out)]
        if args.sweep:
            argv.append("--sweep")
        print(f"== {pipe} ==")
        status = cli_main(argv)
        if status != 0:
            print(f"{pipe}: exit {status}, skipping from table")
            continue
        run_dirs.append(str(out))

    print("== merged ==")
    return cli_main(["report", *run_dirs])


if __name__ == "__main__":
    raise SystemExit(main())
