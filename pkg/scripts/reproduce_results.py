#!/usr/bin/env python3
"""Reproduce the classification, N-shot, and correlation tables.

Runs every task config under configs/ end to end: dataset generation,
all classification methods, the N-shot curve, the policy-distance
correlation (agents tasks only), and a merged summary.csv.

Existing datasets are reused unless --force is given, so an interrupted
run can be resumed by invoking the script again.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from jsonbag.cli import main as jsonbag_cli

SHOT_COUNTS = (1, 3, 5, 10, 40)


def run(argv: list[str]) -> None:
    print("+ jsonbag " + " ".join(argv), flush=True)
    code = jsonbag_cli(argv)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", default="configs",
                        help="directory of task spec JSON files")
    parser.add_argument("--out", default="results",
                        help="output directory for datasets and CSVs")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for generation")
    parser.add_argument("--force", action="store_true",
                        help="regenerate datasets that already exist")
    parser.add_argument("--skip", default="",
                        help="comma-separated config stems to skip")
    args = parser.parse_args()

    skip = {s for s in args.skip.split(",") if s}
    configs = sorted(Path(args.configs).glob("*.json"))
    if not configs:
        sys.exit(f"no task configs in {args.configs}")

    for path in configs:
        if path.stem in skip:
            print(f"- skipping {path.stem}")
            continue
        spec = json.loads(path.read_text())
        manifest = Path(args.out) / spec["game"] / spec["task"] / "manifest.json"
        t0 = time.time()
        if args.force or not manifest.exists():
            gen = ["generate", "--config", str(path), "--out", args.out]
            if args.jobs:
                gen += ["--jobs", str(args.jobs)]
            if args.force:
                gen += ["--force"]
            run(gen)
        else:
            print(f"- reusing dataset at {manifest.parent}")
        run(["classify", "--config", str(path), "--out", args.out])
        shots = [n for n in SHOT_COUNTS if n < spec["games_per_class"]]
        run(["nshot", "--config", str(path), "--out", args.out,
             "--n", ",".join(map(str, shots))])
        if spec["task"] == "agents":
            run(["policy-distance", "--config", str(path), "--out", args.out])
        print(f"= {path.stem} done in {time.time() - t0:.0f}s", flush=True)

    run(["report", args.out])


if __name__ == "__main__":
    main()
