"""Command-line entry point: generate, classify, nshot, policy-distance, report.

Every subcommand reads a TaskSpec config (JSON) and an output directory,
and is deterministic under a fixed --seed: rerunning a command with the
same inputs reproduces its output files byte for byte. Generated datasets
live under ``<out>/<game>/<task>/`` next to the result CSVs computed from
them. ``JSONBAG_LOG`` sets the log level (e.g. INFO, DEBUG).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from .classify import fit_pnns
from .experiments import (
    METHODS,
    TaskSpec,
    correlation_study,
    generate_dataset,
    load_dataset,
    random_state_pool,
    run_n_shot,
    run_task,
    save_dataset,
    write_correlation,
    write_nshot,
    write_results,
)
from .games import make_game
from .games.base import GameSpec

logger = logging.getLogger(__name__)


class CliError(Exception):
    """User-facing failure: message to stderr, exit code 1."""


def _load_spec(config: str, seed: int | None) -> TaskSpec:
    path = Path(config)
    if not path.exists():
        raise CliError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        spec = TaskSpec.from_json(data)
    except (TypeError, ValueError, KeyError) as exc:
        raise CliError(f"config {path} is not a valid task spec: {exc}") from exc
    if seed is not None:
        spec = replace(spec, seed=seed)
    return spec


def _load_task_dataset(args):
    spec = _load_spec(args.config, args.seed)
    task_dir = Path(args.out) / spec.game / spec.task
    try:
        return load_dataset(task_dir)
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from exc


def _parse_methods(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise CliError(
            f"unknown methods {unknown}; valid methods: {', '.join(METHODS)}"
        )
    if not methods:
        raise CliError(f"no methods given; valid methods: {', '.join(METHODS)}")
    return methods


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"{flag} expects comma-separated integers, got {text!r}") from exc
    if not values:
        raise CliError(f"{flag} expects at least one value")
    return values


def cmd_generate(args) -> int:
    spec = _load_spec(args.config, args.seed)
    dataset = generate_dataset(spec, jobs=args.jobs)
    try:
        base = save_dataset(args.out, dataset, force=args.force)
    except FileExistsError as exc:
        raise CliError(f"{exc}; pass --force to regenerate") from exc
    print(
        f"wrote {len(dataset.trajectories)} games "
        f"({len(dataset.classes())} classes x {spec.games_per_class}) to {base}"
    )
    return 0


def cmd_classify(args) -> int:
    dataset = _load_task_dataset(args)
    methods = _parse_methods(args.methods)
    results = run_task(dataset, methods, n_trees=args.trees)
    base = write_results(args.out, dataset, results)
    for method in methods:
        r = results[method]
        print(
            f"{dataset.spec.game}/{dataset.spec.task} {method}: "
            f"accuracy {r.accuracy:.3f} (95% CI {r.ci_low:.3f}-{r.ci_high:.3f})"
        )
    print(f"results in {base}")
    return 0


def cmd_nshot(args) -> int:
    dataset = _load_task_dataset(args)
    n_values = _parse_int_list(args.n, "--n")
    try:
        result = run_n_shot(dataset, n_values=n_values, trials=args.trials)
    except ValueError as exc:  # N at least as large as the smallest class
        raise CliError(str(exc)) from exc
    path = write_nshot(args.out, dataset, result)
    for n, mean in result.table():
        print(f"N={n}: mean accuracy {mean:.3f} over {result.trials} trials")
    print(f"table in {path}")
    return 0


def cmd_policy_distance(args) -> int:
    dataset = _load_task_dataset(args)
    spec = dataset.spec
    if spec.task != "agents":
        raise CliError(
            f"policy-distance needs an agents-task dataset, got task {spec.task!r}"
        )
    train, _ = dataset.split_items("bag")
    model = fit_pnns(train, "jsd")
    prototypes = {p.label: p.freqs for p in model.prototypes}
    game = make_game(GameSpec(spec.game, spec.base_params(), spec.n_players(), 0))
    states = random_state_pool(game, args.states, args.state_games, seed=spec.seed)
    result = correlation_study(
        game, spec.game, spec.roster, prototypes, states,
        seed=spec.seed, n_samples=args.samples,
    )
    path = write_correlation(args.out, result)
    for a, b, proto_d, policy_d in result.rows():
        print(f"{a:12s} {b:12s} prototype {proto_d:.4f}  policy {policy_d:.4f}")
    r_text = "undefined (<3 pairs)" if result.pearson_r is None else f"{result.pearson_r:.4f}"
    print(f"pearson r: {r_text}")
    print(f"scatter in {path}")
    return 0


def cmd_report(args) -> int:
    root = Path(args.dir)
    if not root.exists():
        raise CliError(f"no such directory: {root}")
    rows = []
    for csv_path in sorted(root.glob("*/*/*.csv")):
        if csv_path.stem not in METHODS:
            continue
        task_dir = csv_path.parent
        lines = csv_path.read_text(encoding="utf-8").splitlines()
        if len(lines) < 2 or not lines[0].startswith("method,"):
            logger.warning("skipping malformed result file %s", csv_path)
            continue
        method, accuracy, ci_low, ci_high, n_test = lines[1].split(",")
        rows.append(
            (task_dir.parent.name, task_dir.name, method, accuracy, ci_low, ci_high, n_test)
        )
    summary = root / "summary.csv"
    with open(summary, "w", newline="", encoding="utf-8") as fh:
        fh.write("game,task,method,accuracy,ci_low,ci_high,n_test\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    if not rows:
        print(f"warning: no result CSVs under {root}", file=sys.stderr)
    else:
        width = max(len(f"{g}/{t}") for g, t, *_ in rows)
        for game, task, method, accuracy, *_ in rows:
            print(f"{game + '/' + task:{width}s}  {method:12s} {float(accuracy):.3f}")
    print(f"summary in {summary}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jsonbag",
        description="Game-trajectory classification with bags of JSON tokens.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="task spec JSON file")
            p.add_argument("--out", required=True, help="run output directory")
            p.add_argument("--seed", type=int, default=None, help="override the spec seed")

    g = sub.add_parser("generate", help="play all games of a task and save the dataset")
    add_common(g)
    g.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker processes across classes")
    g.add_argument("--force", action="store_true",
                   help="overwrite an existing dataset manifest")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", help="run classification methods on a saved dataset")
    add_common(c)
    c.add_argument("--methods", default=",".join(METHODS),
                   help=f"comma-separated subset of: {','.join(METHODS)}")
    c.add_argument("--trees", type=int, default=100, help="forest size for rf methods")
    c.set_defaults(func=cmd_classify)

    n = sub.add_parser("nshot", help="N-shot prototype accuracy on a saved dataset")
    add_common(n)
    n.add_argument("--n", default="1,3,5,10", help="comma-separated shot counts")
    n.add_argument("--trials", type=int, default=20)
    n.set_defaults(func=cmd_nshot)

    p = sub.add_parser(
        "policy-distance",
        help="prototype JSD vs policy distance over all agent pairs",
    )
    add_common(p)
    p.add_argument("--states", type=int, default=200, help="policy-evaluation states")
    p.add_argument("--state-games", type=int, default=50,
                   help="random games the states are drawn from")
    p.add_argument("--samples", type=int, default=100,
                   help="action samples per state for sampling agents")
    p.set_defaults(func=cmd_policy_distance)

    r = sub.add_parser("report", help="merge result CSVs under a run directory")
    r.add_argument("dir", help="run directory to summarize")
    r.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("JSONBAG_LOG", "WARNING").upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
