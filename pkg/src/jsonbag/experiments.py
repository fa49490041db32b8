"""Experiment orchestration: datasets, task runs, and the correlation study.

A TaskSpec names a game and one of three classification targets — which
agent played (self-play per class), which parameter set the game used, or
which dice seed drove it (Can't Stop only). generate_dataset turns a spec
into labeled trajectories plus every representation the methods need
(token bags, character bags, hand-crafted baseline features) so all
methods see the identical stratified split.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .agents import DEFAULT_ROSTER, AgentSpec, MctsAgent, extract_policy
from .bags import NormalizedBag, build_bag
from .classify import (
    ConfusionMatrix,
    EvalResult,
    LabeledDataset,
    NShotResult,
    _group,
    _sample_split,
    evaluate,
    fit_pnns,
    n_shot_eval,
    wilson_interval,
)
from .forest import ForestConfig, RandomForest
from .games import Trajectory, make_game, mix64, play_game, sample_parameters
from .games.base import GameSpec
from .metrics import js_distance
from .tokenizer import PathFilter, TokenizationMode, tokenize_trajectory

logger = logging.getLogger(__name__)

STANDARD_TRACKS = (3, 5, 7, 9, 11, 13, 11, 9, 7, 5, 3)

GAME_DEFAULTS: dict[str, dict] = {
    "connect4": {
        "params": {"width": 8, "height": 8},
        "players": 2,
        "mode": TokenizationMode.ORDERED,
    },
    "dotsandboxes": {
        "params": {"width": 8, "height": 8},
        "players": 2,
        "mode": TokenizationMode.ORDERED,
    },
    "cantstop": {
        "params": {"track_lengths": list(STANDARD_TRACKS)},
        "players": 4,
        "mode": TokenizationMode.BOTH,
    },
}

# Serialized fields that would hand the parameters task its label outright;
# the values stay in the JSON states but never reach the bag.
PARAMETER_LEAK_PREFIXES: dict[str, tuple[str, ...]] = {
    "connect4": (".width", ".height"),
    "dotsandboxes": (".width", ".height"),
    "cantstop": (".trackLengths",),
}

TASKS = ("agents", "parameters", "seeds")
METHODS = ("jsd", "char", "l2", "cosine", "baseline", "rf", "rf-baseline", "rf-char")

_RF_METHOD_SEEDS = {"rf": 1, "rf-baseline": 2, "rf-char": 3}
_SPLIT_SALT = 0x5B17
_SAMPLE_SALT = 0xCA55


@dataclass(frozen=True)
class TaskSpec:
    """One classification experiment: a game, a target, and its classes."""

    game: str
    task: str
    games_per_class: int = 100
    seed: int = 0
    players: int | None = None
    game_params: Mapping | None = None
    roster: tuple[AgentSpec, ...] = DEFAULT_ROSTER
    # each entry: {"label": ..., "params": {...}} or the string "sample"
    parameter_classes: tuple = ("sample", "sample", "sample", "sample")
    seed_classes: tuple[int, ...] = (1, 2, 3, 4)
    generator: AgentSpec = AgentSpec("mcts", "mcts32", iterations=32)
    mode: str | None = None
    extra_filters: tuple[str, ...] = ()

    def __post_init__(self):
        if self.game not in GAME_DEFAULTS:
            raise ValueError(f"unknown game {self.game!r}")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if self.task == "seeds" and self.game != "cantstop":
            raise ValueError(
                f"the seeds task is only defined for cantstop: {self.game} is "
                "deterministic given the players' choices"
            )
        if self.games_per_class < 2:
            raise ValueError("need at least 2 games per class to split")

    def tokenization_mode(self) -> TokenizationMode:
        if self.mode is not None:
            return TokenizationMode(self.mode)
        return GAME_DEFAULTS[self.game]["mode"]

    def path_filter(self) -> PathFilter:
        prefixes = tuple(self.extra_filters)
        if self.task == "parameters":
            prefixes += PARAMETER_LEAK_PREFIXES[self.game]
        return PathFilter(prefixes)

    def n_players(self) -> int:
        return self.players or GAME_DEFAULTS[self.game]["players"]

    def base_params(self) -> dict:
        params = dict(self.game_params or GAME_DEFAULTS[self.game]["params"])
        return params

    def to_json(self) -> dict:
        return {
            "game": self.game,
            "task": self.task,
            "games_per_class": self.games_per_class,
            "seed": self.seed,
            "players": self.players,
            "game_params": dict(self.game_params) if self.game_params else None,
            "roster": [asdict(a) for a in self.roster],
            "parameter_classes": [
                c if isinstance(c, str) else {"label": c["label"], "params": dict(c["params"])}
                for c in self.parameter_classes
            ],
            "seed_classes": list(self.seed_classes),
            "generator": asdict(self.generator),
            "mode": self.mode,
            "extra_filters": list(self.extra_filters),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TaskSpec":
        kwargs = dict(data)
        if "roster" in kwargs:
            kwargs["roster"] = tuple(AgentSpec.from_json(a) for a in kwargs["roster"])
        if "generator" in kwargs:
            kwargs["generator"] = AgentSpec.from_json(kwargs["generator"])
        for key in ("parameter_classes", "seed_classes", "extra_filters"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class _ClassPlan:
    label: str
    params: dict
    agent_spec: AgentSpec
    dice_seed: int | None  # fixed initial-state seed (seeds task) or None


def _resolve_classes(spec: TaskSpec) -> list[_ClassPlan]:
    if spec.task == "agents":
        names = [a.name for a in spec.roster]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate agent names in roster: {names}")
        return [
            _ClassPlan(a.name, spec.base_params(), a, None) for a in spec.roster
        ]
    if spec.task == "seeds":
        return [
            _ClassPlan(f"seed{s}", spec.base_params(), spec.generator, s)
            for s in spec.seed_classes
        ]
    # parameters: fixed entries as given, "sample" entries drawn (and redrawn
    # on collision) from the spec seed so the class set is reproducible
    rng = random.Random(mix64(spec.seed, _SAMPLE_SALT))
    plans: list[_ClassPlan] = []
    seen: list[dict] = [dict(c["params"]) for c in spec.parameter_classes if not isinstance(c, str)]
    for i, entry in enumerate(spec.parameter_classes):
        if isinstance(entry, str):
            if entry != "sample":
                raise ValueError(f"parameter class {i}: expected a mapping or 'sample'")
            for _ in range(100):
                params = dict(sample_parameters(spec.game, rng).params)
                if params not in plans_params(plans) and params not in seen:
                    break
            else:
                raise ValueError("could not draw a distinct parameter set in 100 tries")
            label = f"sampled{i}"
        else:
            params, label = dict(entry["params"]), entry["label"]
        plans.append(_ClassPlan(label, params, spec.generator, None))
    labels = [p.label for p in plans]
    if len(labels) != len(set(labels)):
        raise ValueError(f"duplicate parameter class labels: {labels}")
    return plans


def plans_params(plans: Sequence[_ClassPlan]) -> list[dict]:
    return [p.params for p in plans]


def linear_fit(ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares (slope, intercept) of ys against 0..n-1.

    Solves the normal equations directly; the x-moments are exact
    integers, so integer score series get exact rational answers.
    """
    n = len(ys)
    if n == 0:
        raise ValueError("empty score sequence")
    if n == 1:
        return 0.0, float(ys[0])
    sx = n * (n - 1) // 2
    sxx = (n - 1) * n * (2 * n - 1) // 6
    sy = math.fsum(ys)
    sxy = math.fsum(x * y for x, y in enumerate(ys))
    denom = n * sxx - sx * sx
    w = (n * sxy - sx * sy) / denom
    return w, (sxx * sy - sx * sxy) / denom


def extract_baseline_features(trajectory: Trajectory, game_kind: str) -> dict[str, float]:
    """Hand-crafted per-trajectory features: duration, end scores, score trend.

    Connect4 carries no in-game score, so it gets duration and outcome
    only; score-bearing games add, per player, the final score and the
    least-squares slope/intercept of the once-per-round score recordings.
    """
    duration = float(trajectory.outcome["decisions"])
    if game_kind == "connect4":
        winner = trajectory.outcome["winner"]
        return {
            "duration": duration,
            "winner": 0.5 if winner is None else float(winner),
        }
    features = {"duration": duration}
    rounds = trajectory.round_scores
    for p in range(len(rounds[0])):
        series = [row[p] for row in rounds]
        w, b = linear_fit(series)
        features[f"finalScore{p}"] = float(series[-1])
        features[f"slope{p}"] = w
        features[f"intercept{p}"] = b
    return features


@dataclass
class Dataset:
    """Labeled trajectories plus every per-trajectory representation."""

    spec: TaskSpec
    labels: list[str]
    trajectories: list[Trajectory]
    bags: list[NormalizedBag]
    char_bags: list[NormalizedBag]
    baselines: list[dict[str, float]]
    train_idx: list[int]
    test_idx: list[int]

    def classes(self) -> list[str]:
        return sorted(set(self.labels))

    def split_items(self, kind: str = "bag"):
        """Aligned (train, test) item lists for one representation."""
        source = {
            "bag": self.bags,
            "char": self.char_bags,
            "baseline": self.baselines,
        }[kind]
        train = [(source[i], self.labels[i]) for i in self.train_idx]
        test = [(source[i], self.labels[i]) for i in self.test_idx]
        return train, test

    def manifest(self) -> dict:
        games = [
            {
                "label": label,
                "agents": list(t.agents),
                "game_spec": t.spec.to_json(),
                "outcome": t.outcome,
                "round_scores": t.round_scores,
            }
            for label, t in zip(self.labels, self.trajectories)
        ]
        return {
            "spec": self.spec.to_json(),
            "classes": self.classes(),
            "games": games,
            "train": self.train_idx,
            "test": self.test_idx,
        }


def _generate_class(spec: TaskSpec, ci: int, plan: _ClassPlan) -> list[Trajectory]:
    """All of one class's games (a pure function of spec+plan, so it can
    run in a worker process)."""
    players = spec.n_players()
    game = make_game(GameSpec(spec.game, plan.params, players, 0))
    agent = plan.agent_spec.build()
    seats = [agent] * players
    out: list[Trajectory] = []
    for gi in range(spec.games_per_class):
        seed = mix64(spec.seed, ci, gi)
        try:
            out.append(play_game(game, seats, seed=seed, initial_seed=plan.dice_seed))
        except Exception as exc:
            raise RuntimeError(
                f"generation failed: game={spec.game} class={plan.label} "
                f"index={gi} seed={seed}"
            ) from exc
    return out


def _derive_representations(spec: TaskSpec, trajectories: Sequence[Trajectory]):
    mode = spec.tokenization_mode()
    path_filter = spec.path_filter()
    bags = [
        build_bag(tokenize_trajectory(t.states, mode, path_filter)).normalized()
        for t in trajectories
    ]
    char_bags = [
        build_bag(
            tokenize_trajectory(t.states, TokenizationMode.CHAR, path_filter)
        ).normalized()
        for t in trajectories
    ]
    baselines = [extract_baseline_features(t, spec.game) for t in trajectories]
    return bags, char_bags, baselines


def _split_indices(spec: TaskSpec, labels: Sequence[str]) -> tuple[list[int], list[int]]:
    groups = _group([(i, label) for i, label in enumerate(labels)])
    n_per_class = {label: math.ceil(len(members) / 2) for label, members in groups.items()}
    train_items, test_items = _sample_split(
        groups, n_per_class, random.Random(mix64(spec.seed, _SPLIT_SALT))
    )
    return sorted(i for i, _ in train_items), sorted(i for i, _ in test_items)


def generate_dataset(spec: TaskSpec, jobs: int = 1) -> Dataset:
    """Play every game of the task and package all representations.

    Class c's game g is seeded by mix64(spec.seed, c, g), so any game is
    reproducible in isolation and the output is identical whether classes
    are generated sequentially or by ``jobs`` worker processes. The
    stratified split draws from its own salted stream.
    """
    plans = _resolve_classes(spec)
    if jobs > 1 and len(plans) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(plans))) as pool:
            per_class = list(
                pool.map(_generate_class, [spec] * len(plans), range(len(plans)), plans)
            )
    else:
        per_class = [_generate_class(spec, ci, plan) for ci, plan in enumerate(plans)]

    labels: list[str] = []
    trajectories: list[Trajectory] = []
    for plan, games in zip(plans, per_class):
        labels.extend([plan.label] * len(games))
        trajectories.extend(games)
        logger.info("generated %d %s games for class %s", len(games), spec.game, plan.label)

    bags, char_bags, baselines = _derive_representations(spec, trajectories)
    train_idx, test_idx = _split_indices(spec, labels)
    return Dataset(
        spec, labels, trajectories, bags, char_bags, baselines, train_idx, test_idx
    )


def _forest_eval(train, test, config: ForestConfig) -> EvalResult:
    """Fit a forest on one representation's train items; evaluate on test.

    The feature space is the sorted union of train-item keys; test tokens
    outside it are dropped (mirroring the vector P-NNS convention).
    """
    vocabulary = sorted({k for bag, _ in train for k in bag})
    if not vocabulary:
        raise ValueError("no features in training set")
    column = {k: j for j, k in enumerate(vocabulary)}

    def rows(items) -> np.ndarray:
        out = np.zeros((len(items), len(vocabulary)))
        for i, (bag, _) in enumerate(items):
            for k, v in bag.items():
                j = column.get(k)
                if j is not None:
                    out[i, j] = v
        return out

    forest = RandomForest(config).fit(rows(train), [label for _, label in train])
    predictions = forest.predict(rows(test))
    classes = forest.classes
    index = {label: i for i, label in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=int)
    correct = 0
    for (_, true_label), predicted in zip(test, predictions):
        if true_label not in index:
            raise ValueError(f"test label {true_label!r} unseen in training")
        counts[index[true_label], index[predicted]] += 1
        correct += true_label == predicted
    lo, hi = wilson_interval(correct, len(test))
    return EvalResult(correct / len(test), lo, hi, ConfusionMatrix(classes, counts))


def run_task(
    dataset: Dataset,
    methods: Sequence[str] = METHODS,
    n_trees: int = 100,
) -> dict[str, EvalResult]:
    """Run every requested method on the dataset's shared train/test split."""
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; expected a subset of {METHODS}")
    results: dict[str, EvalResult] = {}
    for method in methods:
        if method in ("jsd", "l2", "cosine"):
            train, test = dataset.split_items("bag")
            results[method] = evaluate(test, fit_pnns(train, method))
        elif method == "char":
            train, test = dataset.split_items("char")
            results[method] = evaluate(test, fit_pnns(train, "jsd"))
        elif method == "baseline":
            train, test = dataset.split_items("baseline")
            results[method] = evaluate(test, fit_pnns(train, "l2"))
        else:
            kind = {"rf": "bag", "rf-baseline": "baseline", "rf-char": "char"}[method]
            train, test = dataset.split_items(kind)
            config = ForestConfig(
                n_trees=n_trees,
                rng_seed=mix64(dataset.spec.seed, _RF_METHOD_SEEDS[method]),
            )
            results[method] = _forest_eval(train, test, config)
        logger.info(
            "%s/%s %s: accuracy %.3f",
            dataset.spec.game,
            dataset.spec.task,
            method,
            results[method].accuracy,
        )
    return results


def run_n_shot(
    dataset: Dataset,
    n_values: Sequence[int] = (1, 3, 5, 10),
    trials: int = 20,
    metric: str = "jsd",
) -> NShotResult:
    """N-shot protocol on the dataset's token bags (whole pool, no split)."""
    items = list(zip(dataset.bags, dataset.labels))
    return n_shot_eval(items, metric, n_values, trials, seed=dataset.spec.seed)


# ---------------------------------------------------------------------------
# policy distance and the correlation study


def random_state_pool(game, n_states: int, n_games: int, seed: int) -> list:
    """Nonterminal states sampled uniformly from random-play games."""
    rng = random.Random(mix64(seed, 0xD1CE))
    pool = []
    for g in range(n_games):
        state = game.initial_state(mix64(seed, 0xD1CE, g))
        steps = 0
        while not game.is_terminal(state) and steps < 3000:
            pool.append(state)
            actions = game.legal_actions(state)
            state = game.apply(state, actions[rng.randrange(len(actions))], rng)
            steps += 1
    if len(pool) < n_states:
        raise ValueError(f"only {len(pool)} states from {n_games} games, wanted {n_states}")
    return rng.sample(pool, n_states)


def sample_policies(game, agent, states, rng, n_samples: int = 100) -> list[NormalizedBag | None]:
    """One policy per state; terminal states yield None with a warning."""
    policies: list[NormalizedBag | None] = []
    for state in states:
        if game.is_terminal(state):
            logger.warning("skipping terminal state in policy sampling")
            policies.append(None)
            continue
        policies.append(extract_policy(game, agent, state, rng, n_samples))
    return policies


def policy_distance(policies_a: Sequence, policies_b: Sequence) -> float:
    """Mean JS distance between two aligned policy lists (Nones skipped)."""
    if len(policies_a) != len(policies_b):
        raise ValueError("policy lists must be aligned")
    distances = [
        js_distance(pa, pb)
        for pa, pb in zip(policies_a, policies_b)
        if pa is not None and pb is not None
    ]
    if not distances:
        raise ValueError("no usable states: every policy pair was skipped")
    return math.fsum(distances) / len(distances)


def agent_policy_distance(game, agent_a, agent_b, states, seed: int = 0, n_samples: int = 100) -> float:
    """Convenience wrapper: sample both agents' policies, then average JSD."""
    rng_a = random.Random(mix64(seed, 0xA))
    rng_b = random.Random(mix64(seed, 0xB))
    return policy_distance(
        sample_policies(game, agent_a, states, rng_a, n_samples),
        sample_policies(game, agent_b, states, rng_b, n_samples),
    )


@dataclass
class CorrelationResult:
    game: str
    pairs: list[tuple[str, str]]
    prototype_distances: list[float]
    policy_distances: list[float]
    pearson_r: float | None  # None when < 3 pairs

    def rows(self) -> list[tuple[str, str, float, float]]:
        return [
            (a, b, x, y)
            for (a, b), x, y in zip(self.pairs, self.prototype_distances, self.policy_distances)
        ]


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    sx, sy = x.std(), y.std()
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance: correlation undefined")
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def correlation_study(
    game,
    game_kind: str,
    roster: Sequence[AgentSpec],
    prototypes: Mapping[str, Mapping[str, float]],
    states: Sequence,
    seed: int = 0,
    n_samples: int = 100,
) -> CorrelationResult:
    """Prototype JSD vs policy distance over every unordered agent pair.

    Prototypes come from a fitted agents-task model; policies are sampled
    once per agent over the shared state set, so both coordinates of a
    pair use identical inputs. Self-pairs are excluded (their zeros would
    inflate the correlation).
    """
    names = [spec.name for spec in roster]
    missing = [n for n in names if n not in prototypes]
    if missing:
        raise ValueError(f"no prototype for roster agents {missing}")
    policies = {}
    for i, spec in enumerate(roster):
        rng = random.Random(mix64(seed, 0xAC, i))
        policies[spec.name] = sample_policies(game, spec.build(), states, rng, n_samples)
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1 :]]
    proto_d = [js_distance(prototypes[a], prototypes[b]) for a, b in pairs]
    policy_d = [policy_distance(policies[a], policies[b]) for a, b in pairs]
    r = pearson_r(proto_d, policy_d) if len(pairs) >= 3 else None
    if r is None:
        logger.warning("correlation undefined: only %d pairs", len(pairs))
    return CorrelationResult(game_kind, pairs, proto_d, policy_d, r)


# ---------------------------------------------------------------------------
# results layout: results/<game>/<task>/


def write_results(
    outdir: str | Path,
    dataset: Dataset,
    results: Mapping[str, EvalResult],
) -> Path:
    """Write per-method accuracy rows + confusion matrices under outdir."""
    base = Path(outdir) / dataset.spec.game / dataset.spec.task
    base.mkdir(parents=True, exist_ok=True)
    for method, result in results.items():
        path = base / f"{method}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("method,accuracy,ci_low,ci_high,n_test\n")
            fh.write(
                f"{method},{result.accuracy!r},{result.ci_low!r},"
                f"{result.ci_high!r},{result.confusion.total}\n"
            )
        result.confusion.to_csv(base / f"confusion_{method}.csv")
    return base


def write_manifest(outdir: str | Path, dataset: Dataset, force: bool = False) -> Path:
    base = Path(outdir) / dataset.spec.game / dataset.spec.task
    base.mkdir(parents=True, exist_ok=True)
    path = base / "manifest.json"
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass force=True to overwrite")
    path.write_text(
        json.dumps(dataset.manifest(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def save_dataset(outdir: str | Path, dataset: Dataset, force: bool = False) -> Path:
    """Manifest plus one JSONL file of serialized states per trajectory."""
    base = write_manifest(outdir, dataset, force).parent
    games_dir = base / "games"
    games_dir.mkdir(exist_ok=True)
    for i, trajectory in enumerate(dataset.trajectories):
        with open(games_dir / f"{i:05d}.jsonl", "w", encoding="utf-8") as fh:
            for state in trajectory.states:
                fh.write(json.dumps(state, sort_keys=True) + "\n")
    return base


def load_dataset(task_dir: str | Path) -> Dataset:
    """Rebuild a Dataset from save_dataset output.

    States come from the per-game JSONL files; bags, char bags and
    baseline features are re-derived (deterministically) from the spec.
    """
    base = Path(task_dir)
    manifest_path = base / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(
            f"no dataset at {base}: missing manifest.json (run generate first)"
        )
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    spec = TaskSpec.from_json(manifest["spec"])
    labels: list[str] = []
    trajectories: list[Trajectory] = []
    for i, entry in enumerate(manifest["games"]):
        path = base / "games" / f"{i:05d}.jsonl"
        states = [
            json.loads(line)
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        labels.append(entry["label"])
        trajectories.append(
            Trajectory(
                GameSpec.from_json(entry["game_spec"]),
                tuple(entry["agents"]),
                states,
                entry["outcome"],
                entry["round_scores"],
            )
        )
    bags, char_bags, baselines = _derive_representations(spec, trajectories)
    return Dataset(
        spec,
        labels,
        trajectories,
        bags,
        char_bags,
        baselines,
        list(manifest["train"]),
        list(manifest["test"]),
    )


def write_nshot(outdir: str | Path, dataset: Dataset, result: NShotResult) -> Path:
    base = Path(outdir) / dataset.spec.game / dataset.spec.task
    base.mkdir(parents=True, exist_ok=True)
    path = base / "nshot.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("n,mean_accuracy,trials\n")
        for n, mean in result.table():
            fh.write(f"{n},{mean!r},{result.trials}\n")
    return path


def write_correlation(outdir: str | Path, result: CorrelationResult) -> Path:
    base = Path(outdir) / result.game
    base.mkdir(parents=True, exist_ok=True)
    path = base / f"correlation_{result.game}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("agent_a,agent_b,prototype_jsd,policy_distance\n")
        for a, b, x, y in result.rows():
            fh.write(f"{a},{b},{x!r},{y!r}\n")
        fh.write(f"pearson_r,,{'' if result.pearson_r is None else repr(result.pearson_r)},\n")
    return path
