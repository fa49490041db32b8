"""jsonbag: game trajectories as bags of JSON tokens.

Tokenize serialized game states, model trajectories as token multisets,
compare them with Jensen-Shannon distance, and run the classification /
policy-correlation experiments on the bundled game engines.
"""

from .agents import (
    DEFAULT_ROSTER,
    AgentSpec,
    MctsAgent,
    MctsConfig,
    OslaAgent,
    RandomAgent,
    extract_policy,
)
from .bags import (
    JsonBag,
    NormalizedBag,
    Prototype,
    build_bag,
    export_matrix,
    minmax_scale,
    normalize,
    prototype,
    prototype_pooled,
)
from .classify import (
    ConfusionMatrix,
    EvalResult,
    LabeledDataset,
    NShotResult,
    PnnsModel,
    classify,
    evaluate,
    fit_pnns,
    n_shot_eval,
    stratified_split,
    wilson_interval,
)
from .experiments import (
    Dataset,
    TaskSpec,
    correlation_study,
    extract_baseline_features,
    generate_dataset,
    load_dataset,
    policy_distance,
    run_n_shot,
    run_task,
    save_dataset,
)
from .forest import ForestConfig, RandomForest, fit_forest
from .games import CantStop, Connect4, DotsAndBoxes, GameSpec, make_game, play_game
from .metrics import (
    cosine_similarity,
    euclidean_distance,
    js_distance,
    js_divergence,
    kl_divergence,
)
from .tokenizer import (
    PathFilter,
    TokenizationMode,
    parse_json,
    tokenize,
    tokenize_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AgentSpec",
    "CantStop",
    "ConfusionMatrix",
    "Connect4",
    "DEFAULT_ROSTER",
    "Dataset",
    "DotsAndBoxes",
    "EvalResult",
    "ForestConfig",
    "GameSpec",
    "JsonBag",
    "LabeledDataset",
    "MctsAgent",
    "MctsConfig",
    "NShotResult",
    "NormalizedBag",
    "OslaAgent",
    "PathFilter",
    "PnnsModel",
    "Prototype",
    "RandomAgent",
    "RandomForest",
    "TaskSpec",
    "TokenizationMode",
    "build_bag",
    "classify",
    "correlation_study",
    "cosine_similarity",
    "euclidean_distance",
    "evaluate",
    "export_matrix",
    "extract_baseline_features",
    "extract_policy",
    "fit_forest",
    "fit_pnns",
    "generate_dataset",
    "js_distance",
    "js_divergence",
    "kl_divergence",
    "load_dataset",
    "make_game",
    "minmax_scale",
    "n_shot_eval",
    "normalize",
    "parse_json",
    "play_game",
    "policy_distance",
    "prototype",
    "prototype_pooled",
    "run_n_shot",
    "run_task",
    "save_dataset",
    "stratified_split",
    "tokenize",
    "tokenize_trajectory",
    "wilson_interval",
]
