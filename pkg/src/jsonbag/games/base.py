"""Shared game interface, trajectory recording, and parameter sampling.

Engines are stateless rule objects; every mutable datum lives in the state
value, so games can run concurrently without sharing anything. ``apply``
returns a fresh state (states are cheap: ints, bytes, small tuples).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol, Sequence

MASK64 = (1 << 64) - 1


def mix64(*parts: int) -> int:
    """Deterministic 64-bit mix of integer parts (splitmix64 finalizer)."""
    acc = 0x9E3779B97F4A7C15
    for part in parts:
        acc = (acc ^ (part & MASK64)) * 0xBF58476D1CE4E5B9 & MASK64
        acc ^= acc >> 31
        z = (acc + 0x9E3779B97F4A7C15) & MASK64
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
        acc = z ^ (z >> 31)
    return acc


@dataclass(frozen=True)
class GameSpec:
    game: str
    params: dict
    players: int
    seed: int

    def to_json(self) -> dict:
        return {
            "game": self.game,
            "params": dict(self.params),
            "players": self.players,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GameSpec":
        return cls(data["game"], dict(data["params"]), int(data["players"]), int(data["seed"]))


class Game(Protocol):
    """Rules of one game; all methods are pure with respect to the state."""

    name: str
    players: int

    def initial_state(self, seed: int = 0): ...

    def legal_actions(self, state) -> list: ...

    def apply(self, state, action, rng: random.Random | None = None): ...

    def is_terminal(self, state) -> bool: ...

    def winner(self, state) -> int | None: ...

    def scores(self, state) -> list[float]: ...

    def current_player(self, state) -> int: ...

    def serialize_state(self, state) -> Any: ...

    def heuristic(self, state, player: int) -> float: ...


@dataclass
class Trajectory:
    spec: GameSpec
    agents: tuple[str, ...]
    states: list  # serialized JSON state per decision point (initial included)
    outcome: dict  # {"winner": int|None, "scores": [...], "decisions": int}
    round_scores: list[list[float]] = field(default_factory=list)  # per round, per player

    @property
    def duration(self) -> int:
        return self.outcome["decisions"]


class IllegalActionError(ValueError):
    pass


def play_game(
    game: Game,
    agents: Sequence,
    seed: int,
    max_decisions: int = 3000,
    initial_seed: int | None = None,
) -> Trajectory:
    """Run one full game, serializing the state at every decision point.

    All stochasticity — agent choices and in-game dice — derives from
    ``seed``; ``initial_seed`` overrides the seed handed to the game's
    initial state (Can't Stop's dice stream), letting several games share
    one dice sequence while the agents still vary. If ``max_decisions`` is
    hit (pathological Can't Stop turn cycles), the game is adjudicated to
    the current score leader.
    """
    if len(agents) != game.players:
        raise ValueError(f"{game.name} needs {game.players} agents, got {len(agents)}")
    agent_rngs = [random.Random(mix64(seed, 0xA6E47, i)) for i in range(len(agents))]
    state = game.initial_state(seed if initial_seed is None else initial_seed)
    states = [game.serialize_state(state)]
    round_scores: list[list[float]] = []
    decisions = 0
    moves_in_round = 0
    while not game.is_terminal(state):
        if decisions >= max_decisions:
            break
        player = game.current_player(state)
        action = agents[player].act(game, state, agent_rngs[player])
        legal = game.legal_actions(state)
        if action not in legal:
            raise IllegalActionError(
                f"{game.name}: agent {player} chose {action!r}, not one of {len(legal)} legal actions"
            )
        state = game.apply(state, action)
        states.append(game.serialize_state(state))
        decisions += 1
        moves_in_round += 1
        if moves_in_round >= game.players:
            moves_in_round = 0
            round_scores.append(game.scores(state))
    if game.is_terminal(state):
        winner = game.winner(state)
    else:  # adjudicate by score leader; ties are draws
        finals = game.scores(state)
        best = max(finals)
        leaders = [i for i, s in enumerate(finals) if s == best]
        winner = leaders[0] if len(leaders) == 1 else None
    outcome = {
        "winner": winner,
        "scores": [float(s) for s in game.scores(state)],
        "decisions": decisions,
    }
    spec = GameSpec(game.name, getattr(game, "params", {}), game.players, seed)
    names = tuple(getattr(a, "name", type(a).__name__) for a in agents)
    if not round_scores:
        round_scores.append(game.scores(state))
    return Trajectory(spec, names, states, outcome, round_scores)


def sample_parameters(game_name: str, rng: random.Random) -> GameSpec:
    """Random game parameters within the declared desk-scale ranges."""
    if game_name == "connect4":
        return GameSpec(
            "connect4",
            {"width": rng.randint(5, 10), "height": rng.randint(5, 10)},
            players=2,
            seed=0,
        )
    if game_name == "dotsandboxes":
        return GameSpec(
            "dotsandboxes",
            {"width": rng.randint(5, 10), "height": rng.randint(5, 10)},
            players=2,
            seed=0,
        )
    if game_name == "cantstop":
        # symmetric around sum 7: length(2+k) == length(12-k)
        half = [rng.randint(2, 13) for _ in range(5)]
        peak = rng.randint(2, 13)
        lengths = half + [peak] + half[::-1]
        return GameSpec("cantstop", {"track_lengths": lengths}, players=4, seed=0)
    raise ValueError(f"unknown game {game_name!r}")


def make_game(spec: GameSpec) -> Game:
    """Instantiate an engine from a spec."""
    from .cant_stop import CantStop
    from .connect4 import Connect4
    from .dots_and_boxes import DotsAndBoxes

    if spec.game == "connect4":
        return Connect4(**spec.params)
    if spec.game == "dotsandboxes":
        return DotsAndBoxes(**spec.params)
    if spec.game == "cantstop":
        return CantStop(players=spec.players, **spec.params)
    raise ValueError(f"unknown game {spec.game!r}")


# ---------------------------------------------------------------------------
# trajectory persistence: one serialized state per JSONL line + manifest


def save_trajectory(trajectory: Trajectory, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for state in trajectory.states:
            fh.write(json.dumps(state, separators=(",", ":")) + "\n")


def trajectory_manifest(trajectory: Trajectory) -> dict:
    return {
        "spec": trajectory.spec.to_json(),
        "agents": list(trajectory.agents),
        "outcome": trajectory.outcome,
        "n_states": len(trajectory.states),
        "round_scores": trajectory.round_scores,
    }


def load_trajectory(path: str | Path, manifest: dict) -> Trajectory:
    states = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                states.append(json.loads(line))
    return Trajectory(
        GameSpec.from_json(manifest["spec"]),
        tuple(manifest["agents"]),
        states,
        manifest["outcome"],
        [list(r) for r in manifest.get("round_scores", [])],
    )
