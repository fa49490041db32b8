"""Random, one-step-look-ahead, and open-loop MCTS agents.

Every agent draws all stochasticity from the rng handed to ``act``, so a
game is fully determined by its seed. MCTS is open-loop: tree nodes are
keyed by action, and each iteration re-simulates from the root state so
chance events (dice) are resampled on every descent.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping

from .bags import NormalizedBag


def act_random(game, state, rng: random.Random):
    """Uniform choice over legal actions."""
    actions = game.legal_actions(state)
    if not actions:
        raise ValueError("no legal actions: state is terminal")
    return actions[rng.randrange(len(actions))]


def act_osla(game, state, rng: random.Random):
    """Greedy over successor heuristic values, tie-broken by tiny noise.

    The noise is Uniform(0, 1e-3), far below unit score differences, so it
    can never override a decisive (win/loss) evaluation.
    """
    actions = game.legal_actions(state)
    if not actions:
        raise ValueError("no legal actions: state is terminal")
    player = game.current_player(state)
    best_action, best_value = None, -math.inf
    for action in actions:
        successor = game.apply(state, action, rng)
        value = game.heuristic(successor, player) + rng.random() * 1e-3
        if value > best_value:
            best_action, best_value = action, value
    return best_action


class RandomAgent:
    name = "random"

    def act(self, game, state, rng: random.Random):
        return act_random(game, state, rng)


class OslaAgent:
    name = "osla"

    def act(self, game, state, rng: random.Random):
        return act_osla(game, state, rng)


@dataclass(frozen=True)
class MctsConfig:
    iterations: int = 64
    exploration: float = math.sqrt(2.0)
    rollout_depth: int = 30
    open_loop: bool = True  # informational; the search is open-loop

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iteration budget must be >= 1")


class _Node:
    __slots__ = ("visits", "value_sums", "children")

    def __init__(self, n_players: int):
        self.visits = 0
        self.value_sums = [0.0] * n_players
        self.children: dict = {}


class MctsAgent:
    """Vanilla UCT with uniform-random rollouts to depth cap or terminal."""

    def __init__(self, config: MctsConfig = MctsConfig(), name: str | None = None):
        self.config = config
        self.name = name or f"mcts{config.iterations}"

    def search(self, game, state, rng: random.Random) -> dict:
        """Run one search; returns root-child visit counts keyed by action."""
        if game.is_terminal(state):
            raise ValueError("no legal actions: state is terminal")
        n_players = game.players
        c = self.config.exploration
        root = _Node(n_players)
        for _ in range(self.config.iterations):
            node = root
            sim = state
            path = [root]
            # selection / expansion
            while not game.is_terminal(sim):
                actions = game.legal_actions(sim)
                untried = [a for a in actions if a not in node.children]
                if untried:
                    action = untried[rng.randrange(len(untried))]
                    child = _Node(n_players)
                    node.children[action] = child
                    sim = game.apply(sim, action, rng)
                    path.append(child)
                    values = game.random_playout(sim, rng, self.config.rollout_depth)
                    break
                player = game.current_player(sim)
                log_n = math.log(node.visits)
                best_action, best_score = None, -math.inf
                for action in actions:
                    child = node.children[action]
                    score = child.value_sums[player] / child.visits + c * math.sqrt(
                        log_n / child.visits
                    )
                    if score > best_score:
                        best_action, best_score = action, score
                node = node.children[best_action]
                sim = game.apply(sim, best_action, rng)
                path.append(node)
            else:
                values = game.random_playout(sim, rng, 0)  # terminal values
            for visited in path:
                visited.visits += 1
                for p in range(n_players):
                    visited.value_sums[p] += values[p]
        return {action: child.visits for action, child in root.children.items()}

    def act(self, game, state, rng: random.Random):
        counts = self.search(game, state, rng)
        best_action, best_visits = None, -1
        for action in game.legal_actions(state):  # deterministic tie order
            visits = counts.get(action, -1)
            if visits > best_visits:
                best_action, best_visits = action, visits
        return best_action


def act_mcts(game, state, config: MctsConfig, rng: random.Random):
    return MctsAgent(config).act(game, state, rng)


def action_key(action) -> str:
    """Canonical string id for an action (policy distribution key)."""
    return str(action)


def extract_policy(game, agent, state, rng: random.Random, n_samples: int = 100) -> NormalizedBag:
    """Agent's action distribution at one state.

    Sampling agents (random/OSLA) are sampled ``n_samples`` times; MCTS
    runs one search and softmaxes (temperature 1) the root visit counts,
    with never-expanded legal actions counting as zero visits.
    """
    if game.is_terminal(state):
        raise ValueError("cannot extract a policy at a terminal state")
    if isinstance(agent, MctsAgent):
        counts = agent.search(game, state, rng)
        full = {action_key(a): counts.get(a, 0) for a in game.legal_actions(state)}
        peak = max(full.values())
        weights = {k: math.exp(v - peak) for k, v in full.items()}
        total = math.fsum(weights.values())
        return NormalizedBag({k: w / total for k, w in sorted(weights.items())})
    tally: dict[str, int] = {}
    for _ in range(n_samples):
        key = action_key(agent.act(game, state, rng))
        tally[key] = tally.get(key, 0) + 1
    return NormalizedBag({k: v / n_samples for k, v in sorted(tally.items())})


@dataclass(frozen=True)
class AgentSpec:
    """Declarative agent description used by experiment configs."""

    kind: str  # "random" | "osla" | "mcts"
    name: str
    iterations: int = 64
    exploration: float = math.sqrt(2.0)
    rollout_depth: int = 30

    def build(self):
        if self.kind == "random":
            return RandomAgent()
        if self.kind == "osla":
            return OslaAgent()
        if self.kind == "mcts":
            config = MctsConfig(self.iterations, self.exploration, self.rollout_depth)
            return MctsAgent(config, self.name)
        raise ValueError(f"unknown agent kind {self.kind!r}")

    @classmethod
    def from_json(cls, data: Mapping) -> "AgentSpec":
        return cls(
            kind=data["kind"],
            name=data.get("name", data["kind"]),
            iterations=int(data.get("iterations", 64)),
            exploration=float(data.get("exploration", math.sqrt(2.0))),
            rollout_depth=int(data.get("rollout_depth", 30)),
        )


DEFAULT_ROSTER: tuple[AgentSpec, ...] = (
    AgentSpec("random", "random"),
    AgentSpec("osla", "osla"),
    AgentSpec("mcts", "mcts64", iterations=64),
    AgentSpec("mcts", "mcts256", iterations=256),
    AgentSpec("mcts", "mcts64e03", iterations=64, exploration=0.3),
)
