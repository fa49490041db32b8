#!/usr/bin/env python3
"""Time self-play for each (game, agent) pair at the experiment defaults.

Used to size games-per-class budgets before committing to a task config.
"""
from __future__ import annotations

import argparse
import time

from jsonbag.agents import DEFAULT_ROSTER
from jsonbag.experiments import GAME_DEFAULTS
from jsonbag.games import GameSpec, make_game, play_game


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--games", type=int, default=5, help="games per timing cell")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    for game_kind, defaults in GAME_DEFAULTS.items():
        game = make_game(
            GameSpec(game_kind, defaults["params"], defaults["players"], 0)
        )
        for agent_spec in DEFAULT_ROSTER:
            agents = [agent_spec.build() for _ in range(defaults["players"])]
            t0 = time.perf_counter()
            decisions = 0
            for g in range(args.games):
                trajectory = play_game(game, agents, seed=args.seed + g)
                decisions += trajectory.outcome["decisions"]
            dt = (time.perf_counter() - t0) / args.games
            print(
                f"{game_kind:13s} {agent_spec.name:10s} "
                f"{dt * 1000:9.1f} ms/game  {decisions / args.games:6.1f} decisions"
            )


if __name__ == "__main__":
    main()
