import math
import random

import pytest
from scipy.stats import chi2

from jsonbag.agents import (
    DEFAULT_ROSTER,
    AgentSpec,
    MctsAgent,
    MctsConfig,
    OslaAgent,
    RandomAgent,
    act_mcts,
    act_osla,
    act_random,
    extract_policy,
)
from jsonbag.games import CantStop, Connect4, DotsAndBoxes, play_game
from jsonbag.metrics import js_divergence


def c4_p0_wins_with_col0():
    """Connect4 position where dropping in column 0 wins for the mover."""
    game = Connect4()
    state = game.initial_state()
    for action in (0, 1, 0, 1, 0, 1):
        state = game.apply(state, action)
    return game, state


class TestRandomAgent:
    def test_uniform_by_chi_squared(self):
        game = Connect4()
        state = game.initial_state()
        rng = random.Random(0)
        counts = [0] * 8
        n = 10_000
        for _ in range(n):
            counts[act_random(game, state, rng)] += 1
        expected = n / 8
        statistic = sum((c - expected) ** 2 / expected for c in counts)
        assert statistic < chi2.ppf(0.99, df=7)

    def test_single_action_returned(self):
        game = DotsAndBoxes(1, 1)
        state = game.initial_state()
        for edge in (0, 1, 2):
            state = game.apply(state, edge)
        assert game.legal_actions(state) == [3]
        assert act_random(game, state, random.Random(1)) == 3

    def test_terminal_state_rejected(self):
        game = Connect4()
        state = game.initial_state()
        for action in (0, 1, 0, 1, 0, 1, 0):
            state = game.apply(state, action)
        with pytest.raises(ValueError):
            act_random(game, state, random.Random(0))

    def test_seeded_determinism(self):
        game = Connect4()
        state = game.initial_state()
        picks_a = [act_random(game, state, random.Random(7)) for _ in range(5)]
        picks_b = [act_random(game, state, random.Random(7)) for _ in range(5)]
        assert picks_a == picks_b


class TestOslaAgent:
    def test_takes_immediate_win(self):
        game, state = c4_p0_wins_with_col0()
        for seed in range(50):
            assert act_osla(game, state, random.Random(seed)) == 0

    def test_uniform_over_identical_successors(self):
        # every first edge of a 1x1 board leaves the score diff at zero,
        # so only the tie-break noise decides
        game = DotsAndBoxes(1, 1)
        state = game.initial_state()
        rng = random.Random(3)
        counts = {edge: 0 for edge in range(4)}
        n = 10_000
        for _ in range(n):
            counts[act_osla(game, state, rng)] += 1
        for edge in range(4):
            assert abs(counts[edge] / n - 0.25) < 0.05

    def test_seeded_determinism(self):
        game = DotsAndBoxes(2, 2)
        state = game.initial_state()
        assert act_osla(game, state, random.Random(11)) == act_osla(
            game, state, random.Random(11)
        )


class TestMctsAgent:
    def test_finds_immediate_win(self):
        game, state = c4_p0_wins_with_col0()
        agent = MctsAgent(MctsConfig(iterations=256))
        hits = sum(agent.act(game, state, random.Random(seed)) == 0 for seed in range(100))
        assert hits >= 95

    def test_budget_one_returns_legal_action(self):
        game = Connect4()
        state = game.initial_state()
        action = act_mcts(game, state, MctsConfig(iterations=1), random.Random(0))
        assert action in game.legal_actions(state)
        cs = CantStop(players=2)
        cs_state = cs.initial_state(seed=0)
        action = act_mcts(cs, cs_state, MctsConfig(iterations=1), random.Random(0))
        assert action in cs.legal_actions(cs_state)

    def test_budget_must_be_positive(self):
        with pytest.raises(ValueError):
            MctsConfig(iterations=0)

    def test_seeded_determinism_of_search(self):
        game = Connect4()
        state = game.apply(game.initial_state(), 3)
        agent = MctsAgent(MctsConfig(iterations=64))
        counts_a = agent.search(game, state, random.Random(5))
        counts_b = agent.search(game, state, random.Random(5))
        assert counts_a == counts_b
        assert agent.act(game, state, random.Random(5)) == agent.act(
            game, state, random.Random(5)
        )

    def test_visit_budget_spent_at_root(self):
        game = Connect4()
        state = game.initial_state()
        counts = MctsAgent(MctsConfig(iterations=64)).search(game, state, random.Random(1))
        assert sum(counts.values()) == 64
        assert set(counts) <= set(game.legal_actions(state))

    def test_bigger_budget_holds_its_own_against_budget_one(self):
        game = Connect4()
        strong, weak = MctsAgent(MctsConfig(iterations=64)), MctsAgent(MctsConfig(iterations=1))
        score = 0.0
        for seed in range(100):
            if seed % 2 == 0:
                agents, strong_seat = [strong, weak], 0
            else:
                agents, strong_seat = [weak, strong], 1
            winner = play_game(game, agents, seed=seed).outcome["winner"]
            if winner == strong_seat:
                score += 1.0
            elif winner is None:
                score += 0.5
        assert score >= 50.0


class TestExtractPolicy:
    def test_random_policy_near_uniform(self):
        game = Connect4()
        state = game.initial_state()
        policy = extract_policy(game, RandomAgent(), state, random.Random(0))
        assert abs(math.fsum(policy.values()) - 1.0) < 1e-9
        for action in range(8):
            assert abs(policy.get(str(action), 0.0) - 0.125) <= 0.15

    def test_support_subset_of_legal_actions(self):
        game = CantStop(players=2)
        state = game.initial_state(seed=4)
        legal = {str(a) for a in game.legal_actions(state)}
        for agent in (RandomAgent(), OslaAgent(), MctsAgent(MctsConfig(iterations=16))):
            policy = extract_policy(game, agent, state, random.Random(2))
            assert set(policy) <= legal
            assert abs(math.fsum(policy.values()) - 1.0) < 1e-9

    def test_softmax_over_visit_counts(self):
        class RiggedMcts(MctsAgent):
            def search(self, game, state, rng):
                return {0: 90, 1: 10}

        class TwoActionGame:
            players = 2

            def is_terminal(self, state):
                return False

            def legal_actions(self, state):
                return [0, 1]

        policy = extract_policy(TwoActionGame(), RiggedMcts(), None, random.Random(0))
        assert policy["0"] + policy["1"] == 1.0
        assert policy["1"] == 1.8048513878454153e-35  # e^-80 / (1 + e^-80)

    def test_same_policy_has_zero_distance_to_itself(self):
        game = Connect4()
        state = game.initial_state()
        policy = extract_policy(game, OslaAgent(), state, random.Random(9))
        assert js_divergence(policy, policy) == 0.0

    def test_terminal_state_rejected(self):
        game = Connect4()
        state = game.initial_state()
        for action in (0, 1, 0, 1, 0, 1, 0):
            state = game.apply(state, action)
        with pytest.raises(ValueError):
            extract_policy(game, RandomAgent(), state, random.Random(0))

    def test_mcts_policy_mass_on_winning_move(self):
        game, state = c4_p0_wins_with_col0()
        policy = extract_policy(
            game, MctsAgent(MctsConfig(iterations=256)), state, random.Random(0)
        )
        assert policy["0"] == max(policy.values())


AGENTS_UNDER_TEST = [
    RandomAgent(),
    OslaAgent(),
    MctsAgent(MctsConfig(iterations=8)),
]


@pytest.mark.parametrize(
    "game", [Connect4(6, 5), DotsAndBoxes(2, 2), CantStop(players=2)], ids=["c4", "dnb", "cs"]
)
def test_agents_always_act_legally(game):
    rng = random.Random(13)
    for seed in range(3):
        if isinstance(game, CantStop):
            state = game.initial_state(seed)
        else:
            state = game.initial_state()
        step = 0
        while not game.is_terminal(state) and step < 200:
            legal = game.legal_actions(state)
            if step % 3 == 0:  # probe every agent at a sample of states
                for agent in AGENTS_UNDER_TEST:
                    assert agent.act(game, state, rng) in legal
            state = game.apply(state, legal[rng.randrange(len(legal))], rng)
            step += 1


class TestAgentSpec:
    def test_roster_names_unique_and_buildable(self):
        names = [spec.name for spec in DEFAULT_ROSTER]
        assert len(names) == len(set(names)) == 5
        for spec in DEFAULT_ROSTER:
            agent = spec.build()
            assert agent.name == spec.name or spec.kind in ("random", "osla")

    def test_json_round_trip(self):
        spec = AgentSpec("mcts", "mcts256", iterations=256, exploration=0.3)
        doc = {
            "kind": "mcts",
            "name": "mcts256",
            "iterations": 256,
            "exploration": 0.3,
        }
        assert AgentSpec.from_json(doc) == spec

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            AgentSpec("alphazero", "nope").build()
