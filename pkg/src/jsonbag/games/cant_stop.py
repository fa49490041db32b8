"""Can't Stop: eleven number tracks (sums 2-12), up to three runners.

Each turn the player rolls four dice, splits them into two sums, and
advances runners; they may keep rolling or stop to bank progress. A roll
whose pairings cannot advance anything is a bust and forfeits the turn's
runner progress. Claiming three tracks wins.

Real-game dice derive from (game seed, roll counter), so trajectories are
fully determined by the seed; simulations pass their own rng to ``apply``
and resample future dice each time, which is what open-loop search needs.
"""

from __future__ import annotations

import random
from typing import Optional

from .base import mix64

DEFAULT_TRACK_LENGTHS = (3, 5, 7, 9, 11, 13, 11, 9, 7, 5, 3)

ROLL = "roll"
STOP = "stop"

CHOOSE = 0  # dice on the table, pick an advance option
DECIDE = 1  # roll again or stop


class CSState:
    __slots__ = (
        "positions",
        "runners",
        "claimed",
        "current",
        "phase",
        "dice",
        "moves",
        "dice_seed",
        "roll_count",
        "outcome",
    )

    def __init__(
        self, positions, runners, claimed, current, phase, dice, moves, dice_seed, roll_count, outcome
    ):
        self.positions = positions  # tuple per player of 11-tuples (banked)
        self.runners = runners  # 11-tuple, 0 = inactive, else absolute pos
        self.claimed = claimed  # 11-tuple, -1 unclaimed else player
        self.current = current
        self.phase = phase
        self.dice = dice  # 4-tuple in CHOOSE phase, () in DECIDE
        self.moves = moves
        self.dice_seed = dice_seed
        self.roll_count = roll_count
        self.outcome = outcome  # -1 ongoing, else winning player


class CantStop:
    name = "cantstop"

    def __init__(self, track_lengths=None, players: int = 4, claims_to_win: int = 3):
        if not 2 <= players <= 4:
            raise ValueError("Can't Stop plays 2-4 players")
        lengths = tuple(track_lengths) if track_lengths is not None else DEFAULT_TRACK_LENGTHS
        if len(lengths) != 11 or any(l < 1 for l in lengths):
            raise ValueError("need 11 positive track lengths for sums 2..12")
        self.players = players
        self.track_lengths = lengths
        self.claims_to_win = claims_to_win
        self.params = {"track_lengths": list(lengths)}

    # -- dice ---------------------------------------------------------------

    def _draw_dice(self, state: CSState, rng: random.Random | None) -> tuple:
        if rng is not None:
            return (rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6))
        x = mix64(state.dice_seed, state.roll_count)
        return (1 + x % 6, 1 + x // 6 % 6, 1 + x // 36 % 6, 1 + x // 216 % 6)

    # -- advance options ----------------------------------------------------

    def _progress(self, state: CSState, track: int) -> int:
        r = state.runners[track]
        return r if r > 0 else state.positions[state.current][track]

    def _can_advance(self, state: CSState, track: int, free_slots: int) -> bool:
        if state.claimed[track] != -1:
            return False
        if self._progress(state, track) >= self.track_lengths[track]:
            return False
        return state.runners[track] > 0 or free_slots > 0

    def _options(self, state: CSState) -> list[tuple]:
        """Advance options for the dice on the table.

        Pairings that can advance both sums must advance both; otherwise
        each individually advanceable sum is offered alone.
        """
        d = state.dice
        free = 3 - sum(1 for r in state.runners if r > 0)
        options = set()
        for a, b in ((d[0] + d[1], d[2] + d[3]), (d[0] + d[2], d[1] + d[3]), (d[0] + d[3], d[1] + d[2])):
            ta, tb = a - 2, b - 2
            if a == b:
                if not self._can_advance(state, ta, free):
                    continue
                room = self.track_lengths[ta] - self._progress(state, ta)
                options.add((a, a) if room >= 2 else (a,))
                continue
            can_a = self._can_advance(state, ta, free)
            can_b = self._can_advance(state, tb, free)
            new_needed = (state.runners[ta] == 0) + (state.runners[tb] == 0)
            if can_a and can_b and new_needed <= free:
                options.add((min(a, b), max(a, b)))
            else:
                if can_a:
                    options.add((a,))
                if can_b:
                    options.add((b,))
        return sorted(options)

    # -- engine interface ---------------------------------------------------

    def initial_state(self, seed: int = 0) -> CSState:
        state = CSState(
            positions=tuple((0,) * 11 for _ in range(self.players)),
            runners=(0,) * 11,
            claimed=(-1,) * 11,
            current=0,
            phase=CHOOSE,
            dice=(),
            moves=0,
            dice_seed=seed,
            roll_count=0,
            outcome=-1,
        )
        return self._roll_into_turn(state, None)

    def _roll_into_turn(self, state: CSState, rng: random.Random | None) -> CSState:
        """Roll for the current player; on a bust, pass the turn and re-roll.

        A fresh turn (no runners) that busts simply passes; the cascade
        always terminates in practice because at least three tracks remain
        unclaimed while the game is live.
        """
        for _ in range(1000):
            dice = self._draw_dice(state, rng)
            state = CSState(
                state.positions,
                state.runners,
                state.claimed,
                state.current,
                CHOOSE,
                dice,
                state.moves,
                state.dice_seed,
                state.roll_count + 1,
                state.outcome,
            )
            if self._options(state):
                return state
            # bust: runner progress evaporates, next player rolls
            state = CSState(
                state.positions,
                (0,) * 11,
                state.claimed,
                (state.current + 1) % self.players,
                DECIDE,
                (),
                state.moves,
                state.dice_seed,
                state.roll_count,
                state.outcome,
            )
        raise RuntimeError("dice produced 1000 consecutive busts; game is stuck")

    def current_player(self, state: CSState) -> int:
        return state.current

    def legal_actions(self, state: CSState) -> list:
        if state.outcome != -1:
            return []
        if state.phase == CHOOSE:
            return self._options(state)
        return [ROLL, STOP]

    def apply(self, state: CSState, action, rng: random.Random | None = None) -> CSState:
        if state.outcome != -1:
            raise ValueError("game is over")
        if state.phase == CHOOSE:
            options = self._options(state)
            if action not in options:
                raise ValueError(f"advance {action!r} not among legal pairings {options}")
            runners = list(state.runners)
            for s in action:
                t = s - 2
                base = runners[t] if runners[t] > 0 else state.positions[state.current][t]
                runners[t] = base + 1
            return CSState(
                state.positions,
                tuple(runners),
                state.claimed,
                state.current,
                DECIDE,
                (),
                state.moves + 1,
                state.dice_seed,
                state.roll_count,
                -1,
            )
        if action == ROLL:
            bumped = CSState(
                state.positions,
                state.runners,
                state.claimed,
                state.current,
                DECIDE,
                (),
                state.moves + 1,
                state.dice_seed,
                state.roll_count,
                -1,
            )
            return self._roll_into_turn(bumped, rng)
        if action == STOP:
            return self._apply_stop(state, rng)
        raise ValueError(f"unknown action {action!r}; expected {ROLL!r} or {STOP!r}")

    def _apply_stop(self, state: CSState, rng: random.Random | None) -> CSState:
        player = state.current
        positions = [list(p) for p in state.positions]
        claimed = list(state.claimed)
        for t, pos in enumerate(state.runners):
            if pos > 0:
                positions[player][t] = pos
                if pos >= self.track_lengths[t] and claimed[t] == -1:
                    claimed[t] = player
        new_positions = tuple(tuple(p) for p in positions)
        claims = sum(1 for owner in claimed if owner == player)
        outcome = player if claims >= self.claims_to_win else -1
        state = CSState(
            new_positions,
            (0,) * 11,
            tuple(claimed),
            (player + 1) % self.players,
            DECIDE,
            (),
            state.moves + 1,
            state.dice_seed,
            state.roll_count,
            outcome,
        )
        if outcome != -1:
            return state
        return self._roll_into_turn(state, rng)

    def is_terminal(self, state: CSState) -> bool:
        return state.outcome != -1

    def winner(self, state: CSState) -> Optional[int]:
        return state.outcome if state.outcome != -1 else None

    def scores(self, state: CSState) -> list[float]:
        return [
            float(sum(1 for owner in state.claimed if owner == p))
            for p in range(self.players)
        ]

    def serialize_state(self, state: CSState):
        owner_names = {-1: "none", 0: "P0", 1: "P1", 2: "P2", 3: "P3"}
        return {
            "game": "cantstop",
            "players": self.players,
            "trackLengths": list(self.track_lengths),
            "turnCount": state.moves,
            "currentPlayer": state.current,
            "phase": "choose" if state.phase == CHOOSE else "decide",
            "dice": list(state.dice),
            "runnerPositions": list(state.runners),
            "positions": [list(p) for p in state.positions],
            "claimed": [owner_names[owner] for owner in state.claimed],
            "scores": [int(s) for s in self.scores(state)],
        }

    def heuristic(self, state: CSState, player: int) -> float:
        """Claims dominate; fractional track progress breaks ties."""
        if state.outcome != -1:
            return 1e6 if state.outcome == player else -1e6

        def value(p: int) -> float:
            claims = 0.0
            progress = 0.0
            for t in range(11):
                if state.claimed[t] == p:
                    claims += 1.0
                    continue
                pos = state.positions[p][t]
                if p == state.current and state.runners[t] > 0:
                    pos = state.runners[t]
                progress += pos / self.track_lengths[t]
            return 10.0 * claims + progress

        mine = value(player)
        best_other = max(value(p) for p in range(self.players) if p != player)
        return mine - best_other

    def random_playout(
        self, state: CSState, rng: random.Random, depth_cap: int = 1_000_000
    ) -> list[float]:
        for _ in range(depth_cap):
            if state.outcome != -1:
                break
            actions = self.legal_actions(state)
            state = self.apply(state, actions[rng.randrange(len(actions))], rng)
        if state.outcome != -1:
            return [1.0 if p == state.outcome else 0.0 for p in range(self.players)]
        # cap hit: leaders by (claims, progress) share the win evenly
        def key(p: int) -> float:
            claims = sum(1 for owner in state.claimed if owner == p)
            progress = sum(
                state.positions[p][t] / self.track_lengths[t] for t in range(11)
            )
            return 100.0 * claims + progress

        values = [key(p) for p in range(self.players)]
        best = max(values)
        leaders = [p for p, v in enumerate(values) if v == best]
        return [1.0 / len(leaders) if p in leaders else 0.0 for p in range(self.players)]
