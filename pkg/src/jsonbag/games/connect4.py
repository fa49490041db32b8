"""Connect4 on a parameterizable grid (default 8x8), win length 4.

Boards are bitboards with one padding bit per column so shift-based
four-in-a-row detection cannot wrap between columns. Bit index of cell
(col, row) is col * (height + 1) + row, row 0 at the bottom.
"""

from __future__ import annotations

import random
from typing import Optional


class C4State:
    __slots__ = ("p0", "p1", "heights", "current", "moves", "outcome")

    def __init__(self, p0, p1, heights, current, moves, outcome):
        self.p0 = p0
        self.p1 = p1
        self.heights = heights
        self.current = current
        self.moves = moves
        self.outcome = outcome  # -1 ongoing, 0/1 winner, 2 draw


class Connect4:
    name = "connect4"
    players = 2

    def __init__(self, width: int = 8, height: int = 8, win_length: int = 4):
        if width < win_length and height < win_length:
            raise ValueError("board cannot fit a winning line in any direction")
        self.width = width
        self.height = height
        self.win_length = win_length
        if win_length != 4:
            raise ValueError("shift-based win detection is specialized to length 4")
        self.params = {"width": width, "height": height}
        self._column_stride = height + 1
        self._full_moves = width * height
        # masks of every 4-cell window, for the one-step-look-ahead heuristic
        self._windows = self._build_windows()

    def _build_windows(self) -> list[int]:
        w, h, stride = self.width, self.height, self._column_stride
        bit = lambda c, r: 1 << (c * stride + r)
        windows = []
        for c in range(w):
            for r in range(h):
                if c + 3 < w:
                    windows.append(bit(c, r) | bit(c + 1, r) | bit(c + 2, r) | bit(c + 3, r))
                if r + 3 < h:
                    windows.append(bit(c, r) | bit(c, r + 1) | bit(c, r + 2) | bit(c, r + 3))
                if c + 3 < w and r + 3 < h:
                    windows.append(
                        bit(c, r) | bit(c + 1, r + 1) | bit(c + 2, r + 2) | bit(c + 3, r + 3)
                    )
                if c + 3 < w and r >= 3:
                    windows.append(
                        bit(c, r) | bit(c + 1, r - 1) | bit(c + 2, r - 2) | bit(c + 3, r - 3)
                    )
        return windows

    def initial_state(self, seed: int = 0) -> C4State:
        return C4State(0, 0, [0] * self.width, 0, 0, -1)

    def current_player(self, state: C4State) -> int:
        return state.current

    def legal_actions(self, state: C4State) -> list[int]:
        if state.outcome != -1:
            return []
        h = self.height
        return [c for c, hc in enumerate(state.heights) if hc < h]

    def _wins(self, board: int) -> bool:
        s = self._column_stride
        for shift in (1, s, s - 1, s + 1):
            paired = board & (board >> shift)
            if paired & (paired >> (2 * shift)):
                return True
        return False

    def apply(self, state: C4State, action: int, rng: random.Random | None = None) -> C4State:
        if not 0 <= action < self.width or state.heights[action] >= self.height:
            raise ValueError(f"column {action} is full or out of range")
        bit = 1 << (action * self._column_stride + state.heights[action])
        heights = state.heights.copy()
        heights[action] += 1
        moves = state.moves + 1
        if state.current == 0:
            p0, p1 = state.p0 | bit, state.p1
            won = self._wins(p0)
        else:
            p0, p1 = state.p0, state.p1 | bit
            won = self._wins(p1)
        if won:
            outcome = state.current
        elif moves == self._full_moves:
            outcome = 2
        else:
            outcome = -1
        return C4State(p0, p1, heights, 1 - state.current, moves, outcome)

    def is_terminal(self, state: C4State) -> bool:
        return state.outcome != -1

    def winner(self, state: C4State) -> Optional[int]:
        return state.outcome if state.outcome in (0, 1) else None

    def scores(self, state: C4State) -> list[float]:
        if state.outcome in (0, 1):
            return [1.0 if p == state.outcome else 0.0 for p in (0, 1)]
        return [0.0, 0.0]

    def serialize_state(self, state: C4State):
        stride = self._column_stride
        grid = []
        for r in range(self.height):
            row = []
            for c in range(self.width):
                bit = 1 << (c * stride + r)
                if state.p0 & bit:
                    row.append("P0")
                elif state.p1 & bit:
                    row.append("P1")
                else:
                    row.append("empty")
            grid.append(row)
        return {
            "game": "connect4",
            "width": self.width,
            "height": self.height,
            "winLength": self.win_length,
            "turnCount": state.moves,
            "currentPlayer": state.current,
            "grid": grid,
        }

    def heuristic(self, state: C4State, player: int) -> float:
        """Window potential: ±count² over windows owned by one side only."""
        if state.outcome == player:
            return 1e6
        if state.outcome == 1 - player:
            return -1e6
        if state.outcome == 2:
            return 0.0
        mine = state.p0 if player == 0 else state.p1
        theirs = state.p1 if player == 0 else state.p0
        score = 0
        for mask in self._windows:
            m = (mine & mask).bit_count()
            t = (theirs & mask).bit_count()
            if t == 0:
                score += m * m
            elif m == 0:
                score -= t * t
        return float(score)

    def random_playout(
        self, state: C4State, rng: random.Random, depth_cap: int = 1_000_000
    ) -> list[float]:
        """Uniform-random play to terminal (or cap); returns win shares."""
        if state.outcome != -1:
            return self._terminal_values(state.outcome)
        p0, p1 = state.p0, state.p1
        heights = state.heights.copy()
        current = state.current
        moves = state.moves
        stride = self._column_stride
        height = self.height
        legal = [c for c, hc in enumerate(heights) if hc < height]
        wins = self._wins
        for _ in range(depth_cap):
            c = legal[rng.randrange(len(legal))]
            bit = 1 << (c * stride + heights[c])
            heights[c] += 1
            if heights[c] == height:
                legal.remove(c)
            if current == 0:
                p0 |= bit
                if wins(p0):
                    return [1.0, 0.0]
            else:
                p1 |= bit
                if wins(p1):
                    return [0.0, 1.0]
            moves += 1
            if moves == self._full_moves:
                return [0.5, 0.5]
            current = 1 - current
        # cap hit: hand the point to whoever owns more window potential,
        # so truncated rollouts still carry positional signal
        score = 0
        for mask in self._windows:
            m = (p0 & mask).bit_count()
            t = (p1 & mask).bit_count()
            if t == 0:
                score += m * m
            elif m == 0:
                score -= t * t
        if score > 0:
            return [1.0, 0.0]
        if score < 0:
            return [0.0, 1.0]
        return [0.5, 0.5]

    def _terminal_values(self, outcome: int) -> list[float]:
        if outcome == 2:
            return [0.5, 0.5]
        return [1.0, 0.0] if outcome == 0 else [0.0, 1.0]
