"""Dots and Boxes on a w x h box grid (edges = 2wh + w + h).

Placed edges live in one bitmask. Horizontal edges come first (row-major,
h+1 rows of w), then vertical edges (h rows of w+1). Completing a box
scores a point and grants another turn; the game ends when every edge is
placed, highest box count wins.
"""

from __future__ import annotations

import random
from typing import Optional


class DnBState:
    __slots__ = ("placed", "n_placed", "owners", "scores", "current", "moves")

    def __init__(self, placed, n_placed, owners, scores, current, moves):
        self.placed = placed  # edge bitmask
        self.n_placed = n_placed
        self.owners = owners  # bytes, one per box: 0 none, 1 P0, 2 P1
        self.scores = scores  # (p0_boxes, p1_boxes)
        self.current = current
        self.moves = moves


class DotsAndBoxes:
    name = "dotsandboxes"
    players = 2

    def __init__(self, width: int = 8, height: int = 8):
        if width < 1 or height < 1:
            raise ValueError("need at least one box")
        self.width = width
        self.height = height
        self.params = {"width": width, "height": height}
        self.n_horizontal = width * (height + 1)
        self.n_vertical = height * (width + 1)
        self.n_edges = self.n_horizontal + self.n_vertical
        self.n_boxes = width * height
        # per-box mask of its 4 edges; per-edge list of adjacent box ids
        self._box_masks = []
        self._edge_boxes: list[list[int]] = [[] for _ in range(self.n_edges)]
        for y in range(height):
            for x in range(width):
                box = y * width + x
                edges = (
                    y * width + x,  # top
                    (y + 1) * width + x,  # bottom
                    self.n_horizontal + y * (width + 1) + x,  # left
                    self.n_horizontal + y * (width + 1) + x + 1,  # right
                )
                mask = 0
                for e in edges:
                    mask |= 1 << e
                    self._edge_boxes[e].append(box)
                self._box_masks.append(mask)

    def initial_state(self, seed: int = 0) -> DnBState:
        return DnBState(0, 0, bytes(self.n_boxes), (0, 0), 0, 0)

    def current_player(self, state: DnBState) -> int:
        return state.current

    def legal_actions(self, state: DnBState) -> list[int]:
        placed = state.placed
        return [e for e in range(self.n_edges) if not placed >> e & 1]

    def apply(self, state: DnBState, action: int, rng: random.Random | None = None) -> DnBState:
        if not 0 <= action < self.n_edges:
            raise ValueError(f"edge {action} out of range")
        if state.placed >> action & 1:
            raise ValueError(f"edge {action} already placed")
        placed = state.placed | 1 << action
        owners = bytearray(state.owners)
        completed = 0
        for box in self._edge_boxes[action]:
            mask = self._box_masks[box]
            if placed & mask == mask:
                owners[box] = state.current + 1
                completed += 1
        if completed:
            scores = list(state.scores)
            scores[state.current] += completed
            scores = tuple(scores)
            current = state.current  # completing a box grants another turn
        else:
            scores = state.scores
            current = 1 - state.current
        return DnBState(placed, state.n_placed + 1, bytes(owners), scores, current, state.moves + 1)

    def is_terminal(self, state: DnBState) -> bool:
        return state.n_placed == self.n_edges

    def winner(self, state: DnBState) -> Optional[int]:
        if state.scores[0] > state.scores[1]:
            return 0
        if state.scores[1] > state.scores[0]:
            return 1
        return None

    def scores(self, state: DnBState) -> list[float]:
        return [float(state.scores[0]), float(state.scores[1])]

    def serialize_state(self, state: DnBState):
        w, h = self.width, self.height
        placed = state.placed
        horizontal = [
            [bool(placed >> (y * w + x) & 1) for x in range(w)] for y in range(h + 1)
        ]
        vertical = [
            [bool(placed >> (self.n_horizontal + y * (w + 1) + x) & 1) for x in range(w + 1)]
            for y in range(h)
        ]
        owner_names = ("none", "P0", "P1")
        boxes = [
            [owner_names[state.owners[y * w + x]] for x in range(w)] for y in range(h)
        ]
        return {
            "game": "dotsandboxes",
            "width": w,
            "height": h,
            "turnCount": state.moves,
            "currentPlayer": state.current,
            "scores": [state.scores[0], state.scores[1]],
            "horizontalEdges": horizontal,
            "verticalEdges": vertical,
            "boxes": boxes,
        }

    def heuristic(self, state: DnBState, player: int) -> float:
        """Box-score differential; decisive once the game is over."""
        diff = state.scores[player] - state.scores[1 - player]
        if self.is_terminal(state):
            return 1e6 * (diff > 0) - 1e6 * (diff < 0)
        return float(diff)

    def random_playout(
        self, state: DnBState, rng: random.Random, depth_cap: int = 1_000_000
    ) -> list[float]:
        """Uniform-random edge placement to terminal or cap.

        At the cap the (possibly partial) box scores decide: leaders share
        a win evenly, a tie splits evenly — same convention as terminal.
        """
        placed = state.placed
        open_edges = [e for e in range(self.n_edges) if not placed >> e & 1]
        owners_done = None  # owners only matter for scores, tracked as ints
        s0, s1 = state.scores
        current = state.current
        edge_boxes = self._edge_boxes
        box_masks = self._box_masks
        steps = min(depth_cap, len(open_edges))
        for _ in range(steps):
            i = rng.randrange(len(open_edges))
            e = open_edges[i]
            open_edges[i] = open_edges[-1]
            open_edges.pop()
            placed |= 1 << e
            completed = 0
            for box in edge_boxes[e]:
                mask = box_masks[box]
                if placed & mask == mask:
                    completed += 1
            if completed:
                if current == 0:
                    s0 += completed
                else:
                    s1 += completed
            else:
                current = 1 - current
        if s0 > s1:
            return [1.0, 0.0]
        if s1 > s0:
            return [0.0, 1.0]
        return [0.5, 0.5]
