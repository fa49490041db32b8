from .base import GameSpec, Trajectory, mix64, play_game, sample_parameters, make_game
from .connect4 import Connect4
from .dots_and_boxes import DotsAndBoxes
from .cant_stop import CantStop

__all__ = [
    "GameSpec",
    "Trajectory",
    "mix64",
    "play_game",
    "sample_parameters",
    "make_game",
    "Connect4",
    "DotsAndBoxes",
    "CantStop",
]
