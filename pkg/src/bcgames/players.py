"""The two players and the move-order convention.

Player I owns the even plies (0-based), player II the odd ones, so the
player to move at a position is determined by the position's length.
"""

from __future__ import annotations

import enum


class Player(enum.Enum):
    I = "I"
    II = "II"

    @property
    def other(self) -> "Player":
        return Player.II if self is Player.I else Player.I

    def __str__(self) -> str:
        return self.value


def mover_at(ply: int) -> Player:
    """Player whose turn it is at a 0-based ply."""
    return Player.I if ply % 2 == 0 else Player.II


def parse_player(text: str) -> Player:
    try:
        return Player(text.strip())
    except ValueError:
        raise ValueError(f"unknown player {text!r}, expected 'I' or 'II'") from None
