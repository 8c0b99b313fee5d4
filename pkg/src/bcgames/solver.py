"""Exact solving of games on binary choice trees.

A game couples a tree with a clopen payoff and a decision depth.  A
play is settled the moment it leaves the tree (the offender loses) or
reaches the decision depth while still inside it (the payoff decides).
A player whose turn comes at a node with no in-tree successor is forced
out and loses.  Under those rules backward induction yields the winner,
a certified restricted strategy for the winner, and the value of every
explored node.

Two independent brute-force routes cross-check the induction: one
enumerates restricted strategies for both players and evaluates the
joint play literally, the other enumerates quotiented regular
strategies and scores each pair with the wrapped outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from .payoff import ClopenAntichain, PayoffError, check_total, outcome_psi
from .players import Player, mover_at
from .strategy import (
    EXIT,
    RegularStrategy,
    RestrictedStrategy,
    count_restricted,
    enumerate_regular_quotient,
    enumerate_restricted,
    product_restricted,
    quotient_count,
    realize_exit,
    validate_restricted,
)
from .trees import FiniteTree, Seq


class SolverError(Exception):
    pass


class UndecidedGame(SolverError):
    """The payoff does not settle every play at the game's decision depth."""


class Infeasible(SolverError):
    """The brute-force strategy space exceeds the configured cap."""


#: Hard cap on strategy pairs explored by the brute-force routes.
PAIR_CAP = 2**20


@dataclass(frozen=True)
class Game:
    tree: FiniteTree
    payoff: ClopenAntichain
    decision_depth: int

    def __post_init__(self) -> None:
        if self.decision_depth < 0:
            raise UndecidedGame("decision depth must be non-negative")
        try:
            check_total(self.payoff, self.tree, self.decision_depth)
        except PayoffError as exc:
            raise UndecidedGame(str(exc)) from None

    @property
    def horizon(self) -> int:
        """Ply count by which every play of this game is settled."""
        return max(self.decision_depth, self.tree.height + 1)


def exit_game(tree: FiniteTree) -> Game:
    """The pure exit game: the payoff is unreachable, so being forced out
    of the tree is the only way to lose."""
    return Game(tree, ClopenAntichain((), Player.II), tree.height + 1)


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    strategy: Any
    values: Mapping[Any, Player]
    explored: int


def solve(game: Game) -> SolveResult:
    """Backward induction from the root.

    Nodes at the decision depth take the payoff's verdict; a mover with
    no in-tree successor loses; elsewhere the mover wins iff some
    successor wins for the mover.  Ties break to the leftmost successor
    when the winner's strategy is read off.
    """
    tree, depth = game.tree, game.decision_depth
    values: dict[Seq, Player] = {}

    def value(node: Seq) -> Player:
        cached = values.get(node)
        if cached is not None:
            return cached
        if len(node) == depth:
            result = game.payoff.winner_at(node)
        else:
            kids = tree.children(node)
            mover = mover_at(len(node))
            if not kids:
                result = mover.other
            else:
                child_values = [value(c) for c in kids]
                result = mover if mover in child_values else mover.other
        values[node] = result
        return result

    winner = value(())
    strategy = RestrictedStrategy(winner, frozenset(_winning_subtree(game, values, winner)))
    return SolveResult(winner, strategy, values, len(values))


def _winning_subtree(game: Game, values: dict[Seq, Player], winner: Player) -> set[Seq]:
    # Keeps all opponent options; below the decision depth the choice no
    # longer matters, so the leftmost successor keeps the subtree valid.
    tree, depth = game.tree, game.decision_depth
    nodes: set[Seq] = set()
    stack: list[Seq] = [()]
    while stack:
        node = stack.pop()
        nodes.add(node)
        kids = tree.children(node)
        if not kids:
            continue
        if mover_at(len(node)) is winner:
            if len(node) < depth:
                chosen = next(c for c in kids if values.get(c) is winner)
            else:
                chosen = kids[0]
            stack.append(chosen)
        else:
            stack.extend(kids)
    return nodes


def verify_winning(game: Game, strategy: RestrictedStrategy) -> Seq | None:
    """Exhaustively play every opponent line inside ``strategy``.

    Returns None when every settled transcript is won by the strategy's
    owner, else the first losing position found.
    """
    owner = strategy.owner
    validate_restricted(game.tree, strategy.nodes, owner)
    depth = game.decision_depth
    stack: list[Seq] = [()]
    while stack:
        node = stack.pop()
        if len(node) == depth:
            if game.payoff.winner_at(node) is not owner:
                return node
            continue
        kids = game.tree.children(node)
        if mover_at(len(node)) is owner:
            if not kids:
                return node  # owner is the one forced out
            stack.append(strategy.choice_at(node))
        else:
            # no in-tree option forces the opponent out: owner wins the line
            stack.extend(strategy.children(node))
    return None


def _endpoint_winner(game: Game, endpoint: Seq) -> Player:
    if len(endpoint) >= game.decision_depth:
        return game.payoff.winner_at(endpoint)
    return mover_at(len(endpoint)).other


def decided_prefix(game: Game, play: Seq) -> Seq:
    """Shortest prefix of a play at which this game is settled: the first
    step out of the tree, or the in-tree prefix at the decision depth."""
    for k in range(len(play) + 1):
        prefix = play[:k]
        if prefix not in game.tree:
            return prefix
        if k == game.decision_depth:
            return prefix
    raise UndecidedGame(f"play of length {len(play)} never settles")


def brute_force_oracle(game: Game, cap: int = PAIR_CAP) -> Player:
    """Winner by literal evaluation over all restricted strategy pairs.

    Exact by construction: above the pair cap it refuses rather than
    samples.
    """
    tree = game.tree
    pairs = count_restricted(tree, Player.I) * count_restricted(tree, Player.II)
    if pairs > cap:
        raise Infeasible(f"{pairs} strategy pairs exceed the cap of {cap}")
    sigmas = list(enumerate_restricted(tree, Player.I))
    taus = list(enumerate_restricted(tree, Player.II))

    def outcome(sigma: RestrictedStrategy, tau: RestrictedStrategy) -> Player:
        return _endpoint_winner(game, product_restricted(sigma, tau))

    if any(all(outcome(s, t) is Player.I for t in taus) for s in sigmas):
        return Player.I
    if any(all(outcome(s, t) is Player.II for s in sigmas) for t in taus):
        return Player.II
    raise SolverError("neither player has a winning restricted strategy")


def _wins_against_all(game: Game, strat: RegularStrategy, owner: Player) -> bool:
    """Does ``strat`` beat every quotiented opponent under the wrapped
    outcome?  Opponent behaviours are expanded move by move, which covers
    the full assignment space: only on-path responses can matter."""
    tree, payoff, depth = game.tree, game.payoff, game.decision_depth

    def walk(position: Seq) -> bool:
        mover = mover_at(len(position))
        if mover is owner:
            move = strat.move_at(position)
            if move is EXIT:
                move = realize_exit(tree, position)
            return settled(position + (move,))
        for child in tree.children(position):
            if not settled(child):
                return False
        return settled(position + (realize_exit(tree, position),))

    def settled(position: Seq) -> bool:
        if position not in tree:
            return outcome_psi(tree, payoff, position) is owner
        if len(position) == depth:
            return outcome_psi(tree, payoff, position) is owner
        return walk(position)

    if depth == 0:
        return outcome_psi(tree, payoff, ()) is owner
    return walk(())


def def3_winner(game: Game, cap: int = PAIR_CAP) -> Player:
    """Winner under the wrapped-outcome semantics, by brute force over
    quotiented regular strategies.  Both players' searches are run and
    must disagree on exactly one winner."""
    tree = game.tree
    pairs = quotient_count(tree, Player.I) * quotient_count(tree, Player.II)
    if pairs > cap:
        raise Infeasible(f"{pairs} quotient pairs exceed the cap of {cap}")
    one_wins = any(
        _wins_against_all(game, s, Player.I) for s in enumerate_regular_quotient(tree, Player.I)
    )
    two_wins = any(
        _wins_against_all(game, t, Player.II) for t in enumerate_regular_quotient(tree, Player.II)
    )
    if one_wins == two_wins:
        raise SolverError("quotient search found no unique winner")
    return Player.I if one_wins else Player.II


@dataclass(frozen=True)
class Def34Report:
    regular_winner: Player
    restricted_winner: Player

    @property
    def agree(self) -> bool:
        return self.regular_winner is self.restricted_winner


def check_def3_def4(game: Game, cap: int = PAIR_CAP) -> Def34Report:
    """Compare the two determinacy readings on one game: regular
    strategies scored by the wrapped outcome versus restricted
    strategies scored literally."""
    return Def34Report(def3_winner(game, cap), brute_force_oracle(game, cap))
