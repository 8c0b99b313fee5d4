"""Strategies over binary choice game trees.

Two formalisms live here.  A regular strategy is a function from
positions where its owner moves to a move, with an optional default; a
restricted strategy is a subtree of the game tree that keeps exactly
one successor wherever its owner moves and every successor wherever the
opponent moves.  Nodes without successors are strategy leaves for
either player: the mover there has no in-tree option and will be the
one forced out.

Regular strategies over all of the naturals are quotiented to a finite
alphabet per position: the in-tree successor labels plus the single
symbolic off-tree move EXIT.  All off-tree moves lose identically for
the mover, so the quotient never changes an outcome.  EXIT is realized
concretely as one more than the largest in-tree successor label, or 0
at positions with no in-tree successor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .players import Player, mover_at, parse_player
from .trees import FiniteTree, MissingPrefix, NodeNotInTree, Seq


class StrategyError(Exception):
    """Base class for strategy violations."""


class UndefinedAt(StrategyError):
    def __init__(self, position: Seq):
        self.position = position
        super().__init__(f"strategy undefined at position {position!r}")


class NotAPath(StrategyError):
    """The intersection of two restricted strategies is not a single path."""


class NotExactlyOne(StrategyError):
    def __init__(self, node: Seq):
        self.node = node
        super().__init__(f"owner node {node!r} does not select exactly one successor")


class MissingOpponentOption(StrategyError):
    def __init__(self, node: Seq):
        self.node = node
        super().__init__(f"opponent node {node!r} drops an in-tree successor")


class StrategySyntaxError(StrategyError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class _ExitMove:
    _instance = None

    def __new__(cls) -> "_ExitMove":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EXIT"


EXIT = _ExitMove()

Move = int | _ExitMove


def owner_moves_at(owner: Player, node: Seq) -> bool:
    return mover_at(len(node)) is owner


def realize_exit(tree: FiniteTree, position: Seq) -> int:
    """Concrete number for the canonical off-tree move at a position."""
    if position not in tree:
        return 0
    kids = tree.children(position)
    return kids[-1][-1] + 1 if kids else 0


@dataclass(frozen=True)
class RegularStrategy:
    """A positional strategy: explicit moves plus an optional default."""

    owner: Player
    moves: Mapping[Seq, Move]
    default: Move | None = None
    horizon: int = 0

    def move_at(self, position: Seq):
        if position in self.moves:
            return self.moves[position]
        if self.default is None:
            raise UndefinedAt(position)
        return self.default


def product_regular(
    sigma: RegularStrategy,
    tau: RegularStrategy,
    horizon: int,
    tree: FiniteTree | None = None,
) -> Seq:
    """The alternating play of the two strategies up to ``horizon`` plies.

    Even plies come from ``sigma`` (player I), odd plies from ``tau``.
    A ``tree`` is required whenever a strategy plays EXIT, to realize it
    as a concrete number.
    """
    if sigma.owner is not Player.I or tau.owner is not Player.II:
        raise StrategyError("product expects a player-I strategy and a player-II strategy")
    play: list[int] = []
    for ply in range(horizon):
        strat = sigma if mover_at(ply) is Player.I else tau
        move = strat.move_at(tuple(play))
        if move is EXIT:
            if tree is None:
                raise StrategyError("EXIT move needs a tree to be realized")
            move = realize_exit(tree, tuple(play))
        play.append(move)
    return tuple(play)


@dataclass(frozen=True)
class RestrictedStrategy:
    """A strategy as a subtree; must be prefix closed and contain the root."""

    owner: Player
    nodes: frozenset[Seq]

    def __post_init__(self) -> None:
        if () not in self.nodes:
            raise StrategyError("a restricted strategy must contain the empty sequence")
        for node in self.nodes:
            if node and node[:-1] not in self.nodes:
                raise MissingPrefix(node)

    @cached_property
    def _children(self) -> dict[Seq, tuple[Seq, ...]]:
        index: dict[Seq, list[Seq]] = {node: [] for node in self.nodes}
        for node in self.nodes:
            if node:
                index[node[:-1]].append(node)
        return {p: tuple(sorted(ks, key=lambda s: s[-1])) for p, ks in index.items()}

    def children(self, node: Seq) -> tuple[Seq, ...]:
        return self._children[node]

    def choice_at(self, node: Seq) -> Seq | None:
        """The unique successor kept at an owner node, if any."""
        kids = self._children.get(node, ())
        return kids[0] if len(kids) == 1 else None


def validate_restricted(
    tree: FiniteTree, candidate: Iterable[Seq], owner: Player
) -> RestrictedStrategy:
    """Check the two defining clauses over the given game tree.

    Wherever the owner moves and the tree offers successors, exactly one
    must be kept; wherever the opponent moves, all in-tree successors
    must be kept.  Nodes the tree gives no successor are leaves for
    either player.
    """
    nodes = frozenset(tuple(n) for n in candidate)
    for node in sorted(nodes):
        if node not in tree:
            raise NodeNotInTree(node)
    strategy = RestrictedStrategy(owner, nodes)
    for node in sorted(nodes):
        in_tree = tree.children(node)
        kept = [c for c in in_tree if c in nodes]
        if owner_moves_at(owner, node):
            if in_tree and len(kept) != 1:
                raise NotExactlyOne(node)
        else:
            if len(kept) != len(in_tree):
                raise MissingOpponentOption(node)
    return strategy


def product_restricted(sigma: RestrictedStrategy, tau: RestrictedStrategy) -> Seq:
    """Maximal node of the single path the two subtrees share."""
    if sigma.owner is tau.owner:
        raise StrategyError("product expects strategies of opposite owners")
    common = sigma.nodes & tau.nodes
    node: Seq = ()
    while True:
        kids = [c for c in common if len(c) == len(node) + 1 and c[: len(node)] == node]
        if not kids:
            break
        if len(kids) > 1:
            raise NotAPath(f"two continuations below {node!r}")
        node = kids[0]
    if len(common) != len(node) + 1:
        raise NotAPath("intersection has nodes off the joint path")
    return node


def enumerate_restricted(tree: FiniteTree, owner: Player) -> Iterator[RestrictedStrategy]:
    """Every valid restricted strategy exactly once, leftmost choices first."""

    def below(node: Seq) -> list[frozenset[Seq]]:
        kids = tree.children(node)
        if not kids:
            return [frozenset((node,))]
        if owner_moves_at(owner, node):
            out = []
            for child in kids:
                out += [sub | {node} for sub in below(child)]
            return out
        return [
            frozenset((node,)).union(*combo)
            for combo in itertools.product(*(below(c) for c in kids))
        ]

    for nodes in below(()):
        yield RestrictedStrategy(owner, nodes)


def count_restricted(tree: FiniteTree, owner: Player) -> int:
    """Strategy count by the sum/product recursion: owner nodes sum over
    their choices, opponent nodes multiply over the kept successors."""

    def count(node: Seq) -> int:
        kids = tree.children(node)
        if not kids:
            return 1
        if owner_moves_at(owner, node):
            return sum(count(c) for c in kids)
        total = 1
        for c in kids:
            total *= count(c)
        return total

    return count(())


def restricted_to_regular(strategy: RestrictedStrategy) -> RegularStrategy:
    """Positional form: the unique choice on the strategy's own nodes,
    0 everywhere else."""
    moves: dict[Seq, int] = {}
    for node in strategy.nodes:
        if owner_moves_at(strategy.owner, node):
            choice = strategy.choice_at(node)
            if choice is not None:
                moves[node] = choice[-1]
    horizon = max(len(n) for n in strategy.nodes)
    return RegularStrategy(strategy.owner, moves, default=0, horizon=horizon)


def quotient_positions(tree: FiniteTree, owner: Player) -> tuple[Seq, ...]:
    return tuple(n for n in tree.sorted_nodes if owner_moves_at(owner, n))


def quotient_count(tree: FiniteTree, owner: Player) -> int:
    total = 1
    for node in quotient_positions(tree, owner):
        total *= len(tree.children(node)) + 1
    return total


def enumerate_regular_quotient(tree: FiniteTree, owner: Player) -> Iterator[RegularStrategy]:
    """All quotiented regular strategies: per in-tree position where the
    owner moves, a successor label or EXIT; EXIT everywhere else."""
    positions = quotient_positions(tree, owner)
    options = [[c[-1] for c in tree.children(p)] + [EXIT] for p in positions]
    horizon = tree.height + 1
    for combo in itertools.product(*options):
        yield RegularStrategy(owner, dict(zip(positions, combo)), default=EXIT, horizon=horizon)


STRATEGY_HEADER = "strategy v1"


def serialize_strategy(strategy: RestrictedStrategy) -> str:
    """Canonical text form mirroring the tree format; the root is implicit."""
    lines = [f"{STRATEGY_HEADER} owner={strategy.owner.value}"]
    lines += [" ".join(map(str, node)) for node in sorted(strategy.nodes) if node]
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> RestrictedStrategy:
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith(STRATEGY_HEADER):
        raise StrategySyntaxError(1, f"expected header {STRATEGY_HEADER!r} owner=I|II")
    tail = lines[0].strip().removeprefix(STRATEGY_HEADER).strip()
    if not tail.startswith("owner="):
        raise StrategySyntaxError(1, "missing owner= in header")
    try:
        owner = parse_player(tail.removeprefix("owner="))
    except ValueError as exc:
        raise StrategySyntaxError(1, str(exc)) from None
    nodes: set[Seq] = {()}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        try:
            node = tuple(int(p) for p in line.split())
        except ValueError:
            raise StrategySyntaxError(lineno, f"not a sequence of naturals: {raw!r}") from None
        if node in nodes:
            raise StrategySyntaxError(lineno, f"duplicate node {node!r}")
        nodes.add(node)
    return RestrictedStrategy(owner, frozenset(nodes))
