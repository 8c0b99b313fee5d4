"""Finite binary choice trees.

A tree is a finite, prefix-closed set of finite sequences of natural
numbers in which no node has more than two immediate successors.
Sequences are plain tuples of non-negative ints and the empty tuple is
the root.  Successors are ordered by their last element, so the
leftmost successor of a node is the one with the least label.

Node order everywhere in this package is shortest-prefix-first
lexicographic, which is exactly Python's tuple order; iteration over a
tree is therefore deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from typing import Iterable, Iterator

Seq = tuple[int, ...]

ROOT: Seq = ()


class TreeError(Exception):
    """Base class for tree violations and lookup failures."""


class MissingPrefix(TreeError):
    """Prefix closure fails: a node's immediate prefix is absent."""

    def __init__(self, node: Seq):
        self.node = node
        super().__init__(f"node {node!r} is present but its prefix {node[:-1]!r} is not")


class TooManySuccessors(TreeError):
    """Binary choice fails: a node has three or more successors."""

    def __init__(self, node: Seq):
        self.node = node
        super().__init__(f"node {node!r} has more than two successors")


class NodeNotInTree(TreeError):
    def __init__(self, node: Seq):
        self.node = node
        super().__init__(f"node {node!r} is not in the tree")


class TreeSyntaxError(TreeError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class FiniteTree:
    """Immutable binary choice tree with a precomputed child index."""

    nodes: frozenset[Seq]

    def __post_init__(self) -> None:
        _check_tree(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteTree):
            return NotImplemented
        return self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash(self.nodes)

    def __contains__(self, node: Seq) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Seq]:
        return iter(self.sorted_nodes)

    def __repr__(self) -> str:
        return f"FiniteTree({sorted(self.nodes)!r})"

    @cached_property
    def sorted_nodes(self) -> tuple[Seq, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def _children(self) -> dict[Seq, tuple[Seq, ...]]:
        index: dict[Seq, list[Seq]] = {node: [] for node in self.nodes}
        for node in self.nodes:
            if node:
                index[node[:-1]].append(node)
        return {parent: tuple(sorted(kids, key=lambda s: s[-1])) for parent, kids in index.items()}

    def children(self, node: Seq) -> tuple[Seq, ...]:
        """Immediate successors of ``node``, leftmost first."""
        try:
            return self._children[node]
        except KeyError:
            raise NodeNotInTree(node) from None

    @property
    def size(self) -> int:
        return len(self.nodes)

    @cached_property
    def height(self) -> int:
        return max(len(node) for node in self.nodes)


def _check_tree(nodes: frozenset[Seq]) -> None:
    counts: dict[Seq, int] = {}
    for node in sorted(nodes):
        if node:
            if node[:-1] not in nodes:
                raise MissingPrefix(node)
            counts[node[:-1]] = counts.get(node[:-1], 0) + 1
    if ROOT not in nodes:
        raise TreeError("a tree must contain the empty sequence")
    for parent in sorted(counts):
        if counts[parent] > 2:
            raise TooManySuccessors(parent)


def validate_tree(candidate: Iterable[Seq]) -> FiniteTree:
    """Check prefix closure and the two-successor cap; raise on the first
    offending node in sorted order."""
    return FiniteTree(frozenset(tuple(node) for node in candidate))


def successors(tree: FiniteTree, node: Seq) -> list[Seq]:
    """One-step extensions of ``node`` in the tree, ascending by label."""
    return list(tree.children(node))


def subtree(tree: FiniteTree, node: Seq) -> FiniteTree:
    """The tree of suffixes s with node + s in the tree."""
    if node not in tree:
        raise NodeNotInTree(node)
    k = len(node)
    return FiniteTree(frozenset(n[k:] for n in tree.nodes if n[:k] == node))


def metrics(tree: FiniteTree) -> tuple[int, int]:
    """(node count, maximum node length)."""
    return tree.size, tree.height


def is_zero_free(tree: FiniteTree) -> bool:
    return all(0 not in node for node in tree.nodes)


def zero_free_transform(tree: FiniteTree) -> FiniteTree:
    """Shift every label up by one, freeing 0 for use as a control symbol.

    The result has the same shape: size, height, successor counts and
    left/right order are all preserved.
    """
    return FiniteTree(frozenset(tuple(x + 1 for x in node) for node in tree.nodes))


@cache
def _shapes(size: int) -> tuple[tuple, ...]:
    # A shape is a tuple of child shapes (at most two); () is a leaf.
    if size == 1:
        return ((),)
    out: list[tuple] = [(s,) for s in _shapes(size - 1)]
    for left in range(1, size - 1):
        for a in _shapes(left):
            for b in _shapes(size - 1 - left):
                out.append((a, b))
    return tuple(out)


def _shape_nodes(shape: tuple, base: Seq, lo: int, hi: int) -> list[Seq]:
    nodes = [base]
    if len(shape) >= 1:
        nodes += _shape_nodes(shape[0], base + (lo,), lo, hi)
    if len(shape) == 2:
        nodes += _shape_nodes(shape[1], base + (hi,), lo, hi)
    return nodes


def enumerate_trees(max_size: int, zero_free: bool = False) -> Iterator[FiniteTree]:
    """All binary choice trees with at most ``max_size`` nodes, one per shape.

    Labels are canonical: {1, 2} when ``zero_free`` else {0, 1}, and a
    lone successor always carries the smaller label.  The stream is
    duplicate-free and deterministically ordered by size, then by a
    fixed structural order (single-child shapes before splitting ones).
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    lo, hi = (1, 2) if zero_free else (0, 1)
    for size in range(1, max_size + 1):
        for shape in _shapes(size):
            yield FiniteTree(frozenset(_shape_nodes(shape, ROOT, lo, hi)))


TREE_HEADER = "tree v1"


def serialize_tree(tree: FiniteTree) -> str:
    """Canonical text form: header line, then one non-root node per line."""
    lines = [TREE_HEADER]
    lines += [" ".join(map(str, node)) for node in tree.sorted_nodes if node]
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> FiniteTree:
    """Parse the tree file format; the root is implicit and line order is
    irrelevant, but duplicate node lines are rejected."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != TREE_HEADER:
        raise TreeSyntaxError(1, f"expected header {TREE_HEADER!r}")
    nodes: set[Seq] = {ROOT}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        try:
            node = tuple(int(part) for part in line.split())
        except ValueError:
            raise TreeSyntaxError(lineno, f"not a sequence of naturals: {raw!r}") from None
        if any(x < 0 for x in node):
            raise TreeSyntaxError(lineno, f"negative entry in {raw!r}")
        if node in nodes:
            raise TreeSyntaxError(lineno, f"duplicate node {node!r}")
        nodes.add(node)
    return validate_tree(nodes)
