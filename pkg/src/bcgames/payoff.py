"""Winning conditions and the exit penalty semantics.

Two payoff representations are supported: a clopen condition given as a
labelled antichain of play prefixes with a default winner, and a finite
nested difference of open sets, each open set generated by finitely
many prefixes.  With finite generator sets the difference form is
clopen as well, so it can be compiled down to an antichain over a given
tree and solved through a single code path.

The wrapped outcome of a game couples a payoff with a tree: the first
player to move outside the tree loses on the spot, and only plays that
never leave the tree are judged by the payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .players import Player, mover_at
from .trees import FiniteTree, Seq


class PayoffError(Exception):
    """Base class for payoff construction and evaluation failures."""


class PrefixTooShort(PayoffError):
    def __init__(self, prefix: Seq, needed: int):
        super().__init__(f"prefix of length {len(prefix)} undecided before depth {needed}")


class UndecidedTranscript(PayoffError):
    """The transcript neither exits the tree nor reaches the decision depth."""


class OverlappingEntries(PayoffError):
    def __init__(self, a: Seq, b: Seq):
        super().__init__(f"entries {a!r} and {b!r} do not form an antichain")


class PayoffSyntaxError(PayoffError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _is_prefix(p: Seq, x: Seq) -> bool:
    return x[: len(p)] == p


@dataclass(frozen=True)
class OpenSet:
    """An open set of plays: membership means some generator is a prefix.

    Membership is monotone under extension and is settled by any prefix
    at least as long as the longest generator.
    """

    generators: frozenset[Seq]

    @property
    def max_len(self) -> int:
        return max((len(g) for g in self.generators), default=0)

    def contains(self, prefix: Seq) -> bool:
        return any(_is_prefix(g, prefix) for g in self.generators)


@dataclass(frozen=True)
class DiffPayoff:
    """k nested differences of open sets, evaluated innermost-out:
    D_k = U_k and D_i = U_i minus D_{i+1}; membership means D_1."""

    levels: tuple[OpenSet, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise PayoffError("a difference payoff needs at least one level")

    @property
    def decision_depth(self) -> int:
        return max(level.max_len for level in self.levels)


def eval_diff(diff: DiffPayoff, prefix: Seq) -> bool:
    """Membership of every extension of ``prefix`` in the nested difference."""
    if len(prefix) < diff.decision_depth:
        raise PrefixTooShort(prefix, diff.decision_depth)
    member = False
    for level in reversed(diff.levels):
        member = level.contains(prefix) and not member
    return member


@dataclass(frozen=True)
class ClopenAntichain:
    """A clopen payoff: prefix entries naming a winner, plus a default.

    Entry prefixes must form an antichain, so any play matches at most
    one entry; a play longer than every entry that matches none is won
    by the default player.
    """

    entries: tuple[tuple[Seq, Player], ...]
    default: Player

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.entries))
        object.__setattr__(self, "entries", ordered)
        for i, (p, _) in enumerate(ordered):
            for q, _ in ordered[i + 1 :]:
                if _is_prefix(p, q):
                    raise OverlappingEntries(p, q)

    @cached_property
    def decision_depth(self) -> int:
        return max((len(p) for p, _ in self.entries), default=0)

    def decide(self, prefix: Seq) -> Player | None:
        """Winner fixed by ``prefix``, or None when still open."""
        for p, winner in self.entries:
            if _is_prefix(p, prefix):
                return winner
        if len(prefix) >= self.decision_depth:
            return self.default
        return None

    def winner_at(self, prefix: Seq) -> Player:
        winner = self.decide(prefix)
        if winner is None:
            raise UndecidedTranscript(f"prefix {prefix!r} undecided")
        return winner


@dataclass(frozen=True)
class ExitEvent:
    """The first departure from the tree: the offender is the player who
    made the move, player I at odd exit lengths."""

    exit_length: int
    offender: Player


def first_exit(tree: FiniteTree, x: Seq) -> ExitEvent | None:
    """Least n with x[:n] outside the tree, or None if every prefix is in."""
    for n in range(1, len(x) + 1):
        if x[:n] not in tree:
            return ExitEvent(n, mover_at(n - 1))
    return None


def outcome_psi(tree: FiniteTree, payoff: ClopenAntichain, transcript: Seq) -> Player:
    """Winner of a decided transcript under the wrapped condition.

    If the transcript leaves the tree the offender loses no matter what
    the payoff says; otherwise the payoff decides, which requires the
    transcript to reach the payoff's decision depth.
    """
    event = first_exit(tree, transcript)
    if event is not None:
        return event.offender.other
    if len(transcript) < payoff.decision_depth:
        raise UndecidedTranscript(
            f"transcript {transcript!r} stays in the tree but is shorter than "
            f"the decision depth {payoff.decision_depth}"
        )
    return payoff.winner_at(transcript)


def exit_win_existential(tree: FiniteTree, x: Seq, player: Player) -> bool:
    """Some prefix is a first exit whose offender is the opponent."""
    opponent = player.other
    for n in range(1, len(x) + 1):
        if x[:n] not in tree and x[: n - 1] in tree and mover_at(n - 1) is opponent:
            return True
    return False


def exit_win_universal(tree: FiniteTree, x: Seq, player: Player) -> bool:
    """Every out-of-tree prefix is explained by an opponent first exit at
    or before it.  Agrees with the existential form on transcripts that
    have left the tree; vacuously true on ones that never do."""
    opponent = player.other
    for n in range(1, len(x) + 1):
        if x[:n] in tree:
            continue
        if not any(
            x[:m] not in tree and x[: m - 1] in tree and mover_at(m - 1) is opponent
            for m in range(1, n + 1)
        ):
            return False
    return True


def compile_diff(diff: DiffPayoff, tree: FiniteTree) -> ClopenAntichain:
    """Antichain equivalent to ``diff`` over plays of the given tree.

    Every in-tree node at the difference's decision depth becomes an
    entry; plays that leave the tree earlier are settled by the exit
    penalty, so no other entries are needed.
    """
    depth = diff.decision_depth
    entries = tuple(
        (node, Player.I if eval_diff(diff, node) else Player.II)
        for node in tree.sorted_nodes
        if len(node) == depth
    )
    return ClopenAntichain(entries, Player.II)


def check_total(payoff: ClopenAntichain, tree: FiniteTree, depth: int) -> None:
    """Walk every in-tree prefix at ``depth`` and require a unique verdict.

    With an antichain plus default this is guaranteed, so the walk is a
    validation pass: it rejects depths shallower than the payoff needs.
    """
    if depth < payoff.decision_depth:
        raise UndecidedTranscript(
            f"decision depth {depth} is shallower than the payoff's "
            f"{payoff.decision_depth}"
        )
    for node in tree.sorted_nodes:
        if len(node) == depth and payoff.decide(node) is None:
            raise UndecidedTranscript(f"no verdict at depth-{depth} node {node!r}")


CLOPEN_HEADER = "payoff clopen v1"
DIFF_HEADER = "payoff diff v1"


def serialize_payoff(payoff: ClopenAntichain) -> str:
    lines = [CLOPEN_HEADER]
    for prefix, winner in payoff.entries:
        lines.append(f"{winner.value}: {' '.join(map(str, prefix))}".rstrip())
    lines.append(f"default: {payoff.default.value}")
    return "\n".join(lines) + "\n"


def serialize_diff(diff: DiffPayoff) -> str:
    lines = [f"{DIFF_HEADER} k={len(diff.levels)}"]
    for i, level in enumerate(diff.levels, start=1):
        lines.append(f"level {i}:")
        lines += [" ".join(map(str, g)) for g in sorted(level.generators)]
    return "\n".join(lines) + "\n"


def _parse_seq(body: str, lineno: int) -> Seq:
    parts = body.split()
    try:
        node = tuple(int(p) for p in parts)
    except ValueError:
        raise PayoffSyntaxError(lineno, f"not a sequence of naturals: {body!r}") from None
    if any(x < 0 for x in node):
        raise PayoffSyntaxError(lineno, f"negative entry in {body!r}")
    return node


def parse_payoff(text: str) -> ClopenAntichain | DiffPayoff:
    """Parse either payoff file format, dispatching on the header line."""
    lines = text.splitlines()
    if not lines:
        raise PayoffSyntaxError(1, "empty payoff file")
    header = lines[0].strip()
    if header == CLOPEN_HEADER:
        return _parse_clopen(lines)
    if header.startswith(DIFF_HEADER):
        return _parse_diff(lines, header)
    raise PayoffSyntaxError(1, f"unknown payoff header {header!r}")


def _parse_clopen(lines: list[str]) -> ClopenAntichain:
    entries: list[tuple[Seq, Player]] = []
    seen: set[Seq] = set()
    default: Player | None = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if ":" not in line:
            raise PayoffSyntaxError(lineno, f"expected 'I:', 'II:' or 'default:': {raw!r}")
        tag, body = line.split(":", 1)
        tag = tag.strip()
        if tag == "default":
            if default is not None:
                raise PayoffSyntaxError(lineno, "duplicate default line")
            try:
                default = Player(body.strip())
            except ValueError:
                raise PayoffSyntaxError(lineno, f"bad default {body!r}") from None
            continue
        if tag not in ("I", "II"):
            raise PayoffSyntaxError(lineno, f"unknown winner tag {tag!r}")
        prefix = _parse_seq(body, lineno)
        if prefix in seen:
            raise PayoffSyntaxError(lineno, f"duplicate entry {prefix!r}")
        seen.add(prefix)
        entries.append((prefix, Player(tag)))
    if default is None:
        raise PayoffSyntaxError(len(lines), "missing default line")
    return ClopenAntichain(tuple(entries), default)


def _parse_diff(lines: list[str], header: str) -> DiffPayoff:
    tail = header[len(DIFF_HEADER) :].strip()
    if not tail.startswith("k="):
        raise PayoffSyntaxError(1, f"expected 'k=<k>' in header, got {header!r}")
    try:
        k = int(tail[2:])
    except ValueError:
        raise PayoffSyntaxError(1, f"bad level count in {header!r}") from None
    if k < 1:
        raise PayoffSyntaxError(1, "level count must be at least 1")
    levels: list[set[Seq]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("level"):
            label = line.removeprefix("level").rstrip(":").strip()
            if label != str(len(levels) + 1):
                raise PayoffSyntaxError(lineno, f"expected 'level {len(levels) + 1}:', got {raw!r}")
            levels.append(set())
            continue
        if not levels:
            raise PayoffSyntaxError(lineno, "generator line before any 'level' line")
        levels[-1].add(_parse_seq(line, lineno))
    if len(levels) != k:
        raise PayoffSyntaxError(len(lines), f"header promised k={k} levels, found {len(levels)}")
    return DiffPayoff(tuple(OpenSet(frozenset(g)) for g in levels))
