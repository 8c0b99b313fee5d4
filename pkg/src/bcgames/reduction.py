"""The four-phase reduction game over a zero-free source tree.

Player I grows a sequence t through the source tree; player II answers
with a single extension u0 of t, or claims with 0 that t has no
successor; player I then grows a rival sequence v below t, meant to
start differently from u0; finally player II grows u' below t followed
by u0, aiming for u = (u0,) + u' to be at least as long as v.

Sequence growth is encoded so that no turn ever offers more than two
moves.  Each appended element costs one block of three moves by the
builder: a control move (0 keeps building, legal only while the current
node has a successor; 1 ends the phase), a micro move naming the
leftmost successor label, and a confirm-or-swap micro move (0 keeps the
named label, the rightmost label replaces it).  In the answer phase the
first micro move may also be 0, the no-successor claim, which the
second micro move must confirm with another 0.  The idle player is
forced to answer 0 between the builder's moves, and the two builders
hand over seamlessly, so player I always moves at even plies.  After
the final end signal the position is terminal.

A terminal position reached legally is scored by four rules applied in
order: II wins if t+v left the tree (impossible for legal play), II
wins if v is empty or copies u0, I wins if t+u left the tree (exactly
the claim case), otherwise II wins iff v is no longer than u.  A player
who makes an illegal move loses on the spot.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Mapping

from .players import Player, mover_at
from .solver import SolveResult
from .trees import FiniteTree, Seq, is_zero_free, subtree

CTRL = "ctrl"
IDLE_CTRL = "idle-ctrl"
MICRO_A = "a"
IDLE_A = "idle-a"
MICRO_B = "b"
IDLE_B = "idle-b"
DONE = "done"

_NEXT_AFTER_IDLE = {IDLE_CTRL: MICRO_A, IDLE_A: MICRO_B, IDLE_B: CTRL}


class ReductionError(Exception):
    pass


class ZeroLabeledTree(ReductionError):
    """The source tree uses 0 as a label, which the encoding reserves."""


class IllegalPosition(ReductionError):
    def __init__(self, ply: int):
        self.ply = ply
        super().__init__(f"illegal move at ply {ply}")


class NotTerminal(ReductionError):
    pass


class StrategyNotWinning(ReductionError):
    """A simulated response loses, contradicting the certification."""


@dataclass(frozen=True, slots=True)
class RState:
    """Abstract game state; positions sharing a state share their future."""

    phase: int  # 1..4, 5 once finished
    step: str
    cur: Seq | None  # node being navigated; None = off the tree after a claim
    t: Seq | None  # fixed at the end of phase 1, dropped entering phase 4
    u0: int | None  # fixed at the end of phase 2, dropped entering phase 4
    a2: int | None  # pending first micro move of phase 2
    v_len: int
    v0_ok: bool | None  # v starts with u0; None while v is empty
    u_len: int
    winner: Player | None
    rule: str | None


def _initial() -> RState:
    return RState(1, CTRL, (), None, None, None, 0, None, 0, None, None)


def _phase2_entry(t: Seq) -> RState:
    return RState(2, MICRO_A, t, t, None, None, 0, None, 0, None, None)


def _phase3_entry(t: Seq, u0: int) -> RState:
    return RState(3, CTRL, t, t, u0, None, 0, None, 0, None, None)


def _phase4_entry(st: RState) -> RState:
    u_node = st.t + (st.u0,) if st.u0 != 0 else None
    return RState(4, CTRL, u_node, None, None, None, st.v_len, st.v0_ok, 1, None, None)


def _terminal(st: RState) -> RState:
    if st.v_len == 0 or st.v0_ok:
        winner, rule = Player.II, "rule2"
    elif st.cur is None:
        winner, rule = Player.I, "rule3"
    elif st.v_len <= st.u_len:
        winner, rule = Player.II, "rule4"
    else:
        winner, rule = Player.I, "rule4"
    return RState(5, DONE, None, None, None, None, st.v_len, st.v0_ok, st.u_len, winner, rule)


@dataclass(frozen=True)
class ReductionGame:
    source: FiniteTree

    @property
    def initial(self) -> RState:
        return _initial()

    def mover(self, st: RState) -> Player:
        if st.phase == 5:
            raise NotTerminal("terminal positions have no mover")
        builder = Player.I if st.phase in (1, 3) else Player.II
        return builder if st.step in (CTRL, MICRO_A, MICRO_B) else builder.other

    def is_terminal(self, st: RState) -> bool:
        return st.phase == 5

    def winner(self, st: RState) -> Player:
        if st.phase != 5:
            raise NotTerminal("position is not terminal")
        return st.winner

    def transitions(self, st: RState) -> tuple[tuple[int, RState], ...]:
        """Legal moves with their successor states, ascending by move."""
        if st.phase == 5:
            return ()
        step = st.step
        if step in _NEXT_AFTER_IDLE:
            return ((0, replace(st, step=_NEXT_AFTER_IDLE[step])),)
        tree = self.source
        if step == CTRL:
            out = []
            if st.cur is not None and tree.children(st.cur):
                out.append((0, replace(st, step=IDLE_CTRL)))
            if st.phase == 1:
                out.append((1, _phase2_entry(st.cur)))
            elif st.phase == 3:
                out.append((1, _phase4_entry(st)))
            else:
                out.append((1, _terminal(st)))
            return tuple(out)
        if step == MICRO_A:
            if st.phase == 2:
                out = [(0, replace(st, step=IDLE_A, a2=0))]
                kids = tree.children(st.t)
                if kids:
                    out.append((kids[0][-1], replace(st, step=IDLE_A, a2=kids[0][-1])))
                return tuple(out)
            kids = tree.children(st.cur)
            return ((kids[0][-1], replace(st, step=IDLE_A)),)
        # step == MICRO_B
        if st.phase == 2:
            if st.a2 == 0:
                return ((0, _phase3_entry(st.t, 0)),)
            kids = tree.children(st.t)
            out = [(0, _phase3_entry(st.t, st.a2))]
            if len(kids) == 2:
                out.append((kids[1][-1], _phase3_entry(st.t, kids[1][-1])))
            return tuple(out)
        kids = tree.children(st.cur)
        out = [(0, self._extend(st, kids[0]))]
        if len(kids) == 2:
            out.append((kids[1][-1], self._extend(st, kids[1])))
        return tuple(out)

    def _extend(self, st: RState, child: Seq) -> RState:
        if st.phase == 1:
            return replace(st, step=IDLE_B, cur=child)
        if st.phase == 3:
            v0_ok = st.v0_ok if st.v_len else child[-1] == st.u0
            return replace(st, step=IDLE_B, cur=child, v_len=st.v_len + 1, v0_ok=v0_ok)
        return replace(st, step=IDLE_B, cur=child, u_len=st.u_len + 1)


def build_reduction_game(tree: FiniteTree) -> ReductionGame:
    if not is_zero_free(tree):
        raise ZeroLabeledTree("the source tree must not contain 0 in any node")
    return ReductionGame(tree)


def _apply(game: ReductionGame, st: RState, move: int) -> RState:
    for mv, nxt in game.transitions(st):
        if mv == move:
            return nxt
    raise ReductionError(f"move {move} is illegal in state {st!r}")


def _forced(game: ReductionGame, st: RState) -> RState:
    trans = game.transitions(st)
    if len(trans) != 1:
        raise ReductionError(f"state {st!r} is not forced")
    return trans[0][1]


@dataclass
class Transcript:
    """The pieces of a play decoded back out of the move encoding."""

    t: Seq | None = None
    u0: int | None = None
    v: Seq | None = None
    u_prime: Seq | None = None
    phase: int = 1
    step: str = CTRL
    terminal: bool = False
    winner: Player | None = None
    rule: str | None = None

    @property
    def u(self) -> Seq | None:
        if self.u0 is None:
            return None
        return (self.u0,) + (self.u_prime or ())


def decode(game: ReductionGame, position: Seq) -> Transcript:
    """Replay a legal position and report the pieces built so far.

    While a phase is still running its sequence is shown as grown to
    date.  Raises IllegalPosition naming the first offending ply.
    """
    st = game.initial
    out = Transcript()
    for ply, move in enumerate(position):
        nxt = None
        for mv, cand in game.transitions(st):
            if mv == move:
                nxt = cand
                break
        if nxt is None:
            raise IllegalPosition(ply)
        if nxt.phase >= 2 and out.t is None:
            out.t = nxt.t if nxt.t is not None else st.t
        if nxt.phase >= 3 and out.u0 is None:
            out.u0 = nxt.u0 if nxt.phase == 3 else st.u0
        if nxt.phase == 3:
            out.v = nxt.cur[len(out.t) :]
        if nxt.phase == 4:
            if out.v is None:
                out.v = ()
            if out.u_prime is None:
                out.u_prime = ()
            if st.phase == 4 and nxt.u_len > st.u_len:
                out.u_prime = out.u_prime + (nxt.cur[-1],)
        st = nxt
    if st.phase == 1:
        out.t = st.cur
    out.phase, out.step = st.phase, st.step
    if st.phase == 5:
        out.terminal, out.winner, out.rule = True, st.winner, st.rule
    return out


def apply_rules(tree: FiniteTree, t: Seq, u0: int, v: Seq, u_prime: Seq) -> tuple[Player, str]:
    """The four terminal rules, applied in order to decoded pieces."""
    if t + v not in tree:
        return Player.II, "rule1"
    if len(v) == 0 or v[0] == u0:
        return Player.II, "rule2"
    u = (u0,) + u_prime
    if t + u not in tree:
        return Player.I, "rule3"
    return (Player.II, "rule4") if len(v) <= len(u) else (Player.I, "rule4")


def terminal_outcome(game: ReductionGame, play: Seq) -> tuple[Player, str]:
    """Winner of a finished play plus the rule that fired.

    A move with no legal counterpart, including any move made after the
    end of the game, loses for its mover on the spot.
    """
    st = game.initial
    for ply, move in enumerate(play):
        if st.phase == 5:
            return mover_at(ply).other, "exit"
        nxt = None
        for mv, cand in game.transitions(st):
            if mv == move:
                nxt = cand
                break
        if nxt is None:
            return game.mover(st).other, "exit"
        st = nxt
    if st.phase != 5:
        raise NotTerminal(f"play of length {len(play)} ends mid-game")
    return st.winner, st.rule


def terminal_winner(game: ReductionGame, play: Seq) -> Player:
    return terminal_outcome(game, play)[0]


def _state_value(memo: dict[RState, Player], st: RState) -> Player:
    return st.winner if st.phase == 5 else memo[st]


def _solve_states(
    game: ReductionGame, pins: Mapping[RState, int] | None = None
) -> tuple[Player, dict[RState, Player]]:
    """Backward induction over abstract states, optionally with some of
    player II's choices pinned to fixed moves."""
    memo: dict[RState, Player] = {}

    def value(st: RState) -> Player:
        if st.phase == 5:
            return st.winner
        cached = memo.get(st)
        if cached is not None:
            return cached
        trans = game.transitions(st)
        if pins is not None and st in pins:
            pinned = pins[st]
            trans = tuple(item for item in trans if item[0] == pinned)
        mover = game.mover(st)
        result = mover if any(value(nxt) is mover for _, nxt in trans) else mover.other
        memo[st] = result
        return result

    return value(game.initial), memo


@dataclass
class ReductionPolicy:
    """A positional strategy over abstract states for one player."""

    owner: Player
    moves: dict[RState, int]


def solve_reduction(tree: FiniteTree) -> SolveResult:
    """Solve the reduction game built from a zero-free tree.

    Returns the winner (player II, on every finite source tree), a
    policy certified by exhaustive traversal, the value of every
    explored abstract state and the state count.
    """
    game = build_reduction_game(tree)
    winner, memo = _solve_states(game)
    policy = ReductionPolicy(winner, _policy_moves(game, memo, winner))
    return SolveResult(winner, policy, memo, len(memo))


def _policy_moves(
    game: ReductionGame, memo: dict[RState, Player], winner: Player
) -> dict[RState, int]:
    moves: dict[RState, int] = {}
    seen: set[RState] = set()
    stack = [game.initial]
    while stack:
        st = stack.pop()
        if st.phase == 5 or st in seen:
            continue
        seen.add(st)
        trans = game.transitions(st)
        if game.mover(st) is winner:
            mv, nxt = next(
                (mv, nxt) for mv, nxt in trans if _state_value(memo, nxt) is winner
            )
            moves[st] = mv
            stack.append(nxt)
        else:
            stack.extend(nxt for _, nxt in trans)
    return moves


def verify_winning_policy(game: ReductionGame, policy: ReductionPolicy) -> list[int] | None:
    """Walk every opponent line with the policy's owner following the
    policy; None when the owner wins every terminal, else a losing play."""
    owner = policy.owner
    path: list[int] = []

    def walk(st: RState) -> list[int] | None:
        if st.phase == 5:
            return None if st.winner is owner else list(path)
        trans = game.transitions(st)
        if game.mover(st) is owner:
            move = policy.moves.get(st)
            nxt = next((n for mv, n in trans if mv == move), None)
            if nxt is None:
                return list(path)  # no response recorded: the line is lost
            path.append(move)
            found = walk(nxt)
            path.pop()
            return found
        for move, nxt in trans:
            path.append(move)
            found = walk(nxt)
            path.pop()
            if found is not None:
                return found
        return None

    return walk(game.initial)


@dataclass
class BranchReport:
    """Branch read off the answering player's strategy: f grows one label
    per round until the strategy claims there is no successor."""

    f: Seq
    fail_index: int | None
    bound_holds: bool | None = None


def _drive_phase1(game: ReductionGame, target: Seq) -> tuple[RState, list[int]]:
    """Player I's moves (idles included) that build ``target`` and signal."""
    tree = game.source
    st = game.initial
    moves: list[int] = []

    def push(new_st: RState, mv: int) -> RState:
        moves.append(mv)
        return new_st

    for element in target:
        st = push(_apply(game, st, 0), 0)
        st = push(_forced(game, st), 0)
        kids = tree.children(st.cur)
        st = push(_apply(game, st, kids[0][-1]), kids[0][-1])
        st = push(_forced(game, st), 0)
        kids = tree.children(st.cur)
        if element == kids[0][-1]:
            mv = 0
        elif len(kids) == 2 and element == kids[1][-1]:
            mv = element
        else:
            raise ReductionError(f"{element!r} does not label a successor of {st.cur!r}")
        st = push(_apply(game, st, mv), mv)
        st = push(_forced(game, st), 0)
    st = push(_apply(game, st, 1), 1)
    return st, moves


def encode_build_moves(game: ReductionGame, target: Seq) -> list[int]:
    """Move list realizing phase 1 for ``target``, ending on the signal."""
    return _drive_phase1(game, target)[1]


def _query_u0(game: ReductionGame, policy: ReductionPolicy, target: Seq) -> int:
    st, _ = _drive_phase1(game, target)
    for kind in ("answer", "confirmation"):
        move = policy.moves.get(st)
        if move is None:
            raise StrategyNotWinning(f"no {kind} recorded after t={target!r}")
        try:
            st = _apply(game, st, move)
        except ReductionError:
            raise StrategyNotWinning(f"illegal {kind} {move} after t={target!r}") from None
        if kind == "answer":
            st = _forced(game, st)
    return st.u0


def extract_branch(
    tree: FiniteTree, policy: ReductionPolicy, max_steps: int | None = None
) -> BranchReport:
    """Read a branch out of a winning answer policy.

    Round n encodes t = f[:n] and records the policy's answer as f(n);
    the rounds stop at the first 0 claim, whose index is the least n at
    which f[:n] has no successor left to offer.
    """
    game = build_reduction_game(tree)
    limit = max_steps if max_steps is not None else tree.height + 1
    f: list[int] = []
    fail_index: int | None = None
    for n in range(limit + 1):
        answer = _query_u0(game, policy, tuple(f))
        if answer == 0:
            if tree.children(tuple(f)):
                raise StrategyNotWinning(f"claimed no successor at {tuple(f)!r}, which has one")
            fail_index = n
            break
        if tuple(f) + (answer,) not in tree:
            raise StrategyNotWinning(f"answered {answer} off the tree at {tuple(f)!r}")
        f.append(answer)
    return BranchReport(tuple(f), fail_index)


def check_cardinality_bound(tree: FiniteTree, report: BranchReport) -> bool:
    """Size bounds implied by a claim at index F: the whole tree has at
    most 2**(F+1) - 1 nodes, and the subtree below f[:F-j] has at most
    2**(j+1) - 1 nodes for every j up to F."""
    if report.fail_index is None:
        raise ReductionError("branch report carries no fail index")
    F = report.fail_index
    holds = tree.size <= 2 ** (F + 1) - 1 and all(
        subtree(tree, report.f[: F - j]).size <= 2 ** (j + 1) - 1 for j in range(F + 1)
    )
    report.bound_holds = holds
    return holds


@dataclass
class ScanStats:
    positions: int
    max_length: int
    max_moves: int


def scan_positions(game: ReductionGame) -> ScanStats:
    """Exhaustive walk of every legal position.

    Asserts along the way that the mover dictated by the state machine
    matches the mover dictated by ply parity.
    """
    positions = 0
    max_length = 0
    max_moves = 0
    stack: list[tuple[RState, int]] = [(game.initial, 0)]
    while stack:
        st, depth = stack.pop()
        positions += 1
        if depth > max_length:
            max_length = depth
        trans = game.transitions(st)
        if not trans:
            continue
        if game.mover(st) is not mover_at(depth):
            raise ReductionError(f"mover parity broken at depth {depth}: {st!r}")
        if len(trans) > max_moves:
            max_moves = len(trans)
        for _, nxt in trans:
            stack.append((nxt, depth + 1))
    return ScanStats(positions, max_length, max_moves)


def materialize_game_tree(game: ReductionGame) -> FiniteTree:
    """All legal positions as an explicit tree; small sources only."""
    nodes: list[Seq] = []
    stack: list[tuple[RState, Seq]] = [(game.initial, ())]
    while stack:
        st, pos = stack.pop()
        nodes.append(pos)
        for mv, nxt in game.transitions(st):
            stack.append((nxt, pos + (mv,)))
    return FiniteTree(frozenset(nodes))


def horizon_bound(tree: FiniteTree) -> int:
    """Ply budget no legal play can exceed."""
    return 4 * (tree.height + 1) * 3 + 8


def _phase2_pins(tree: FiniteTree, t: Seq, answer: int) -> dict[RState, int]:
    """Pin player II's two phase-2 micro moves at ``t`` to produce
    ``answer`` (0 for the claim)."""
    kids = tree.children(t)
    a_state = _phase2_entry(t)
    if answer == 0:
        a_move, b_move = 0, 0
    elif kids and answer == kids[0][-1]:
        a_move, b_move = answer, 0
    elif len(kids) == 2 and answer == kids[1][-1]:
        a_move, b_move = kids[0][-1], answer
    else:
        raise ReductionError(f"{answer} is not an available answer at {t!r}")
    b_state = replace(a_state, step=MICRO_B, a2=a_move)
    return {a_state: a_move, b_state: b_move}


def realizable_claim_traces(tree: FiniteTree) -> Iterator[tuple[Seq, bool]]:
    """For every node taken as a claimed branch end, whether some winning
    answer policy follows that path and claims exactly there.

    An extraction trace depends only on the phase-2 answers along its own
    path, so pinning those and re-solving decides realizability for all
    winning policies at once.
    """
    game = build_reduction_game(tree)
    for node in tree.sorted_nodes:
        pins: dict[RState, int] = {}
        for i in range(len(node)):
            pins.update(_phase2_pins(tree, node[:i], node[i]))
        pins.update(_phase2_pins(tree, node, 0))
        winner, _ = _solve_states(game, pins)
        yield node, winner is Player.II


def principal_play(game: ReductionGame, result: SolveResult) -> list[int]:
    """One full optimal-versus-leftmost play, for reporting."""
    moves: list[int] = []
    st = game.initial
    while st.phase != 5:
        trans = game.transitions(st)
        if game.mover(st) is result.winner:
            move = result.strategy.moves[st]
            nxt = next(n for mv, n in trans if mv == move)
        else:
            move, nxt = trans[0]
        moves.append(move)
        st = nxt
    return moves
