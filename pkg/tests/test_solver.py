import pytest

from bcgames.lab import game_for, random_payoffs
from bcgames.payoff import ClopenAntichain
from bcgames.players import Player, mover_at
from bcgames.solver import (
    Game,
    Infeasible,
    UndecidedGame,
    brute_force_oracle,
    check_def3_def4,
    decided_prefix,
    def3_winner,
    exit_game,
    solve,
    verify_winning,
)
from bcgames.strategy import (
    enumerate_regular_quotient,
    product_regular,
    restricted_to_regular,
    validate_restricted,
)
from bcgames.payoff import outcome_psi
from bcgames.trees import enumerate_trees, validate_tree

CORPUS_5 = list(enumerate_trees(5))


def small_games(max_size=5, payoffs=4, depth=3, seed=11):
    for index, tree in enumerate(enumerate_trees(max_size)):
        for payoff in random_payoffs(tree, payoffs, seed + index, depth):
            yield game_for(tree, payoff)


def test_solve_pure_exit_examples():
    g = exit_game(validate_tree([(), (1,), (2,), (1, 3)]))
    assert solve(g).winner is Player.I
    assert solve(exit_game(validate_tree([(), (1,)]))).winner is Player.I
    assert solve(exit_game(validate_tree([()]))).winner is Player.II


def test_solve_payoff_example():
    full2 = validate_tree([(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)])
    pay = ClopenAntichain((((0,), Player.I),), Player.II)
    result = solve(Game(full2, pay, 1))
    assert result.winner is Player.I
    assert (0,) in result.strategy.nodes


def test_solve_result_contract():
    g = exit_game(validate_tree([(), (1,), (2,), (1, 3)]))
    result = solve(g)
    assert result.values[()] is result.winner
    assert result.explored == len(result.values)
    validate_restricted(g.tree, result.strategy.nodes, result.winner)
    assert verify_winning(g, result.strategy) is None


def test_undecided_game_rejected():
    pay = ClopenAntichain((((1, 1), Player.I),), Player.II)
    with pytest.raises(UndecidedGame):
        Game(validate_tree([(), (1,), (1, 1)]), pay, 1)


def test_verify_winning_counterplay():
    tree = validate_tree([(), (1,), (2,), (1, 3)])
    g = exit_game(tree)
    losing = validate_restricted(tree, [(), (1,), (1, 3)], Player.I)
    assert verify_winning(g, losing) == (1, 3)
    root_only = validate_restricted(validate_tree([()]), [()], Player.II)
    assert verify_winning(exit_game(validate_tree([()])), root_only) is None


def test_oracle_examples():
    assert brute_force_oracle(exit_game(validate_tree([(), (1,), (2,)]))) is Player.I
    full1 = validate_tree([(), (0,), (1,)])
    assert brute_force_oracle(Game(full1, ClopenAntichain((), Player.II), 0)) is Player.II


def test_oracle_infeasible_cap():
    tree = validate_tree([(), (1,), (2,)])
    with pytest.raises(Infeasible):
        brute_force_oracle(exit_game(tree), cap=1)
    with pytest.raises(Infeasible):
        def3_winner(exit_game(tree), cap=1)


def test_solver_agrees_with_oracle_on_small_corpus():
    for game in small_games():
        assert solve(game).winner is brute_force_oracle(game)


def test_def34_examples():
    assert check_def3_def4(exit_game(validate_tree([()]))).agree
    assert check_def3_def4(exit_game(validate_tree([(), (1,)]))).agree


def test_def34_small_corpus():
    for game in small_games(max_size=4, payoffs=3):
        report = check_def3_def4(game)
        assert report.agree
        assert report.restricted_winner is solve(game).winner


def test_determinacy_and_values_monotone():
    for game in small_games(max_size=5, payoffs=3, seed=23):
        result = solve(game)
        assert result.winner in (Player.I, Player.II)
        for node, value in result.values.items():
            if len(node) == game.decision_depth:
                continue
            kids = game.tree.children(node)
            mover = mover_at(len(node))
            if not kids:
                assert value is mover.other
            else:
                child_values = [result.values[c] for c in kids]
                expected = mover if mover in child_values else mover.other
                assert value is expected


def test_exit_parity_flips_with_dummy_ply():
    for tree in enumerate_trees(6):
        winner = solve(exit_game(tree)).winner
        padded = validate_tree([()] + [(1,) + n for n in tree.nodes])
        assert solve(exit_game(padded)).winner is winner.other


def test_def3_matches_literal_pair_products():
    # a second, fully literal route: enumerate both assignment spaces and
    # score every single pair with the wrapped outcome on the settled play
    for game in small_games(max_size=3, payoffs=3, seed=41):
        sigmas = list(enumerate_regular_quotient(game.tree, Player.I))
        taus = list(enumerate_regular_quotient(game.tree, Player.II))

        def psi_wins(sigma, tau, player):
            play = product_regular(sigma, tau, game.horizon, tree=game.tree)
            settled = decided_prefix(game, play)
            return outcome_psi(game.tree, game.payoff, settled) is player

        one = any(all(psi_wins(s, t, Player.I) for t in taus) for s in sigmas)
        two = any(all(psi_wins(s, t, Player.II) for s in sigmas) for t in taus)
        assert one != two
        literal = Player.I if one else Player.II
        assert def3_winner(game) is literal


def test_conversion_soundness_small():
    # a winning restricted strategy, made regular, still beats every
    # quotiented opponent under the wrapped outcome
    for game in small_games(max_size=4, payoffs=2, seed=5):
        result = solve(game)
        regular = restricted_to_regular(result.strategy)
        owner = result.winner
        opponent_owner = owner.other
        horizon = game.horizon
        for opponent in enumerate_regular_quotient(game.tree, opponent_owner):
            sigma, tau = (regular, opponent) if owner is Player.I else (opponent, regular)
            play = product_regular(sigma, tau, horizon, tree=game.tree)
            settled = decided_prefix(game, play)
            assert outcome_psi(game.tree, game.payoff, settled) is owner
