"""Solving games: exit penalties, clopen payoffs, certificates, oracles."""

from bcgames import (
    ClopenAntichain,
    Game,
    brute_force_oracle,
    exit_game,
    first_exit,
    outcome_psi,
    solve,
    validate_tree,
    verify_winning,
)
from bcgames.players import Player

# In the pure exit game the only way to lose is to be forced out of the
# tree: player I steers into (2,), a dead end where II must move.
tree = validate_tree([(), (1,), (2,), (1, 3)])
game = exit_game(tree)
result = solve(game)
print("pure exit game winner:", result.winner)
print("winning strategy keeps:", sorted(result.strategy.nodes))
print("certified:", verify_winning(game, result.strategy) is None)
print("independent oracle says:", brute_force_oracle(game))

# The first player to leave the tree loses, whatever the payoff says.
payoff = ClopenAntichain((), Player.II)
print("I exits first:", outcome_psi(tree, payoff, (9, 0)))
print("II exits first:", outcome_psi(tree, payoff, (1, 9)))
print("first exit of (1, 9):", first_exit(tree, (1, 9)))

# With a payoff, play that survives to the decision depth is judged by it.
full2 = validate_tree([(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)])
payoff = ClopenAntichain((((0,), Player.I),), Player.II)
print("payoff game winner:", solve(Game(full2, payoff, 1)).winner)

# A deliberately bad strategy gets a concrete counterplay back.
from bcgames import validate_restricted

bad = validate_restricted(tree, [(), (1,), (1, 3)], Player.I)
print("counterplay against the bad strategy:", verify_winning(game, bad))
