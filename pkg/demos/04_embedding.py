"""Embedding any binary choice tree into the {0,1} tree and pulling a
winning strategy back."""

from bcgames import (
    ClopenAntichain,
    Game,
    build_rho,
    pull_back_strategy,
    push_game,
    solve,
    validate_tree,
    verify_winning,
)
from bcgames.players import Player

tree = validate_tree([(), (1,), (2,), (1, 3)])
rho = build_rho(tree)
print("node -> image:")
for node in tree:
    print(f"  {node} -> {rho(node)}")
print("image tree:", sorted(rho.range_tree.nodes))

# The payoff transports entry by entry; winners survive the trip.
payoff = ClopenAntichain((((1, 3), Player.I),), Player.II)
game = Game(tree, payoff, 2)
pushed = push_game(rho, game)
print("pushed entries:", pushed.payoff.entries)

source = solve(game)
image = solve(pushed)
print("source winner:", source.winner, "| image winner:", image.winner)

pulled = pull_back_strategy(rho, image.strategy)
print("pulled-back strategy:", sorted(pulled.nodes))
print("certified on the source game:", verify_winning(game, pulled) is None)
