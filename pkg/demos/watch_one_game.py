"""Narrate a single game between three different scripted agents.

Run from the repository root:

    python3 demos/watch_one_game.py
"""

from chiptrade import config_for_variant, run_game, welfare_cents
from chiptrade.analytics import final_scaled_surplus, pareto_for_log, surplus_trajectory

VARIANT = 3
SEED = 42
POPULATION = ("bayesian", "greedy", "random")


def dollars(cents):
    return f"${cents / 100:.2f}"


def describe_offer(offer):
    return (f"{offer.give_qty} {offer.give_color} for "
            f"{offer.get_qty} {offer.get_color}")


def main():
    config = config_for_variant(VARIANT, seed=SEED)
    log = run_game(config, POPULATION)

    print(f"game {log.game_id or '(unnamed)'}: {VARIANT} colors, seed {SEED}")
    print(f"turn order {list(log.turn_order)}, numeraire "
          f"{config.colors[0]} at {dollars(config.numeraire_cents)} per chip")
    print()
    print("private valuation tables (cents per chip):")
    for seat, kind in enumerate(POPULATION):
        row = ", ".join(
            f"{color}={log.valuations_cents[seat, i]}"
            for i, color in enumerate(config.colors)
        )
        print(f"  seat {seat} ({kind}): {row}")
    print()

    holdings = log.initial_holdings
    for record in log.records:
        label = f"r{record.round_index}t{record.turn_index % config.n_players}"
        who = f"seat {record.proposer} ({POPULATION[record.proposer]})"
        if record.offer is None:
            note = "flagged invalid, treated as a pass" if record.invalid_proposal \
                else "passes"
            print(f"{label}: {who} {note}")
        else:
            print(f"{label}: {who} offers {describe_offer(record.offer)}")
            for seat in sorted(record.responses):
                resp = record.responses[seat]
                verdict = "accept" if resp.accepted else "decline"
                if resp.coerced:
                    verdict += " (cannot pay, coerced to decline)"
                print(f"        seat {seat} would {verdict}")
            if record.executed:
                print(f"        executes with seat {record.selected_acceptor}")
            else:
                print("        no effective acceptance, nothing trades")
        holdings = record.post_holdings

    print()
    print("final holdings:")
    for seat in range(config.n_players):
        row = ", ".join(
            f"{holdings[seat, i]} {color}" for i, color in enumerate(config.colors)
        )
        value = welfare_cents(log.valuations_cents[seat], holdings[seat])
        print(f"  seat {seat}: {row}  worth {dollars(value)}")

    pareto = pareto_for_log(log)
    path = surplus_trajectory(log, pareto)
    print()
    print(f"welfare ceiling {dollars(round(pareto.w_star_cents))}, "
          f"started at {dollars(pareto.initial_welfare_cents)}")
    print("scaled surplus after each turn: "
          + " ".join(f"{x:.3f}" for x in path))
    print(f"captured {final_scaled_surplus(log, pareto):.3f} of the attainable gain")


if __name__ == "__main__":
    main()
