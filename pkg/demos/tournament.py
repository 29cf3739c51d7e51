"""Compare agent populations on identical bargaining tables.

Runs a batch of fully rational games per variant, then replays every
table with weaker populations so the comparison is paired: same
valuations, same turn order, only the minds differ.

    python3 demos/tournament.py
"""

import math

from chiptrade import config_for_variant
from chiptrade.analytics import final_scaled_surplus, pareto_for_log, regret_summary
from chiptrade.harness import replicate_game, run_batch

GAMES = 40
MASTER_SEED = 20240901
POPULATIONS = {
    "bayesian": ("bayesian", "bayesian", "bayesian"),
    "greedy": ("greedy", "greedy", "greedy"),
    "random": ("random", "random", "random"),
}


def mean_se(values):
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def main():
    print(f"{GAMES} games per variant, master seed {MASTER_SEED}")
    print()
    header = f"{'variant':>7}  " + "  ".join(f"{name:>16}" for name in POPULATIONS)
    print(header)

    regret_rows = {}
    for variant in (2, 3, 4):
        config = config_for_variant(variant)
        base = run_batch(config, POPULATIONS["bayesian"], GAMES, MASTER_SEED)

        # one Pareto solve per table, shared across populations
        ceilings = [pareto_for_log(log) for log in base]

        scores = {}
        for name, seats in POPULATIONS.items():
            if name == "bayesian":
                logs = base
            else:
                logs = [replicate_game(log, seats) for log in base]
            finals = [
                final_scaled_surplus(log, ceiling)
                for log, ceiling in zip(logs, ceilings)
            ]
            scores[name] = mean_se(finals)
            if name == "bayesian":
                regret_rows[variant] = regret_summary(logs)

        cells = "  ".join(
            f"{mean:10.3f} ({se:.3f})" for mean, se in scores.values()
        )
        print(f"{variant:>7}  {cells}")

    print()
    print("regret labels across the rational games (actions by outcome):")
    labels = ("NoRegret", "ForcedRegret", "UnforcedRegret", "Unscored")
    for variant, summary in regret_rows.items():
        counts = {label: 0 for label in labels}
        for per_kind in summary.values():
            for label in labels:
                counts[label] += per_kind.get(label, 0)
        line = ", ".join(f"{label} {n}" for label, n in counts.items())
        print(f"  {variant} colors: {line}")


if __name__ == "__main__":
    main()
