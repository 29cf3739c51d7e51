"""Monte Carlo size of the mutually-rational offer space at the start state.

For freshly drawn valuations, count the offers a proposer strictly gains
from that at least one opponent would also strictly gain by accepting. The
mean count per proposer is a scalar gauge of how much room the market
leaves for profitable deals as the number of chip colors grows.

Acceptance can be judged two ways: against the opponents actually sampled
in the draw ("sampled", the default) or against the best case over the
value range, i.e. any opponent type could profit ("prior"). Private values
come from the trading grid by default; "continuous" draws them uniformly
over the same range instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..game import GameConfig, config_for_variant

ACCEPTANCE_MODES = ("sampled", "prior")
SAMPLING_MODES = ("grid", "continuous")


@dataclass(frozen=True)
class TradeCountEstimate:
    mean: float
    std_error: float
    n_samples: int
    n_colors: int
    acceptance: str
    sampling: str


def _as_config(config_or_colors: Union[GameConfig, int]) -> GameConfig:
    if isinstance(config_or_colors, GameConfig):
        return config_or_colors
    return config_for_variant(int(config_or_colors))


def expected_rational_trades(
    config_or_colors: Union[GameConfig, int],
    n_samples: int = 20_000,
    seed: int = 0,
    acceptance: str = "sampled",
    sampling: str = "grid",
    batch_size: int = 4096,
) -> TradeCountEstimate:
    """Estimate the per-proposer count of mutually profitable opening offers.

    One sample is one fresh valuation draw for all players; its value is the
    count averaged over the proposer seats. Returns the sample mean with its
    standard error.
    """
    if acceptance not in ACCEPTANCE_MODES:
        raise ValueError(f"acceptance must be one of {ACCEPTANCE_MODES}")
    if sampling not in SAMPLING_MODES:
        raise ValueError(f"sampling must be one of {SAMPLING_MODES}")
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")

    config = _as_config(config_or_colors)
    k = config.n_colors
    n = config.n_players
    grid = config.value_grid().astype(np.float64)
    numeraire = float(config.numeraire_cents)
    vmin, vmax = float(config.value_min_cents), float(config.value_max_cents)

    qty = np.arange(1, config.endowment + 1, dtype=np.float64)
    give_q, get_q = (a.ravel() for a in np.meshgrid(qty, qty, indexing="ij"))

    # best-case acceptance per offer grid, used by the "prior" mode:
    # some opponent value vector answers yes iff max(v_give)*x > min(v_get)*y
    def column_range(color: int) -> tuple[float, float]:
        if color == 0:
            return numeraire, numeraire
        if sampling == "grid":
            return float(grid[0]), float(grid[-1])
        return vmin, vmax

    rng = np.random.default_rng(seed)
    per_draw = np.empty(n_samples, dtype=np.float64)
    done = 0
    while done < n_samples:
        b = min(batch_size, n_samples - done)
        if sampling == "grid":
            private = grid[rng.integers(0, len(grid), size=(b, n, k - 1))]
        else:
            private = rng.uniform(vmin, vmax, size=(b, n, k - 1))
        vals = np.concatenate(
            [np.full((b, n, 1), numeraire), private], axis=2
        )

        counts = np.zeros((b, n), dtype=np.int64)
        for give in range(k):
            for get in range(k):
                if give == get:
                    continue
                cost = vals[:, :, give, None] * give_q
                gain = vals[:, :, get, None] * get_q
                proposer_gains = gain > cost          # (b, n, offers)
                if acceptance == "prior":
                    give_hi = column_range(give)[1]
                    get_lo = column_range(get)[0]
                    answerable = give_hi * give_q > get_lo * get_q
                    for i in range(n):
                        counts[:, i] += (
                            proposer_gains[:, i] & answerable
                        ).sum(axis=1)
                else:
                    responder_gains = cost > gain
                    for i in range(n):
                        others = [j for j in range(n) if j != i]
                        takers = responder_gains[:, others].any(axis=1)
                        counts[:, i] += (
                            proposer_gains[:, i] & takers
                        ).sum(axis=1)
        per_draw[done:done + b] = counts.mean(axis=1)
        done += b

    mean = float(per_draw.mean())
    std_error = float(per_draw.std(ddof=1) / np.sqrt(n_samples))
    return TradeCountEstimate(
        mean=mean,
        std_error=std_error,
        n_samples=n_samples,
        n_colors=k,
        acceptance=acceptance,
        sampling=sampling,
    )


def trade_counts_by_variant(
    variants: tuple[int, ...] = (2, 3, 4),
    n_samples: int = 20_000,
    seed: int = 0,
    **kwargs,
) -> dict[int, TradeCountEstimate]:
    """Run the estimator across color-count variants with one seed."""
    return {
        v: expected_rational_trades(v, n_samples, seed + v, **kwargs)
        for v in variants
    }
