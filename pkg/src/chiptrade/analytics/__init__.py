"""Post-game measurement: trade datasets, efficiency curves, replays, regret."""

from .complexity import (
    TradeCountEstimate,
    expected_rational_trades,
    trade_counts_by_variant,
)
from .regret import (
    ActionScore,
    RegretLabel,
    classify_actions,
    regret_summary,
    write_regret_csv,
)
from .replay import (
    ACCEPT_INSTEAD,
    DECLINE_INSTEAD,
    PASS_INSTEAD,
    ReplayResult,
    counterfactual_replay,
    replay_with_substitutions,
)
from .trade_space import (
    TradePoint,
    trade_points,
    trade_space_summary,
    write_trade_space_csv,
)
from .trajectory import (
    final_scaled_surplus,
    pareto_for_log,
    surplus_trajectory,
    total_welfare_cents,
    write_trajectories_csv,
)

__all__ = [
    "ACCEPT_INSTEAD",
    "DECLINE_INSTEAD",
    "PASS_INSTEAD",
    "ActionScore",
    "RegretLabel",
    "ReplayResult",
    "TradeCountEstimate",
    "TradePoint",
    "classify_actions",
    "counterfactual_replay",
    "expected_rational_trades",
    "final_scaled_surplus",
    "pareto_for_log",
    "regret_summary",
    "replay_with_substitutions",
    "surplus_trajectory",
    "total_welfare_cents",
    "trade_counts_by_variant",
    "trade_points",
    "trade_space_summary",
    "write_regret_csv",
    "write_trade_space_csv",
    "write_trajectories_csv",
]
