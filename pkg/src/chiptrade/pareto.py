"""Welfare ceiling for a game position, and surplus scaled against it.

The ceiling is the value of a continuous reallocation program: maximize total
chip wealth over fractional allocations that conserve each color's total and
leave every player at least as wealthy as their starting position. The LP
route uses a mature solver; an independent exhaustive integer search is kept
alongside it so small instances can cross-check the bound (the LP relaxation
must always weakly dominate the integer optimum).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

# Final welfare values are rounded to 1e-6 dollars = 1e-4 cents.
_ROUND_DECIMALS = 4


@dataclass(frozen=True)
class ParetoResult:
    """Outcome of the reallocation program for one game position."""

    w_star_cents: float
    optimal_allocation: np.ndarray  # (n_players, n_colors) floats
    floors_cents: np.ndarray        # per-player initial welfare, ints
    initial_welfare_cents: int      # sum of floors
    solver_status: str

    @property
    def attainable_gain_cents(self) -> float:
        return self.w_star_cents - self.initial_welfare_cents

    @property
    def is_degenerate(self) -> bool:
        """True when no full cent of total surplus is attainable."""
        return self.attainable_gain_cents < 1.0


@dataclass(frozen=True)
class ScaledSurplus:
    """Observed welfare gain as a fraction of the attainable gain."""

    value: float
    degenerate: bool


def initial_welfare_floors(
    valuations_cents: np.ndarray, initial_holdings: np.ndarray
) -> np.ndarray:
    return np.einsum("pc,pc->p", valuations_cents, initial_holdings).astype(np.int64)


def pareto_optimum(
    valuations_cents: np.ndarray, initial_holdings: np.ndarray
) -> ParetoResult:
    """Solve the continuous reallocation program.

    Constraints: per-color conservation (equality), per-player final wealth at
    least initial wealth, non-negative allocations. The optimum value is
    unique even when the maximizing allocation is not.
    """
    vals = np.asarray(valuations_cents, dtype=np.float64)
    init = np.asarray(initial_holdings, dtype=np.float64)
    if vals.shape != init.shape:
        raise ValueError("valuations and holdings must have matching shapes")
    n, k = vals.shape
    floors = initial_welfare_floors(valuations_cents, initial_holdings)

    c = -vals.ravel()  # maximize total welfare
    a_eq = np.zeros((k, n * k))
    for g in range(k):
        a_eq[g, g::k] = 1.0
    b_eq = init.sum(axis=0)
    a_ub = np.zeros((n, n * k))
    for p in range(n):
        a_ub[p, p * k : (p + 1) * k] = -vals[p]
    b_ub = -floors.astype(np.float64)

    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, method="highs")
    if res.status != 0:
        raise RuntimeError(f"reallocation program failed: {res.message}")

    initial_total = int(floors.sum())
    w_star = round(float(-res.fun), _ROUND_DECIMALS)
    # The starting allocation is always feasible, so clip solver noise from below.
    w_star = max(w_star, float(initial_total))
    return ParetoResult(
        w_star_cents=w_star,
        optimal_allocation=res.x.reshape(n, k),
        floors_cents=floors,
        initial_welfare_cents=initial_total,
        solver_status="optimal",
    )


def scaled_surplus(observed_welfare_cents: float, pareto: ParetoResult) -> ScaledSurplus:
    """Map observed total welfare onto [0, 1] against the attainable gain.

    Degenerate positions (under one cent attainable) score 1.0 when the
    observed welfare is at least the initial welfare and 0.0 otherwise.
    """
    gain = observed_welfare_cents - pareto.initial_welfare_cents
    if pareto.is_degenerate:
        return ScaledSurplus(1.0 if gain >= 0 else 0.0, True)
    return ScaledSurplus(gain / pareto.attainable_gain_cents, False)


# ===== Independent integer search =====


def _compositions(total: int, parts: int) -> np.ndarray:
    """All ways to split ``total`` identical chips among ``parts`` players."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        block = np.empty((len(rest), parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        rows.append(block)
    return np.concatenate(rows, axis=0)


def integer_welfare_oracle(
    valuations_cents: np.ndarray,
    initial_holdings: np.ndarray,
    max_total_per_color: int = 12,
) -> int:
    """Exact optimum of the reallocation program over whole-chip allocations.

    Exhaustive search with pruning; shares no code with the LP route. Only
    meant for small instances: refuses colors whose circulating total exceeds
    ``max_total_per_color``.
    """
    vals = np.asarray(valuations_cents, dtype=np.int64)
    init = np.asarray(initial_holdings, dtype=np.int64)
    n, k = vals.shape
    totals = init.sum(axis=0)
    if (totals > max_total_per_color).any():
        raise ValueError(
            f"instance too large for exhaustive search (>{max_total_per_color} "
            "chips in one color)"
        )
    floors = initial_welfare_floors(vals, init)

    # Per color: every split, its per-player contribution, sorted richest first.
    contrib_tables: list[np.ndarray] = []
    total_tables: list[np.ndarray] = []
    for g in range(k):
        comps = _compositions(int(totals[g]), n)
        contrib = comps * vals[:, g]
        tot = contrib.sum(axis=1)
        order = np.argsort(-tot, kind="stable")
        contrib_tables.append(contrib[order])
        total_tables.append(tot[order])

    # Suffix bounds over the remaining colors: the best conceivable total, and
    # the most any single player could still gain.
    tail_best = np.zeros(k + 1, dtype=np.int64)
    tail_player_max = np.zeros((k + 1, n), dtype=np.int64)
    for g in range(k - 1, -1, -1):
        tail_best[g] = tail_best[g + 1] + total_tables[g][0]
        tail_player_max[g] = tail_player_max[g + 1] + totals[g] * vals[:, g]

    best = int(floors.sum())  # the starting allocation is always feasible

    def search(g: int, partial_w: np.ndarray, partial_tot: int) -> None:
        nonlocal best
        if g == k - 1:
            w = partial_w + contrib_tables[g]
            feasible = (w >= floors).all(axis=1)
            if feasible.any():
                cand = partial_tot + int(total_tables[g][feasible].max())
                if cand > best:
                    best = cand
            return
        for contrib, tot in zip(contrib_tables[g], total_tables[g]):
            if partial_tot + tot + tail_best[g + 1] <= best:
                break  # splits are sorted, nothing further can win
            w = partial_w + contrib
            if ((w + tail_player_max[g + 1]) < floors).any():
                continue  # some floor is already unreachable
            search(g + 1, w, partial_tot + int(tot))

    search(0, np.zeros(n, dtype=np.int64), 0)
    return best


def brute_force_integer_welfare(
    valuations_cents: np.ndarray, initial_holdings: np.ndarray
) -> int:
    """Unpruned cross-product search. Test reference only; tiny instances."""
    vals = np.asarray(valuations_cents, dtype=np.int64)
    init = np.asarray(initial_holdings, dtype=np.int64)
    n, k = vals.shape
    floors = initial_welfare_floors(vals, init)
    per_color = [_compositions(int(t), n) for t in init.sum(axis=0)]
    best = int(floors.sum())
    for combo in itertools.product(*per_color):
        alloc = np.stack(combo, axis=1)  # (n, k)
        w = np.einsum("pc,pc->p", vals, alloc)
        if (w >= floors).all():
            best = max(best, int(w.sum()))
    return best
