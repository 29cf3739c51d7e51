"""Command-line surface: simulate, replicate, analyze, pareto, complexity, serve.

Exit codes: 0 on success, 1 for usage problems (bad flags or argument
values), 2 for runtime failures (missing files, malformed logs, IO errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .analytics import (
    expected_rational_trades,
    final_scaled_surplus,
    pareto_for_log,
    regret_summary,
    total_welfare_cents,
    trade_space_summary,
    write_regret_csv,
    write_trade_space_csv,
    write_trajectories_csv,
)
from .game import config_for_variant
from .pareto import scaled_surplus
from .gamelog import read_log_batch, write_game_log
from .harness import SCRIPTED_RATIONAL_KINDS, game_seed, replicate_game, run_game

VARIANTS = (2, 3, 4)


class UsageError(Exception):
    """Bad flags or argument values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_seats(text: str, n_players: int) -> tuple[str, ...]:
    seats = tuple(s.strip() for s in text.split(","))
    if len(seats) != n_players:
        raise UsageError(f"--seats needs {n_players} comma-separated kinds")
    for kind in seats:
        if kind in SCRIPTED_RATIONAL_KINDS or kind.startswith("llm:"):
            continue
        raise UsageError(
            f"unknown seat kind {kind!r}; use bayesian, greedy, random, "
            "or llm:<profile.json>"
        )
    return seats


def _surplus_summary(finals: list[float], degenerate: int) -> dict:
    n = len(finals)
    mean = float(np.mean(finals)) if finals else None
    se = (
        float(np.std(finals, ddof=1) / np.sqrt(n)) if n > 1 else None
    )
    return {
        "games": n,
        "scaled_surplus_mean": mean,
        "scaled_surplus_se": se,
        "degenerate_games": degenerate,
    }


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _write_logs_streaming(out_path: str, log_iter, summary_extra: dict) -> dict:
    """Write logs as they finish; on failure leave an abort marker behind."""
    finals: list[float] = []
    degenerate = 0
    fh, owned = _open_out(out_path)
    try:
        for log in log_iter:
            write_game_log(log, fh)
            pareto = pareto_for_log(log)
            result = scaled_surplus(
                total_welfare_cents(log, log.final_holdings()), pareto
            )
            finals.append(result.value)
            degenerate += int(result.degenerate)
    except BaseException as exc:
        try:
            fh.write(json.dumps({"kind": "aborted", "error": str(exc)}) + "\n")
        except Exception:
            pass
        raise
    finally:
        if owned:
            fh.close()
    return summary_extra | _surplus_summary(finals, degenerate)


def _emit_summary(summary: dict, logs_went_to_stdout: bool) -> None:
    stream = sys.stderr if logs_went_to_stdout else sys.stdout
    json.dump(summary, stream, indent=2)
    stream.write("\n")


# ----- commands -----


def _cmd_simulate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    config = config_for_variant(args.variant)
    seats = _parse_seats(args.seats, config.n_players)

    def games():
        for index in range(args.n):
            seed = game_seed(args.seed, index)
            yield run_game(
                replace(config, seed=seed),
                seats,
                game_id=f"m{args.seed}-g{index}",
                meta={"master_seed": args.seed, "game_index": index},
            )

    summary = _write_logs_streaming(
        args.out,
        games(),
        {"command": "simulate", "variant": args.variant, "seats": list(seats),
         "master_seed": args.seed},
    )
    _emit_summary(summary, args.out == "-")
    return 0


def _cmd_replicate(args) -> int:
    sources = read_log_batch(args.source)
    if not sources:
        raise UsageError(f"no games found in {args.source}")
    seats = _parse_seats(args.seats, sources[0].config.n_players)
    summary = _write_logs_streaming(
        args.out,
        (replicate_game(source, seats) for source in sources),
        {"command": "replicate", "source": args.source, "seats": list(seats)},
    )
    _emit_summary(summary, args.out == "-")
    return 0


def _cmd_analyze(args) -> int:
    logs = read_log_batch(args.source)
    if not logs:
        raise UsageError(f"no games found in {args.source}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_points = write_trade_space_csv(logs, out_dir / "trade_space.csv")
    n_traj = write_trajectories_csv(logs, out_dir / "trajectories.csv")
    n_regret = write_regret_csv(logs, str(out_dir / "regret.csv"))
    finals = [final_scaled_surplus(log) for log in logs]
    degenerate = sum(pareto_for_log(log).is_degenerate for log in logs)
    summary = {
        "games": len(logs),
        "surplus": _surplus_summary(finals, degenerate),
        "trade_space": trade_space_summary(logs),
        "regret": regret_summary(logs),
        "rows": {
            "trade_space.csv": n_points,
            "trajectories.csv": n_traj,
            "regret.csv": n_regret,
        },
    }
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out_dir / 'trade_space.csv'} ({n_points} rows)")
    print(f"wrote {out_dir / 'trajectories.csv'} ({n_traj} rows)")
    print(f"wrote {out_dir / 'regret.csv'} ({n_regret} rows)")
    print(f"wrote {out_dir / 'summary.json'}")
    return 0


def _cmd_pareto(args) -> int:
    logs = read_log_batch(args.source)
    if not logs:
        raise UsageError(f"no games found in {args.source}")
    for log in logs:
        pareto = pareto_for_log(log)
        final = total_welfare_cents(log, log.final_holdings())
        result = scaled_surplus(final, pareto)
        print(json.dumps({
            "game_id": log.game_id,
            "w_star_cents": pareto.w_star_cents,
            "initial_welfare_cents": pareto.initial_welfare_cents,
            "final_welfare_cents": final,
            "attainable_gain_cents": pareto.attainable_gain_cents,
            "scaled_surplus": result.value,
            "degenerate": result.degenerate,
        }))
    return 0


def _cmd_complexity(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    estimate = expected_rational_trades(
        args.variant,
        n_samples=args.samples,
        seed=args.seed,
        acceptance=args.acceptance,
        sampling=args.sampling,
    )
    print(json.dumps({
        "variant": estimate.n_colors,
        "mean": estimate.mean,
        "std_error": estimate.std_error,
        "n_samples": estimate.n_samples,
        "acceptance": estimate.acceptance,
        "sampling": estimate.sampling,
    }))
    return 0


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app

    app = create_app(
        agent_delay_ms=args.agent_delay_ms,
        session_ttl_minutes=args.ttl_minutes,
        log_dir=args.log_dir,
    )
    host = args.host or os.environ.get("CHIPTRADE_HOST", "127.0.0.1")
    port = args.port if args.port is not None else int(
        os.environ.get("CHIPTRADE_PORT", "8000"))
    uvicorn.run(app, host=host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chiptrade",
        description="Chip-trading bargaining: simulation, analytics, play service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a batch of games to JSONL")
    sim.add_argument("--variant", type=int, choices=VARIANTS, default=3,
                     help="number of chip colors")
    sim.add_argument("--seats", default="bayesian,bayesian,bayesian",
                     help="comma-separated agent kinds, one per seat")
    sim.add_argument("--n", type=int, default=1, help="number of games")
    sim.add_argument("--seed", type=int, default=0, help="master seed")
    sim.add_argument("--out", default="-", help="output JSONL path ('-' = stdout)")
    sim.set_defaults(func=_cmd_simulate)

    rep = sub.add_parser("replicate",
                         help="re-run logged games with a new population")
    rep.add_argument("--from", dest="source", required=True,
                     help="source JSONL log file")
    rep.add_argument("--seats", required=True,
                     help="comma-separated agent kinds, one per seat")
    rep.add_argument("--out", default="-", help="output JSONL path ('-' = stdout)")
    rep.set_defaults(func=_cmd_replicate)

    ana = sub.add_parser("analyze", help="write CSV/JSON analytics for a log file")
    ana.add_argument("--in", dest="source", required=True, help="JSONL log file")
    ana.add_argument("--out", required=True, help="output directory")
    ana.set_defaults(func=_cmd_analyze)

    par = sub.add_parser("pareto",
                         help="per-game welfare ceiling and scaled surplus")
    par.add_argument("--in", dest="source", required=True, help="JSONL log file")
    par.set_defaults(func=_cmd_pareto)

    com = sub.add_parser("complexity",
                         help="estimate the mutually rational offer count")
    com.add_argument("--variant", type=int, choices=VARIANTS, default=3)
    com.add_argument("--samples", type=int, default=20_000)
    com.add_argument("--seed", type=int, default=0)
    com.add_argument("--acceptance", choices=("sampled", "prior"),
                     default="sampled")
    com.add_argument("--sampling", choices=("grid", "continuous"),
                     default="grid")
    com.set_defaults(func=_cmd_complexity)

    srv = sub.add_parser("serve", help="start the interactive play service")
    srv.add_argument("--host", default=None,
                     help="bind address (default 127.0.0.1, env CHIPTRADE_HOST)")
    srv.add_argument("--port", type=int, default=None,
                     help="bind port (default 8000, env CHIPTRADE_PORT)")
    srv.add_argument("--agent-delay-ms", type=float, default=None,
                     help="pause before each agent action "
                          "(default 800, env CHIPTRADE_AGENT_DELAY_MS)")
    srv.add_argument("--ttl-minutes", type=float, default=None,
                     help="idle minutes before a session is abandoned "
                          "(default 60, env CHIPTRADE_TTL_MINUTES)")
    srv.add_argument("--log-dir", default=None,
                     help="flush finished game logs here "
                          "(env CHIPTRADE_LOG_DIR)")
    srv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (KeyboardInterrupt, SystemExit):
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
