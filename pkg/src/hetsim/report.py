"""Run summaries, convergence detection, comparison, and CSV output."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .domain import ALL_NETWORKS, NetworkKind
from .engine import CycleRecord

#: Default convergence rule: at most 1 handoff/cycle sustained for 20 cycles.
DEFAULT_THRESHOLD = 1
DEFAULT_WINDOW = 20

CSV_COLUMNS = (
    "cycle", "time_s", "count_dsrc", "count_lte", "count_wifi", "handoffs",
    "avg_score", "score_dsrc", "score_lte", "score_wifi",
    "delay_dsrc", "delay_lte", "delay_wifi",
    "plr_dsrc", "plr_lte", "plr_wifi",
    "jit_dsrc", "jit_lte", "jit_wifi",
)


@dataclass(frozen=True)
class RunSummary:
    """Aggregate view of one run.

    pingpong_index is the mean handoffs per cycle after convergence, or
    over the whole run when convergence never happened; per-network mean
    counts follow the same region.
    """

    converged_at_cycle: int | None
    pingpong_index: float
    total_handoffs: int
    mean_avg_score: float
    mean_counts: dict[NetworkKind, float]


@dataclass(frozen=True)
class ComparisonSummary:
    """Game-vs-baseline comparison over the same scenario."""

    handoff_rate_ratio: float
    game_per_terminal_prob: float
    baseline_per_terminal_prob: float
    game_converged_at: int | None
    baseline_converged_at: int | None
    game_pingpong_index: float
    baseline_pingpong_index: float
    game_total_handoffs: int
    baseline_total_handoffs: int


def detect_convergence(handoffs_series: list[int], threshold: int = DEFAULT_THRESHOLD,
                       window: int = DEFAULT_WINDOW) -> int | None:
    """First cycle from which handoffs stay <= threshold for `window` cycles."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    run = 0
    for idx, value in enumerate(handoffs_series):
        run = run + 1 if value <= threshold else 0
        if run >= window:
            return idx - window + 1
    return None


def summarize(records: list[CycleRecord], threshold: int = DEFAULT_THRESHOLD,
              window: int = DEFAULT_WINDOW) -> RunSummary:
    """Collapse a record list into a RunSummary."""
    if not records:
        raise ValueError("cannot summarize an empty run")
    handoffs = [r.handoffs for r in records]
    converged_at = detect_convergence(handoffs, threshold, window)
    region = records[converged_at:] if converged_at is not None else records
    return RunSummary(
        converged_at_cycle=converged_at,
        pingpong_index=sum(r.handoffs for r in region) / len(region),
        total_handoffs=sum(handoffs),
        mean_avg_score=sum(r.avg_score for r in records) / len(records),
        mean_counts={net: sum(r.counts[net] for r in region) / len(region)
                     for net in ALL_NETWORKS},
    )


def _row(record: CycleRecord) -> str:
    d, l, w = ALL_NETWORKS
    cells = [
        str(record.cycle),
        f"{record.time_s:.6f}",
        str(record.counts[d]), str(record.counts[l]), str(record.counts[w]),
        str(record.handoffs),
        f"{record.avg_score:.6f}",
        f"{record.net_score[d]:.6f}", f"{record.net_score[l]:.6f}",
        f"{record.net_score[w]:.6f}",
        f"{record.net_delay[d]:.6f}", f"{record.net_delay[l]:.6f}",
        f"{record.net_delay[w]:.6f}",
        f"{record.net_plr[d]:.6f}", f"{record.net_plr[l]:.6f}",
        f"{record.net_plr[w]:.6f}",
        f"{record.net_jit[d]:.6f}", f"{record.net_jit[l]:.6f}",
        f"{record.net_jit[w]:.6f}",
    ]
    return ",".join(cells)


def render_csv(records: list[CycleRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(_row(r) for r in records)
    return "\n".join(lines) + "\n"


def write_csv(records: list[CycleRecord], destination: str | Path) -> None:
    """Write one row per cycle; floats rendered with 6 decimal digits."""
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(records))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {destination}: {exc}") from exc


def compare(game: RunSummary, baseline: RunSummary) -> ComparisonSummary:
    """Relate the game run to the baseline run of the same scenario."""
    total = sum(game.mean_counts.values())
    if baseline.pingpong_index > 0:
        ratio = game.pingpong_index / baseline.pingpong_index
    else:
        ratio = 1.0 if game.pingpong_index == 0 else float("inf")
    return ComparisonSummary(
        handoff_rate_ratio=ratio,
        game_per_terminal_prob=game.pingpong_index / total,
        baseline_per_terminal_prob=baseline.pingpong_index / total,
        game_converged_at=game.converged_at_cycle,
        baseline_converged_at=baseline.converged_at_cycle,
        game_pingpong_index=game.pingpong_index,
        baseline_pingpong_index=baseline.pingpong_index,
        game_total_handoffs=game.total_handoffs,
        baseline_total_handoffs=baseline.total_handoffs,
    )


def format_summary(summary: RunSummary) -> str:
    converged = ("never" if summary.converged_at_cycle is None
                 else f"cycle {summary.converged_at_cycle}")
    counts = ", ".join(f"{net.value}={summary.mean_counts[net]:.2f}"
                       for net in ALL_NETWORKS)
    return "\n".join([
        f"converged:        {converged}",
        f"pingpong index:   {summary.pingpong_index:.4f} handoffs/cycle",
        f"total handoffs:   {summary.total_handoffs}",
        f"mean avg score:   {summary.mean_avg_score:.4f}",
        f"mean counts:      {counts}",
    ])


def format_comparison(cmp: ComparisonSummary) -> str:
    game_conv = ("never" if cmp.game_converged_at is None
                 else f"cycle {cmp.game_converged_at}")
    base_conv = ("never" if cmp.baseline_converged_at is None
                 else f"cycle {cmp.baseline_converged_at}")
    return "\n".join([
        f"handoff rate ratio (game/baseline): {cmp.handoff_rate_ratio:.4f}",
        f"game:     {cmp.game_pingpong_index:.4f} handoffs/cycle "
        f"({cmp.game_per_terminal_prob:.4f} per terminal), "
        f"total {cmp.game_total_handoffs}, converged {game_conv}",
        f"baseline: {cmp.baseline_pingpong_index:.4f} handoffs/cycle "
        f"({cmp.baseline_per_terminal_prob:.4f} per terminal), "
        f"total {cmp.baseline_total_handoffs}, converged {base_conv}",
    ])
