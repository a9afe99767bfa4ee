"""Flow statistics, replication averaging, and CSV export.

Throughput, loss rate and mean delay are computed per flow over the measured
window (warm-up excluded) and summed per run; replications of one sweep point
are averaged arithmetically with the sample std-dev of the delay retained.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .traffic import DropCause, Packet

CSV_COLUMNS = (
    "scenario", "rat", "ue_count", "offered_mbps_per_ue", "speed_kmh",
    "replications", "throughput_mbps", "loss_rate", "mean_delay_ms",
    "delay_stddev_ms", "seed_base",
)


@dataclass
class FlowStats:
    """Counters for one flow; loss and delay metrics derive from these."""

    flow_id: int
    tx_packets: int = 0
    rx_packets: int = 0
    rx_bytes: int = 0
    delay_sum_s: float = 0.0
    drops_by_cause: dict = field(default_factory=dict)

    def on_created(self) -> None:
        self.tx_packets += 1

    def on_delivered(self, pkt: Packet) -> None:
        self.rx_packets += 1
        self.rx_bytes += pkt.size_bytes
        self.delay_sum_s += pkt.t_delivered - pkt.t_created

    def on_dropped(self, cause: DropCause) -> None:
        key = cause.value
        self.drops_by_cause[key] = self.drops_by_cause.get(key, 0) + 1

    @property
    def dropped_packets(self) -> int:
        return sum(self.drops_by_cause.values())

    def conservation_holds(self) -> bool:
        return self.tx_packets == self.rx_packets + self.dropped_packets


def finalize(stats: FlowStats, duration_s: float):
    """(throughput_bps, loss_rate, mean_delay_s or None) for one drained flow."""
    if duration_s <= 0.0:
        raise ValueError("duration must be > 0")
    throughput = stats.rx_bytes * 8.0 / duration_s
    loss = 0.0 if stats.tx_packets == 0 else 1.0 - stats.rx_packets / stats.tx_packets
    delay = None if stats.rx_packets == 0 else stats.delay_sum_s / stats.rx_packets
    return throughput, loss, delay


@dataclass
class RunResult:
    """Metrics of one run (or of averaged replications of one sweep point)."""

    scenario: str
    rat: str
    sweep_variable: str
    sweep_value: float
    ue_count: int
    offered_mbps_per_ue: float
    speed_kmh: Optional[float]
    throughput_bps: float
    loss_rate: float
    mean_delay_s: Optional[float]
    seed: int
    rep_index: Optional[int] = None
    replications: int = 1
    delay_stddev_s: Optional[float] = None
    flows: list[FlowStats] = field(default_factory=list)


def _sweep_key(r: RunResult):
    return (r.scenario, r.rat, r.sweep_variable, r.sweep_value,
            r.ue_count, r.offered_mbps_per_ue, r.speed_kmh)


def aggregate_replications(results: Sequence[RunResult],
                           seed_base: Optional[int] = None) -> RunResult:
    """Average replications of one sweep point; order of inputs is irrelevant."""
    if not results:
        raise ValueError("nothing to aggregate")
    keys = {_sweep_key(r) for r in results}
    if len(keys) > 1:
        raise ValueError(f"mixed sweep points in aggregation: {sorted(keys)}")
    ordered = sorted(results, key=lambda r: (r.rep_index if r.rep_index is not None else 0))
    first = ordered[0]
    throughput = float(np.mean([r.throughput_bps for r in ordered]))
    loss = float(np.mean([r.loss_rate for r in ordered]))
    delays = [r.mean_delay_s for r in ordered if r.mean_delay_s is not None]
    mean_delay = float(np.mean(delays)) if delays else None
    stddev = float(np.std(delays, ddof=1)) if len(delays) >= 2 else None
    return RunResult(
        scenario=first.scenario, rat=first.rat,
        sweep_variable=first.sweep_variable, sweep_value=first.sweep_value,
        ue_count=first.ue_count, offered_mbps_per_ue=first.offered_mbps_per_ue,
        speed_kmh=first.speed_kmh, throughput_bps=throughput, loss_rate=loss,
        mean_delay_s=mean_delay,
        seed=seed_base if seed_base is not None else first.seed,
        replications=len(ordered), delay_stddev_s=stddev)


def _fmt(value, spec: str = ".6f") -> str:
    if value is None:
        return ""
    return format(value, spec)


def result_row(r: RunResult) -> list[str]:
    return [
        r.scenario,
        r.rat,
        str(r.ue_count),
        _fmt(r.offered_mbps_per_ue, "g"),
        _fmt(r.speed_kmh, "g"),
        str(r.replications),
        _fmt(r.throughput_bps / 1e6),
        _fmt(r.loss_rate),
        _fmt(None if r.mean_delay_s is None else r.mean_delay_s * 1e3),
        _fmt(None if r.delay_stddev_s is None else r.delay_stddev_s * 1e3),
        str(r.seed),
    ]


def export_csv(results: Iterable[RunResult], path: str) -> None:
    """Write one row per (sweep point, rat), ordered by (rat, sweep value)."""
    rows = sorted(results, key=lambda r: (r.rat, r.sweep_value))
    if not rows:
        raise ValueError("no results to export")
    try:
        out = open(path, "w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write results to {path!r}: {exc}") from exc
    with out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(result_row(r))
