"""PHY/MAC abstractions: numerology, link adaptation, scheduling, HARQ.

The serving rate is a truncated Shannon map of SNR.  LTE schedules 25
resource blocks per 1 ms subframe with a proportional-fair rule; the mmWave
cell grants whole 0.125 ms slots round-robin.  HARQ retries a failed block up
to ``max_retx`` times with a fixed soft-combining gain per attempt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .engine import RngStream

SUPPORTED_SCS_KHZ = (15, 30, 60, 120)

# Floor for the smoothed served-rate averages; keeps PF ratios finite after
# arbitrarily long idle stretches.
_AVG_FLOOR_BPS = 1e-6


def slot_duration_s(scs_khz: int) -> float:
    """Slot length for a sub-carrier spacing; scales as 15 kHz / SCS ms."""
    if scs_khz not in SUPPORTED_SCS_KHZ:
        raise ValueError(
            f"unsupported sub-carrier spacing {scs_khz} kHz, "
            f"expected one of {SUPPORTED_SCS_KHZ}")
    return 0.001 * 15 / scs_khz


@dataclass(frozen=True)
class Numerology:
    scs_khz: int = 15
    symbols_per_slot: int = 14

    @property
    def slot_duration_s(self) -> float:
        return slot_duration_s(self.scs_khz)


@dataclass(frozen=True)
class LinkAdaptation:
    """Truncated Shannon mapping from SNR to serving rate."""

    overhead: float = 0.75        # fraction of raw capacity delivered
    eff_max: float = 4.5          # spectral-efficiency ceiling, bits/s/Hz
    snr_floor_db: float = -5.0    # below this the link carries nothing

    def __post_init__(self):
        if not 0.0 < self.overhead <= 1.0:
            raise ValueError("overhead must be in (0, 1]")
        if self.eff_max <= 0.0:
            raise ValueError("eff_max must be > 0")


def achievable_rate_bps(snr_db: float, bandwidth_hz: float,
                        la: LinkAdaptation) -> float:
    """Serving rate: bandwidth * overhead * min(log2(1 + SNR), eff_max)."""
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_hz}")
    if snr_db < la.snr_floor_db:
        return 0.0
    eff = min(math.log2(1.0 + 10.0 ** (snr_db / 10.0)), la.eff_max)
    return bandwidth_hz * la.overhead * eff


class SchedulerState:
    """Per-cell scheduler bookkeeping: smoothed served rates and backlogs."""

    def __init__(self, n_ues: int, window_slots: int = 100,
                 slot_s: float = 0.001, init_avg_bps: float = 1000.0):
        if n_ues < 1:
            raise ValueError("need at least one UE")
        if window_slots < 1:
            raise ValueError("smoothing window must be >= 1 slot")
        self.n_ues = n_ues
        self.window = window_slots
        self.slot_s = slot_s
        self.avg_bps = [float(init_avg_bps)] * n_ues
        self.backlog_bytes = [0] * n_ues
        self.rr_pos = 0


def pf_schedule(state: SchedulerState, rates_bps: Sequence[float],
                rb_count: int) -> list[int]:
    """Proportional-fair resource-block allocation for one subframe.

    Every RB goes to the backlogged UE maximising instantaneous rate over
    smoothed served rate, ties to the lowest index.  Because the ratios are
    fixed within a subframe this reduces to walking UEs in ratio order and
    granting each enough RBs to cover its backlog.  Averages are then
    smoothed with the allocation-implied service (zero for unserved UEs).
    """
    if rb_count < 1:
        raise ValueError("resource budget must be >= 1 RB")
    n = state.n_ues
    if len(rates_bps) != n:
        raise ValueError(f"expected {n} rates, got {len(rates_bps)}")
    alloc = [0] * n
    slot_s = state.slot_s
    avg = state.avg_bps

    order = sorted(
        (i for i in range(n) if state.backlog_bytes[i] > 0 and rates_bps[i] > 0.0),
        key=lambda i: (-rates_bps[i] / avg[i], i))
    rb_left = rb_count
    for i in order:
        if rb_left == 0:
            break
        rb_bits = rates_bps[i] * slot_s / rb_count
        need = math.ceil(state.backlog_bytes[i] * 8.0 / rb_bits)
        grant = min(need, rb_left)
        alloc[i] = grant
        rb_left -= grant

    w = state.window
    keep = 1.0 - 1.0 / w
    for i in range(n):
        if alloc[i]:
            served_bits = min(alloc[i] * rates_bps[i] * slot_s / rb_count,
                              state.backlog_bytes[i] * 8.0)
            served_bps = served_bits / slot_s
        else:
            served_bps = 0.0
        avg[i] = max(keep * avg[i] + served_bps / w, _AVG_FLOOR_BPS)
    return alloc


def nr_slot_schedule(state: SchedulerState, slot: int) -> Optional[int]:
    """Round-robin pick of one backlogged UE for a whole slot; None when idle.

    A UE that becomes backlogged mid-rotation joins at its fixed position, so
    no continuously backlogged UE waits more than one full rotation.
    """
    n = state.n_ues
    pos = state.rr_pos
    backlog = state.backlog_bytes
    for j in range(n):
        i = pos + j
        if i >= n:
            i -= n
        if backlog[i] > 0:
            state.rr_pos = i + 1 if i + 1 < n else 0
            return i
    return None


def bler(snr_db: float, threshold_db: float = 3.0,
         steepness_db: float = 1.0) -> float:
    """Block error rate, logistic in SNR: 1 / (1 + exp((snr - thr) / k))."""
    if steepness_db <= 0.0:
        raise ValueError("steepness must be > 0")
    x = (snr_db - threshold_db) / steepness_db
    if x > 700.0:
        return 0.0
    if x < -700.0:
        return 1.0
    return 1.0 / (1.0 + math.exp(x))


@dataclass(frozen=True)
class HarqProcess:
    """Bounded retransmission with soft combining; each retry costs one RTT."""

    max_retx: int = 3
    combining_gain_db: float = 2.0
    rtt_s: float = 0.008
    bler_threshold_db: float = 3.0
    bler_steepness_db: float = 1.0

    def __post_init__(self):
        if self.max_retx < 0:
            raise ValueError("max_retx must be >= 0")
        if self.rtt_s <= 0.0:
            raise ValueError("HARQ round-trip time must be > 0")


class HarqOutcome(NamedTuple):
    delivered: bool
    attempts: int
    added_delay_s: float


def harq_transmit(packet, snr_db: float, harq: HarqProcess,
                  rng: RngStream) -> HarqOutcome:
    """Run one packet through the HARQ chain at a fixed channel SNR.

    Attempt k (1-based) fails with probability bler(snr + (k-1) * gain);
    success on any attempt delivers the packet with (k-1) * rtt extra delay,
    exhaustion after 1 + max_retx failures drops it.
    """
    attempts_max = harq.max_retx + 1
    thr = harq.bler_threshold_db
    steep = harq.bler_steepness_db
    gain = harq.combining_gain_db
    for k in range(1, attempts_max + 1):
        p_fail = bler(snr_db + (k - 1) * gain, thr, steep)
        if rng.random() >= p_fail:
            packet.attempts = k
            return HarqOutcome(True, k, (k - 1) * harq.rtt_s)
    packet.attempts = attempts_max
    return HarqOutcome(False, attempts_max, harq.max_retx * harq.rtt_s)
