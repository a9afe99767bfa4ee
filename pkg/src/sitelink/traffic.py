"""Constant-bitrate video sources (camera avatars), per-UE queues, and the sink.

Video is abstracted as fixed-size UDP datagrams emitted on a strict CBR grid;
there is no codec or jitter model.  Queues are drop-tail.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class DropCause(str, Enum):
    NONE = "none"
    QUEUE_OVERFLOW = "queue_overflow"
    HARQ_EXHAUSTED = "harq_exhausted"
    OUT_OF_COVERAGE = "out_of_coverage"


@dataclass(frozen=True)
class VideoStream:
    """One camera uplink flow: CBR packets of a fixed size."""

    flow_id: int
    rate_bps: float
    packet_size_bytes: int = 1250
    start_s: float = 0.0
    stop_s: float = 20.0

    def __post_init__(self):
        if self.rate_bps <= 0.0:
            raise ValueError("stream rate must be > 0")
        if not 0 < self.packet_size_bytes <= 1500:
            raise ValueError("packet size must be in 1..1500 bytes")
        if self.start_s > self.stop_s:
            raise ValueError("stream start must not be after stop")

    @property
    def interval_s(self) -> float:
        return self.packet_size_bytes * 8.0 / self.rate_bps


def cbr_emit_times(stream: VideoStream) -> list[float]:
    """Packet creation times: start, start + T, ... strictly before stop.

    Times are computed as start + k * T (not accumulated) so a given stream
    always yields the identical grid.
    """
    times = []
    interval = stream.interval_s
    k = 0
    while True:
        t = stream.start_s + k * interval
        if t >= stream.stop_s:
            return times
        times.append(t)
        k += 1


@dataclass(slots=True)
class Packet:
    """One video datagram; the unit of loss and delay accounting."""

    flow_id: int
    seq: int
    size_bytes: int
    t_created: float
    t_delivered: Optional[float] = None
    attempts: int = 0
    drop_cause: DropCause = DropCause.NONE


class FlowQueue:
    """Drop-tail FIFO with a fixed packet capacity."""

    __slots__ = ("capacity", "_q", "bytes")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("queue capacity must be >= 1")
        self.capacity = capacity
        self._q: deque[Packet] = deque()
        self.bytes = 0

    def __len__(self) -> int:
        return len(self._q)

    def offer(self, pkt: Packet) -> bool:
        """Enqueue unless full; a rejected packet is marked queue_overflow."""
        if len(self._q) >= self.capacity:
            pkt.drop_cause = DropCause.QUEUE_OVERFLOW
            return False
        self._q.append(pkt)
        self.bytes += pkt.size_bytes
        return True

    def head(self) -> Optional[Packet]:
        return self._q[0] if self._q else None

    def pop(self) -> Packet:
        pkt = self._q.popleft()
        self.bytes -= pkt.size_bytes
        return pkt

    def drain(self) -> list[Packet]:
        out = list(self._q)
        self._q.clear()
        self.bytes = 0
        return out


class DuplicateDeliveryError(Exception):
    """Same (flow, seq) handed to the sink twice."""


class Sink:
    """Receiving endpoint; stamps deliveries and rejects duplicates."""

    def __init__(self):
        self._seen: dict[int, set[int]] = {}

    def receive(self, pkt: Packet, t: float) -> None:
        if t < pkt.t_created:
            raise ValueError("delivery before creation")
        seen = self._seen.setdefault(pkt.flow_id, set())
        if pkt.seq in seen:
            raise DuplicateDeliveryError(
                f"flow {pkt.flow_id} seq {pkt.seq} delivered twice")
        seen.add(pkt.seq)
        pkt.t_delivered = t
