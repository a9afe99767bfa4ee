"""Deterministic discrete-event core: virtual clock, priority queue, RNG substreams.

One :class:`Simulator` instance drives one simulation run.  Instances share no
state, so independent replications may run concurrently in separate processes.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass
from typing import Callable, Optional


class SchedulingInPastError(ValueError):
    """Raised when an event is scheduled before the current virtual clock."""


@dataclass(frozen=True, slots=True)
class SimEvent:
    """One timestamped action; (time, sequence) gives the total processing order."""

    time: float
    sequence: int
    kind: str
    detail: str


def _label_seed(label: str, seed: int) -> int:
    # sha256 keeps the label -> stream mapping stable across platforms and
    # Python versions, unlike the built-in hash().
    digest = hashlib.sha256(f"{label}:{seed}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class RngStream:
    """Named deterministic random substream.

    Identical (label, seed) pairs always yield the identical draw sequence;
    distinct labels are seeded independently so that adding draws to one
    subsystem never perturbs another's sequence.
    """

    __slots__ = ("label", "seed", "_rng", "random", "gauss")

    def __init__(self, label: str, seed: int):
        self.label = label
        self.seed = seed
        self._rng = random.Random(_label_seed(label, seed))
        # Bound methods cached for the hot paths.
        self.random = self._rng.random
        self.gauss = self._rng.gauss

    def uniform(self, a: float, b: float) -> float:
        return self._rng.uniform(a, b)

    def normal(self, sigma: float) -> float:
        return self._rng.gauss(0.0, sigma)

    def __repr__(self) -> str:  # pragma: no cover
        return f"RngStream(label={self.label!r}, seed={self.seed})"


def rng_stream(label: str, seed: int) -> RngStream:
    """Return the deterministic substream identified by (label, seed)."""
    return RngStream(label, seed)


class Simulator:
    """Single-threaded event loop over a (time, sequence)-ordered queue.

    Simultaneous events are processed in insertion order, which makes every
    run reproducible bit for bit.  An optional trace sink receives one
    ``SimEvent`` per processed event.
    """

    def __init__(self, trace: Optional[Callable[[SimEvent], None]] = None):
        self._heap: list[tuple[float, int, Callable[[], None], str, str]] = []
        self._now = 0.0
        self._seq = 0
        self._processed = 0
        self._trace = trace

    @property
    def now(self) -> float:
        return self._now

    @property
    def processed_events(self) -> int:
        return self._processed

    def schedule(self, time: float, action: Callable[[], None],
                 kind: str = "event", detail: str = "") -> int:
        """Enqueue *action* at virtual *time*; returns the unique event id."""
        if time < self._now:
            raise SchedulingInPastError(
                f"cannot schedule at t={time}: clock already at {self._now}")
        seq = self._seq
        self._seq = seq + 1
        heapq.heappush(self._heap, (time, seq, action, kind, detail))
        return seq

    def peek_time(self) -> Optional[float]:
        """Timestamp of the next pending event, or None when the queue is empty."""
        return self._heap[0][0] if self._heap else None

    def run(self, until: float) -> int:
        """Process every event with time <= until; leaves the clock at *until*."""
        if until < self._now:
            raise SchedulingInPastError(
                f"cannot run to t={until}: clock already at {self._now}")
        heap = self._heap
        pop = heapq.heappop
        trace = self._trace
        count = 0
        while heap and heap[0][0] <= until:
            time, seq, action, kind, detail = pop(heap)
            self._now = time
            if trace is not None:
                trace(SimEvent(time, seq, kind, detail))
            action()
            count += 1
        self._now = until
        self._processed += count
        return count


def format_trace_line(event: SimEvent) -> str:
    """Canonical trace format: time<TAB>sequence<TAB>kind<TAB>detail."""
    return f"{event.time:.9f}\t{event.sequence}\t{event.kind}\t{event.detail}"
