"""Poisson call arrivals with exponential holding times."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .topology import Topology, random_point_in_cell


class EventKind(str, Enum):
    ARRIVAL = "arrival"
    DEPARTURE = "departure"


@dataclass(frozen=True)
class CallEvent:
    kind: EventKind
    time: float
    cell: int
    call_id: int
    position: tuple[float, float] | None = None

    def sort_key(self):
        return (self.time, self.call_id, self.kind == EventKind.DEPARTURE)


@dataclass(frozen=True)
class TrafficProfile:
    """Per-cell arrival rates (calls/s), mean holding time (s) and seed.

    Cells missing from ``rates`` fall back to ``default_rate``.
    """

    rates: dict = field(default_factory=dict)
    mean_holding_s: float = 120.0
    seed: int = 0
    default_rate: float = 0.0

    def __post_init__(self):
        if not self.mean_holding_s > 0:
            raise ValueError("mean_holding_s must be positive")
        if self.default_rate < 0 or any(r < 0 for r in self.rates.values()):
            raise ValueError("arrival rates must be non-negative")

    def rate(self, cell_id: int) -> float:
        return float(self.rates.get(cell_id, self.default_rate))

    @classmethod
    def from_loads(cls, loads_erlang: dict, default_load: float, mean_holding_s: float, seed: int):
        """Build a profile from offered loads in Erlang (rate = load / holding time)."""
        return cls(
            rates={c: a / mean_holding_s for c, a in loads_erlang.items()},
            mean_holding_s=mean_holding_s,
            seed=seed,
            default_rate=default_load / mean_holding_s,
        )


def generate_events(profile: TrafficProfile, topo: Topology, horizon: float) -> list[CallEvent]:
    """Arrivals over ``[0, horizon)`` and their departures, sorted by time.

    Every cell draws from its own stream seeded by ``(seed, cell id)``, so
    one cell's rate never perturbs another cell's calls.  Departures are
    emitted for every arrival; replaying code drops those of blocked calls.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    arrivals = []
    for cell in topo.cells:
        lam = profile.rate(cell.id)
        if lam == 0:
            continue
        rng = np.random.default_rng([int(profile.seed) & 0xFFFFFFFFFFFFFFFF, cell.id])
        n = rng.poisson(lam * horizon)
        times = np.sort(rng.uniform(0.0, horizon, size=n))
        holds = rng.exponential(profile.mean_holding_s, size=n)
        for t, h in zip(times, holds):
            pos = random_point_in_cell(cell, rng)
            arrivals.append((float(t), float(h), cell.id, pos))

    arrivals.sort(key=lambda a: (a[0], a[2]))
    events = []
    for call_id, (t, h, cid, pos) in enumerate(arrivals, start=1):
        events.append(CallEvent(EventKind.ARRIVAL, t, cid, call_id, pos))
        # a zero-length hold must still depart strictly after arriving
        leave = max(t + h, float(np.nextafter(t, np.inf)))
        events.append(CallEvent(EventKind.DEPARTURE, leave, cid, call_id))
    events.sort(key=CallEvent.sort_key)
    return events
