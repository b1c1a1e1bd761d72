"""Per-cell channel pools, borrowing and the two interference-declination strategies.

A :class:`ChannelManager` owns the state of every channel in every cell of
a :class:`~chanborrow.topology.Topology`.  A cell natively holds the
channels of its own band; a saturated cell can borrow free channels of the
other two bands from adjacent donors.  The co-channel copies of a borrowed
channel in the other first-tier cells are then either blocked (if idle) or
confined to the inner region of those cells (bifurcation).
"""

from __future__ import annotations

import copy
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .topology import BandTag, Topology, cochannel_interferers, distance_m


class Status(str, Enum):
    FREE = "free"
    OCCUPIED = "occupied"
    BLOCKED = "blocked"
    LENT = "lent"
    BORROWED = "borrowed"


class Region(str, Enum):
    INNER = "inner"
    OUTER = "outer"


class Strategy(str, Enum):
    NONE = "none"
    BLOCKING = "blocking"
    BIFURCATION = "bifurcation"
    AUTO = "auto"


class Action(str, Enum):
    BLOCK = "block"
    BIFURCATE = "bifurcate_inner_only"


class StalePlanError(ValueError):
    """The plan no longer matches the channel state it is applied to."""


class InvariantError(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class ChannelId:
    band: BandTag
    index: int

    def __str__(self):
        return f"{self.band.value}{self.index}"


@dataclass(frozen=True)
class ChannelState:
    status: Status
    call_id: int | None = None
    region: Region | None = None
    # Borrower for LENT, donor for BORROWED.
    peer: int | None = None

    @property
    def busy(self) -> bool:
        return self.call_id is not None


FREE = ChannelState(Status.FREE)
BLOCKED = ChannelState(Status.BLOCKED)


@dataclass(frozen=True)
class Neutralization:
    cell: int
    channel: ChannelId
    action: Action


@dataclass(frozen=True)
class Grant:
    donor: int
    channels: tuple[ChannelId, ...]


@dataclass(frozen=True)
class BorrowPlan:
    reference_cell: int
    strategy: Strategy
    grants: tuple[Grant, ...] = ()
    neutralizations: tuple[Neutralization, ...] = ()

    def granted(self) -> list[tuple[int, ChannelId]]:
        return [(g.donor, ch) for g in self.grants for ch in g.channels]

    @property
    def size(self) -> int:
        return sum(len(g.channels) for g in self.grants)

    def without_neutralizations(self) -> "BorrowPlan":
        """Same grants, no declination: the conventional baseline."""
        return BorrowPlan(self.reference_cell, Strategy.NONE, self.grants, ())

    def actions_for(self, channel: ChannelId) -> dict[int, Action]:
        return {n.cell: n.action for n in self.neutralizations if n.channel == channel}


@dataclass
class RegionAllocation:
    """Inner-region quota for the bifurcated sub-band of one interfering cell."""

    cell: int
    band: BandTag
    subband: set = field(default_factory=set)
    inner_quota: int = 0
    used: int = 0
    # Quota fixed at bifurcation time; extensions above it are returned on release.
    base_quota: int = 0

    @property
    def size(self) -> int:
        return len(self.subband)


class ChannelManager:
    """Mutable channel state of the whole network.

    Parameters
    ----------
    topology : Topology
        Cell layout; every cell gets ``channel_count`` native channels of
        its band.
    inner_fraction : float
        A user is in the inner region when its distance to the serving
        base station is at most ``inner_fraction * radius``.
    """

    def __init__(self, topology: Topology, inner_fraction: float = 0.5):
        if not 0 < inner_fraction <= 1:
            raise ValueError("inner_fraction must lie in (0, 1]")
        self.topology = topology
        self.inner_fraction = float(inner_fraction)
        self.pools: dict[int, dict[ChannelId, ChannelState]] = {}
        for cell in topology.cells:
            tag = cell.band.tag
            self.pools[cell.id] = {
                ChannelId(tag, i): FREE for i in range(cell.band.channel_count)
            }
        self.calls: dict[int, tuple[int, ChannelId]] = {}
        self.regions: dict[tuple[int, BandTag], RegionAllocation] = {}
        self.inner_only: set[tuple[int, ChannelId]] = set()
        self._next_call = itertools.count(1)

    # ------------------------------------------------------------------ queries

    def clone(self) -> "ChannelManager":
        return copy.deepcopy(self)

    def _cell(self, cell_id: int):
        try:
            return self.topology.cell(cell_id)
        except KeyError:
            raise KeyError(f"unknown cell id {cell_id}") from None

    def state(self, cell_id: int, channel: ChannelId) -> ChannelState | None:
        return self.pools[cell_id].get(channel)

    def native_channels(self, cell_id: int) -> list[ChannelId]:
        tag = self._cell(cell_id).band.tag
        return sorted(ch for ch in self.pools[cell_id] if ch.band == tag)

    def borrowed_channels(self, cell_id: int) -> list[ChannelId]:
        return sorted(
            ch for ch, st in self.pools[cell_id].items() if st.status == Status.BORROWED
        )

    def native_free(self, cell_id: int) -> list[ChannelId]:
        return [
            ch for ch in self.native_channels(cell_id)
            if self.pools[cell_id][ch].status == Status.FREE
        ]

    def region_of(self, cell_id: int, position) -> Region:
        cell = self._cell(cell_id)
        d = distance_m(cell.center, position)
        return Region.INNER if d <= self.inner_fraction * cell.radius else Region.OUTER

    def _subband(self, cell_id: int, channel: ChannelId) -> RegionAllocation | None:
        alloc = self.regions.get((cell_id, channel.band))
        if alloc is not None and channel in alloc.subband:
            return alloc
        return None

    # ----------------------------------------------------------------- borrowing

    def _borrowable(self, ref: int, donor: int, channel: ChannelId, strategy: Strategy) -> bool:
        if self.pools[donor].get(channel) != FREE:
            return False
        if self._subband(donor, channel) is not None:
            return False
        if channel in self.pools[ref]:
            return False
        tier1, _ = cochannel_interferers(self.topology, ref, channel.band)
        for other in tier1:
            if other == donor:
                continue
            st = self.pools[other].get(channel)
            if st is None or st.status not in (Status.FREE, Status.OCCUPIED):
                return False
            if strategy == Strategy.BLOCKING and st.status == Status.OCCUPIED:
                return False
        return True

    def donors(self, ref: int, strategy: Strategy) -> dict[int, list[ChannelId]]:
        """Designated donor per foreign band with its borrowable channels, keyed by donor id.

        The donor of a band is the lowest-id adjacent cell of that band that
        has at least one borrowable channel.
        """
        ref_tag = self._cell(ref).band.tag
        chosen: dict[BandTag, int] = {}
        offers: dict[int, list[ChannelId]] = {}
        for nb in self.topology.neighbours(ref):
            tag = self._cell(nb).band.tag
            if tag == ref_tag or tag in chosen:
                continue
            avail = [
                ch for ch in self.native_channels(nb) if self._borrowable(ref, nb, ch, strategy)
            ]
            if avail:
                chosen[tag] = nb
                offers[nb] = avail
        return dict(sorted(offers.items()))

    def request_borrow(self, reference_cell: int, needed: int, strategy=Strategy.AUTO) -> BorrowPlan:
        """Plan a borrow of up to ``needed`` channels for a saturated cell.

        Donors are visited round-robin by ascending id, one channel per
        turn, lowest index first.  Partial grants are returned when the
        donors run dry.  The plan is not applied.
        """
        strategy = Strategy(strategy)
        self._cell(reference_cell)
        if needed < 0:
            raise ValueError("needed must be non-negative")
        if needed == 0:
            return BorrowPlan(reference_cell, strategy)
        if self.native_free(reference_cell):
            raise ValueError(
                f"cell {reference_cell} still has free native channels; borrowing needs saturation"
            )

        offers = self.donors(reference_cell, strategy)
        taken: dict[int, list[ChannelId]] = {d: [] for d in offers}
        cursors = {d: iter(chs) for d, chs in offers.items()}
        remaining = needed
        while remaining and cursors:
            for d in list(cursors):
                ch = next(cursors[d], None)
                if ch is None:
                    del cursors[d]
                    continue
                taken[d].append(ch)
                remaining -= 1
                if not remaining:
                    break

        grants = tuple(Grant(d, tuple(chs)) for d, chs in taken.items() if chs)
        neutralizations = []
        if strategy != Strategy.NONE:
            for donor, ch in ((g.donor, ch) for g in grants for ch in g.channels):
                tier1, _ = cochannel_interferers(self.topology, reference_cell, ch.band)
                for other in tier1:
                    if other == donor:
                        continue
                    neutralizations.append(
                        Neutralization(other, ch, self._pick_action(other, ch, strategy))
                    )
        return BorrowPlan(reference_cell, strategy, grants, tuple(neutralizations))

    def _pick_action(self, cell_id: int, channel: ChannelId, strategy: Strategy) -> Action:
        if strategy == Strategy.BLOCKING:
            return Action.BLOCK
        if strategy == Strategy.BIFURCATION:
            return Action.BIFURCATE
        busy = self.pools[cell_id][channel].status == Status.OCCUPIED
        return Action.BIFURCATE if busy else Action.BLOCK

    def _validate_plan(self, plan: BorrowPlan) -> None:
        ref = plan.reference_cell
        self._cell(ref)
        seen = set()
        expected = set()
        for donor, ch in plan.granted():
            if ch in seen:
                raise StalePlanError(f"channel {ch} granted twice")
            seen.add(ch)
            if donor not in self.topology.neighbours(ref):
                raise StalePlanError(f"donor {donor} is not adjacent to cell {ref}")
            if self.pools[donor].get(ch) != FREE or self._subband(donor, ch) is not None:
                raise StalePlanError(f"channel {ch} is not free at donor {donor}")
            if ch in self.pools[ref]:
                raise StalePlanError(f"cell {ref} already holds channel {ch}")
            if plan.strategy != Strategy.NONE:
                tier1, _ = cochannel_interferers(self.topology, ref, ch.band)
                expected.update((c, ch) for c in tier1 if c != donor)
        got = [(n.cell, n.channel) for n in plan.neutralizations]
        if len(got) != len(set(got)) or set(got) != expected:
            raise StalePlanError("neutralizations do not match the granted channels")
        for n in plan.neutralizations:
            st = self.pools[n.cell].get(n.channel)
            if st is None:
                raise StalePlanError(f"cell {n.cell} has no copy of {n.channel}")
            if n.action == Action.BLOCK and st.status != Status.FREE:
                raise StalePlanError(f"cannot block {n.channel} at cell {n.cell}: {st.status.value}")
            if n.action == Action.BIFURCATE and st.status not in (Status.FREE, Status.OCCUPIED):
                raise StalePlanError(
                    f"cannot bifurcate {n.channel} at cell {n.cell}: {st.status.value}"
                )

    def apply_plan(self, plan: BorrowPlan) -> "ChannelManager":
        """Execute a plan atomically; a stale plan leaves the state untouched."""
        self._validate_plan(plan)
        ref = plan.reference_cell
        for donor, ch in plan.granted():
            self.pools[donor][ch] = ChannelState(Status.LENT, peer=ref)
            self.pools[ref][ch] = ChannelState(Status.BORROWED, peer=donor)
        for n in plan.neutralizations:
            if n.action == Action.BLOCK:
                self.pools[n.cell][n.channel] = BLOCKED
                continue
            alloc = self.regions.setdefault(
                (n.cell, n.channel.band), RegionAllocation(n.cell, n.channel.band)
            )
            if n.channel not in alloc.subband:
                alloc.subband.add(n.channel)
                if self.pools[n.cell][n.channel].busy:
                    alloc.used += 1
                    alloc.inner_quota += 1
                    alloc.base_quota += 1
            self.inner_only.add((ref, n.channel))
        return self

    # ------------------------------------------------------------------- calls

    def admit_call(self, cell_id: int, position, now: float | None = None, call_id: int | None = None):
        """Assign a channel to a new call, or return ``None`` when it is blocked.

        Preference order: unrestricted native channels, then bifurcated
        native channels (inner users only, within quota), then borrowed
        channels (inner users only when bifurcation protects them).  The
        lowest index wins inside each group.
        """
        cell = self._cell(cell_id)
        if not cell.contains(position):
            raise ValueError(f"position {position} lies outside cell {cell_id}")
        region = self.region_of(cell_id, position)
        if call_id is None:
            call_id = next(self._next_call)
            while call_id in self.calls:
                call_id = next(self._next_call)
        elif call_id in self.calls:
            raise ValueError(f"call id {call_id} already active")

        pool = self.pools[cell_id]
        restricted = []
        for ch in self.native_channels(cell_id):
            if pool[ch].status != Status.FREE:
                continue
            alloc = self._subband(cell_id, ch)
            if alloc is None:
                return self._occupy(cell_id, ch, call_id, region)
            restricted.append((ch, alloc))
        if region == Region.INNER:
            for ch, alloc in restricted:
                if alloc.used < alloc.inner_quota or alloc.inner_quota < alloc.size:
                    alloc.used += 1
                    alloc.inner_quota = max(alloc.inner_quota, alloc.used)
                    return self._occupy(cell_id, ch, call_id, region)
        for ch in self.borrowed_channels(cell_id):
            st = pool[ch]
            if st.busy:
                continue
            if (cell_id, ch) in self.inner_only and region != Region.INNER:
                continue
            pool[ch] = ChannelState(Status.BORROWED, call_id, region, st.peer)
            self.calls[call_id] = (cell_id, ch)
            return ch
        return None

    def _occupy(self, cell_id, ch, call_id, region) -> ChannelId:
        self.pools[cell_id][ch] = ChannelState(Status.OCCUPIED, call_id, region)
        self.calls[call_id] = (cell_id, ch)
        return ch

    def release_call(self, call_id: int, now: float | None = None) -> "ChannelManager":
        try:
            cell_id, ch = self.calls.pop(call_id)
        except KeyError:
            raise KeyError(f"unknown call id {call_id}") from None
        st = self.pools[cell_id][ch]
        if st.status == Status.BORROWED:
            self.pools[cell_id][ch] = ChannelState(Status.BORROWED, peer=st.peer)
        else:
            self.pools[cell_id][ch] = FREE
            alloc = self._subband(cell_id, ch)
            if alloc is not None:
                alloc.used -= 1
                if alloc.inner_quota > alloc.base_quota:
                    alloc.inner_quota -= 1
        return self

    # ------------------------------------------------------------- interference

    def active_cochannel_interferers(
        self, topology: Topology | None, reference_cell: int, channel: ChannelId
    ) -> list[tuple[int, bool]]:
        """Activity of every tier-1 then tier-2 co-channel cell on ``channel``.

        A copy is active when it carries a call (native or borrowed);
        free, blocked and lent copies are silent.
        """
        topo = topology or self.topology
        st = self.pools[reference_cell].get(channel)
        if st is None or st.status not in (Status.FREE, Status.OCCUPIED, Status.BORROWED):
            raise ValueError(f"cell {reference_cell} does not hold channel {channel}")
        tier1, tier2 = cochannel_interferers(topo, reference_cell, channel.band)
        out = []
        for cid in tier1 + tier2:
            copy_state = self.pools[cid].get(channel)
            out.append((cid, bool(copy_state is not None and copy_state.busy)))
        return out

    # --------------------------------------------------------------- invariants

    def check_invariants(self) -> None:
        """Raise :class:`InvariantError` on any broken pool invariant."""
        lent = defaultdict(int)
        borrowed = defaultdict(int)
        for cell in self.topology.cells:
            pool = self.pools[cell.id]
            counts = defaultdict(int)
            for ch, st in pool.items():
                if ch.band == cell.band.tag:
                    counts[st.status] += 1
                    if st.status == Status.BLOCKED and st.busy:
                        raise InvariantError(f"blocked channel {ch} at cell {cell.id} carries a call")
                    if st.status == Status.LENT:
                        lent[(cell.id, st.peer, ch)] += 1
                elif st.status == Status.BORROWED:
                    borrowed[(st.peer, cell.id, ch)] += 1
                else:
                    raise InvariantError(f"foreign channel {ch} at cell {cell.id} is {st.status}")
                if st.busy:
                    if self.calls.get(st.call_id) != (cell.id, ch):
                        raise InvariantError(f"call {st.call_id} not registered on {ch}@{cell.id}")
            total = sum(counts[s] for s in (Status.FREE, Status.OCCUPIED, Status.BLOCKED, Status.LENT))
            if total != cell.band.channel_count or sum(counts.values()) != total:
                raise InvariantError(f"channel conservation broken at cell {cell.id}")
        if lent != borrowed:
            raise InvariantError("lent and borrowed channels are not in bijection")
        for (cid, ch) in self.calls.values():
            if not self.pools[cid][ch].busy:
                raise InvariantError(f"registered call on idle channel {ch}@{cid}")
        for alloc in self.regions.values():
            if not 0 <= alloc.used <= alloc.inner_quota <= alloc.size:
                raise InvariantError(f"quota bounds broken at cell {alloc.cell}: {alloc}")
            busy = sum(self.pools[alloc.cell][ch].busy for ch in alloc.subband)
            if busy != alloc.used:
                raise InvariantError(f"quota usage out of sync at cell {alloc.cell}")
            for ch in alloc.subband:
                if self.pools[alloc.cell][ch].status not in (Status.FREE, Status.OCCUPIED):
                    raise InvariantError(f"sub-band channel {ch} at cell {alloc.cell} not native")
