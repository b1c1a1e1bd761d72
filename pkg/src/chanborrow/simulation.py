"""Traffic replay, the borrow event, and probe-link evaluation for both schemes."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import metrics
from .channels import Action, BorrowPlan, ChannelId, ChannelManager, Strategy
from .config import ScenarioConfig
from .propagation import PropagationParams, path_loss_db, received_power_w
from .topology import Topology, build_topology, cochannel_interferers, distance_m
from .traffic import CallEvent, EventKind, TrafficProfile, generate_events

log = logging.getLogger(__name__)

REFERENCE_CELL = 1
SCHEMES = ("conventional", "proposed")


class ScenarioError(RuntimeError):
    """The experiment's premise failed (no saturation, nothing to borrow)."""


@dataclass
class ScenarioState:
    """Everything the probe evaluation needs after the traffic replay."""

    config: ScenarioConfig
    topology: Topology
    plan: BorrowPlan
    borrow_time: float
    managers: dict  # scheme label -> ChannelManager at the end of the horizon
    probe_channel: ChannelId
    blocked_calls: dict  # scheme label -> number of blocked arrivals


def traffic_profile(config: ScenarioConfig, topo: Topology) -> TrafficProfile:
    t = config.traffic
    n = config.channel_count_per_band
    return TrafficProfile.from_loads(
        {REFERENCE_CELL: t.reference_load_factor * n},
        default_load=t.other_load_factor * n,
        mean_holding_s=t.mean_holding_s,
        seed=config.seed,
    )


def _step(mgr: ChannelManager, ev: CallEvent) -> bool:
    """Apply one event; returns False when an arrival is blocked."""
    if ev.kind == EventKind.DEPARTURE:
        if ev.call_id in mgr.calls:
            mgr.release_call(ev.call_id, ev.time)
        return True
    return mgr.admit_call(ev.cell, ev.position, ev.time, call_id=ev.call_id) is not None


def replay(config: ScenarioConfig, topo: Topology | None = None, events=None) -> ScenarioState:
    """Replay the traffic horizon and borrow once, at the first blocked reference-cell call.

    From the borrow instant on, the event stream is replayed twice: once
    with the configured declination strategy and once with the same grants
    but no declination.
    """
    topo = topo or build_topology(config)
    horizon = config.traffic.horizon_s
    if events is None:
        events = generate_events(traffic_profile(config, topo), topo, horizon)
    strategy = Strategy(config.strategy)

    mgr = ChannelManager(topo, config.inner_fraction)
    blocked = 0
    split = None
    for k, ev in enumerate(events):
        if ev.time > horizon:
            break
        if _step(mgr, ev):
            continue
        if ev.cell == REFERENCE_CELL and not mgr.native_free(REFERENCE_CELL):
            split = k
            break
        blocked += 1
    if split is None:
        raise ScenarioError("reference cell never saturated within the traffic horizon")

    trigger = events[split]
    plan = mgr.request_borrow(REFERENCE_CELL, config.needed_channels, strategy)
    if plan.size == 0:
        raise ScenarioError("no borrowable channels in the adjacent cells")
    log.info("borrowed %d channels at t=%.1f s", plan.size, trigger.time)

    managers = {"proposed": mgr.clone(), "conventional": mgr}
    managers["proposed"].apply_plan(plan)
    managers["conventional"].apply_plan(plan.without_neutralizations())

    counts = {}
    for label, m in managers.items():
        n_blocked = blocked
        for ev in events[split:]:
            if ev.time > horizon:
                break
            if not _step(m, ev):
                n_blocked += 1
        counts[label] = n_blocked

    return ScenarioState(
        config=config,
        topology=topo,
        plan=plan,
        borrow_time=trigger.time,
        managers={s: managers[s] for s in SCHEMES},
        probe_channel=select_probe_channel(config, topo, plan),
        blocked_calls={s: counts[s] for s in SCHEMES},
    )


def select_probe_channel(config: ScenarioConfig, topo: Topology, plan: BorrowPlan) -> ChannelId:
    """Pick the probe's channel.

    Borrowed mode prefers the lowest granted channel whose first-tier
    copies were all blocked, so the declination effect is isolated;
    otherwise the lowest granted channel.
    """
    if config.probe_mode == "native":
        return ChannelId(topo.cell(REFERENCE_CELL).band.tag, 0)
    granted = sorted(ch for _, ch in plan.granted())
    for ch in granted:
        actions = plan.actions_for(ch)
        if actions and all(a == Action.BLOCK for a in actions.values()):
            return ch
    return granted[0]


@dataclass(frozen=True)
class ProbeResult:
    scheme: str
    d_km: float
    sinr_linear: float
    capacity_bps_hz: float
    outage_prob: float
    outage_mc: float | None
    active_tier1: int
    active_tier2: int

    @property
    def sinr_db(self) -> float:
        return metrics.linear_to_db(self.sinr_linear)


def _azimuths(config: ScenarioConfig) -> list[float]:
    s = config.sweep
    return [math.radians(s.azimuth_deg + k * 360.0 / s.azimuth_count) for k in range(s.azimuth_count)]


def evaluate_probe(state: ScenarioState, scheme: str, d_km: float, mc_seed: int | None = None) -> ProbeResult:
    """SINR, capacity and outage of a probe user ``d_km`` from the reference BS.

    With several azimuths the linear SINR, capacity and outage are
    averaged over them.
    """
    cfg = state.config
    topo = state.topology
    params = PropagationParams(cfg.fc_mhz, cfg.bs_height_m, cfg.mobile_height_m)
    threshold = metrics.OutageThreshold(cfg.gamma_db)
    n0 = cfg.noise_w
    floor_km = cfg.sweep.min_eval_km
    ref = topo.cell(REFERENCE_CELL)
    mgr = state.managers[scheme]
    ch = state.probe_channel

    activity = mgr.active_cochannel_interferers(topo, REFERENCE_CELL, ch)
    tier1, _ = cochannel_interferers(topo, REFERENCE_CELL, ch.band)
    active = [cid for cid, on in activity if on]
    n1 = sum(1 for cid in active if cid in tier1)

    def loss(dist_km):
        return path_loss_db(params, max(dist_km, floor_km))

    samples = []
    for az in _azimuths(cfg):
        probe = (
            ref.center[0] + 1000.0 * d_km * math.cos(az),
            ref.center[1] + 1000.0 * d_km * math.sin(az),
        )
        s0 = received_power_w(ref.tx_power, loss(d_km))
        interf = [
            received_power_w(topo.cell(cid).tx_power, loss(distance_m(topo.cell(cid).center, probe) / 1000.0))
            for cid in active
        ]
        samples.append(metrics.evaluate_link(d_km, s0, interf, n0, threshold))

    mc = None
    if cfg.monte_carlo_samples:
        seed = cfg.seed if mc_seed is None else mc_seed
        mc = sum(
            metrics.outage_monte_carlo(
                threshold, s.s0_w, s.interferer_powers_w, cfg.monte_carlo_samples, seed, noise_w=n0
            )
            for s in samples
        ) / len(samples)

    k = len(samples)
    return ProbeResult(
        scheme=scheme,
        d_km=d_km,
        sinr_linear=sum(s.sinr_linear for s in samples) / k,
        capacity_bps_hz=sum(s.capacity_bps_hz for s in samples) / k,
        outage_prob=sum(s.outage_prob for s in samples) / k,
        outage_mc=mc,
        active_tier1=n1,
        active_tier2=len(active) - n1,
    )
