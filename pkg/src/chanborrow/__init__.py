"""Dynamic channel borrowing with interference declination in a reuse-3 cellular cluster."""

from .channels import (
    Action,
    BorrowPlan,
    ChannelId,
    ChannelManager,
    ChannelState,
    Region,
    RegionAllocation,
    StalePlanError,
    Status,
    Strategy,
)
from .config import ConfigError, ScenarioConfig, dump_config, load_config
from .estimator import SchemeComparison
from .metrics import (
    LinkSample,
    OutageThreshold,
    capacity,
    outage_closed_form,
    outage_monte_carlo,
    sinr,
)
from .propagation import PropagationParams, mobile_correction_db, path_loss_db, received_power_w
from .report import MetricsReport, emit_csv, emit_summary, run_scenario
from .simulation import ScenarioError
from .topology import Band, BandTag, Cell, HexCoord, Topology, build_topology, cochannel_interferers, distance_m
from .traffic import CallEvent, TrafficProfile, generate_events

__version__ = "0.1.0"
