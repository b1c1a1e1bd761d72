"""Scenario configuration: defaults, YAML loading and validation."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .channels import Strategy

PROBE_MODES = ("borrowed", "native")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class NoiseConfig:
    temperature_k: float = 290.0
    bandwidth_hz: float = 200e3
    # Overrides kTB when set.
    power_w: float | None = None


@dataclass(frozen=True)
class TrafficConfig:
    reference_load_factor: float = 1.5
    other_load_factor: float = 0.5
    mean_holding_s: float = 120.0
    horizon_s: float = 3600.0


@dataclass(frozen=True)
class SweepConfig:
    min_km: float = 0.1
    max_km: float = 1.0
    step_km: float = 0.05
    min_eval_km: float = 0.05
    azimuth_deg: float = 30.0
    azimuth_count: int = 1


@dataclass(frozen=True)
class ScenarioConfig:
    cells_per_cluster: int = 7
    reused_frequencies: int = 3
    gamma_db: float = 9.0
    fc_mhz: float = 1800.0
    tx_power_w: float = 1500.0
    bs_height_m: float = 100.0
    mobile_height_m: float = 5.0
    cell_radius_km: float = 1.0
    channel_count_per_band: int = 10
    inner_fraction: float = 0.5
    grid_rings: int = 4
    strategy: str = "auto"
    # None: ceil(reference offered load - channel_count_per_band).
    borrow_channels: int | None = None
    probe_mode: str = "borrowed"
    monte_carlo_samples: int = 100_000
    seed: int = 1
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def __post_init__(self):
        validate(self)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @property
    def noise_w(self) -> float:
        from .metrics import thermal_noise_w

        if self.noise.power_w is not None:
            return float(self.noise.power_w)
        return thermal_noise_w(self.noise.bandwidth_hz, self.noise.temperature_k)

    @property
    def needed_channels(self) -> int:
        if self.borrow_channels is not None:
            return self.borrow_channels
        offered = self.traffic.reference_load_factor * self.channel_count_per_band
        return max(1, math.ceil(offered - self.channel_count_per_band - 1e-9))

    def sweep_distances_km(self) -> list[float]:
        s = self.sweep
        n = int(math.floor((s.max_km - s.min_km) / s.step_km + 1e-9)) + 1
        return [round(s.min_km + i * s.step_km, 12) for i in range(n)]


def _positive(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ConfigError(name, f"must be a positive number, got {value!r}")


def _non_negative(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value >= 0:
        raise ConfigError(name, f"must be a non-negative number, got {value!r}")


def _integer(name, value, minimum):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(name, f"must be an integer >= {minimum}, got {value!r}")


def validate(cfg: ScenarioConfig) -> None:
    if cfg.cells_per_cluster != 7:
        raise ConfigError("cells_per_cluster", "only 7-cell clusters are supported")
    if cfg.reused_frequencies != 3:
        raise ConfigError("reused_frequencies", "only reuse 3 is supported")
    for name in ("fc_mhz", "tx_power_w", "bs_height_m", "cell_radius_km"):
        _positive(name, getattr(cfg, name))
    _non_negative("mobile_height_m", cfg.mobile_height_m)
    if isinstance(cfg.gamma_db, bool) or not isinstance(cfg.gamma_db, (int, float)) or not math.isfinite(cfg.gamma_db):
        raise ConfigError("gamma_db", f"must be a finite number, got {cfg.gamma_db!r}")
    _integer("channel_count_per_band", cfg.channel_count_per_band, 1)
    _positive("inner_fraction", cfg.inner_fraction)
    if cfg.inner_fraction > 1:
        raise ConfigError("inner_fraction", "must lie in (0, 1]")
    _integer("grid_rings", cfg.grid_rings, 3)
    try:
        Strategy(cfg.strategy)
    except ValueError:
        raise ConfigError("strategy", f"must be one of {[s.value for s in Strategy]}") from None
    if cfg.borrow_channels is not None:
        _integer("borrow_channels", cfg.borrow_channels, 1)
    if cfg.probe_mode not in PROBE_MODES:
        raise ConfigError("probe_mode", f"must be one of {list(PROBE_MODES)}")
    _integer("monte_carlo_samples", cfg.monte_carlo_samples, 0)
    if 0 < cfg.monte_carlo_samples < 10_000:
        raise ConfigError("monte_carlo_samples", "must be 0 (disabled) or >= 10000")
    _integer("seed", cfg.seed, 0)

    _positive("noise.temperature_k", cfg.noise.temperature_k)
    _positive("noise.bandwidth_hz", cfg.noise.bandwidth_hz)
    if cfg.noise.power_w is not None:
        _non_negative("noise.power_w", cfg.noise.power_w)

    t = cfg.traffic
    _non_negative("traffic.reference_load_factor", t.reference_load_factor)
    _non_negative("traffic.other_load_factor", t.other_load_factor)
    _positive("traffic.mean_holding_s", t.mean_holding_s)
    _positive("traffic.horizon_s", t.horizon_s)

    s = cfg.sweep
    for name in ("min_km", "max_km", "step_km", "min_eval_km"):
        _positive(f"sweep.{name}", getattr(s, name))
    if s.min_km < s.min_eval_km:
        raise ConfigError("sweep.min_km", "must not be below sweep.min_eval_km")
    if s.max_km < s.min_km:
        raise ConfigError("sweep.max_km", "must not be below sweep.min_km")
    _integer("sweep.azimuth_count", s.azimuth_count, 1)
    if not isinstance(s.azimuth_deg, (int, float)) or isinstance(s.azimuth_deg, bool):
        raise ConfigError("sweep.azimuth_deg", "must be a number")


_SECTIONS = {"noise": NoiseConfig, "traffic": TrafficConfig, "sweep": SweepConfig}


def _coerce(name, value, default):
    # YAML yields ints for "1"; accept them wherever a float is expected.
    if isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _build(cls, data: dict, prefix: str = ""):
    if not isinstance(data, dict):
        raise ConfigError(prefix.rstrip(".") or "<root>", "expected a mapping")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"{prefix}{key}", "unknown key")
        if key in _SECTIONS and cls is ScenarioConfig:
            kwargs[key] = _build(_SECTIONS[key], value or {}, prefix=f"{key}.")
            continue
        f = fields[key]
        default = f.default if f.default is not dataclasses.MISSING else None
        kwargs[key] = _coerce(f"{prefix}{key}", value, default)
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(prefix.rstrip(".") or "<root>", str(exc)) from None


def config_from_dict(data: dict | None) -> ScenarioConfig:
    return _build(ScenarioConfig, data or {})


def load_config(path) -> ScenarioConfig:
    """Read a YAML scenario file; omitted fields keep their defaults."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"cannot parse {path}: {exc}") from None
    return config_from_dict(data)


def dump_config(cfg: ScenarioConfig, path=None) -> str:
    text = yaml.safe_dump(cfg.to_dict(), sort_keys=False)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
