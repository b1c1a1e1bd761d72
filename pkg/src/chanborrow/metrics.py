"""SINR, Shannon capacity and outage probability for one downlink."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BOLTZMANN = 1.380649e-23
MIN_MC_SAMPLES = 10_000


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class OutageThreshold:
    gamma_db: float = 9.0

    @property
    def gamma_linear(self) -> float:
        return db_to_linear(self.gamma_db)

    @classmethod
    def from_linear(cls, gamma_linear: float) -> "OutageThreshold":
        if not gamma_linear > 0:
            raise ValueError("gamma_linear must be positive")
        return cls(linear_to_db(gamma_linear))


@dataclass
class LinkSample:
    d_km: float
    s0_w: float
    interferer_powers_w: list = field(default_factory=list)
    n0_w: float = 0.0
    sinr_linear: float = float("nan")
    capacity_bps_hz: float = float("nan")
    outage_prob: float = float("nan")

    @property
    def sinr_db(self) -> float:
        return linear_to_db(self.sinr_linear)


def thermal_noise_w(bandwidth_hz: float, temperature_k: float = 290.0) -> float:
    """kTB noise power in watts."""
    if bandwidth_hz <= 0 or temperature_k <= 0:
        raise ValueError("bandwidth and temperature must be positive")
    return BOLTZMANN * temperature_k * bandwidth_hz


def _check_powers(powers) -> np.ndarray:
    arr = np.asarray(list(powers), dtype=float)
    if arr.size and (np.any(arr < 0) or not np.all(np.isfinite(arr))):
        raise ValueError("interferer powers must be finite and non-negative")
    return arr


def sinr(s0_w: float, interferer_powers_w, n0_w: float) -> float:
    """Serving power over summed interference plus noise (linear)."""
    if not s0_w > 0:
        raise ValueError("serving power must be positive")
    if n0_w < 0:
        raise ValueError("noise power must be non-negative")
    denom = float(_check_powers(interferer_powers_w).sum()) + n0_w
    if denom <= 0:
        raise ZeroDivisionError("SINR undefined without interference or noise")
    return s0_w / denom


def capacity(sinr_linear: float) -> float:
    """Shannon spectral efficiency in bit/s/Hz."""
    if sinr_linear < 0:
        raise ValueError("SINR must be non-negative")
    return math.log2(1.0 + sinr_linear)


def _gamma(threshold) -> float:
    return threshold.gamma_linear if isinstance(threshold, OutageThreshold) else float(threshold)


def outage_product_form(threshold, s_w: float, interferer_powers_w) -> float:
    """Outage as one minus the product of per-interferer exponentials.

    The product is folded as ``p <- p + p_i (1 - p)`` with
    ``p_i = 1 - exp(-gamma I_i / S)``, which avoids cancellation when the
    outage is small.
    """
    if not s_w > 0:
        raise ValueError("serving power must be positive")
    g = _gamma(threshold)
    p = 0.0
    for i_w in _check_powers(interferer_powers_w):
        p += -math.expm1(-(g / s_w) * i_w) * (1.0 - p)
    return p


def outage_closed_form(threshold, s_w: float, interferer_powers_w) -> float:
    """Outage probability under exponential fading of the serving signal.

    The product over interferers collapses to a single exponential of the
    summed interference; noise is not part of this expression.
    """
    if not s_w > 0:
        raise ValueError("serving power must be positive")
    g = _gamma(threshold)
    total = float(_check_powers(interferer_powers_w).sum())
    return -math.expm1(-(g / s_w) * total)


def outage_monte_carlo(
    threshold,
    s_w: float,
    interferer_powers_w,
    samples: int,
    seed: int,
    noise_w: float = 0.0,
) -> float:
    """Empirical P(SINR < gamma) with exponentially faded serving power of mean ``s_w``.

    Interference is held at its mean; ``noise_w`` defaults to zero so the
    estimate targets the closed form.
    """
    if samples < MIN_MC_SAMPLES:
        raise ValueError(f"need at least {MIN_MC_SAMPLES} samples, got {samples}")
    if not s_w > 0:
        raise ValueError("serving power must be positive")
    g = _gamma(threshold)
    denom = float(_check_powers(interferer_powers_w).sum()) + noise_w
    if denom <= 0:
        return 0.0
    rng = np.random.default_rng(seed)
    faded = rng.exponential(s_w, size=samples)
    return float(np.count_nonzero(faded < g * denom)) / samples


def evaluate_link(d_km, s0_w, interferer_powers_w, n0_w, threshold) -> LinkSample:
    powers = [float(p) for p in interferer_powers_w]
    s = sinr(s0_w, powers, n0_w)
    return LinkSample(
        d_km=d_km,
        s0_w=s0_w,
        interferer_powers_w=powers,
        n0_w=n0_w,
        sinr_linear=s,
        capacity_bps_hz=capacity(s),
        outage_prob=outage_closed_form(threshold, s0_w, powers),
    )
