"""Okumura-Hata path loss and received power.

Units follow the usual Hata convention: carrier in MHz, antenna heights in
metres, distance in kilometres, base-10 logarithms throughout.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

log = logging.getLogger(__name__)

HATA_MAX_MHZ = 1500.0
_warned_out_of_range = False


@dataclass(frozen=True)
class PropagationParams:
    fc_mhz: float = 1800.0
    bs_height_m: float = 100.0
    mobile_height_m: float = 5.0

    def __post_init__(self):
        if not self.fc_mhz > 0:
            raise ValueError("fc_mhz must be positive")
        if not self.bs_height_m > 0:
            raise ValueError("bs_height_m must be positive")
        if not self.mobile_height_m >= 0:
            raise ValueError("mobile_height_m must be non-negative")


def _check_carrier(fc_mhz: float) -> None:
    global _warned_out_of_range
    if fc_mhz > HATA_MAX_MHZ and not _warned_out_of_range:
        _warned_out_of_range = True
        log.warning(
            "carrier %.0f MHz is above the classical Okumura-Hata range (150-1500 MHz); "
            "evaluating the formula as is",
            fc_mhz,
        )


def mobile_correction_db(params: PropagationParams) -> float:
    """Mobile antenna height correction a(h_m) in dB."""
    if not params.fc_mhz > 0:
        raise ValueError("fc_mhz must be positive")
    lf = math.log10(params.fc_mhz)
    return 1.1 * (lf - 0.7) * params.mobile_height_m - (1.56 * lf - 0.8)


def decade_slope_db(params: PropagationParams) -> float:
    """Loss increase per decade of distance."""
    return 44.9 - 6.55 * math.log10(params.bs_height_m)


def path_loss_db(params: PropagationParams, d_km: float) -> float:
    """Median Okumura-Hata path loss in dB at ``d_km`` kilometres.

    Raises
    ------
    ValueError
        If ``d_km`` is not strictly positive.
    """
    if not d_km > 0:
        raise ValueError(f"distance must be positive, got {d_km!r}")
    _check_carrier(params.fc_mhz)
    lf = math.log10(params.fc_mhz)
    return (
        69.55
        + 26.16 * lf
        - 13.82 * math.log10(params.bs_height_m)
        - mobile_correction_db(params)
        + decade_slope_db(params) * math.log10(d_km)
    )


def received_power_w(tx_power_w: float, loss_db: float) -> float:
    if not tx_power_w > 0:
        raise ValueError("transmit power must be positive")
    return tx_power_w * 10.0 ** (-loss_db / 10.0)
