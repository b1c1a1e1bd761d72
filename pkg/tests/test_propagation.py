import logging
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chanborrow import propagation
from chanborrow.propagation import (
    PropagationParams,
    decade_slope_db,
    mobile_correction_db,
    path_loss_db,
    received_power_w,
)
from oracles import (
    HATA_A_HM_0M_DB,
    HATA_A_HM_5M_DB,
    HATA_DEFAULT_1KM_DB,
    HATA_DEFAULT_500M_DB,
    RX_1500W_1KM_W,
    hata_spreadsheet,
)

DEFAULTS = PropagationParams(1800.0, 100.0, 5.0)

heights = st.floats(1.0, 300.0)
freqs = st.floats(100.0, 3000.0)
dists = st.floats(1e-3, 100.0)


def test_mobile_correction_values():
    assert mobile_correction_db(DEFAULTS) == pytest.approx(HATA_A_HM_5M_DB, abs=1e-3)
    assert mobile_correction_db(PropagationParams(1800.0, 100.0, 0.0)) == pytest.approx(HATA_A_HM_0M_DB, abs=1e-3)


def test_mobile_correction_first_term_vanishes():
    fc = 10 ** 0.7
    a0 = mobile_correction_db(PropagationParams(fc, 30.0, 0.0))
    for hm in (1.0, 5.0, 17.0):
        assert mobile_correction_db(PropagationParams(fc, 30.0, hm)) == pytest.approx(a0, abs=1e-12)


@given(freqs, st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_mobile_correction_linear_in_height(fc, h1, h2):
    f = lambda h: mobile_correction_db(PropagationParams(fc, 30.0, h))
    mid = f((h1 + h2) / 2)
    assert mid == pytest.approx((f(h1) + f(h2)) / 2, abs=1e-9)


def test_path_loss_defaults():
    assert path_loss_db(DEFAULTS, 1.0) == pytest.approx(HATA_DEFAULT_1KM_DB, abs=0.005)
    assert path_loss_db(DEFAULTS, 0.5) == pytest.approx(HATA_DEFAULT_500M_DB, abs=0.01)
    assert path_loss_db(DEFAULTS, 0.5) == pytest.approx(117.292 - 31.8 * math.log10(2), abs=0.01)


@given(freqs, heights, st.floats(0.0, 10.0), dists)
def test_matches_spreadsheet(fc, hb, hm, d):
    p = PropagationParams(fc, hb, hm)
    assert path_loss_db(p, d) == pytest.approx(hata_spreadsheet(fc, hb, hm, d), abs=1e-9)


@given(freqs, heights, dists)
def test_decade_law(fc, hb, d):
    p = PropagationParams(fc, hb, 1.5)
    gap = path_loss_db(p, 10 * d) - path_loss_db(p, d)
    assert gap == pytest.approx(44.9 - 6.55 * math.log10(hb), abs=1e-9)
    assert decade_slope_db(p) == pytest.approx(44.9 - 6.55 * math.log10(hb))


@given(dists, dists)
def test_monotone_in_distance(d1, d2):
    lo, hi = sorted((d1, d2))
    if hi > lo * (1 + 1e-12):
        assert path_loss_db(DEFAULTS, hi) > path_loss_db(DEFAULTS, lo)


@pytest.mark.parametrize("d", [0.0, -1.0])
def test_rejects_non_positive_distance(d):
    with pytest.raises(ValueError):
        path_loss_db(DEFAULTS, d)


def test_param_validation():
    with pytest.raises(ValueError):
        PropagationParams(0.0, 100.0, 5.0)
    with pytest.raises(ValueError):
        PropagationParams(900.0, -1.0, 5.0)
    with pytest.raises(ValueError):
        PropagationParams(900.0, 30.0, -0.1)


def test_received_power_examples():
    assert received_power_w(1500.0, 0.0) == 1500.0
    assert received_power_w(1500.0, 30.0) == pytest.approx(1.5)
    rx = received_power_w(1500.0, path_loss_db(DEFAULTS, 1.0))
    assert rx == pytest.approx(RX_1500W_1KM_W, rel=1e-9)
    assert rx == pytest.approx(2.792e-9, rel=0.01)
    with pytest.raises(ValueError):
        received_power_w(0.0, 10.0)


@given(st.floats(1e-3, 1e4), st.floats(-50, 200), st.floats(-50, 200))
def test_received_power_composes(p, l1, l2):
    direct = received_power_w(p, l1 + l2)
    chained = received_power_w(received_power_w(p, l1), l2)
    assert chained == pytest.approx(direct, rel=1e-12)


def test_out_of_range_carrier_warns_once(caplog, monkeypatch):
    monkeypatch.setattr(propagation, "_warned_out_of_range", False)
    with caplog.at_level(logging.WARNING, logger="chanborrow.propagation"):
        path_loss_db(DEFAULTS, 1.0)
        path_loss_db(DEFAULTS, 2.0)
    assert sum("1800" in r.message for r in caplog.records) == 1
