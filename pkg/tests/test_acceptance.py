"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run directly with ``python tests/test_acceptance.py`` or through pytest.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import HATA_DEFAULT_1KM_DB, check_plan_against_oracle, random_walk  # noqa: E402

from chanborrow import (  # noqa: E402
    ChannelManager,
    OutageThreshold,
    PropagationParams,
    ScenarioConfig,
    Strategy,
    build_topology,
    emit_csv,
    outage_closed_form,
    outage_monte_carlo,
    path_loss_db,
    run_scenario,
)
from chanborrow.channels import Action  # noqa: E402
from chanborrow.metrics import outage_product_form  # noqa: E402


def _random_outage_instance(rng):
    gamma_db = rng.uniform(0.0, 15.0)
    s_w = 10 ** rng.uniform(-12, -6)
    k = int(rng.integers(1, 9))
    # interference spread so that p covers roughly 1e-4 .. 0.99
    interf = s_w * 10 ** rng.uniform(-5.0, 0.0, size=k)
    return OutageThreshold(gamma_db), s_w, interf


def criterion_1():
    params = PropagationParams(1800.0, 100.0, 5.0)
    t = time.perf_counter()
    loss = path_loss_db(params, 1.0)
    dt = time.perf_counter() - t
    ok = abs(loss - 117.292) <= 0.005 and abs(loss - HATA_DEFAULT_1KM_DB) < 1e-9 and dt < 1e-3
    return ok, f"L(1 km) = {loss:.6f} dB in {dt * 1e6:.1f} us"


def criterion_2():
    rng = np.random.default_rng(20240202)
    worst = 0.0
    n = 2000
    for _ in range(n):
        thr, s_w, interf = _random_outage_instance(rng)
        a = outage_product_form(thr, s_w, interf)
        b = outage_closed_form(thr, s_w, interf)
        worst = max(worst, abs(a - b) / abs(b))
    return worst <= 1e-12, f"{n} instances, worst relative gap {worst:.2e}"


def criterion_3():
    rng = np.random.default_rng(31337)
    n, samples = 100, 10**6
    t = time.perf_counter()
    misses = []
    worst = 0.0
    for i in range(n):
        thr, s_w, interf = _random_outage_instance(rng)
        p = outage_closed_form(thr, s_w, interf)
        mc = outage_monte_carlo(thr, s_w, interf, samples, seed=i)
        bound = 3 * math.sqrt(p * (1 - p) / samples)
        worst = max(worst, abs(mc - p) / bound)
        if abs(mc - p) > bound:
            misses.append(i)
    dt = time.perf_counter() - t
    ok = not misses and dt < 30.0
    return ok, f"{n} instances x 1e6 samples, worst |mc-p| = {worst:.2f} of bound, misses {misses}, {dt:.1f} s"


_SCENARIO = {}


def _default_run():
    if "report" not in _SCENARIO:
        t = time.perf_counter()
        _SCENARIO["report"] = run_scenario(ScenarioConfig(strategy="auto"))
        _SCENARIO["elapsed"] = time.perf_counter() - t
    return _SCENARIO["report"], _SCENARIO["elapsed"]


def criterion_4():
    rep, dt = _default_run()
    conv, prop = rep.scheme_rows("conventional"), rep.scheme_rows("proposed")
    problems = []
    for name, rows in (("conventional", conv), ("proposed", prop)):
        s = [r.sinr_db for r in rows]
        if not all(b < a for a, b in zip(s, s[1:])):
            problems.append(f"{name} not strictly decreasing")
    strict = 0
    for c, p in zip(conv, prop):
        if p.sinr_db < c.sinr_db:
            problems.append(f"order broken at {c.distance_km}")
        if p.active_tier1 != c.active_tier1:
            strict += 1
            if not p.sinr_db > c.sinr_db:
                problems.append(f"no strict gain at {c.distance_km}")
    if dt >= 1.0:
        problems.append(f"runtime {dt:.2f} s")
    gap = [p.sinr_db - c.sinr_db for c, p in zip(conv, prop)]
    detail = f"{len(conv)} points, {strict} with differing tier-1 count, gain {min(gap):.2f}..{max(gap):.2f} dB, {dt:.2f} s"
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def criterion_5():
    rep, _ = _default_run()
    worst = 0.0
    for r in rep.rows:
        want = math.log2(1 + 10 ** (r.sinr_db / 10))
        worst = max(worst, abs(r.capacity_bps_hz - want) / want)
    conv, prop = rep.scheme_rows("conventional"), rep.scheme_rows("proposed")
    ordered = all(p.capacity_bps_hz >= c.capacity_bps_hz for c, p in zip(conv, prop))
    decreasing = all(
        all(b.capacity_bps_hz < a.capacity_bps_hz for a, b in zip(rows, rows[1:])) for rows in (conv, prop)
    )
    strict = all(
        p.capacity_bps_hz > c.capacity_bps_hz for c, p in zip(conv, prop) if p.active_tier1 != c.active_tier1
    )
    ok = worst <= 1e-12 and ordered and decreasing and strict
    return ok, f"worst relative gap {worst:.1e}, ordered={ordered}, decreasing={decreasing}"


def criterion_6():
    rep, _ = _default_run()
    conv, prop = rep.scheme_rows("conventional"), rep.scheme_rows("proposed")
    ordered = all(p.outage_prob <= c.outage_prob for c, p in zip(conv, prop))
    rising = all(all(b.outage_prob >= a.outage_prob for a, b in zip(rows, rows[1:])) for rows in (conv, prop))
    span = f"conventional {conv[0].outage_prob:.3g}..{conv[-1].outage_prob:.3g}, proposed {prop[0].outage_prob:.3g}..{prop[-1].outage_prob:.3g}"
    return ordered and rising, f"ordered={ordered}, non-decreasing={rising}; {span}"


def criterion_7():
    from collections import Counter

    topo = build_topology(ScenarioConfig(channel_count_per_band=3, grid_rings=3))
    episodes, steps = 40, 250
    tally = Counter()
    t = time.perf_counter()
    try:
        for ep in range(episodes):
            tally += random_walk(ChannelManager(topo), np.random.default_rng([7, ep]), steps)
    except AssertionError as exc:
        return False, f"violation after {sum(tally.values())} events: {exc}"
    dt = time.perf_counter() - t
    events = tally["admit"] + tally["blocked"] + tally["release"] + tally["borrow"]
    detail = (
        f"{events} events ({tally['admit']} admitted, {tally['blocked']} blocked, {tally['release']} released, "
        f"{tally['borrow']} borrows granting {tally['granted']} channels), {dt:.1f} s"
    )
    return events == episodes * steps, detail


def criterion_8(tmp_dir):
    cfg = ScenarioConfig(seed=11)
    paths = [Path(tmp_dir) / f"run{i}.csv" for i in range(2)]
    for p in paths:
        emit_csv(run_scenario(cfg), p)
    a, b = (p.read_bytes() for p in paths)
    return a == b and len(a) > 0, f"{len(a)} bytes each, identical={a == b}"


def criterion_9():
    cfg = ScenarioConfig()
    mgr = ChannelManager(build_topology(cfg))
    while mgr.admit_call(1, mgr.topology.cell(1).center) is not None:
        pass
    plan = mgr.request_borrow(1, 4, Strategy.AUTO)
    bands = {ch.band.value for _, ch in plan.granted()}
    donors = {g.donor for g in plan.grants}
    by_band = {}
    for n in plan.neutralizations:
        by_band.setdefault(n.channel.band.value, set()).add(n.cell)
    actions = {n.action for n in plan.neutralizations}
    check_plan_against_oracle(mgr, plan, 4, Strategy.AUTO)
    ok = bands == {"B", "C"} and donors == {2, 3} and by_band == {"B": {4, 6}, "C": {5, 7}} and actions == {Action.BLOCK}
    return ok, f"granted {sorted(str(ch) for _, ch in plan.granted())} from cells {sorted(donors)}, neutralized {by_band}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def _report(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, tmp_path, capsys):
    fn = CRITERIA[n - 1]
    ok, detail = fn(tmp_path) if n == 8 else fn()
    with capsys.disabled():
        print("\n" + _report(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for n, fn in enumerate(CRITERIA, 1):
            ok, detail = fn(tmp) if n == 8 else fn()
            print(_report(n, ok, detail))
            failed += not ok
    sys.exit(1 if failed else 0)
