"""Distance-sweep experiment and its CSV / text outputs."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .config import ScenarioConfig
from .estimator import SchemeComparison
from .simulation import SCHEMES

CSV_COLUMNS = (
    "distance_km",
    "scheme",
    "sinr_db",
    "capacity_bps_hz",
    "outage_prob",
    "active_tier1",
    "active_tier2",
)


@dataclass(frozen=True)
class ReportRow:
    distance_km: float
    scheme: str
    sinr_db: float
    capacity_bps_hz: float
    outage_prob: float
    active_tier1: int
    active_tier2: int
    outage_mc: float | None = None


@dataclass
class MetricsReport:
    rows: list
    metadata: dict = field(default_factory=dict)

    def scheme_rows(self, scheme: str) -> list[ReportRow]:
        return [r for r in self.rows if r.scheme == scheme]

    def distances(self) -> list[float]:
        return [r.distance_km for r in self.scheme_rows(SCHEMES[0])]

    def validate(self) -> None:
        keys = [(r.distance_km, r.scheme) for r in self.rows]
        if len(keys) != len(set(keys)):
            raise ValueError("duplicate (distance, scheme) rows")
        for s in {r.scheme for r in self.rows}:
            d = [r.distance_km for r in self.scheme_rows(s)]
            if any(b <= a for a, b in zip(d, d[1:])):
                raise ValueError(f"distances not strictly increasing for scheme {s}")


def run_scenario(config: ScenarioConfig) -> MetricsReport:
    """Run the full experiment: replay, borrow, then sweep the probe over distance."""
    est = SchemeComparison(config).fit()
    dists = config.sweep_distances_km()
    results = est.evaluate(dists)
    rows = []
    for i, d in enumerate(dists):
        for s in SCHEMES:
            r = results[s][i]
            rows.append(
                ReportRow(d, s, r.sinr_db, r.capacity_bps_hz, r.outage_prob,
                          r.active_tier1, r.active_tier2, r.outage_mc)
            )
    st = est.state_
    meta = {
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "strategy": config.strategy,
        "probe_channel": str(st.probe_channel),
        "borrow_time_s": st.borrow_time,
        "granted": {str(g.donor): [str(c) for c in g.channels] for g in st.plan.grants},
        "neutralizations": [(n.cell, str(n.channel), n.action.value) for n in st.plan.neutralizations],
        "blocked_calls": dict(st.blocked_calls),
    }
    report = MetricsReport(rows, meta)
    report.validate()
    return report


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def csv_text(report: MetricsReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(report: MetricsReport, path) -> None:
    report.validate()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(report))


OUTAGE_COLUMNS = ("distance_km", "scheme", "outage_prob", "outage_mc_with_noise")


def outage_companion_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + "_outage.csv")


def emit_outage_csv(report: MetricsReport, path) -> bool:
    """Closed-form and noise-inclusive Monte-Carlo outage side by side.

    Written only when the report carries Monte-Carlo values; returns
    whether a file was produced.
    """
    if any(r.outage_mc is None for r in report.rows):
        return False
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OUTAGE_COLUMNS)
    for r in report.rows:
        w.writerow([_fmt(r.distance_km), r.scheme, _fmt(r.outage_prob), _fmt(r.outage_mc)])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return True


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        out = []
        for rec in csv.DictReader(fh):
            out.append({
                "distance_km": float(rec["distance_km"]),
                "scheme": rec["scheme"],
                "sinr_db": float(rec["sinr_db"]),
                "capacity_bps_hz": float(rec["capacity_bps_hz"]),
                "outage_prob": float(rec["outage_prob"]),
                "active_tier1": int(rec["active_tier1"]),
                "active_tier2": int(rec["active_tier2"]),
            })
        return out


SUMMARY_PREAMBLE = 3
SUMMARY_FOOTER = 4


def deltas(report: MetricsReport) -> list[tuple[float, float, float, float]]:
    """Per-distance (distance, dSINR dB, dCapacity, dOutage), proposed minus conventional."""
    conv = {r.distance_km: r for r in report.scheme_rows("conventional")}
    out = []
    for p in report.scheme_rows("proposed"):
        c = conv[p.distance_km]
        out.append((
            p.distance_km,
            p.sinr_db - c.sinr_db,
            p.capacity_bps_hz - c.capacity_bps_hz,
            p.outage_prob - c.outage_prob,
        ))
    return out


def emit_summary(report: MetricsReport) -> str:
    """Text table of proposed-minus-conventional deltas per distance.

    Layout: ``SUMMARY_PREAMBLE`` header lines, one line per sweep
    distance, then ``SUMMARY_FOOTER`` lines (rule plus min/mean/max).
    """
    rows = deltas(report)
    meta = report.metadata
    lines = [
        f"# seed={meta.get('seed')} strategy={meta.get('strategy')} "
        f"config={meta.get('config_hash')} probe={meta.get('probe_channel')}",
        f"{'d_km':>8} {'dSINR_dB':>10} {'dCap_bpsHz':>11} {'dOutage':>11}",
        "-" * 43,
    ]
    for d, ds, dc, do in rows:
        lines.append(f"{d:8.3f} {ds:10.4f} {dc:11.5f} {do:11.6f}")
    lines.append("-" * 43)
    cols = list(zip(*rows))[1:] if rows else [[0.0], [0.0], [0.0]]
    for name, fn in (("min", min), ("mean", statistics.fmean), ("max", max)):
        ds, dc, do = (fn(c) for c in cols)
        lines.append(f"{name:>8} {ds:10.4f} {dc:11.5f} {do:11.6f}")
    return "\n".join(lines) + "\n"
