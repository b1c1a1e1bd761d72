"""Command line entry point: ``chanborrow run|sweep|validate``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .channels import Strategy
from .config import ConfigError, ScenarioConfig, load_config
from .report import deltas, emit_csv, emit_outage_csv, emit_summary, outage_companion_path, run_scenario
from .simulation import ScenarioError

OUT_DIR_ENV = "CHANBORROW_OUT_DIR"


def _config_from_args(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    changes = {}
    if getattr(args, "strategy", None):
        changes["strategy"] = args.strategy
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        changes["monte_carlo_samples"] = args.samples
    return cfg.replace(**changes) if changes else cfg


def _default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "results"))


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    report = run_scenario(cfg)
    out = Path(args.out) if args.out else _default_out_dir() / f"scenario_seed{cfg.seed}.csv"
    emit_csv(report, out)
    sys.stdout.write(emit_summary(report))
    print(f"wrote {out}")
    companion = outage_companion_path(out)
    if emit_outage_csv(report, companion):
        print(f"wrote {companion}")
    return 0


def _run_one(cfg: ScenarioConfig):
    report = run_scenario(cfg)
    return cfg.seed, report


def cmd_sweep(args) -> int:
    base = _config_from_args(args)
    configs = [base.replace(seed=base.seed + k) for k in range(args.seeds)]
    out_dir = Path(args.out) if args.out else _default_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [_run_one(c) for c in configs]
    print(f"{'seed':>6} {'min_dSINR_dB':>13} {'max_dSINR_dB':>13} {'max_dOutage':>12}")
    for seed, report in sorted(results, key=lambda t: t[0]):
        out = out_dir / f"scenario_seed{seed}.csv"
        emit_csv(report, out)
        emit_outage_csv(report, outage_companion_path(out))
        ds = [r[1] for r in deltas(report)]
        do = [r[3] for r in deltas(report)]
        print(f"{seed:>6} {min(ds):13.4f} {max(ds):13.4f} {max(do):12.6f}")
    print(f"wrote {len(results)} files to {out_dir}")
    return 0


def cmd_validate(args) -> int:
    cfg = _config_from_args(args)
    print(f"ok: config {cfg.config_hash()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chanborrow", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="YAML scenario file")
        p.add_argument("--strategy", choices=[s.value for s in Strategy])
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int, help="Monte-Carlo outage samples (0 disables)")

    p_run = sub.add_parser("run", help="run one scenario, write CSV and print the summary")
    common(p_run)
    p_run.add_argument("--out", metavar="PATH", help="CSV output file")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run consecutive seeds, one CSV per seed")
    common(p_sweep)
    p_sweep.add_argument("--out", metavar="PATH", help="output directory")
    p_sweep.add_argument("--seeds", type=int, default=5, help="number of seeds, starting at --seed")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="check a config file only")
    common(p_val)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ScenarioError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
