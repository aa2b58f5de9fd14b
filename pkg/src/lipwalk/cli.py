"""Command-line front end: run scenarios, query stability, scan the region, solve gaits.

Exit codes: 0 on success, 1 for runtime/solver errors, 2 for config or
argument validation errors. Set LIPWALK_LOG=debug|info|warning to control
verbosity.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import (
    eigenvalue_lambda2,
    period1_fixed_point,
    period2_fixed_point,
    region_scan,
    regime_of_lambda,
    stability_report,
)
from .config import ConfigError, ScenarioConfig, load_config
from .control import LegParams
from .errors import LipwalkError
from .model import ModelParams, step_constants
from .simulate import WalkTrace, WorldState, measure_gait, simulate_2d, simulate_3d

log = logging.getLogger("lipwalk")

SAMPLE_COLUMNS = [
    "t", "com_x", "com_y", "vx", "vy", "stance_x", "stance_y", "stance_leg", "step_index",
]


def bundled_config_path(name: str) -> Path | None:
    """Resolve a bundled scenario name like 'case1' or 'fig5_bdb.json'."""
    fname = name if name.endswith(".json") else f"{name}.json"
    ref = resources.files("lipwalk") / "configs" / fname
    if ref.is_file():
        return Path(str(ref))
    return None


def resolve_config(arg: str) -> Path:
    p = Path(arg)
    if p.is_file():
        return p
    bundled = bundled_config_path(arg)
    if bundled is not None:
        return bundled
    raise ConfigError(f"{arg}: no such config file or bundled scenario")


def run_scenario(cfg: ScenarioConfig) -> WalkTrace:
    if cfg.mode == "2d":
        return simulate_2d(
            cfg.initial, cfg.legs, cfg.period, cfg.n_steps, cfg.pushes,
            cfg.sample_rate, model=cfg.model,
        )
    return simulate_3d(
        cfg.initial, cfg.schedule, cfg.n_steps, cfg.pushes, cfg.sample_rate, model=cfg.model
    )


def write_samples_csv(trace: WalkTrace, path: Path) -> None:
    s = trace.samples
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLE_COLUMNS)
        for i in range(len(s.t)):
            writer.writerow([
                repr(float(s.t[i])), repr(float(s.com_x[i])), repr(float(s.com_y[i])),
                repr(float(s.vx[i])), repr(float(s.vy[i])),
                repr(float(s.stance_x[i])), repr(float(s.stance_y[i])),
                int(s.stance_leg[i]), int(s.step_index[i]),
            ])


def steps_summary(cfg: ScenarioConfig, trace: WalkTrace) -> dict:
    lengths = widths = headings = None
    if len(trace.records) >= 3:
        meas = measure_gait(trace)
        lengths, widths, headings = meas.lengths, meas.widths, meas.headings
    steps = []
    for i, rec in enumerate(trace.records):
        entry = {
            "step": rec.index,
            "t": rec.time,
            "leg": rec.leg,
            "pos_before": list(rec.pos_before),
            "vel_before": list(rec.vel_before),
            "pos_after": list(rec.pos_after),
            "vel_after": list(rec.vel_after),
            "placement": [rec.placement.x_f, rec.placement.y_f],
            "footprint": list(rec.footprint),
            "heading_deg": math.degrees(rec.heading),
            "infeasible": rec.infeasible,
        }
        if lengths is not None:
            entry["step_length"] = float(lengths[i])
            entry["step_width"] = float(widths[i])
            entry["heading_realized_deg"] = (
                None if math.isnan(headings[i]) else math.degrees(float(headings[i]))
            )
        steps.append(entry)
    return {
        "config": cfg.to_dict(),
        "t_c": cfg.model.t_c,
        "warnings": list(trace.warnings),
        "steps": steps,
    }


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(resolve_config(args.config))
    trace = run_scenario(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{cfg.output_stem}_samples.csv"
    json_path = out_dir / f"{cfg.output_stem}_steps.json"
    write_samples_csv(trace, csv_path)
    json_path.write_text(json.dumps(steps_summary(cfg, trace), indent=2) + "\n")
    for w in trace.warnings:
        log.warning("%s", w)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    return 0


def cmd_stability(args: argparse.Namespace) -> int:
    model = ModelParams(args.g, args.h)
    consts = step_constants(args.period, model)
    b = None if args.b is None else _resolve_gain(args.b, model, args.period)
    rep = stability_report(consts, model, b=b)
    if args.format == "json":
        payload = {
            "t_c": model.t_c,
            "period": args.period,
            "b_min": rep.b_min,
            "b_cp": rep.b_cp,
            "b_db": rep.b_db,
            "b_max": rep.b_max,
        }
        if b is not None:
            payload["b"] = b
            payload["lambda2"] = rep.lambda2
            payload["regime"] = rep.regime.value
        print(json.dumps(payload, indent=2))
        return 0
    print(f"T_c   = {model.t_c:.4f}")
    print(f"b_min = {rep.b_min:.4f}")
    print(f"b_cp  = {rep.b_cp:.4f}")
    print(f"b_db  = {rep.b_db:.4f}")
    print(f"b_max = {rep.b_max:.4f}")
    if b is not None:
        print(f"b       = {b:.4f}")
        print(f"lambda2 = {rep.lambda2:.4f}")
        print(f"regime  = {rep.regime.value}")
    return 0


def cmd_region(args: argparse.Namespace) -> int:
    model = ModelParams(args.g, args.h)
    scan = region_scan(
        (args.t_min, args.t_max), (args.b_min, args.b_max), (args.nt, args.nb), model
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid_path = out_dir / "region_grid.csv"
    curves_path = out_dir / "region_curves.csv"
    with grid_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["T", "b", "lambda2", "regime"])
        for i, t in enumerate(scan.t_values):
            for j, b in enumerate(scan.b_values):
                writer.writerow(
                    [repr(float(t)), repr(float(b)), repr(float(scan.lambda2[i, j])),
                     scan.regimes[i][j].value]
                )
    with curves_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["T", "b_min", "b_cp", "b_db", "b_max"])
        for i, t in enumerate(scan.t_values):
            writer.writerow(
                [repr(float(t))]
                + [repr(float(scan.curves[k][i])) for k in ("b_min", "b_cp", "b_db", "b_max")]
            )
    print(f"wrote {grid_path}")
    print(f"wrote {curves_path}")

    if args.check_cells:
        mismatches = _empirical_region_check(scan, model, args.check_cells, args.seed)
        if mismatches:
            for msg in mismatches:
                log.error("%s", msg)
            print(f"empirical check FAILED for {len(mismatches)} cell(s)")
            return 1
        print(f"empirical check passed for {args.check_cells} random cell(s)")
    return 0


def _empirical_region_check(scan, model: ModelParams, n_cells: int, seed: int) -> list[str]:
    """Simulate random grid cells and compare boundedness with the predicted regime."""
    rng = np.random.default_rng(seed)
    mismatches = []
    checked = 0
    while checked < n_cells:
        i = int(rng.integers(len(scan.t_values)))
        j = int(rng.integers(len(scan.b_values)))
        lam = scan.lambda2[i, j]
        if abs(abs(lam) - 1.0) < 1e-6:
            continue  # neutral boundary: neither decays nor grows
        t, b = float(scan.t_values[i]), float(scan.b_values[j])
        v0 = float(rng.uniform(-3.0, 3.0)) or 1.0
        trace = simulate_2d(
            WorldState.initial_2d(-b * v0, v0),
            (LegParams(0.0, b), LegParams(0.0, b)),
            t, 50, sample_rate=0.0, model=model,
        )
        vels = trace.touchdown_velocities()[:, 0]
        decayed = abs(vels[-1]) <= abs(vels[0])
        if decayed != (abs(lam) < 1.0):
            mismatches.append(
                f"cell T={t:.4f} b={b:.4f}: lambda2={lam:.4f} but |v| "
                f"{'decayed' if decayed else 'grew'}"
            )
        checked += 1
    return mismatches


def cmd_gait(args: argparse.Namespace) -> int:
    model = ModelParams(args.g, args.h)
    consts = step_constants(args.period, model)
    leg1 = LegParams(args.a1, args.b1)
    a2 = args.a1 if args.a2 is None else args.a2
    b2 = args.b1 if args.b2 is None else args.b2
    period2 = (args.a2 is not None) or (args.b2 is not None)
    lam1 = eigenvalue_lambda2(leg1, consts, model)
    if period2:
        leg2 = LegParams(a2, b2)
        sol = period2_fixed_point(leg1, leg2, consts, model)
        lam2 = eigenvalue_lambda2(leg2, consts, model)
        lam_cycle = lam1 * lam2
    else:
        sol = period1_fixed_point(leg1, consts, model)
        lam_cycle = lam1
    regime = regime_of_lambda(lam_cycle)
    if args.format == "json":
        payload = {
            "period_count": sol.period_count,
            "x0": sol.x0,
            "v0": sol.v0,
            "step_lengths": list(sol.step_lengths),
            "lambda2_cycle": lam_cycle,
            "regime": regime.value,
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"period-{sol.period_count} gait")
    print(f"x0 = {sol.x0:.4f}  v0 = {sol.v0:.4f}")
    if sol.period_count == 1:
        if args.a1 == 0.0:
            print("step in-place, d=0")
        else:
            print(f"d  = {sol.step_lengths[0]:.4f}")
    else:
        print(f"d1 = {sol.step_lengths[0]:.4f}  d2 = {sol.step_lengths[1]:.4f}")
    print(f"lambda2 = {lam_cycle:.4f} per cycle")
    print(f"regime  = {regime.value}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .control import Gait3DParams
    from .session import serve

    model = ModelParams(args.g, args.h)
    gait = Gait3DParams(
        a_l=args.a_l,
        a_w=args.a_w,
        theta=math.radians(args.theta_deg),
        b=_resolve_gain(args.b, model, args.period),
        period=args.period,
    )
    serve(
        port=args.port,
        model=model,
        initial_gait=gait,
        tick_rate=args.tick_rate,
        host=args.host,
        ui_dir=args.ui_dir,
    )
    return 0


def _resolve_gain(raw: str, model: ModelParams, period: float) -> float:
    from .analysis import special_b

    if raw in ("b_min", "b_cp", "b_db", "b_max"):
        return getattr(special_b(step_constants(period, model), model), raw)
    return float(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipwalk",
        description="Foot placement control on the linear inverted pendulum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        p.add_argument("--g", type=float, default=10.0, help="gravity (m/s^2)")
        p.add_argument("--h", type=float, default=1.0, help="CoM height (m)")

    p = sub.add_parser("simulate", help="run a scenario config and write trace files")
    p.add_argument("--config", required=True, help="path to a JSON scenario, or a bundled name")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stability", help="report the special gains and an optional b's regime")
    p.add_argument("--period", type=float, required=True, help="step period T (s)")
    p.add_argument("--b", default=None,
                   help="velocity gain to classify (number or b_min/b_cp/b_db/b_max)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    add_model_args(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("region", help="emit the stability-region grid and bound curves as CSV")
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=0.6)
    p.add_argument("--b-min", type=float, default=0.0)
    p.add_argument("--b-max", type=float, default=1.0)
    p.add_argument("--nt", type=int, default=50)
    p.add_argument("--nb", type=int, default=50)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--check-cells", type=int, default=0,
                   help="also simulate N random cells and verify boundedness")
    p.add_argument("--seed", type=int, default=0, help="seed for --check-cells sampling")
    add_model_args(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("gait", help="solve the periodic gait for one or two legs")
    p.add_argument("--period", type=float, required=True)
    p.add_argument("--a1", type=float, required=True)
    p.add_argument("--b1", type=float, required=True)
    p.add_argument("--a2", type=float, default=None)
    p.add_argument("--b2", type=float, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    add_model_args(p)
    p.set_defaults(func=cmd_gait)

    p = sub.add_parser("serve", help="serve the live steering session (and UI, if built)")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--tick-rate", type=float, default=50.0, help="simulation ticks per second")
    p.add_argument("--a-l", type=float, default=0.0, help="initial step-length offset")
    p.add_argument("--a-w", type=float, default=0.1, help="initial step-width offset")
    p.add_argument("--theta-deg", type=float, default=0.0, help="initial heading (degrees)")
    p.add_argument("--b", default="b_db", help="initial gain (number or b_min/b_cp/b_db/b_max)")
    p.add_argument("--period", type=float, default=0.3)
    p.add_argument("--ui-dir", default=None, help="directory with the built browser console")
    add_model_args(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("LIPWALK_LOG", "warning").upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LipwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
