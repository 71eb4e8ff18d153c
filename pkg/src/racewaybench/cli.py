"""Command-line surface: run one experiment, re-evaluate an exported run,
compare several configurations, and generate synthetic scenarios.

Exit codes: 0 success, 2 configuration, 3 scenario, 4 controller,
5 integration/model, 6 I/O, 1 unexpected.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from dataclasses import fields
from pathlib import Path

from . import io as rio
from .controllers import ControllerContext, References, build_controller
from .errors import (ConfigError, ControllerError, EvaluationError,
                     IntegrationError, ModelError, ScenarioError)
from .evaluation import KpiReport, LoopCostReport, compute_kpis, loop_costs, normalize
from .simulation import ControllerSet, run_simulation

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_SCENARIO = 3
EXIT_CONTROLLER = 4
EXIT_INTEGRATION = 5
EXIT_IO = 6

_SLOT_FLAGS = ("ph", "do", "hd", "temp")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="racewaybench",
        description="Raceway photobioreactor control benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one closed-loop experiment")
    run.add_argument("manifest", nargs="?", help="run manifest (INI)")
    run.add_argument("--scenario", help="scenario CSV or 'bundled'")
    run.add_argument("--params", help="parameter file or 'bundled'")
    for slot in _SLOT_FLAGS:
        run.add_argument(f"--{slot}", help=f"{slot} controller name")
    run.add_argument("--out", help="output directory")
    run.add_argument("--days", type=float, help="horizon length [days]")
    run.add_argument("--tol", type=float, help="integrator relative tolerance")

    ev = sub.add_parser("evaluate", help="recompute costs/KPIs from a run directory")
    ev.add_argument("run_dir", help="directory produced by 'run'")

    cmp_ = sub.add_parser("compare", help="run several manifests and tabulate")
    cmp_.add_argument("manifests", nargs="+", help="manifest files (first = baseline)")
    cmp_.add_argument("--out", default="compare_out", help="output directory")

    gen = sub.add_parser("generate", help="write a synthetic scenario CSV")
    gen.add_argument("--days", type=int, default=6)
    gen.add_argument("--out", required=True, help="target CSV path")
    gen.add_argument("--peak", type=float, default=950.0, help="noon irradiance [W m-2]")
    gen.add_argument("--temp-mean", type=float, default=22.0)
    gen.add_argument("--temp-swing", type=float, default=7.0)
    gen.add_argument("--rh-mean", type=float, default=55.0)
    gen.add_argument("--wind-mean", type=float, default=2.5)
    gen.add_argument("--period", type=float, default=300.0)
    return parser


def _manifest_from_args(args) -> rio.RunManifest:
    man = rio.read_manifest(args.manifest) if args.manifest else rio.RunManifest()
    if args.scenario:
        man.scenario = args.scenario
        man.base_dir = Path.cwd()
    if args.params:
        man.parameters = args.params
        man.base_dir = Path.cwd()
    for slot in _SLOT_FLAGS:
        value = getattr(args, slot)
        if value:
            man.controllers[slot] = value
    if args.out:
        man.output = args.out
    if args.days is not None:
        man.days = args.days
    if args.tol is not None:
        man.integrator.rel_tol = args.tol
    return man


def _execute_manifest(man: rio.RunManifest, out_dir: Path):
    """Run one manifest end to end; returns (log, costs, kpis, horizon_days)."""
    params, geom = rio.read_parameters(man.parameters_path())
    scenario = rio.load_scenario(man.scenario_path(), params, geom, man.initial)
    refs = References()
    ctx = ControllerContext(params=params, geom=geom, limits=man.limits,
                            refs=refs)
    controllers = ControllerSet(
        ph=build_controller("ph", man.controllers["ph"], ctx),
        do=build_controller("do", man.controllers["do"], ctx),
        hd=build_controller("hd", man.controllers["hd"], ctx),
        temp=build_controller("temp", man.controllers["temp"], ctx),
    )
    horizon_s = man.days * 86400.0 if man.days is not None else None
    log = run_simulation(scenario, controllers, limits=man.limits,
                         integrator_cfg=man.integrator, params=params,
                         geom=geom, refs=refs, t_m=man.t_m,
                         gas_delay_s=man.gas_delay_s, horizon_s=horizon_s)
    horizon_days = log.steps * log.t_m / 86400.0
    reports = rio.export_results(log, out_dir, geom, horizon_days)
    shutil.copyfile(man.parameters_path(), out_dir / "parameters.ini")
    rio.write_manifest(man, out_dir / "manifest.ini")
    return log, reports["costs"], reports["kpis"], horizon_days


def _cmd_run(args) -> int:
    man = _manifest_from_args(args)
    out_dir = Path(man.output)
    log, costs, kpis, days = _execute_manifest(man, out_dir)
    print(f"run complete: {log.steps} steps ({days:g} days) -> {out_dir}")
    print(f"J_pH = {costs.j_ph:.4f}  J_DO = {costs.j_do:.4f}  "
          f"J_Temp = {costs.j_temp:.4f}  J_avg = {costs.j_avg:.4f}")
    print(f"harvested = {kpis.harvested_g:.1f} g  "
          f"produced = {kpis.biomass_produced_g:.1f} g  "
          f"areal = {kpis.prod_areal_g_m2_day:.2f} g m-2 day-1")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    run_dir = Path(args.run_dir)
    _, geom = rio.read_parameters(run_dir / "parameters.ini")
    log, horizon_days = rio.import_results(run_dir, geom)
    costs = loop_costs(log)
    kpis = compute_kpis(log, geom, horizon_days)
    lines = []
    for f in fields(LoopCostReport):
        lines.append(f"cost_{f.name} = {repr(getattr(costs, f.name))}")
    for f in fields(KpiReport):
        lines.append(f"kpi_{f.name} = {repr(getattr(kpis, f.name))}")
    text = "\n".join(lines) + "\n"
    (run_dir / "summary_recomputed.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_compare(args) -> int:
    out_root = Path(args.out)
    names, coststack, kpistack, modes = [], [], [], []
    for manifest_path in args.manifests:
        man = rio.read_manifest(manifest_path)
        name = Path(manifest_path).stem
        names.append(name)
        modes.append(dict(man.controllers))
        _, costs, kpis, _ = _execute_manifest(man, out_root / name)
        coststack.append(costs)
        kpistack.append(kpis)
    baseline = coststack[0]
    normalized = [normalize(c, baseline) for c in coststack]
    table = _comparison_table(names, modes, normalized, kpistack)
    (out_root / "comparison.txt").write_text(table)
    _write_comparison_csv(out_root / "comparison.csv", names, modes,
                          normalized, kpistack)
    sys.stdout.write(table)
    return EXIT_OK


_KPI_ROWS = (
    ("Total air injected [L]", "total_air_l", "{:.2f}"),
    ("Total CO2 injected [L]", "total_co2_l", "{:.2f}"),
    ("Total biomass produced [g]", "biomass_produced_g", "{:.2f}"),
    ("Productivity per unit area [g m-2 day-1]", "prod_areal_g_m2_day", "{:.2f}"),
    ("Harvested amount [g]", "harvested_g", "{:.2f}"),
    ("Harvested per unit area [g m-2 day-1]", "harv_areal_g_m2_day", "{:.2f}"),
    ("Production yield ratio [%]", "yield_pct", "{:.2f}"),
    ("Relative biomass accumulation [%]", "accum_rel_pct", "{:.2f}"),
)


def _comparison_table(names, modes, normalized, kpis) -> str:
    label_w = 44
    col_w = max(12, max(len(n) for n in names) + 2)

    def row(label, cells):
        return label.ljust(label_w) + "".join(str(c).rjust(col_w) for c in cells)

    lines = [row("", names), "-" * (label_w + col_w * len(names))]
    lines.append(row("pH control mode", [m["ph"] for m in modes]))
    lines.append(row("DO control mode", [m["do"] for m in modes]))
    lines.append(row("Harvesting strategy", [m["hd"] for m in modes]))
    lines.append(row("Temperature control mode", [m["temp"] for m in modes]))
    lines.append("-" * (label_w + col_w * len(names)))
    for label, attr in (("J_pH", "j_ph"), ("J_DO", "j_do"),
                        ("J_Temp", "j_temp"), ("J_avg", "j_avg")):
        lines.append(row(label + " (baseline-normalized)",
                         [f"{getattr(c, attr):.4f}" for c in normalized]))
    lines.append("-" * (label_w + col_w * len(names)))
    for label, attr, fmt in _KPI_ROWS:
        lines.append(row(label, [fmt.format(getattr(k, attr)) for k in kpis]))
    return "\n".join(lines) + "\n"


def _write_comparison_csv(path: Path, names, modes, normalized, kpis) -> None:
    lines = ["metric," + ",".join(names)]
    for slot in _SLOT_FLAGS:
        lines.append(f"mode_{slot}," + ",".join(m[slot] for m in modes))
    for attr in ("j_ph", "j_do", "j_temp", "j_avg"):
        lines.append(f"{attr}_norm," + ",".join(
            repr(getattr(c, attr)) for c in normalized))
    for _, attr, _fmt in _KPI_ROWS:
        lines.append(f"{attr}," + ",".join(repr(getattr(k, attr)) for k in kpis))
    path.write_text("\n".join(lines) + "\n")


def _cmd_generate(args) -> int:
    params_path = rio.resolve_asset(rio.BUNDLED, "parameters.ini")
    params, geom = rio.read_parameters(params_path)
    scenario = rio.generate_synthetic_scenario(
        args.days, params, geom, peak_wm2=args.peak,
        temp_mean_c=args.temp_mean, temp_swing_c=args.temp_swing,
        rh_mean_pct=args.rh_mean, wind_mean_ms=args.wind_mean,
        period_s=args.period)
    rio.write_scenario_csv(scenario, args.out)
    print(f"wrote {args.days}-day scenario ({len(scenario.times)} samples) "
          f"to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "evaluate": _cmd_evaluate,
                "compare": _cmd_compare, "generate": _cmd_generate}
    try:
        return handlers[args.command](args)
    except (ConfigError, EvaluationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except ControllerError as exc:
        print(f"controller error: {exc}", file=sys.stderr)
        return EXIT_CONTROLLER
    except (IntegrationError, ModelError) as exc:
        print(f"integration error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # pragma: no cover - last resort
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
