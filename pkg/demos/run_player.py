"""Run one baseline player on the bundled scenario and export its results.

Run:  python3 demos/run_player.py [--player N] [--days D] [--out DIR]

The exported directory contains the full time series, a cost/KPI
summary, and per-panel plot data (pH, DO, biomass, depth, temperature).
"""

import argparse

import racewaybench as rb
from racewaybench import io as rio

PLAYERS = {
    1: dict(ph="onoff", do="onoff", hd="fixed", temp="none"),
    2: dict(ph="pi", do="pi", hd="fixed", temp="onoff"),
    3: dict(ph="pi", do="pi", hd="turbidostat", temp="pi"),
    4: dict(ph="pi", do="pi", hd="empc", temp="pi"),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--player", type=int, default=1, choices=PLAYERS)
    parser.add_argument("--days", type=float, default=2.0)
    parser.add_argument("--out", default="demo_run")
    args = parser.parse_args()

    params, geom = rio.read_parameters(rio.asset_dir() / "parameters.ini")
    scenario = rio.load_scenario(rio.asset_dir() / "scenario_6day.csv",
                                 params, geom)
    limits = rb.ActuatorLimits()
    ctx = rb.ControllerContext(params=params, geom=geom, limits=limits)
    slots = PLAYERS[args.player]
    controllers = rb.ControllerSet(
        ph=rb.build_controller("ph", slots["ph"], ctx),
        do=rb.build_controller("do", slots["do"], ctx),
        hd=rb.build_controller("hd", slots["hd"], ctx),
        temp=rb.build_controller("temp", slots["temp"], ctx))

    print(f"player {args.player}: {slots}")
    log = rb.run_simulation(scenario, controllers, limits=limits,
                            params=params, geom=geom,
                            horizon_s=args.days * 86400.0)
    reports = rio.export_results(log, args.out, geom, args.days)
    costs, kpis = reports["costs"], reports["kpis"]

    print(f"\n{log.steps} steps simulated ({args.days:g} days)")
    print(f"J_pH = {costs.j_ph:.1f}   J_DO = {costs.j_do:.1f}   "
          f"J_Temp = {costs.j_temp:.1f}   J_avg = {costs.j_avg:.1f}")
    print(f"harvested  {kpis.harvested_g:8.1f} g")
    print(f"produced   {kpis.biomass_produced_g:8.1f} g "
          f"({kpis.prod_areal_g_m2_day:.2f} g/m2/day)")
    print(f"air used   {kpis.total_air_l:8.0f} L, CO2 used "
          f"{kpis.total_co2_l:6.0f} L")
    print(f"\nartifacts in {args.out}/ (timeseries.csv, summary.txt, plots/)")


if __name__ == "__main__":
    main()
