"""A guided tour of the plant model, one subsystem at a time.

Run:  python3 demos/model_tour.py [--plot]

With --plot, PNG figures are written next to this script.
"""

import argparse

import numpy as np

import racewaybench as rb


def section(title):
    print("\n" + "=" * 64)
    print(title)
    print("=" * 64)


def carbonate_tour(params, plot):
    section("Carbonate speciation across pH (DIC = 4 mol/m3, 25 degC)")
    eq = rb.evaluate_equilibria(25.0, params)
    phs = np.linspace(4.0, 11.0, 15)
    print(f"{'pH':>5} {'CO2':>10} {'HCO3-':>10} {'CO3--':>10}")
    rows = []
    for ph in phs:
        h = 1000.0 * 10.0 ** (-ph)
        sp = rb.speciate_carbonates(4.0, h, eq.k1, eq.k2, eq.kw)
        rows.append((ph, sp.co2, sp.hco3, sp.co3))
        print(f"{ph:5.1f} {sp.co2:10.4f} {sp.hco3:10.4f} {sp.co3:10.4f}")
    print("The three species always sum to DIC; pH sets the split.")
    if plot:
        import matplotlib.pyplot as plt
        arr = np.array(rows)
        plt.figure(figsize=(6, 4))
        for i, label in ((1, "CO2"), (2, "HCO3-"), (3, "CO3--")):
            plt.plot(arr[:, 0], arr[:, i], label=label)
        plt.xlabel("pH"); plt.ylabel("concentration [mol m-3]")
        plt.legend(); plt.tight_layout()
        plt.savefig("demos/carbonate_speciation.png", dpi=120)
        print("wrote demos/carbonate_speciation.png")


def biology_tour(params, plot):
    section("Growth limitation factors")
    bio = params.biological
    print("temperature window (min/opt/max = "
          f"{bio.t_min:g}/{bio.t_opt:g}/{bio.t_max:g} degC):")
    for t in (5.0, 15.0, 25.0, 30.0, 35.0, 44.0):
        print(f"  mu_T({t:4.1f}) = {rb.smooth_window(t, bio.t_min, bio.t_opt, bio.t_max):.3f}")
    print("light response at 0.5 g/L, 15 cm depth:")
    for rad in (50.0, 200.0, 500.0, 1000.0):
        par = rb.par_from_global(rad)
        i_av, mu_i = rb.light_limitation(par, 500.0, 0.15, params)
        print(f"  {rad:6.0f} W/m2 -> mean irradiance {i_av:6.1f} umol/m2/s, "
              f"mu_I = {mu_i:.3f}")
    print("oxygen inhibition:")
    for do in (100.0, 200.0, 300.0, 380.0):
        print(f"  mu_DO({do:5.1f} %) = {rb.do_inhibition(do, params):.3f}")


def thermal_tour(params, geom):
    section("Heat-flow budget on a clear noon (culture at 25 degC)")
    state = rb.build_initial_state(params, geom, temp_c=25.0)
    meteo = rb.MeteoSample(rad_global=950.0,
                           rad_par=rb.par_from_global(950.0),
                           temp_ext=28.0, rh=45.0, wind=3.0)
    act = rb.ActuatorInputs(0.0, 0.0, 0.0, 0.0, 0.0, 20.0)
    fx = rb.thermal_fluxes(state, meteo, act, geom, params)
    for name in ("q_irrad", "q_rad", "q_cond", "q_evap", "q_conv", "q_mix",
                 "q_hx", "q_sum"):
        print(f"  {name:8s} = {getattr(fx, name) / 1000.0:8.2f} kW")
    print(f"  evaporation = {fx.m_e_dot * 3600.0:.1f} kg/h over "
          f"{geom.area:.0f} m2")


def integration_tour(params, geom):
    section("One 60 s macro-step under full CO2 injection")
    state = rb.build_initial_state(params, geom)
    meteo = rb.MeteoSample(rad_global=800.0,
                           rad_par=rb.par_from_global(800.0),
                           temp_ext=26.0, rh=50.0, wind=2.0)
    limits = rb.ActuatorLimits()
    act = rb.ActuatorInputs(limits.q_co2_max, 0.0, 0.0, 0.0, 0.0, 20.0)
    eq = rb.evaluate_equilibria(state.temp, params)
    before = rb.compute_outputs(state, geom, eq)
    after_state = rb.integrate_macro_step(state, meteo, act, geom, params,
                                          60.0)
    eq2 = rb.evaluate_equilibria(after_state.temp, params)
    after = rb.compute_outputs(after_state, geom, eq2)
    print(f"  pH   {before.ph:.3f} -> {after.ph:.3f}   (one minute of "
          f"{limits.q_co2_max * 60000.0:.0f} L/min CO2)")
    print(f"  DIC  {state.dic:.3f} -> {after_state.dic:.3f} mol/m3")
    print(f"  temp {state.temp:.2f} -> {after_state.temp:.2f} degC")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()
    params = rb.default_parameters()
    geom = rb.default_geometry()
    carbonate_tour(params, args.plot)
    biology_tour(params, args.plot)
    thermal_tour(params, geom)
    integration_tour(params, geom)


if __name__ == "__main__":
    main()
