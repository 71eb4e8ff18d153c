"""Acceptance suite: the twelve release criteria.

Each test prints one PASS line on success (run with -v -s for the full
listing); a pytest failure on any test is the corresponding FAIL line.
The four baseline configurations run once on the bundled six-day
scenario and are shared across criteria.
"""

import math
import time

import numpy as np
import pytest

from racewaybench import (ControllerContext, EmpcConfig, IntegratorConfig,
                          References, build_controller, build_initial_state,
                          compute_kpis, evaluate_equilibria,
                          integrate_macro_step, loop_costs, normalize,
                          predict_biomass, proton_derivative,
                          run_simulation, simc_tune, solve_empc_dilution,
                          speciate_carbonates)
from racewaybench import io as rio
from racewaybench.carbonate import alkalinity, charge_imbalance
from racewaybench.controllers import (DO_FOPDT, DO_TAU_C, Forecast, PH_FOPDT,
                                      PH_TAU_C, TEMP_FOPDT, TEMP_TAU_C,
                                      make_zero_slot)
from racewaybench.simulation import ControllerSet, DelayBuffer, Scenario

from conftest import random_actuators, random_meteo, random_state


def announce(number, text):
    print(f"ACCEPTANCE {number:2d}: PASS - {text}")


@pytest.fixture(scope="module")
def bundled(params, geom):
    params_b, geom_b = rio.read_parameters(rio.asset_dir() / "parameters.ini")
    scenario = rio.load_scenario(rio.asset_dir() / "scenario_6day.csv",
                                 params_b, geom_b)
    return params_b, geom_b, scenario


PLAYERS = {
    "player1": dict(ph="onoff", do="onoff", hd="fixed", temp="none"),
    "player2": dict(ph="pi", do="pi", hd="fixed", temp="onoff"),
    "player3": dict(ph="pi", do="pi", hd="turbidostat", temp="pi"),
    "player4": dict(ph="pi", do="pi", hd="empc", temp="pi"),
}


@pytest.fixture(scope="module")
def player_runs(bundled, limits):
    params, geom, scenario = bundled
    ctx = ControllerContext(params=params, geom=geom, limits=limits)
    runs = {}
    for name, slots in PLAYERS.items():
        cset = ControllerSet(
            ph=build_controller("ph", slots["ph"], ctx),
            do=build_controller("do", slots["do"], ctx),
            hd=build_controller("hd", slots["hd"], ctx),
            temp=build_controller("temp", slots["temp"], ctx))
        start = time.perf_counter()
        log = run_simulation(scenario, cset, limits=limits, params=params,
                             geom=geom)
        elapsed = time.perf_counter() - start
        costs = loop_costs(log)
        kpis = compute_kpis(log, geom, 6.0)
        runs[name] = dict(log=log, costs=costs, kpis=kpis, seconds=elapsed)
    return runs


def test_criterion_01_speciation_closure(params):
    rng = np.random.default_rng(1)
    eq = evaluate_equilibria(25.0, params)
    start = time.perf_counter()
    for _ in range(10000):
        dic = rng.uniform(0.0, 10.0)
        ph = rng.uniform(4.0, 11.0)
        h = 1000.0 * 10.0 ** (-ph)
        sp = speciate_carbonates(dic, h, eq.k1, eq.k2, eq.kw)
        total = sp.co2 + sp.hco3 + sp.co3
        assert abs(total - dic) <= 1e-12 * max(dic, 1e-300)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    announce(1, f"10,000 speciation closures to 1e-12 in {elapsed:.2f} s")


def test_criterion_02_proton_derivative_oracle(params):
    eq = evaluate_equilibria(25.0, params)
    k1, k2, kw = eq.k1, eq.k2, eq.kw

    def bisect(dic, cat):
        lo, hi = 1e-13, 1e3
        for _ in range(220):
            mid = math.sqrt(lo * hi)
            if charge_imbalance(mid, dic, cat, k1, k2, kw) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    rng = np.random.default_rng(2)
    delta_t = 1e-4
    start = time.perf_counter()
    for _ in range(1000):
        dic = rng.uniform(0.2, 10.0)
        ph = rng.uniform(5.0, 10.5)
        h_seed = 1000.0 * 10.0 ** (-ph)
        cat = alkalinity(dic, h_seed, k1, k2, kw)
        dic_dot = rng.uniform(-1e-3, 1e-3)
        cat_dot = rng.uniform(-1e-3, 1e-3)
        h0 = bisect(dic, cat)
        h1 = bisect(dic + delta_t * dic_dot, cat + delta_t * cat_dot)
        fd = (h1 - h0) / delta_t
        analytic = proton_derivative(dic, cat, h0, dic_dot, cat_dot,
                                     k1, k2, kw)
        assert abs(fd - analytic) <= 1e-4 * abs(analytic) + 1e-24
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    announce(2, f"1,000 root-tracking checks at 1e-4 in {elapsed:.1f} s")


def test_criterion_03_integrator_self_convergence(params, geom, limits):
    rng = np.random.default_rng(3)
    coarse = IntegratorConfig()
    fine = IntegratorConfig(rel_tol=coarse.rel_tol / 2.0,
                            abs_tol=coarse.abs_tol / 2.0)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        state = random_state(rng, params, geom)
        meteo = random_meteo(rng)
        act = random_actuators(rng, limits)
        a = integrate_macro_step(state, meteo, act, geom, params, 60.0, coarse)
        b = integrate_macro_step(state, meteo, act, geom, params, 60.0, fine)
        for xa, xb, atol in zip(a.as_tuple(), b.as_tuple(), coarse.abs_tol):
            scaled = abs(xa - xb) / (atol + coarse.rel_tol * abs(xa))
            worst = max(worst, scaled)
            assert scaled < 1.0
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    announce(3, f"100 tolerance-halving checks, worst scaled change "
                f"{worst:.3f} < 1, in {elapsed:.1f} s")


def test_criterion_04_equilibrium_relaxation(params, geom, limits):
    # sterile culture, gases off, constant weather: DO settles at 100 %
    # and dissolved CO2 at its atmospheric equilibrium within 48 h
    hours, period = 48.0, 300.0
    n = int(hours * 3600.0 / period) + 1
    times = np.arange(n) * period
    const = lambda v: np.full(n, float(v))
    eq0 = evaluate_equilibria(20.0, params)
    h0 = 1000.0 * 10.0 ** (-8.0)
    # start dissolved CO2 about 10 % above equilibrium, DO at 120 %
    delta0 = h0 * h0 + h0 * eq0.k1 + eq0.k1 * eq0.k2
    dic0 = 1.10 * eq0.co2_eq * delta0 / (h0 * h0)
    state = build_initial_state(params, geom, x_alg_gl=0.0, do_pct=120.0,
                                dic=dic0, ph=8.0, temp_c=20.0)
    scenario = Scenario(period=period, times=times, rad_global=const(0.0),
                        rad_par=const(0.0), temp_ext=const(20.0),
                        rh=const(60.0), wind=const(2.0), initial_state=state)
    zero = ControllerSet(ph=make_zero_slot(), do=make_zero_slot(),
                         hd=make_zero_slot(), temp=make_zero_slot())
    log = run_simulation(scenario, zero, limits=limits, params=params,
                         geom=geom)
    final = log.final_state
    eq_f = evaluate_equilibria(final.temp, params)
    do_final = 100.0 * final.x_o2 / eq_f.x_o2_eq
    sp = speciate_carbonates(final.dic, final.h, eq_f.k1, eq_f.k2, eq_f.kw)
    co2_rel = abs(sp.co2 - eq_f.co2_eq) / eq_f.co2_eq
    assert abs(do_final - 100.0) <= 0.5
    assert co2_rel <= 0.005
    announce(4, f"after 48 h: DO = {do_final:.3f} %, dissolved CO2 within "
                f"{100.0 * co2_rel:.3f} % of equilibrium")


def test_criterion_05_cation_conservation(bundled, limits):
    params, geom, scenario = bundled
    zero = ControllerSet(ph=make_zero_slot(), do=make_zero_slot(),
                         hd=make_zero_slot(), temp=make_zero_slot())
    log = run_simulation(scenario, zero, limits=limits, params=params,
                         geom=geom)
    cat0 = log.initial_state.cat
    series = np.asarray(log.cat + [log.final_state.cat])
    drift = float(np.max(np.abs(series - cat0)) / cat0)
    assert drift <= 1e-10
    announce(5, f"6-day undiluted run: cation drift {drift:.2e} <= 1e-10")


def test_criterion_06_kpi_identity(player_runs):
    for name, run in player_runs.items():
        k = run["kpis"]
        assert k.biomass_produced_g == (k.xf_g - k.x0_g) + k.harvested_g
    announce(6, "biomass_produced = (X_f - X_0) + harvested, exact, "
                "all four players")


def test_criterion_07_delay_conservation():
    buffer = DelayBuffer(5)
    rng = np.random.default_rng(7)
    pushed, delivered = [], []
    for _ in range(500):
        q_air = float(rng.choice([0.0, 0.0, 0.0, 8.333e-3]))
        q_co2 = float(rng.choice([0.0, 0.0, 3.333e-4]))
        pushed.append((q_air, q_co2))
        delivered.append(buffer.push(q_air, q_co2))
    res_air, res_co2 = buffer.residue
    assert math.fsum(p[0] for p in pushed) == \
        math.fsum(d[0] for d in delivered) + res_air
    assert math.fsum(p[1] for p in pushed) == \
        math.fsum(d[1] for d in delivered) + res_co2
    announce(7, "impulse train: commanded volume = delivered + residue, exact")


def test_criterion_08_player_ordering(player_runs):
    costs = {n: player_runs[n]["costs"] for n in PLAYERS}
    kpis = {n: player_runs[n]["kpis"] for n in PLAYERS}
    base = costs["player1"]
    norm = {n: normalize(costs[n], base) for n in PLAYERS}
    assert norm["player2"].j_ph < norm["player1"].j_ph
    assert norm["player3"].j_temp < norm["player2"].j_temp < norm["player1"].j_temp
    assert (norm["player3"].j_avg <= norm["player4"].j_avg
            < norm["player2"].j_avg < norm["player1"].j_avg)
    harvested = [kpis[n].harvested_g for n in
                 ("player4", "player3", "player2", "player1")]
    assert harvested[0] > harvested[1] > harvested[2] > harvested[3]
    summary = " ".join(f"{norm[n].j_avg:.4f}" for n in
                       ("player1", "player2", "player3", "player4"))
    announce(8, f"normalized J_avg = {summary}; harvested mass ordered "
                f"P4 > P3 > P2 > P1")


def test_criterion_09_simc_cross_check():
    def sig3(x):
        return float(f"{x:.3g}")

    k_c, t_i = simc_tune(*DO_FOPDT, DO_TAU_C)
    assert sig3(k_c) == -1.98e-4 and sig3(t_i) == 3110.0
    k_c, t_i = simc_tune(*PH_FOPDT, PH_TAU_C)
    assert sig3(k_c) == -6.15e-4 and sig3(t_i) == 1050.0
    k_c, t_i = simc_tune(*TEMP_FOPDT, TEMP_TAU_C)
    assert sig3(k_c) == 1.4e-4 and sig3(t_i) == 2850.0
    announce(9, "tuning rule reproduces all three reference gain pairs "
                "to 3 significant figures")


def test_criterion_10_empc_oracle(params, geom):
    rng = np.random.default_rng(10)
    cfg = EmpcConfig()
    refs = References()
    pump = 1e-3
    feasible = 0
    start = time.perf_counter()
    for trial in range(200):
        x0 = rng.uniform(0.45, 1.3)
        times = np.arange(300.0, 4500.0, 300.0)
        rad = rng.uniform(0.0, 1000.0, len(times))
        fc = Forecast(_times=times, _rad_global=rad, _rad_par=2.0976 * rad,
                      _temp_ext=np.full_like(times, 25.0),
                      _rh=np.full_like(times, 50.0),
                      _wind=np.full_like(times, 2.0), _start=0, _now=0.0)
        got_seq, got_cost = solve_empc_dilution(x0, fc, params, geom, pump,
                                                cfg, refs, float(rad[0]))
        best_seq, best_cost = None, math.inf
        for code in range(16):
            bits = [(code >> k) & 1 for k in range(4)]
            traj = predict_biomass(x0, fc, bits, params, geom, pump, cfg,
                                   refs, current_par=float(rad[0]))
            if traj[-1] < cfg.min_final_gl:
                continue
            cost = sum(-cfg.price_per_g * traj[k + 1] * (pump * bits[k])
                       for k in range(4))
            if cost < best_cost:
                best_seq, best_cost = bits, cost
        assert got_seq == best_seq
        if best_seq is not None:
            feasible += 1
        # positive rescaling of the price must not change the argmin
        scaled_cfg = EmpcConfig(price_per_g=53.7)
        seq_scaled, _ = solve_empc_dilution(x0, fc, params, geom, pump,
                                            scaled_cfg, refs, float(rad[0]))
        assert seq_scaled == got_seq
    elapsed = time.perf_counter() - start
    announce(10, f"200 instances match exhaustive re-enumeration "
                 f"({feasible} feasible) incl. price-scale invariance, "
                 f"{elapsed:.1f} s")


def test_criterion_11_turbidostat_regulation(player_runs):
    log = player_runs["player3"]["log"]
    mean_x = float(np.mean(log.x_alg_gl))
    mean_depth = float(np.mean(log.depth_m))
    assert abs(mean_x - 0.5) / 0.5 <= 0.02
    assert abs(mean_depth - 0.15) / 0.15 <= 0.01
    announce(11, f"6-day turbidostat: mean biomass {mean_x:.4f} g/L, "
                 f"mean depth {mean_depth:.4f} m")


def test_criterion_12_performance(player_runs, bundled, tmp_path):
    params, geom, _ = bundled
    single = player_runs["player1"]["seconds"]
    assert single < 60.0
    start = time.perf_counter()
    for name, run in player_runs.items():
        rio.export_results(run["log"], tmp_path / name, geom, 6.0)
    export_time = time.perf_counter() - start
    total = sum(run["seconds"] for run in player_runs.values()) + export_time
    assert total < 300.0
    announce(12, f"6-day run {single:.1f} s < 60 s; four-player workload "
                 f"{total:.1f} s < 300 s")
