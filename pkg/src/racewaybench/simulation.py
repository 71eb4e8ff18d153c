"""Closed-loop orchestration: outputs, controller calls, saturation, the
gas transport delay, macro-step integration and trajectory logging.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .biology import biological_rates
from .carbonate import alkalinity, speciate_carbonates
from .controllers import (ControlSignals, Forecast, Observation, References,
                          Timeline)
from .equilibria import evaluate_equilibria
from .errors import ControllerError, IntegrationError, ScenarioError
from .integrator import IntegratorConfig, integrate_macro_step
from .model import compute_outputs
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorInputs, ActuatorLimits, MeteoSample, StateVector
from .thermal import heat_exchanger_flow

DEFAULT_MACRO_STEP = 60.0   # [s]
DEFAULT_GAS_DELAY = 300.0   # [s]


@dataclass
class Scenario:
    """Disturbance series plus the initial condition of one experiment.

    times are absolute seconds counted from midnight of day zero, so
    times[0] doubles as the start-of-day offset. Values are held constant
    between samples (sample-and-hold at the loop rate).
    """

    period: float
    times: np.ndarray
    rad_global: np.ndarray
    rad_par: np.ndarray
    temp_ext: np.ndarray
    rh: np.ndarray
    wind: np.ndarray
    initial_state: StateVector

    def validate(self) -> None:
        n = len(self.times)
        for name in ("rad_global", "rad_par", "temp_ext", "rh", "wind"):
            if len(getattr(self, name)) != n:
                raise ScenarioError(f"series {name} length differs from time axis")
        if n < 2:
            raise ScenarioError("scenario needs at least two samples")
        steps = np.diff(self.times)
        if np.any(steps <= 0):
            raise ScenarioError("scenario times must be strictly increasing")
        if not np.allclose(steps, self.period, rtol=0, atol=1e-9):
            raise ScenarioError("scenario period must be uniform")
        for name in ("times", "rad_global", "rad_par", "temp_ext", "rh", "wind"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ScenarioError(f"series {name} contains non-finite values")

    @property
    def coverage(self) -> float:
        """Time span the series can drive with sample-and-hold [s]."""
        return float(self.times[-1] - self.times[0])

    def sample(self, t_sim: float) -> MeteoSample:
        """Disturbances at simulation time t_sim (hold-last between samples)."""
        idx = min(int(t_sim // self.period), len(self.times) - 1)
        return MeteoSample(
            rad_global=float(self.rad_global[idx]),
            rad_par=float(self.rad_par[idx]),
            temp_ext=float(self.temp_ext[idx]),
            rh=float(self.rh[idx]),
            wind=float(self.wind[idx]),
        )


def build_initial_state(params: ModelParameters, geom: ReactorGeometry,
                        x_alg_gl: float = 0.5, do_pct: float = 100.0,
                        dic: float | None = None, ph: float = 8.0,
                        temp_c: float = 22.0,
                        depth_m: float = 0.15) -> StateVector:
    """Nominal initial state with electroneutral chemistry.

    Strong cations are derived from the charge balance at the requested
    (DIC, pH, T) so the proton dynamics start on their manifold; oxygen
    is set as a percentage of air saturation at the initial temperature.
    """
    if dic is None:
        dic = params.engineering.dic_in
    eq = evaluate_equilibria(temp_c, params)
    h = 1000.0 * 10.0 ** (-ph)
    cat = alkalinity(dic, h, eq.k1, eq.k2, eq.kw)
    return StateVector(
        x_alg=x_alg_gl * 1000.0,
        x_o2=do_pct / 100.0 * eq.x_o2_eq,
        dic=dic,
        cat=cat,
        h=h,
        temp=temp_c,
        vol=geom.area * depth_m + geom.sump_volume,
    )


class DelayBuffer:
    """Fixed-length FIFO for the two gas commands, initialized to zeros."""

    def __init__(self, steps: int):
        if steps < 0:
            raise ScenarioError("delay length cannot be negative")
        self.steps = steps
        self._queue = deque([(0.0, 0.0)] * steps)

    def push(self, q_air: float, q_co2: float) -> tuple[float, float]:
        """Insert the newest command pair, return the delayed pair."""
        if self.steps == 0:
            return q_air, q_co2
        self._queue.append((q_air, q_co2))
        return self._queue.popleft()

    @property
    def residue(self) -> tuple[float, float]:
        """(air, co2) volume-rate sums still inside the buffer."""
        air = math.fsum(q[0] for q in self._queue)
        co2 = math.fsum(q[1] for q in self._queue)
        return air, co2


@dataclass
class ControllerSet:
    """The four slot callables, invoked in this order every step."""

    ph: object
    do: object
    hd: object
    temp: object

    def ordered(self):
        return (("ph", self.ph), ("do", self.do), ("hd", self.hd),
                ("temp", self.temp))


# Per-step series of the results log, in export column order.
SERIES_FIELDS = (
    "time_s", "ph", "do_pct", "temp_c", "x_alg_gl", "depth_m",
    "q_co2_cmd", "q_air_cmd", "q_co2_del", "q_air_del", "q_d", "q_h",
    "cum_air_l", "cum_co2_l", "cum_harv_g",
    "mu_i", "mu_t", "mu_ph", "mu_do", "p_gross", "mu_g", "m_resp",
    "dic", "cat", "hco3", "co3", "co2",
    "hx_qw", "hx_tin", "hx_tout", "hx_qhx",
)


@dataclass
class ResultsLog:
    """Full per-step record of one closed-loop run."""

    t_m: float
    ph_ref: float
    do_ref: float
    temp_ref: float
    hx_ua: float
    limits: ActuatorLimits
    initial_state: StateVector
    final_state: StateVector | None = None
    final_do_pct: float = 0.0

    time_s: list = field(default_factory=list)
    ph: list = field(default_factory=list)
    do_pct: list = field(default_factory=list)
    temp_c: list = field(default_factory=list)
    x_alg_gl: list = field(default_factory=list)
    depth_m: list = field(default_factory=list)
    q_co2_cmd: list = field(default_factory=list)
    q_air_cmd: list = field(default_factory=list)
    q_co2_del: list = field(default_factory=list)
    q_air_del: list = field(default_factory=list)
    q_d: list = field(default_factory=list)
    q_h: list = field(default_factory=list)
    cum_air_l: list = field(default_factory=list)
    cum_co2_l: list = field(default_factory=list)
    cum_harv_g: list = field(default_factory=list)
    mu_i: list = field(default_factory=list)
    mu_t: list = field(default_factory=list)
    mu_ph: list = field(default_factory=list)
    mu_do: list = field(default_factory=list)
    p_gross: list = field(default_factory=list)
    mu_g: list = field(default_factory=list)
    m_resp: list = field(default_factory=list)
    dic: list = field(default_factory=list)
    cat: list = field(default_factory=list)
    hco3: list = field(default_factory=list)
    co3: list = field(default_factory=list)
    co2: list = field(default_factory=list)
    hx_qw: list = field(default_factory=list)
    hx_tin: list = field(default_factory=list)
    hx_tout: list = field(default_factory=list)
    hx_qhx: list = field(default_factory=list)

    def series(self, name: str) -> list:
        return getattr(self, name)

    @property
    def steps(self) -> int:
        return len(self.time_s)


def saturate_and_map(signals: ControlSignals,
                     limits: ActuatorLimits) -> ActuatorInputs:
    """Clamp commands to actuator ranges and turn binary commands into flows."""
    return ActuatorInputs(
        q_co2=min(max(signals.q_co2, 0.0), limits.q_co2_max),
        q_air=min(max(signals.q_air, 0.0), limits.q_air_max),
        q_d=limits.pump_rate * signals.q_d_cmd,
        q_h=limits.pump_rate * signals.q_h_cmd,
        q_w=min(max(signals.q_w, 0.0), limits.q_w_max),
        t_in_hx=min(max(signals.t_in_hx, limits.t_in_min), limits.t_in_max),
    )


def build_forecast(scenario: Scenario, t_sim: float,
                   horizon_s: float | None = None) -> Forecast:
    """Perfect-preview slice of the scenario strictly after t_sim."""
    abs_now = scenario.times[0] + t_sim
    start = int(np.searchsorted(scenario.times, abs_now, side="right"))
    if horizon_s is None:
        end = len(scenario.times)
    else:
        end = int(np.searchsorted(scenario.times, abs_now + horizon_s, side="right"))
    return Forecast(
        _times=scenario.times[:end], _rad_global=scenario.rad_global[:end],
        _rad_par=scenario.rad_par[:end], _temp_ext=scenario.temp_ext[:end],
        _rh=scenario.rh[:end], _wind=scenario.wind[:end],
        _start=start, _now=float(abs_now),
    )


def make_timeline(t_sim: float, index: int, t_m: float,
                  day_offset: float) -> Timeline:
    secday = (day_offset + t_sim) % 86400.0
    time_secday = 86400.0 if secday == 0.0 and t_sim > 0.0 else secday
    return Timeline(dt=t_m, index=index, time=t_sim, time_secday=time_secday,
                    hour=int(secday // 3600.0) % 24,
                    minute=int((secday % 3600.0) // 60.0))


def _check_signals(signals: ControlSignals, step: int) -> None:
    vals = (signals.q_co2, signals.q_air, signals.q_d_cmd, signals.q_h_cmd,
            signals.q_w, signals.t_in_hx)
    if not all(map(math.isfinite, vals)):
        raise ControllerError(f"non-finite control signals at step {step}: {vals}")
    for name, cmd in (("q_d_cmd", signals.q_d_cmd), ("q_h_cmd", signals.q_h_cmd)):
        if cmd not in (0.0, 1.0):
            raise ControllerError(
                f"{name} must be exactly 0 or 1, got {cmd} at step {step}")


def run_simulation(scenario: Scenario, controllers: ControllerSet,
                   limits: ActuatorLimits | None = None,
                   integrator_cfg: IntegratorConfig | None = None,
                   params: ModelParameters | None = None,
                   geom: ReactorGeometry | None = None,
                   refs: References | None = None,
                   t_m: float = DEFAULT_MACRO_STEP,
                   gas_delay_s: float = DEFAULT_GAS_DELAY,
                   horizon_s: float | None = None) -> ResultsLog:
    """Run the closed loop over the scenario horizon and log every step.

    Per step: derived outputs -> structure packing -> the four slots in
    order (threading the shared signals) -> saturation and binary-to-flow
    mapping -> FIFO gas delay -> one macro integration step -> logging.
    """
    params = params or ModelParameters()
    geom = geom or ReactorGeometry()
    limits = limits or ActuatorLimits()
    integrator_cfg = integrator_cfg or IntegratorConfig()
    refs = refs or References()
    params.validate()
    geom.validate()
    limits.validate()
    scenario.validate()

    if horizon_s is None:
        horizon_s = scenario.coverage
    n_steps = int(round(horizon_s / t_m))
    if n_steps * t_m - scenario.coverage > 1e-9:
        raise ScenarioError(
            f"scenario covers {scenario.coverage:.0f} s but the run needs "
            f"{n_steps * t_m:.0f} s")

    delay_steps = int(round(gas_delay_s / t_m))
    buffer = DelayBuffer(delay_steps)
    signals = ControlSignals(t_in_hx=limits.t_in_min)
    stores = {name: {} for name, _ in controllers.ordered()}
    state = replace(scenario.initial_state)
    day_offset = float(scenario.times[0])

    log = ResultsLog(t_m=t_m, ph_ref=refs.ph_ref, do_ref=refs.do_ref,
                     temp_ref=refs.temp_ref, hx_ua=params.thermal.ua_hx,
                     limits=limits, initial_state=replace(state))
    cum_air = cum_co2 = cum_harv = 0.0

    for k in range(n_steps):
        t = k * t_m
        meteo = scenario.sample(t)
        eq = evaluate_equilibria(state.temp, params)
        outputs = compute_outputs(state, geom, eq)
        speciation = speciate_carbonates(state.dic, state.h, eq.k1, eq.k2, eq.kw)
        rates = biological_rates(state.temp, outputs.ph, outputs.do_pct,
                                 meteo.rad_par, state.x_alg, outputs.depth,
                                 params)

        timeline = make_timeline(t, k, t_m, day_offset)
        obs = Observation(ph=outputs.ph, do_pct=outputs.do_pct,
                          depth=outputs.depth, x_alg_gl=outputs.x_alg_gl,
                          temp=state.temp)
        forecast = build_forecast(scenario, t)

        for name, slot in controllers.ordered():
            try:
                signals, stores[name] = slot(timeline, obs, refs, meteo,
                                             forecast, signals, stores[name])
            except Exception as exc:
                if isinstance(exc, ControllerError):
                    raise
                raise ControllerError(
                    f"{name} controller failed at step {k}: {exc}") from exc
        _check_signals(signals, k)

        q_co2_cmd, q_air_cmd = signals.q_co2, signals.q_air
        act_sat = saturate_and_map(signals, limits)
        q_air_del, q_co2_del = buffer.push(act_sat.q_air, act_sat.q_co2)
        act = replace(act_sat, q_air=q_air_del, q_co2=q_co2_del)

        q_hx, _, c_w = heat_exchanger_flow(state.temp, act.q_w, act.t_in_hx,
                                           params)
        eff = 1.0 - math.exp(-params.thermal.ua_hx
                             / max(c_w, params.thermal.eps_reg))
        hx_tout = act.t_in_hx - eff * (act.t_in_hx - state.temp)

        cum_air += q_air_del * t_m * 1000.0
        cum_co2 += q_co2_del * t_m * 1000.0
        cum_harv += state.x_alg * act.q_h * t_m

        log.time_s.append(t)
        log.ph.append(outputs.ph)
        log.do_pct.append(outputs.do_pct)
        log.temp_c.append(state.temp)
        log.x_alg_gl.append(outputs.x_alg_gl)
        log.depth_m.append(outputs.depth)
        log.q_co2_cmd.append(q_co2_cmd)
        log.q_air_cmd.append(q_air_cmd)
        log.q_co2_del.append(q_co2_del)
        log.q_air_del.append(q_air_del)
        log.q_d.append(act.q_d)
        log.q_h.append(act.q_h)
        log.cum_air_l.append(cum_air)
        log.cum_co2_l.append(cum_co2)
        log.cum_harv_g.append(cum_harv)
        log.mu_i.append(rates.mu_i)
        log.mu_t.append(rates.mu_t)
        log.mu_ph.append(rates.mu_ph)
        log.mu_do.append(rates.mu_do)
        log.p_gross.append(rates.p_gross)
        log.mu_g.append(rates.mu_g)
        log.m_resp.append(rates.m_resp)
        log.dic.append(state.dic)
        log.cat.append(state.cat)
        log.hco3.append(speciation.hco3)
        log.co3.append(speciation.co3)
        log.co2.append(speciation.co2)
        log.hx_qw.append(act.q_w)
        log.hx_tin.append(act.t_in_hx)
        log.hx_tout.append(hx_tout)
        log.hx_qhx.append(q_hx)

        try:
            state = integrate_macro_step(state, meteo, act, geom, params,
                                         t_m, integrator_cfg)
        except IntegrationError as exc:
            raise IntegrationError(
                f"integration failed at step {k} (t = {t:.0f} s): {exc}",
                state=exc.state) from exc

    log.final_state = state
    eq_f = evaluate_equilibria(state.temp, params)
    log.final_do_pct = compute_outputs(state, geom, eq_f).do_pct
    return log
