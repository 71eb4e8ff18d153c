"""Controller interface and the baseline strategies.

Four controller slots run once per loop step in the order pH, DO,
harvest/dilution, temperature. Every slot is a plain callable

    slot(timeline, obs, refs, env, future, signals, store) -> (signals, store)

that mutates/returns the shared ControlSignals and its own persistent
dict. A slot owns its primary actuator but may write any field, so
multivariable strategies can live in a single slot. Baselines:

* pH:   On/Off with hysteresis, or PI on CO2 flow
* DO:   On/Off with hysteresis, or PI on air flow
* HD:   fixed daily 20 % harvest/refill, turbidostat, or enumeration EMPC
* Temp: none, hot/cold On/Off, or dual-stream PI on the exchanger
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .biology import do_inhibition, smooth_window
from .errors import ConfigError
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorLimits

# Identified first-order-plus-dead-time loop models (gain, time constant
# [s], dead time [s]) and the closed-loop time constants chosen for the
# shipped tunings.
PH_FOPDT = (-2798.7, 1051.0, 400.0)
PH_TAU_C = 210.6
DO_FOPDT = (-24460.0, 3773.6, 400.0)
DO_TAU_C = 377.25
TEMP_FOPDT = (19600.0, 2850.0, 468.0)
TEMP_TAU_C = 570.6


@dataclass(frozen=True, slots=True)
class Timeline:
    """Loop timing information handed to every controller."""

    dt: float            # loop step [s]
    index: int           # current step (zero-based)
    time: float          # elapsed simulation time [s]
    time_secday: float   # seconds into the current day, cycling 1..86400
    hour: int            # 0..23
    minute: int          # 0..59


@dataclass(frozen=True, slots=True)
class Observation:
    """Measured plant outputs at the current step."""

    ph: float
    do_pct: float
    depth: float      # [m]
    x_alg_gl: float   # [g L-1]
    temp: float       # [degC]


@dataclass(frozen=True, slots=True)
class References:
    """Fixed operating setpoints for the controlled variables."""

    ph_ref: float = 8.0
    do_ref: float = 150.0   # treated as an upper comfort limit [%]
    temp_ref: float = 30.0  # [degC]


@dataclass(frozen=True)
class Forecast:
    """Perfect preview of the disturbance series.

    t_future holds the remaining seconds until each future sample
    (strictly positive, increasing); the aligned series are views into
    the scenario arrays, materialized lazily.
    """

    _times: np.ndarray
    _rad_global: np.ndarray
    _rad_par: np.ndarray
    _temp_ext: np.ndarray
    _rh: np.ndarray
    _wind: np.ndarray
    _start: int
    _now: float

    @property
    def t_future(self) -> np.ndarray:
        return self._times[self._start:] - self._now

    @property
    def rad_global(self) -> np.ndarray:
        return self._rad_global[self._start:]

    @property
    def rad_par(self) -> np.ndarray:
        return self._rad_par[self._start:]

    @property
    def temp_ext(self) -> np.ndarray:
        return self._temp_ext[self._start:]

    @property
    def rh(self) -> np.ndarray:
        return self._rh[self._start:]

    @property
    def wind(self) -> np.ndarray:
        return self._wind[self._start:]

    def __len__(self) -> int:
        return len(self._times) - self._start


@dataclass
class ControlSignals:
    """The six manipulated variables shared by all four slots."""

    q_co2: float = 0.0    # [m3 s-1]
    q_air: float = 0.0    # [m3 s-1]
    q_d_cmd: float = 0.0  # binary dilution command
    q_h_cmd: float = 0.0  # binary harvest command
    q_w: float = 0.0      # heat-exchanger water flow [m3 s-1]
    t_in_hx: float = 20.0 # heat-exchanger inlet temperature [degC]


# ---------------------------------------------------------------------------
# Control primitives


def onoff_hysteresis(y: float, upper: float, lower: float,
                     was_active: bool) -> bool:
    """Two-threshold switch: on above upper, off below lower, else hold."""
    if lower >= upper:
        raise ConfigError("hysteresis band requires lower < upper")
    if y > upper:
        return True
    if y < lower:
        return False
    return was_active


def simc_tune(k_gain: float, tau: float, theta: float, tau_c: float):
    """(K_c, T_i) for a PI controller from a FOPDT model.

    K_c = tau / (K (tau_c + theta)), T_i = min(tau, 4 (tau_c + theta)).
    """
    if k_gain == 0.0:
        raise ConfigError("process gain must be nonzero")
    if tau <= 0.0 or theta < 0.0 or tau_c <= 0.0:
        raise ConfigError("need tau > 0, theta >= 0, tau_c > 0")
    k_c = tau / (k_gain * (tau_c + theta))
    t_i = min(tau, 4.0 * (tau_c + theta))
    return k_c, t_i


def pi_step(error: float, integral: float, k_c: float, t_i: float, dt: float,
            u_min: float, u_max: float):
    """One discrete PI update with conditional anti-windup.

    The integral accumulates K_c/T_i * error * dt first; when the
    unsaturated output would exceed a limit, the accumulation is frozen
    in the windup direction (shrinking back is always allowed).
    """
    if t_i <= 0.0 or dt <= 0.0:
        raise ConfigError("need t_i > 0 and dt > 0")
    if u_min >= u_max:
        raise ConfigError("need u_min < u_max")
    candidate = integral + (k_c / t_i) * error * dt
    u_unsat = k_c * error + candidate
    if u_unsat > u_max:
        if candidate <= integral:
            integral = candidate
        return u_max, integral
    if u_unsat < u_min:
        if candidate >= integral:
            integral = candidate
        return u_min, integral
    return u_unsat, candidate


# ---------------------------------------------------------------------------
# pH and DO slots


def make_ph_onoff(limits: ActuatorLimits, refs: References | None = None,
                  band: float = 0.1):
    """CO2 injection switched around the pH setpoint with hysteresis."""
    refs = refs or References()
    upper, lower = refs.ph_ref + band, refs.ph_ref - band

    def controller(timeline, obs, refs_in, env, future, signals, store):
        active = onoff_hysteresis(obs.ph, upper, lower, store.get("active", False))
        store["active"] = active
        signals.q_co2 = limits.q_co2_max if active else 0.0
        return signals, store

    return controller


def make_do_onoff(limits: ActuatorLimits, upper: float = 150.0,
                  lower: float = 145.0):
    """Aeration switched on above the DO comfort limit."""

    def controller(timeline, obs, refs_in, env, future, signals, store):
        active = onoff_hysteresis(obs.do_pct, upper, lower,
                                  store.get("active", False))
        store["active"] = active
        signals.q_air = limits.q_air_max if active else 0.0
        return signals, store

    return controller


def make_ph_pi(limits: ActuatorLimits, refs: References | None = None,
               k_c: float | None = None, t_i: float | None = None):
    """PI on CO2 flow; negative loop gain, so high pH opens the valve."""
    refs = refs or References()
    if k_c is None or t_i is None:
        k_c, t_i = simc_tune(*PH_FOPDT, PH_TAU_C)

    def controller(timeline, obs, refs_in, env, future, signals, store):
        error = refs.ph_ref - obs.ph
        u, integral = pi_step(error, store.get("integral", 0.0), k_c, t_i,
                              timeline.dt, 0.0, limits.q_co2_max)
        store["integral"] = integral
        signals.q_co2 = u
        return signals, store

    return controller


def make_do_pi(limits: ActuatorLimits, refs: References | None = None,
               k_c: float | None = None, t_i: float | None = None):
    """PI on air flow; aeration ramps up as DO exceeds its limit."""
    refs = refs or References()
    if k_c is None or t_i is None:
        k_c, t_i = simc_tune(*DO_FOPDT, DO_TAU_C)

    def controller(timeline, obs, refs_in, env, future, signals, store):
        error = refs.do_ref - obs.do_pct
        u, integral = pi_step(error, store.get("integral", 0.0), k_c, t_i,
                              timeline.dt, 0.0, limits.q_air_max)
        store["integral"] = integral
        signals.q_air = u
        return signals, store

    return controller


# ---------------------------------------------------------------------------
# Harvest/dilution slots


def make_hd_fixed(trigger_hour: float = 9.0, harvest_fraction: float = 0.2):
    """Daily routine: harvest 20 % of the depth, then refill to nominal.

    The nominal depth is recorded at the first call; the routine arms
    itself once per day at the trigger hour.
    """

    def controller(timeline, obs, refs_in, env, future, signals, store):
        if "nominal_depth" not in store:
            store["nominal_depth"] = obs.depth
            secday = timeline.time_secday % 86400.0
            target = trigger_hour * 3600.0
            wait = target - secday if secday <= target else 86400.0 - secday + target
            store["next_trigger"] = timeline.time + wait
            store["phase"] = "idle"
        if store["phase"] == "idle" and timeline.time >= store["next_trigger"]:
            store["phase"] = "harvest"
            store["next_trigger"] += 86400.0
        if store["phase"] == "harvest":
            if obs.depth <= (1.0 - harvest_fraction) * store["nominal_depth"]:
                store["phase"] = "dilute"
        if store["phase"] == "dilute":
            if obs.depth >= store["nominal_depth"]:
                store["phase"] = "idle"
        signals.q_h_cmd = 1.0 if store["phase"] == "harvest" else 0.0
        signals.q_d_cmd = 1.0 if store["phase"] == "dilute" else 0.0
        return signals, store

    return controller


def make_hd_turbidostat(x_ref_gl: float = 0.5, depth_ref: float = 0.15,
                        band_frac: float = 0.01):
    """Constant-concentration operation: dilute above the biomass
    setpoint, harvest above the depth setpoint (small hysteresis bands).

    The depth band sits entirely above the setpoint (on at +band, off at
    the setpoint): harvesting only removes water, so a centered band
    would let evaporation bias the mean level low.
    """

    def controller(timeline, obs, refs_in, env, future, signals, store):
        dilute = onoff_hysteresis(obs.x_alg_gl, x_ref_gl * (1 + band_frac),
                                  x_ref_gl * (1 - band_frac),
                                  store.get("dilute", False))
        harvest = onoff_hysteresis(obs.depth, depth_ref * (1 + band_frac),
                                   depth_ref, store.get("harvest", False))
        store["dilute"], store["harvest"] = dilute, harvest
        signals.q_d_cmd = 1.0 if dilute else 0.0
        signals.q_h_cmd = 1.0 if harvest else 0.0
        return signals, store

    return controller


@dataclass(frozen=True)
class EmpcConfig:
    """Settings of the enumeration-based economic dilution optimizer."""

    horizon_slots: int = 4          # binary decisions per solve
    slot_seconds: float = 900.0     # decision interval [s]
    substep_seconds: float = 60.0   # prediction integration step [s]
    activation_wm2: float = 100.0   # solve only above this irradiance
    min_final_gl: float = 0.5       # terminal biomass constraint [g L-1]
    price_per_g: float = 1.0        # selling price used in the objective
    depth_ref: float = 0.15         # depth On/Off setpoint [m]
    band_frac: float = 0.01         # depth hysteresis half-band


def _pinned_factors(params: ModelParameters, refs: References, cfg: EmpcConfig):
    """Limitation factors with everything but light pinned to setpoints."""
    bio = params.biological
    mu_t = smooth_window(refs.temp_ref, bio.t_min, bio.t_opt, bio.t_max)
    mu_ph = smooth_window(refs.ph_ref, bio.ph_min, bio.ph_opt, bio.ph_max)
    mu_do = do_inhibition(refs.do_ref, params)
    m_scale = bio.q10 ** ((refs.temp_ref - 20.0) / 10.0)
    return mu_t * mu_ph * mu_do, m_scale


def _biomass_rate(x_gl: float, par: float, q_d: float, vol: float,
                  params: ModelParameters, fixed_mu: float, m_scale: float,
                  depth: float) -> float:
    """Reduced biomass model: growth minus respiration minus washout."""
    bio = params.biological
    z = bio.k_a * depth * (x_gl * 1000.0)
    if z < 1e-8:
        i_av = par * (1.0 - 0.5 * z)
    else:
        i_av = par * (1.0 - math.exp(-z)) / z
    if i_av > 0.0:
        i_n = i_av**bio.n_hill
        mu_i = i_n / (bio.i_k**bio.n_hill + i_n)
    else:
        mu_i = 0.0
    mu_g = bio.eta_x * bio.mu_max * mu_i * fixed_mu
    m = bio.m_min * (1.0 + bio.k_resp * (1.0 - mu_i)) * m_scale
    return (mu_g - m) * x_gl - (q_d / vol) * x_gl


def _par_at_substeps(future: Forecast, n_slots: int, cfg: EmpcConfig,
                     current_par: float) -> list[float]:
    """Sample the forecast PAR at every prediction substep (hold-last)."""
    n_sub = int(round(cfg.slot_seconds / cfg.substep_seconds))
    t_future = future.t_future if len(future) else np.empty(0)
    rad_par = future.rad_par if len(future) else np.empty(0)
    pars = []
    for j in range(n_slots * n_sub):
        t = j * cfg.substep_seconds
        if len(t_future) == 0:
            pars.append(current_par)
            continue
        idx = int(np.searchsorted(t_future, t, side="right")) - 1
        pars.append(current_par if idx < 0 else float(rad_par[idx]))
    return pars


def predict_biomass(x0_gl: float, future: Forecast, dilution_seq,
                    params: ModelParameters, geom: ReactorGeometry,
                    pump_rate: float, cfg: EmpcConfig | None = None,
                    refs: References | None = None,
                    current_par: float = 0.0) -> list[float]:
    """Biomass trajectory [g L-1] at slot boundaries for one dilution plan.

    Integrates the reduced biomass balance with pH/DO/temperature/depth
    pinned to their setpoints and the forecast irradiance sampled and
    held per substep. A forecast shorter than the horizon shrinks it.
    """
    cfg = cfg or EmpcConfig()
    refs = refs or References()
    n = _effective_horizon(future, len(dilution_seq), cfg)
    pars = _par_at_substeps(future, n, cfg, current_par)
    return _predict_from_par(x0_gl, pars, dilution_seq[:n], params, geom,
                             pump_rate, cfg, refs)


def _effective_horizon(future: Forecast, requested: int, cfg: EmpcConfig) -> int:
    if len(future) == 0:
        return 1
    span = float(future.t_future[-1])
    fit = max(1, int(span // cfg.slot_seconds))
    return max(1, min(requested, fit))


def _predict_from_par(x0_gl: float, pars, bits, params, geom, pump_rate,
                      cfg: EmpcConfig, refs: References) -> list[float]:
    fixed_mu, m_scale = _pinned_factors(params, refs, cfg)
    vol = geom.area * cfg.depth_ref + geom.sump_volume
    n_sub = int(round(cfg.slot_seconds / cfg.substep_seconds))
    h = cfg.substep_seconds
    x = x0_gl
    traj = [x]
    for k, bit in enumerate(bits):
        q_d = pump_rate if bit else 0.0
        for j in range(n_sub):
            par = pars[k * n_sub + j]
            # classic RK4 with PAR held over the substep
            k1 = _biomass_rate(x, par, q_d, vol, params, fixed_mu, m_scale, cfg.depth_ref)
            k2 = _biomass_rate(x + 0.5 * h * k1, par, q_d, vol, params, fixed_mu, m_scale, cfg.depth_ref)
            k3 = _biomass_rate(x + 0.5 * h * k2, par, q_d, vol, params, fixed_mu, m_scale, cfg.depth_ref)
            k4 = _biomass_rate(x + h * k3, par, q_d, vol, params, fixed_mu, m_scale, cfg.depth_ref)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        traj.append(x)
    return traj


def solve_empc_dilution(x0_gl: float, future: Forecast,
                        params: ModelParameters, geom: ReactorGeometry,
                        pump_rate: float, cfg: EmpcConfig,
                        refs: References, current_par: float):
    """Exhaustively enumerate the binary dilution sequences.

    Returns (best_sequence, best_cost); (None, None) when every sequence
    violates the terminal biomass constraint. Ties keep the lowest
    sequence integer (bit k = dilute during slot k).
    """
    n = _effective_horizon(future, cfg.horizon_slots, cfg)
    pars = _par_at_substeps(future, n, cfg, current_par)
    best_seq, best_cost = None, math.inf
    for code in range(2**n):
        bits = [(code >> k) & 1 for k in range(n)]
        traj = _predict_from_par(x0_gl, pars, bits, params, geom, pump_rate,
                                 cfg, refs)
        if traj[-1] < cfg.min_final_gl:
            continue
        cost = 0.0
        for k, bit in enumerate(bits):
            q_d = pump_rate if bit else 0.0
            cost += -cfg.price_per_g * traj[k + 1] * q_d
        if cost < best_cost:
            best_seq, best_cost = bits, cost
    return best_seq, best_cost


def make_hd_empc(params: ModelParameters, geom: ReactorGeometry,
                 limits: ActuatorLimits, cfg: EmpcConfig | None = None,
                 refs: References | None = None):
    """Receding-horizon dilution optimizer plus depth On/Off harvesting.

    While the irradiance exceeds the activation threshold the optimizer
    re-solves every slot interval and applies the first action, holding
    it between solves; outside the active window dilution stays off.
    """
    cfg = cfg or EmpcConfig()
    refs = refs or References()

    def controller(timeline, obs, refs_in, env, future, signals, store):
        active = env.rad_global > cfg.activation_wm2
        if not active:
            store.pop("last_solve", None)
            store["action"] = 0.0
        else:
            due = ("last_solve" not in store
                   or timeline.time - store["last_solve"] >= cfg.slot_seconds)
            if due:
                seq, _ = solve_empc_dilution(obs.x_alg_gl, future, params,
                                             geom, limits.pump_rate, cfg,
                                             refs, env.rad_par)
                store["action"] = float(seq[0]) if seq is not None else 0.0
                store["last_solve"] = timeline.time
        signals.q_d_cmd = store.get("action", 0.0)
        harvest = onoff_hysteresis(obs.depth, cfg.depth_ref * (1 + cfg.band_frac),
                                   cfg.depth_ref, store.get("harvest", False))
        store["harvest"] = harvest
        signals.q_h_cmd = 1.0 if harvest else 0.0
        return signals, store

    return controller


# ---------------------------------------------------------------------------
# Temperature slots


def make_temp_none(t_in_idle: float = 20.0):
    """Heat exchanger permanently off."""

    def controller(timeline, obs, refs_in, env, future, signals, store):
        signals.q_w = 0.0
        signals.t_in_hx = t_in_idle
        return signals, store

    return controller


def make_temp_onoff(limits: ActuatorLimits, refs: References | None = None,
                    band: float = 2.0, hot: float = 50.0, cold: float = 20.0):
    """Thermostat switching between the hot and cold supply streams."""
    refs = refs or References()

    def controller(timeline, obs, refs_in, env, future, signals, store):
        if obs.temp > refs.temp_ref + band:
            store["t_in"] = cold
            signals.q_w = limits.q_w_max
        elif obs.temp < refs.temp_ref - band:
            store["t_in"] = hot
            signals.q_w = limits.q_w_max
        else:
            signals.q_w = 0.0
        signals.t_in_hx = store.get("t_in", cold)
        return signals, store

    return controller


def make_temp_pi(limits: ActuatorLimits, refs: References | None = None,
                 k_c: float | None = None, t_i: float | None = None,
                 hot: float = 50.0, cold: float = 20.0):
    """Continuous PI on the exchanger flow.

    The signed PI output selects the stream: positive drives hot water,
    negative drives cold water, the magnitude sets the flow.
    """
    refs = refs or References()
    if k_c is None or t_i is None:
        k_c, t_i = simc_tune(*TEMP_FOPDT, TEMP_TAU_C)

    def controller(timeline, obs, refs_in, env, future, signals, store):
        error = refs.temp_ref - obs.temp
        u, integral = pi_step(error, store.get("integral", 0.0), k_c, t_i,
                              timeline.dt, -limits.q_w_max, limits.q_w_max)
        store["integral"] = integral
        signals.q_w = abs(u)
        if u > 0.0:
            store["t_in"] = hot
        elif u < 0.0:
            store["t_in"] = cold
        signals.t_in_hx = store.get("t_in", cold)
        return signals, store

    return controller


def make_zero_slot():
    """Slot that leaves every signal untouched (open loop)."""

    def controller(timeline, obs, refs_in, env, future, signals, store):
        return signals, store

    return controller


# ---------------------------------------------------------------------------
# Registry


@dataclass
class ControllerContext:
    """Everything a baseline builder may need."""

    params: ModelParameters
    geom: ReactorGeometry
    limits: ActuatorLimits
    refs: References = field(default_factory=References)
    empc: EmpcConfig = field(default_factory=EmpcConfig)


_REGISTRY: dict[tuple[str, str], object] = {}


def register_controller(slot: str, name: str, builder) -> None:
    """Register a builder(ctx) -> slot callable under (slot, name)."""
    _REGISTRY[(slot, name)] = builder


def build_controller(slot: str, name: str, ctx: ControllerContext):
    try:
        builder = _REGISTRY[(slot, name)]
    except KeyError:
        known = sorted(n for s, n in _REGISTRY if s == slot)
        raise ConfigError(
            f"unknown {slot} controller {name!r}; available: {known}") from None
    return builder(ctx)


def controller_names(slot: str) -> list[str]:
    return sorted(n for s, n in _REGISTRY if s == slot)


register_controller("ph", "onoff", lambda ctx: make_ph_onoff(ctx.limits, ctx.refs))
register_controller("ph", "pi", lambda ctx: make_ph_pi(ctx.limits, ctx.refs))
register_controller("do", "onoff", lambda ctx: make_do_onoff(ctx.limits))
register_controller("do", "pi", lambda ctx: make_do_pi(ctx.limits, ctx.refs))
register_controller("hd", "fixed", lambda ctx: make_hd_fixed())
register_controller("hd", "turbidostat", lambda ctx: make_hd_turbidostat())
register_controller("hd", "empc",
                    lambda ctx: make_hd_empc(ctx.params, ctx.geom, ctx.limits,
                                             ctx.empc, ctx.refs))
register_controller("temp", "none", lambda ctx: make_temp_none())
register_controller("temp", "onoff", lambda ctx: make_temp_onoff(ctx.limits, ctx.refs))
register_controller("temp", "pi", lambda ctx: make_temp_pi(ctx.limits, ctx.refs))
