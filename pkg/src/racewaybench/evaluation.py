"""Dynamic cost functions, per-loop indices and run-level KPIs.

The per-loop index combines setpoint tracking, control smoothness and
resource consumption with benchmark-edition weights. The weights are
fixed by the benchmark (not user configuration) and deliberately kept
out of the parameter file and CLI surface.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import EvaluationError
from .parameters import ReactorGeometry
from .simulation import ResultsLog


@dataclass(frozen=True)
class CostWeights:
    """Weights of the three partial objectives per loop."""

    ph_sp: float = 1.0
    ph_s: float = 0.25
    ph_c: float = 0.25
    do_sp: float = 1.0
    do_s: float = 0.25
    do_c: float = 0.25
    temp_sp: float = 1.0
    temp_s1: float = 0.125  # exchanger flow smoothness
    temp_s2: float = 0.125  # inlet temperature smoothness
    temp_c: float = 0.25


# Benchmark-edition weights; tracking dominates, effort terms break ties.
BENCHMARK_WEIGHTS = CostWeights()


@dataclass
class LoopCostReport:
    """Per-loop partial terms, weighted loop indices and their average."""

    j_sp_ph: float
    j_s_ph: float
    j_c_ph: float
    j_sp_do: float
    j_s_do: float
    j_c_do: float
    j_sp_temp: float
    j_s_qw: float
    j_s_tin: float
    j_c_qw: float
    j_ph: float
    j_do: float
    j_temp: float
    j_avg: float


@dataclass
class KpiReport:
    """Cumulative resource and productivity indicators of one run."""

    total_air_l: float
    total_co2_l: float
    harvested_g: float
    biomass_produced_g: float
    prod_areal_g_m2_day: float
    yield_pct: float
    harv_areal_g_m2_day: float
    accum_rel_pct: float
    x0_g: float
    xf_g: float


def cost_tracking(y, y_ref) -> float:
    """Cumulative absolute relative tracking error."""
    y = np.asarray(y, dtype=float)
    ref = np.broadcast_to(np.asarray(y_ref, dtype=float), y.shape)
    if np.any(ref == 0.0):
        raise EvaluationError("tracking reference contains zero samples")
    return float(np.sum(np.abs(ref - y) / ref))


def cost_tracking_above(y, y_ref) -> float:
    """Tracking error counting only excursions above the reference."""
    y = np.asarray(y, dtype=float)
    ref = np.broadcast_to(np.asarray(y_ref, dtype=float), y.shape)
    if np.any(ref == 0.0):
        raise EvaluationError("tracking reference contains zero samples")
    return float(np.sum(np.maximum(y - ref, 0.0) / ref))


def cost_smoothness(u, u_min: float, u_max: float) -> float:
    """Sum of squared control increments normalized by the actuator span."""
    if u_max <= u_min:
        raise EvaluationError("actuator span requires u_max > u_min")
    u = np.asarray(u, dtype=float)
    if u.size < 2:
        return 0.0
    inc = np.diff(u) / (u_max - u_min)
    return float(np.sum(inc * inc))


def cost_consumption(u, u_max: float) -> float:
    """Accumulated control signal normalized by the actuator maximum."""
    if u_max <= 0.0:
        raise EvaluationError("actuator maximum must be positive")
    return float(np.sum(np.asarray(u, dtype=float) / u_max))


def loop_costs(log: ResultsLog, weights: CostWeights | None = None,
               symmetric_do: bool = False) -> LoopCostReport:
    """Weighted per-loop indices over a complete run log.

    The pH loop is charged for CO2 use, the DO loop for air, and the
    temperature loop for the exchanger flow plus the smoothness of both
    of its manipulated variables. DO tracking penalizes only
    above-reference excursions unless symmetric_do is set.
    """
    w = weights or BENCHMARK_WEIGHTS
    lim = log.limits
    j_sp_ph = cost_tracking(log.ph, log.ph_ref)
    j_s_ph = cost_smoothness(log.q_co2_del, 0.0, lim.q_co2_max)
    j_c_ph = cost_consumption(log.q_co2_del, lim.q_co2_max)
    do_track = cost_tracking if symmetric_do else cost_tracking_above
    j_sp_do = do_track(log.do_pct, log.do_ref)
    j_s_do = cost_smoothness(log.q_air_del, 0.0, lim.q_air_max)
    j_c_do = cost_consumption(log.q_air_del, lim.q_air_max)
    j_sp_temp = cost_tracking(log.temp_c, log.temp_ref)
    j_s_qw = cost_smoothness(log.hx_qw, 0.0, lim.q_w_max)
    j_s_tin = cost_smoothness(log.hx_tin, lim.t_in_min, lim.t_in_max)
    j_c_qw = cost_consumption(log.hx_qw, lim.q_w_max)

    j_ph = w.ph_sp * j_sp_ph + w.ph_s * j_s_ph + w.ph_c * j_c_ph
    j_do = w.do_sp * j_sp_do + w.do_s * j_s_do + w.do_c * j_c_do
    j_temp = (w.temp_sp * j_sp_temp + w.temp_s1 * j_s_qw
              + w.temp_s2 * j_s_tin + w.temp_c * j_c_qw)
    return LoopCostReport(
        j_sp_ph=j_sp_ph, j_s_ph=j_s_ph, j_c_ph=j_c_ph,
        j_sp_do=j_sp_do, j_s_do=j_s_do, j_c_do=j_c_do,
        j_sp_temp=j_sp_temp, j_s_qw=j_s_qw, j_s_tin=j_s_tin, j_c_qw=j_c_qw,
        j_ph=j_ph, j_do=j_do, j_temp=j_temp,
        j_avg=(j_ph + j_do + j_temp) / 3.0,
    )


def normalize(report: LoopCostReport,
              baseline: LoopCostReport) -> LoopCostReport:
    """Divide each loop index by its baseline counterpart."""
    for name in ("j_ph", "j_do", "j_temp", "j_avg"):
        if getattr(baseline, name) <= 0.0:
            raise EvaluationError(f"baseline {name} must be positive to normalize")
    return replace(
        report,
        j_ph=report.j_ph / baseline.j_ph,
        j_do=report.j_do / baseline.j_do,
        j_temp=report.j_temp / baseline.j_temp,
        j_avg=report.j_avg / baseline.j_avg,
    )


def compute_kpis(log: ResultsLog, geom: ReactorGeometry,
                 horizon_days: float) -> KpiReport:
    """The eight run-level indicators.

    Gas totals integrate the delivered flows [L]; the biomass inventory
    bookkeeping uses concentration times volume at the start and end of
    the run, so produced = (X_f - X_0) + harvested holds identically.
    """
    t_m = log.t_m
    total_air = float(np.sum(np.asarray(log.q_air_del) * t_m * 1000.0))
    total_co2 = float(np.sum(np.asarray(log.q_co2_del) * t_m * 1000.0))
    harvested = float(np.sum(np.asarray(log.x_alg_gl) * 1000.0
                             * np.asarray(log.q_h) * t_m))
    s0, sf = log.initial_state, log.final_state
    if sf is None:
        raise EvaluationError("log has no final state; incomplete run")
    x0_g = s0.x_alg * s0.vol
    xf_g = sf.x_alg * sf.vol
    produced = (xf_g - x0_g) + harvested
    area_days = geom.area * horizon_days
    yield_pct = 100.0 * harvested / produced if produced != 0.0 else 0.0
    accum = 100.0 * (xf_g - x0_g) / x0_g if x0_g != 0.0 else 0.0
    return KpiReport(
        total_air_l=total_air,
        total_co2_l=total_co2,
        harvested_g=harvested,
        biomass_produced_g=produced,
        prod_areal_g_m2_day=produced / area_days,
        yield_pct=yield_pct,
        harv_areal_g_m2_day=harvested / area_days,
        accum_rel_pct=accum,
        x0_g=x0_g,
        xf_g=xf_g,
    )
