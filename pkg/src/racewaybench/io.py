"""File formats and asset plumbing.

Three delimited-text formats, all decimal round-trip safe (floats are
written with Python repr, the shortest lossless form):

* scenario CSV: time_s, rad_global_wm2, temp_ext_c, rh_pct, wind_ms and
  optionally rad_par_umolm2s (derived from global irradiance when absent);
* parameter file: ``key = value  # [unit]`` lines grouped in
  [geometry]/[thermal]/[biological]/[engineering] sections, complete and
  closed (unknown keys rejected);
* run manifest: INI naming the scenario, parameters, controllers, limits,
  integrator settings and output directory.

Bundled defaults live under the package ``assets/`` directory; the
RACEWAYBENCH_ASSETS environment variable points somewhere else if set.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError, ScenarioError
from .evaluation import (KpiReport, LoopCostReport, compute_kpis, loop_costs)
from .integrator import IntegratorConfig
from .model import par_from_global
from .parameters import (PARAMETER_UNITS, ModelParameters, ReactorGeometry,
                         section_fields)
from .simulation import (DEFAULT_GAS_DELAY, DEFAULT_MACRO_STEP, ResultsLog,
                         SERIES_FIELDS, Scenario, build_initial_state)
from .state import ActuatorLimits, StateVector

ASSET_ENV_VAR = "RACEWAYBENCH_ASSETS"
BUNDLED = "bundled"

SCENARIO_COLUMNS = ("time_s", "rad_global_wm2", "temp_ext_c", "rh_pct",
                    "wind_ms")
SCENARIO_PAR_COLUMN = "rad_par_umolm2s"

# Extra export columns beyond the per-step series: raw biomass and volume
# make the inventory KPIs exactly recomputable from the file.
EXPORT_EXTRA_COLUMNS = ("x_alg_gm3", "vol_m3")
TIMESERIES_FILE = "timeseries.csv"
SUMMARY_FILE = "summary.txt"
PLOTS_DIR = "plots"


def _fmt(value: float) -> str:
    return repr(float(value))


def asset_dir() -> Path:
    override = os.environ.get(ASSET_ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).parent / "assets"


def resolve_asset(name_or_path: str | Path, bundled_name: str) -> Path:
    """Map the literal 'bundled' to the packaged asset, else use the path."""
    if str(name_or_path) == BUNDLED:
        return asset_dir() / bundled_name
    return Path(name_or_path)


# ---------------------------------------------------------------------------
# Scenario files


def write_scenario_csv(scenario: Scenario, path: str | Path) -> None:
    path = Path(path)
    header = ",".join(SCENARIO_COLUMNS + (SCENARIO_PAR_COLUMN,))
    lines = [header]
    for i in range(len(scenario.times)):
        lines.append(",".join(_fmt(v) for v in (
            scenario.times[i], scenario.rad_global[i], scenario.temp_ext[i],
            scenario.rh[i], scenario.wind[i], scenario.rad_par[i])))
    path.write_text("\n".join(lines) + "\n")


def read_scenario_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Parse the raw scenario columns; PAR is derived when not present."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigError(f"scenario file {path} is empty")
    header = [c.strip() for c in lines[0].split(",")]
    for col in SCENARIO_COLUMNS:
        if col not in header:
            raise ConfigError(f"scenario file {path} missing column {col!r}")
    known = set(SCENARIO_COLUMNS) | {SCENARIO_PAR_COLUMN}
    for col in header:
        if col not in known:
            raise ConfigError(f"scenario file {path} has unknown column {col!r}")
    idx = {c: header.index(c) for c in header}
    rows = []
    for ln_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ConfigError(
                f"scenario file {path} line {ln_no}: expected "
                f"{len(header)} cells, found {len(cells)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ConfigError(
                f"scenario file {path} line {ln_no}: {exc}") from exc
    data = np.asarray(rows, dtype=float)
    out = {c: data[:, idx[c]] for c in header}
    if SCENARIO_PAR_COLUMN not in out:
        out[SCENARIO_PAR_COLUMN] = np.array(
            [par_from_global(v) for v in out["rad_global_wm2"]])
    return out


def load_scenario(path: str | Path, params: ModelParameters,
                  geom: ReactorGeometry,
                  initial: dict | None = None) -> Scenario:
    """Read a scenario CSV and attach the (possibly overridden) initial state."""
    cols = read_scenario_csv(path)
    times = cols["time_s"]
    if len(times) < 2:
        raise ScenarioError(f"scenario {path} needs at least two samples")
    period = float(times[1] - times[0])
    init_kwargs = dict(initial or {})
    state = build_initial_state(params, geom, **init_kwargs)
    scenario = Scenario(
        period=period, times=times, rad_global=cols["rad_global_wm2"],
        rad_par=cols[SCENARIO_PAR_COLUMN], temp_ext=cols["temp_ext_c"],
        rh=cols["rh_pct"], wind=cols["wind_ms"], initial_state=state)
    scenario.validate()
    return scenario


def generate_synthetic_scenario(days: int, params: ModelParameters,
                                geom: ReactorGeometry,
                                peak_wm2: float = 1000.0,
                                temp_mean_c: float = 22.0,
                                temp_swing_c: float = 7.0,
                                rh_mean_pct: float = 55.0,
                                rh_swing_pct: float = 10.0,
                                wind_mean_ms: float = 2.5,
                                wind_swing_ms: float = 0.0,
                                period_s: float = 300.0,
                                day_length_h: float = 13.0,
                                temp_lag_h: float = 2.0,
                                initial: dict | None = None) -> Scenario:
    """Clear-sky multi-day scenario.

    Irradiance is a half-sine per day peaking at solar noon; ambient
    temperature is sinusoidal lagging the sun; humidity swings in
    anti-phase with temperature; wind is constant unless given a swing.
    """
    if days < 1:
        raise ConfigError("scenario length must be at least one day")
    n = int(round(days * 86400.0 / period_s)) + 1
    times = np.arange(n) * period_s
    tod = times % 86400.0
    half_day = day_length_h * 3600.0 / 2.0
    sunrise, sunset = 43200.0 - half_day, 43200.0 + half_day
    in_day = (tod >= sunrise) & (tod <= sunset)
    rad = np.where(
        in_day,
        peak_wm2 * np.sin(np.pi * (tod - sunrise) / (2.0 * half_day)),
        0.0)
    rad = np.maximum(rad, 0.0)
    phase = 2.0 * np.pi * (tod - (12.0 + temp_lag_h) * 3600.0) / 86400.0
    temp_ext = temp_mean_c + temp_swing_c * np.cos(phase)
    rh = np.clip(rh_mean_pct - rh_swing_pct * np.cos(phase), 5.0, 100.0)
    wind = np.maximum(wind_mean_ms + wind_swing_ms * np.sin(
        2.0 * np.pi * tod / 86400.0), 0.0)
    rad_par = np.array([par_from_global(v) for v in rad])
    state = build_initial_state(params, geom, **(initial or {}))
    scenario = Scenario(period=period_s, times=times, rad_global=rad,
                        rad_par=rad_par, temp_ext=temp_ext, rh=rh, wind=wind,
                        initial_state=state)
    scenario.validate()
    return scenario


# ---------------------------------------------------------------------------
# Parameter files


def write_parameters(params: ModelParameters, geom: ReactorGeometry,
                     path: str | Path) -> None:
    """Emit the canonical parameter file (section order and unit comments
    are fixed so emitted files re-parse and re-emit byte-identically)."""
    groups = {
        "geometry": geom,
        "thermal": params.thermal,
        "biological": params.biological,
        "engineering": params.engineering,
    }
    lines = ["# racewaybench model parameters",
             "# One key per line; units in trailing comments."]
    for section, obj in groups.items():
        lines.append("")
        lines.append(f"[{section}]")
        for name in section_fields(section):
            unit = PARAMETER_UNITS[f"{section}.{name}"]
            lines.append(f"{name} = {_fmt(getattr(obj, name))}  # [{unit}]")
    Path(path).write_text("\n".join(lines) + "\n")


def read_parameters(path: str | Path) -> tuple[ModelParameters, ReactorGeometry]:
    """Parse a parameter file into validated parameter/geometry objects.

    Every known key must be present exactly once; unknown sections or
    keys are rejected.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read parameter file {path}: {exc}") from exc
    values: dict[str, dict[str, float]] = {}
    section = None
    for ln_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("geometry", "thermal", "biological",
                               "engineering"):
                raise ConfigError(
                    f"{path} line {ln_no}: unknown section [{section}]")
            values.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigError(f"{path} line {ln_no}: expected 'key = value'")
        if section is None:
            raise ConfigError(f"{path} line {ln_no}: key outside any section")
        key, _, raw_val = line.partition("=")
        key = key.strip()
        if key not in section_fields(section):
            raise ConfigError(
                f"{path} line {ln_no}: unknown key {key!r} in [{section}]")
        if key in values[section]:
            raise ConfigError(f"{path} line {ln_no}: duplicate key {key!r}")
        try:
            values[section][key] = float(raw_val.strip())
        except ValueError as exc:
            raise ConfigError(f"{path} line {ln_no}: {exc}") from exc
    for section in ("geometry", "thermal", "biological", "engineering"):
        missing = [k for k in section_fields(section)
                   if k not in values.get(section, {})]
        if missing:
            raise ConfigError(
                f"{path}: section [{section}] missing keys {missing}")
    geom = ReactorGeometry(**values["geometry"])
    params = ModelParameters()
    for name, val in values["thermal"].items():
        setattr(params.thermal, name, val)
    for name, val in values["biological"].items():
        setattr(params.biological, name, val)
    for name, val in values["engineering"].items():
        setattr(params.engineering, name, val)
    geom.validate()
    params.validate()
    return params, geom


# ---------------------------------------------------------------------------
# Run manifests


@dataclass
class RunManifest:
    """Everything one run needs, resolvable to absolute paths."""

    scenario: str = BUNDLED
    parameters: str = BUNDLED
    output: str = "out"
    days: float | None = None
    seed: int = 0  # reserved; the simulation is deterministic
    controllers: dict = field(default_factory=lambda: {
        "ph": "onoff", "do": "onoff", "hd": "fixed", "temp": "none"})
    limits: ActuatorLimits = field(default_factory=ActuatorLimits)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    t_m: float = DEFAULT_MACRO_STEP
    gas_delay_s: float = DEFAULT_GAS_DELAY
    initial: dict = field(default_factory=dict)
    base_dir: Path = field(default_factory=Path)

    def scenario_path(self) -> Path:
        p = resolve_asset(self.scenario, "scenario_6day.csv")
        return p if p.is_absolute() or self.scenario == BUNDLED else self.base_dir / p

    def parameters_path(self) -> Path:
        p = resolve_asset(self.parameters, "parameters.ini")
        return p if p.is_absolute() or self.parameters == BUNDLED else self.base_dir / p


_INITIAL_KEYS = ("x_alg_gl", "do_pct", "dic", "ph", "temp_c", "depth_m")


def read_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"manifest {path} is malformed: {exc}") from exc
    man = RunManifest(base_dir=path.parent.resolve())
    if cp.has_section("run"):
        run = cp["run"]
        man.scenario = run.get("scenario", man.scenario)
        man.parameters = run.get("parameters", man.parameters)
        man.output = run.get("output", man.output)
        if "days" in run:
            man.days = float(run["days"])
        if "seed" in run:
            man.seed = int(run["seed"])
    if cp.has_section("controllers"):
        for slot in ("ph", "do", "hd", "temp"):
            if slot in cp["controllers"]:
                man.controllers[slot] = cp["controllers"][slot].strip()
    if cp.has_section("limits"):
        kwargs = {}
        for f in fields(ActuatorLimits):
            if f.name in cp["limits"]:
                kwargs[f.name] = float(cp["limits"][f.name])
        unknown = set(cp["limits"]) - {f.name for f in fields(ActuatorLimits)}
        if unknown:
            raise ConfigError(f"manifest {path}: unknown limit keys {sorted(unknown)}")
        man.limits = ActuatorLimits(**kwargs)
    if cp.has_section("integrator"):
        sec = cp["integrator"]
        cfg = IntegratorConfig()
        if "rel_tol" in sec:
            cfg.rel_tol = float(sec["rel_tol"])
        if "abs_tol_conc" in sec or "abs_tol_temp" in sec:
            conc = float(sec.get("abs_tol_conc", 1e-9))
            other = float(sec.get("abs_tol_temp", 1e-6))
            cfg.abs_tol = np.array([conc] * 5 + [other] * 2)
        if "method" in sec:
            cfg.method = sec["method"].strip()
        man.integrator = cfg
    if cp.has_section("simulation"):
        sec = cp["simulation"]
        if "t_m" in sec:
            man.t_m = float(sec["t_m"])
        if "gas_delay_s" in sec:
            man.gas_delay_s = float(sec["gas_delay_s"])
    if cp.has_section("initial"):
        for key in cp["initial"]:
            if key not in _INITIAL_KEYS:
                raise ConfigError(
                    f"manifest {path}: unknown initial key {key!r}")
            man.initial[key] = float(cp["initial"][key])
    return man


def write_manifest(man: RunManifest, path: str | Path) -> None:
    cp = configparser.ConfigParser()
    cp["run"] = {"scenario": man.scenario, "parameters": man.parameters,
                 "output": man.output}
    if man.days is not None:
        cp["run"]["days"] = _fmt(man.days)
    cp["run"]["seed"] = str(man.seed)
    cp["controllers"] = dict(man.controllers)
    cp["limits"] = {f.name: _fmt(getattr(man.limits, f.name))
                    for f in fields(ActuatorLimits)}
    abs_tol = np.asarray(man.integrator.abs_tol)
    cp["integrator"] = {
        "rel_tol": _fmt(man.integrator.rel_tol),
        "abs_tol_conc": _fmt(float(abs_tol[0])),
        "abs_tol_temp": _fmt(float(abs_tol[5])),
        "method": man.integrator.method,
    }
    cp["simulation"] = {"t_m": _fmt(man.t_m), "gas_delay_s": _fmt(man.gas_delay_s)}
    if man.initial:
        cp["initial"] = {k: _fmt(v) for k, v in man.initial.items()}
    with open(path, "w") as fh:
        cp.write(fh)


# ---------------------------------------------------------------------------
# Results export / import


def _terminal_row(log: ResultsLog, geom: ReactorGeometry) -> list[float]:
    """Synthetic final sample: state columns filled, action columns zero."""
    sf = log.final_state
    depth = (sf.vol - geom.sump_volume) / geom.area
    ph = -math.log10(sf.h / 1000.0)
    values = {name: 0.0 for name in SERIES_FIELDS + EXPORT_EXTRA_COLUMNS}
    values.update({
        "time_s": log.steps * log.t_m,
        "ph": ph,
        "do_pct": log.final_do_pct,
        "temp_c": sf.temp,
        "x_alg_gl": sf.x_alg / 1000.0,
        "depth_m": depth,
        "cum_air_l": log.cum_air_l[-1] if log.steps else 0.0,
        "cum_co2_l": log.cum_co2_l[-1] if log.steps else 0.0,
        "cum_harv_g": log.cum_harv_g[-1] if log.steps else 0.0,
        "dic": sf.dic,
        "cat": sf.cat,
        "x_alg_gm3": sf.x_alg,
        "vol_m3": sf.vol,
    })
    return [values[name] for name in SERIES_FIELDS + EXPORT_EXTRA_COLUMNS]


def export_results(log: ResultsLog, out_dir: str | Path,
                   geom: ReactorGeometry,
                   horizon_days: float | None = None) -> dict:
    """Write the full time series, the cost/KPI summary and the plot data.

    Returns {"costs": LoopCostReport, "kpis": KpiReport}. The time series
    carries one terminal row (the state after the last step, with zeroed
    action columns) so the inventory KPIs are recomputable from the file.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / PLOTS_DIR).mkdir(exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc
    if horizon_days is None:
        horizon_days = log.steps * log.t_m / 86400.0

    columns = SERIES_FIELDS + EXPORT_EXTRA_COLUMNS
    lines = [",".join(columns)]
    area = geom.area
    sump = geom.sump_volume
    for i in range(log.steps):
        row = [log.series(name)[i] for name in SERIES_FIELDS]
        if i == 0:
            # raw initial inventory, so file-based KPI recomputation is exact
            x_alg, vol = log.initial_state.x_alg, log.initial_state.vol
        else:
            x_alg = log.x_alg_gl[i] * 1000.0
            vol = log.depth_m[i] * area + sump
        lines.append(",".join(_fmt(v) for v in row + [x_alg, vol]))
    if log.final_state is not None:
        lines.append(",".join(_fmt(v) for v in _terminal_row(log, geom)))
    (out_dir / TIMESERIES_FILE).write_text("\n".join(lines) + "\n")

    costs = loop_costs(log) if log.steps else None
    kpis = (compute_kpis(log, geom, horizon_days)
            if log.steps and log.final_state is not None else None)
    _write_summary(out_dir / SUMMARY_FILE, log, costs, kpis, horizon_days)

    _write_plot_files(out_dir / PLOTS_DIR, log)
    return {"costs": costs, "kpis": kpis}


def _write_summary(path: Path, log: ResultsLog, costs: LoopCostReport | None,
                   kpis: KpiReport | None, horizon_days: float) -> None:
    lines = []
    lines.append(f"steps = {log.steps}")
    lines.append(f"t_m = {_fmt(log.t_m)}")
    lines.append(f"horizon_days = {_fmt(horizon_days)}")
    lines.append(f"ph_ref = {_fmt(log.ph_ref)}")
    lines.append(f"do_ref = {_fmt(log.do_ref)}")
    lines.append(f"temp_ref = {_fmt(log.temp_ref)}")
    lines.append(f"hx_ua_wk = {_fmt(log.hx_ua)}")
    for f in fields(ActuatorLimits):
        lines.append(f"limit_{f.name} = {_fmt(getattr(log.limits, f.name))}")
    if costs is not None:
        for f in fields(LoopCostReport):
            lines.append(f"cost_{f.name} = {_fmt(getattr(costs, f.name))}")
    if kpis is not None:
        for f in fields(KpiReport):
            lines.append(f"kpi_{f.name} = {_fmt(getattr(kpis, f.name))}")
    path.write_text("\n".join(lines) + "\n")


_PLOT_PANELS = (
    ("ph", "ph", "ph_ref"),
    ("do", "do_pct", "do_ref"),
    ("biomass", "x_alg_gl", None),
    ("depth", "depth_m", None),
    ("temperature", "temp_c", "temp_ref"),
)


def _write_plot_files(plots_dir: Path, log: ResultsLog) -> None:
    """One file per panel of the standard five-panel trajectory figure."""
    for name, column, ref_attr in _PLOT_PANELS:
        header = ["time_s", column] + ([f"{column}_ref"] if ref_attr else [])
        lines = [",".join(header)]
        ref = getattr(log, ref_attr) if ref_attr else None
        for i in range(log.steps):
            row = [log.time_s[i], log.series(column)[i]]
            if ref is not None:
                row.append(ref)
            lines.append(",".join(_fmt(v) for v in row))
        (plots_dir / f"{name}.csv").write_text("\n".join(lines) + "\n")


def read_summary(path: str | Path) -> dict[str, float]:
    """Parse a key = value summary into a flat dict."""
    out: dict[str, float] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        out[key.strip()] = float(val.strip())
    return out


def import_results(run_dir: str | Path,
                   geom: ReactorGeometry) -> tuple[ResultsLog, float]:
    """Rebuild a ResultsLog from an exported run directory.

    Returns (log, horizon_days). All per-step series reparse losslessly;
    the terminal row restores the exact biomass/volume inventory of the
    final state. Fields evaluation never touches (dissolved O2, proton
    concentration of the final state) are reconstructed approximately.
    """
    run_dir = Path(run_dir)
    meta = read_summary(run_dir / SUMMARY_FILE)
    text = (run_dir / TIMESERIES_FILE).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    expected = list(SERIES_FIELDS + EXPORT_EXTRA_COLUMNS)
    if header != expected:
        raise ConfigError(f"{run_dir / TIMESERIES_FILE}: unexpected columns")
    rows = [[float(c) for c in ln.split(",")] for ln in lines[1:]]
    steps = int(meta["steps"])
    if len(rows) not in (steps, steps + 1):
        raise ConfigError(
            f"{run_dir / TIMESERIES_FILE}: {len(rows)} rows for {steps} steps")

    limits = ActuatorLimits(**{
        f.name: meta[f"limit_{f.name}"] for f in fields(ActuatorLimits)})
    col = {name: i for i, name in enumerate(expected)}

    def state_from_row(row) -> StateVector:
        return StateVector(
            x_alg=row[col["x_alg_gm3"]],
            x_o2=0.0,
            dic=row[col["dic"]],
            cat=row[col["cat"]],
            h=1000.0 * 10.0 ** (-row[col["ph"]]),
            temp=row[col["temp_c"]],
            vol=row[col["vol_m3"]],
        )

    log = ResultsLog(
        t_m=meta["t_m"], ph_ref=meta["ph_ref"], do_ref=meta["do_ref"],
        temp_ref=meta["temp_ref"], hx_ua=meta["hx_ua_wk"], limits=limits,
        initial_state=state_from_row(rows[0]) if rows else StateVector(
            0, 0, 0, 0, 1e-5, 20.0, geom.sump_volume + 1.0),
    )
    for row in rows[:steps]:
        for name in SERIES_FIELDS:
            log.series(name).append(row[col[name]])
    if len(rows) == steps + 1:
        log.final_state = state_from_row(rows[-1])
    return log, meta["horizon_days"]
