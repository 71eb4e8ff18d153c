"""Core data carriers: dynamic state, disturbances, actuator inputs and
the user-facing derived outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, ModelError
from .parameters import ReactorGeometry


@dataclass(slots=True)
class StateVector:
    """The seven dynamic states of the plant."""

    x_alg: float   # biomass concentration [g m-3]
    x_o2: float    # dissolved oxygen [mol m-3]
    dic: float     # total inorganic carbon [mol m-3]
    cat: float     # strong cations [mol m-3]
    h: float       # proton concentration [mol m-3]
    temp: float    # bulk temperature [degC]
    vol: float     # culture volume [m3]

    def as_tuple(self):
        return (self.x_alg, self.x_o2, self.dic, self.cat, self.h,
                self.temp, self.vol)

    def validate(self, geom: ReactorGeometry) -> None:
        values = self.as_tuple()
        if not all(math.isfinite(v) for v in values):
            raise ModelError(f"state contains non-finite values: {values}")
        if self.x_alg < 0 or self.x_o2 < 0 or self.dic < 0 or self.cat < 0:
            raise ModelError("concentration states must be non-negative")
        if self.h <= 0:
            raise ModelError("proton concentration must be strictly positive")
        if self.vol <= geom.sump_volume:
            raise ModelError("culture volume must exceed the sump volume")


STATE_FIELDS = ("x_alg", "x_o2", "dic", "cat", "h", "temp", "vol")


@dataclass(frozen=True, slots=True)
class MeteoSample:
    """One meteorological sample (disturbances)."""

    rad_global: float  # global irradiance [W m-2]
    rad_par: float     # photosynthetically active radiation [umol m-2 s-1]
    temp_ext: float    # ambient temperature [degC]
    rh: float          # relative humidity [%]
    wind: float        # wind speed [m s-1]

    def validate(self) -> None:
        vals = (self.rad_global, self.rad_par, self.temp_ext, self.rh, self.wind)
        if not all(math.isfinite(v) for v in vals):
            raise ModelError(f"meteorology contains non-finite values: {vals}")
        if self.rad_global < 0 or self.rad_par < 0:
            raise ModelError("irradiance must be non-negative")
        if not 0.0 <= self.rh <= 100.0:
            raise ModelError("relative humidity must lie in [0, 100] %")
        if self.wind < 0:
            raise ModelError("wind speed must be non-negative")


@dataclass(frozen=True, slots=True)
class ActuatorLimits:
    """Physical actuator ranges; commands are clamped to these."""

    q_co2_max: float = 20.0 / 60000.0    # 20 L/min [m3 s-1]
    q_air_max: float = 500.0 / 60000.0   # 500 L/min [m3 s-1]
    q_w_max: float = 3.0e-3              # exchanger water flow [m3 s-1]
    t_in_min: float = 20.0               # cold supply [degC]
    t_in_max: float = 50.0               # hot supply [degC]
    pump_rate: float = 1.0e-3            # dilution/harvest pump [m3 s-1]

    def validate(self) -> None:
        if min(self.q_co2_max, self.q_air_max, self.q_w_max, self.pump_rate) <= 0:
            raise ConfigError("actuator maxima must be positive")
        if self.t_in_min >= self.t_in_max:
            raise ConfigError("exchanger inlet range must satisfy min < max")


@dataclass(frozen=True, slots=True)
class ActuatorInputs:
    """Physical actuator values fed to the plant (post saturation/delay)."""

    q_co2: float    # CO2 gas flow into the sump [m3 s-1]
    q_air: float    # air flow into the sump [m3 s-1]
    q_d: float      # dilution (fresh medium) inflow [m3 s-1]
    q_h: float      # harvest outflow [m3 s-1]
    q_w: float      # heat-exchanger water flow [m3 s-1]
    t_in_hx: float  # heat-exchanger inlet temperature [degC]


@dataclass(frozen=True, slots=True)
class DerivedOutputs:
    """Benchmark outputs computed from the state at every step."""

    ph: float        # -log10 of proton concentration in mol/L [-]
    do_pct: float    # dissolved oxygen [% of air saturation]
    x_alg_gl: float  # biomass concentration [g L-1]
    depth: float     # culture depth over the channel area [m]
