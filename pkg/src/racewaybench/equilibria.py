"""Temperature-dependent gas solubilities and dissociation constants.

Henry constants follow an exponential 1/T law around the 25 degC
reference; the carbonic-acid and water constants follow the same form
driven by effective reaction enthalpies. All outputs are in the internal
mol m-3 unit system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ModelError
from .parameters import ModelParameters

# Validity window of the fitted temperature laws [degC].
TEMP_VALID_MIN = -10.0
TEMP_VALID_MAX = 60.0


@dataclass(frozen=True, slots=True)
class EquilibriumSet:
    """Equilibrium constants and saturation concentrations at one temperature."""

    k1: float        # first carbonic dissociation [mol m-3]
    k2: float        # second carbonic dissociation [mol m-3]
    kw: float        # water autoprotolysis [mol2 m-6]
    kh_o2: float     # O2 Henry constant [mol m-3 atm-1]
    kh_co2: float    # CO2 Henry constant [mol m-3 atm-1]
    x_o2_eq: float   # dissolved O2 at air saturation [mol m-3]
    co2_eq: float    # dissolved CO2 at air saturation [mol m-3]
    co2_iny: float   # dissolved CO2 at pure-gas saturation [mol m-3]


def _check_temp(temp_c: float) -> None:
    if not math.isfinite(temp_c):
        raise ModelError("temperature must be finite")
    if temp_c < TEMP_VALID_MIN or temp_c > TEMP_VALID_MAX:
        raise ModelError(
            f"temperature {temp_c:.2f} degC outside validity window "
            f"[{TEMP_VALID_MIN}, {TEMP_VALID_MAX}]"
        )


def dissociation_constants(temp_c: float, params: ModelParameters):
    """(K1, K2, KW) at temp_c, scaled from the 25 degC references.

    Positive effective enthalpy makes a constant grow with temperature.
    """
    _check_temp(temp_c)
    eng = params.engineering
    t_k = temp_c + 273.15
    arg = 1.0 / t_k - 1.0 / eng.t_ref_k
    k1 = eng.k1_ref * math.exp(-eng.dh_k1 / eng.r_gas * arg)
    k2 = eng.k2_ref * math.exp(-eng.dh_k2 / eng.r_gas * arg)
    kw = eng.kw_ref * math.exp(-eng.dh_kw / eng.r_gas * arg)
    return k1, k2, kw


def henry_equilibria(temp_c: float, params: ModelParameters):
    """(KH_O2, KH_CO2, X_O2_eq, CO2_eq, CO2_iny) at temp_c.

    Saturation concentrations pair each Henry constant with the total
    pressure and the molar fraction of the contacting gas: atmospheric air
    for X_O2_eq/CO2_eq, pure CO2 for the injected-gas value.
    """
    _check_temp(temp_c)
    eng = params.engineering
    t_k = temp_c + 273.15
    arg = 1.0 / t_k - 1.0 / eng.t_ref_k
    kh_o2 = eng.kh_o2_ref * math.exp(eng.c_o2 * arg)
    kh_co2 = eng.kh_co2_ref * math.exp(eng.c_co2 * arg)
    x_o2_eq = kh_o2 * eng.p_atm * eng.y_o2
    co2_eq = kh_co2 * eng.p_atm * eng.y_co2
    co2_iny = kh_co2 * eng.p_atm * eng.y_pure_co2
    return kh_o2, kh_co2, x_o2_eq, co2_eq, co2_iny


def evaluate_equilibria(temp_c: float, params: ModelParameters) -> EquilibriumSet:
    """Bundle both temperature laws into one EquilibriumSet."""
    k1, k2, kw = dissociation_constants(temp_c, params)
    kh_o2, kh_co2, x_o2_eq, co2_eq, co2_iny = henry_equilibria(temp_c, params)
    return EquilibriumSet(k1, k2, kw, kh_o2, kh_co2, x_o2_eq, co2_eq, co2_iny)
