"""Energy balance of the open channel: nine heat-flow contributions plus
the evaporation mass rate they imply.

Sign convention: positive flows heat the culture. Evaporation is always
a loss; longwave exchange, conduction, convection and the heat exchanger
change sign with their driving temperature differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ModelError
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorInputs, MeteoSample, StateVector

# Magnus saturation-pressure coefficients (over water), pressure in hPa.
_MAGNUS_A = 6.1094
_MAGNUS_B = 17.625
_MAGNUS_C = 243.04

# Clear-sky emissivity correlation (vapour pressure in hPa, temperature in K).
_SKY_EPS_OFFSET = 0.70
_SKY_EPS_SCALE = 5.95e-5
_SKY_EPS_TEMP = 1500.0

_WATER_MOLAR_MASS = 0.018015  # [kg mol-1]
_R_GAS = 8.314                # [J mol-1 K-1]


@dataclass(frozen=True, slots=True)
class ThermalFluxes:
    """All heat-flow contributions [W] plus evaporation rates."""

    q_irrad: float
    q_rad: float
    q_cond: float
    q_evap: float
    q_conv: float
    q_dil: float
    q_harv: float
    q_mix: float
    q_hx: float
    q_sum: float      # sum of the nine contributions [W]
    m_e_dot: float    # evaporation mass rate [kg s-1]
    v_e_dot: float    # evaporation volume rate [m3 s-1]


def saturation_vapour_pressure(temp_c: float) -> float:
    """Saturation vapour pressure over water [Pa] (Magnus form)."""
    return 100.0 * _MAGNUS_A * math.exp(_MAGNUS_B * temp_c / (_MAGNUS_C + temp_c))


def vapour_concentration(temp_c: float, vapour_pressure_pa: float) -> float:
    """Water-vapour mass concentration [kg m-3] via the ideal-gas law."""
    return vapour_pressure_pa * _WATER_MOLAR_MASS / (_R_GAS * (temp_c + 273.15))


# Meteorology repeats across the 60 s loop substeps (sample-and-hold), so
# the two ambient-only quantities are memoized on their float arguments.
@lru_cache(maxsize=1024)
def sky_temperature(temp_ext_c: float, rh_pct: float) -> float:
    """Effective clear-sky temperature [degC] from ambient conditions.

    Clear-sky emissivity grows with the ambient vapour pressure; the sky
    radiates at eps^(1/4) of the ambient absolute temperature.
    """
    t_k = temp_ext_c + 273.15
    e_a_hpa = (rh_pct / 100.0) * saturation_vapour_pressure(temp_ext_c) / 100.0
    eps_sky = _SKY_EPS_OFFSET + _SKY_EPS_SCALE * e_a_hpa * math.exp(_SKY_EPS_TEMP / t_k)
    eps_sky = min(eps_sky, 1.0)
    return eps_sky**0.25 * t_k - 273.15


@lru_cache(maxsize=1024)
def ambient_vapour_concentration(temp_ext_c: float, rh_pct: float) -> float:
    """Water-vapour concentration of the ambient air [kg m-3]."""
    return vapour_concentration(
        temp_ext_c, (rh_pct / 100.0) * saturation_vapour_pressure(temp_ext_c))


def latent_heat(temp_c: float) -> float:
    """Latent heat of vaporization of water [J kg-1], linear in temperature."""
    return 2.501e6 - 2361.0 * temp_c


def heat_exchanger_flow(temp_c: float, q_w: float, t_in_hx: float,
                        params: ModelParameters):
    """(q_hx [W], effectiveness, capacity flow C_w [W K-1]) of the sump coil.

    Single-stream NTU form: the raceway acts as an infinite reservoir, the
    coil water as the finite capacity. Zero coil flow exchanges nothing.
    """
    th = params.thermal
    c_w = th.rho_w * th.cp_w * q_w
    eff = 1.0 - math.exp(-th.ua_hx / max(c_w, th.eps_reg))
    q_hx = c_w * (t_in_hx - temp_c) * eff
    return q_hx, eff, c_w


def thermal_fluxes(state: StateVector, meteo: MeteoSample, act: ActuatorInputs,
                   geom: ReactorGeometry, params: ModelParameters,
                   t_sky_c: float | None = None,
                   validate: bool = True) -> ThermalFluxes:
    """Evaluate every heat-flow contribution at the current state.

    t_sky_c overrides the internal clear-sky estimate (useful when a
    measured sky temperature is available).
    """
    if validate:
        meteo.validate()
    th = params.thermal
    area = geom.area
    temp = state.temp
    t_k = temp + 273.15

    q_irrad = th.alpha_rad * area * meteo.rad_global

    if t_sky_c is None:
        t_sky_c = sky_temperature(meteo.temp_ext, meteo.rh)
    t_sky_k = t_sky_c + 273.15
    q_rad = th.sigma * th.eps_w * area * (t_sky_k**4 - t_k**4)

    # Series conduction resistance: liner then subgrade [m2 K W-1].
    r_pp = th.x_liner / th.k_liner + th.x_ug / th.k_ug
    q_cond = area / r_pp * (th.t_ground - temp)

    c_s = vapour_concentration(temp, saturation_vapour_pressure(temp))
    c_a = ambient_vapour_concentration(meteo.temp_ext, meteo.rh)
    k_m = th.k_m0 * (1.0 + th.c_wind * meteo.wind)
    m_e_dot = max(0.0, k_m * area * (c_s - c_a))  # condensation not modelled
    q_evap = -latent_heat(temp) * m_e_dot
    v_e_dot = m_e_dot / th.rho_w

    q_conv = th.h_conv * area * (meteo.temp_ext - temp)

    # Makeup water enters at ambient temperature; harvest leaves at T.
    rho_cp = th.rho_w * th.cp_w
    q_dil = rho_cp * act.q_d * meteo.temp_ext
    q_harv = -rho_cp * act.q_h * temp

    q_mix = th.p_mix

    q_hx, _, _ = heat_exchanger_flow(temp, act.q_w, act.t_in_hx, params)

    q_sum = (q_irrad + q_rad + q_cond + q_evap + q_conv
             + q_dil + q_harv + q_mix + q_hx)
    if not math.isfinite(q_sum):
        raise ModelError("thermal balance produced a non-finite heat flow")
    return ThermalFluxes(q_irrad=q_irrad, q_rad=q_rad, q_cond=q_cond,
                         q_evap=q_evap, q_conv=q_conv, q_dil=q_dil,
                         q_harv=q_harv, q_mix=q_mix, q_hx=q_hx, q_sum=q_sum,
                         m_e_dot=m_e_dot, v_e_dot=v_e_dot)
