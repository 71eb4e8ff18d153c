"""Assembly of the full plant model: derived outputs and the complete
seven-state time derivative.

All pieces are pure functions of their inputs; the integrator and the
simulation loop own any mutable progression of the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .biology import RateBundle, biological_rates
from .carbonate import CarbonateSpeciation, proton_derivative, speciate_carbonates
from .equilibria import EquilibriumSet, evaluate_equilibria
from .errors import ModelError
from .gastransfer import GasTransferSet, gas_transfer_coeffs
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorInputs, DerivedOutputs, MeteoSample, StateVector
from .thermal import ThermalFluxes, thermal_fluxes

# PAR conversion: shortwave-to-PAR energy fraction times quanta per joule.
PAR_ENERGY_FRACTION = 0.46
PAR_QUANTA_PER_J = 4.56


def par_from_global(rad_global: float) -> float:
    """Photosynthetically active radiation [umol m-2 s-1] from global
    irradiance [W m-2]."""
    if rad_global < 0.0 or not math.isfinite(rad_global):
        raise ModelError("global irradiance must be finite and non-negative")
    return PAR_ENERGY_FRACTION * PAR_QUANTA_PER_J * rad_global


def compute_outputs(state: StateVector, geom: ReactorGeometry,
                    eq: EquilibriumSet) -> DerivedOutputs:
    """User-facing outputs from the state; eq must be evaluated at state.temp."""
    if eq.x_o2_eq == 0.0:
        raise ModelError("oxygen saturation concentration is zero")
    ph = -math.log10(state.h / 1000.0)  # mol m-3 -> mol L-1, exactly once
    do_pct = 100.0 * state.x_o2 / eq.x_o2_eq
    x_alg_gl = state.x_alg / 1000.0
    depth = (state.vol - geom.sump_volume) / geom.area
    return DerivedOutputs(ph=ph, do_pct=do_pct, x_alg_gl=x_alg_gl, depth=depth)


@dataclass(frozen=True)
class InstantEvaluation:
    """Everything the model computes at one instant (for logging/analysis)."""

    outputs: DerivedOutputs
    eq: EquilibriumSet
    speciation: CarbonateSpeciation
    rates: RateBundle
    fluxes: ThermalFluxes
    transfer: GasTransferSet


def evaluate_instant(state: StateVector, meteo: MeteoSample,
                     act: ActuatorInputs, geom: ReactorGeometry,
                     params: ModelParameters) -> InstantEvaluation:
    """Evaluate all submodel quantities at one state (no derivatives)."""
    eq = evaluate_equilibria(state.temp, params)
    outputs = compute_outputs(state, geom, eq)
    speciation = speciate_carbonates(state.dic, state.h, eq.k1, eq.k2, eq.kw)
    rates = biological_rates(state.temp, outputs.ph, outputs.do_pct,
                             meteo.rad_par, state.x_alg, outputs.depth, params)
    fluxes = thermal_fluxes(state, meteo, act, geom, params)
    transfer = gas_transfer_coeffs(act, state, geom, params)
    return InstantEvaluation(outputs=outputs, eq=eq, speciation=speciation,
                             rates=rates, fluxes=fluxes, transfer=transfer)


def state_derivative(state: StateVector, meteo: MeteoSample,
                     act: ActuatorInputs, geom: ReactorGeometry,
                     params: ModelParameters,
                     validate: bool = True) -> tuple:
    """Full time derivative (x_alg, x_o2, dic, cat, h, temp, vol) order.

    Couples the three submodels: hydraulics (volume), biomass growth and
    washout, the DIC/cation/O2 balances with all gas-exchange routes, the
    charge-balance proton rate, and the energy balance with its
    volume-change correction.
    """
    if validate:
        state.validate(geom)
    eng = params.engineering
    th = params.thermal

    eq = evaluate_equilibria(state.temp, params)
    outputs = compute_outputs(state, geom, eq)
    sp = speciate_carbonates(state.dic, state.h, eq.k1, eq.k2, eq.kw)
    rates = biological_rates(state.temp, outputs.ph, outputs.do_pct,
                             meteo.rad_par, state.x_alg, outputs.depth, params)
    fluxes = thermal_fluxes(state, meteo, act, geom, params, validate=validate)
    transfer = gas_transfer_coeffs(act, state, geom, params)

    dil_rate = act.q_d / state.vol
    vol_dot = act.q_d - act.q_h - fluxes.v_e_dot
    x_alg_dot = (rates.mu_g - rates.m_resp) * state.x_alg - dil_rate * state.x_alg

    # Paddlewheel exchange acts over the fraction of the volume it sweeps.
    pw_fraction = (geom.width * geom.paddlewheel_length * outputs.depth) / state.vol

    bio_co2 = state.x_alg * eng.y_alg_co2 / eng.m_co2
    dic_dot = (dil_rate * (eng.dic_in - state.dic)
               - rates.p_gross * bio_co2
               + rates.m_resp * bio_co2
               + transfer.kla_co2_eff * (eq.co2_iny - sp.co2)
               + eng.k_atm_co2 * (eq.co2_eq - sp.co2)
               + eng.k_pw_co2 * pw_fraction * (eq.co2_eq - sp.co2)
               + transfer.k_strip_co2_by_o2 * (eq.co2_eq - sp.co2))

    cat_dot = dil_rate * (eng.cat_in - state.cat)

    bio_o2 = state.x_alg * eng.y_alg_o2 / eng.m_o2
    x_o2_dot = (dil_rate * (eq.x_o2_eq - state.x_o2)
                + rates.p_gross * bio_o2
                - rates.m_resp * bio_o2
                + transfer.kla_o2_eff * (eq.x_o2_eq - state.x_o2)
                + eng.k_atm_o2 * (eq.x_o2_eq - state.x_o2)
                + eng.k_pw_o2 * pw_fraction * (eq.x_o2_eq - state.x_o2)
                + transfer.k_strip_o2_by_co2 * (-state.x_o2))

    h_dot = proton_derivative(state.dic, state.cat, state.h, dic_dot, cat_dot,
                              eq.k1, eq.k2, eq.kw)

    temp_dot = (fluxes.q_sum / (th.rho_w * th.cp_w * state.vol)
                - (state.temp / state.vol) * vol_dot)

    return (x_alg_dot, x_o2_dot, dic_dot, cat_dot, h_dot, temp_dot, vol_dot)
