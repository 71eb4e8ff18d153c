"""Gas-liquid transfer coefficients for the sump spargers.

Sump transfer follows power-law correlations in the superficial gas
velocity; the per-sump coefficients are rescaled to the whole culture
volume. Bubbling one gas also strips the other (cross-stripping), scaled
from the driving gas's effective coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModelError
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorInputs, StateVector


@dataclass(frozen=True, slots=True)
class GasTransferSet:
    """Effective volumetric transfer coefficients [s-1]."""

    u_g_co2: float            # superficial CO2 velocity in the sump [m s-1]
    u_g_o2: float             # superficial air velocity in the sump [m s-1]
    kla_co2: float            # sump-local kLa for CO2 [s-1]
    kla_o2: float             # sump-local kLa for air [s-1]
    kla_co2_eff: float        # volume-average kLa for CO2 [s-1]
    kla_o2_eff: float         # volume-average kLa for air [s-1]
    k_strip_co2_by_o2: float  # CO2 exchange driven by aeration [s-1]
    k_strip_o2_by_co2: float  # O2 stripping driven by CO2 bubbling [s-1]


def _power_law(alpha: float, beta: float, u_g: float) -> float:
    if u_g <= 0.0:
        return 0.0
    return alpha * u_g**beta


def gas_transfer_coeffs(act: ActuatorInputs, state: StateVector,
                        geom: ReactorGeometry,
                        params: ModelParameters) -> GasTransferSet:
    """Evaluate the effective transfer set for the current flows and volume."""
    if act.q_co2 < 0.0 or act.q_air < 0.0:
        raise ModelError("gas flows must be non-negative")
    eng = params.engineering
    a_sump = geom.sump_area
    u_g_co2 = act.q_co2 / a_sump
    u_g_o2 = act.q_air / a_sump
    kla_co2 = _power_law(eng.alpha_co2, eng.beta_co2, u_g_co2)
    kla_o2 = _power_law(eng.alpha_o2, eng.beta_o2, u_g_o2)
    scale = a_sump / state.vol
    kla_co2_eff = kla_co2 * scale
    kla_o2_eff = kla_o2 * scale
    return GasTransferSet(
        u_g_co2=u_g_co2,
        u_g_o2=u_g_o2,
        kla_co2=kla_co2,
        kla_o2=kla_o2,
        kla_co2_eff=kla_co2_eff,
        kla_o2_eff=kla_o2_eff,
        k_strip_co2_by_o2=eng.k_strip_co2_by_o2 * kla_o2_eff,
        k_strip_o2_by_co2=eng.k_strip_o2_by_co2 * kla_co2_eff,
    )
