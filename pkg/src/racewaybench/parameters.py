"""Reactor geometry and calibratable model constants.

Internal unit system: SI with concentrations in mol m-3 (biomass in g m-3),
temperatures in degC unless a name says otherwise, rates in s-1. The
carbonate and Henry reference constants below were converted once from
their customary mol/L literature values; the parameter file carries the
converted numbers so that file round trips are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError

DAY_SECONDS = 86400.0


@dataclass
class ReactorGeometry:
    """Raceway channel and carbonation-sump geometry [m].

    length is the total developed channel length (two 40 m straights for
    the default plant), so area = width * length is the full illuminated
    surface.
    """

    length: float = 80.0
    width: float = 1.0
    sump_radius: float = 0.4
    sump_height: float = 1.12
    paddlewheel_length: float = 1.5

    @property
    def area(self) -> float:
        """Free-surface (illuminated) area [m2]."""
        return self.width * self.length

    @property
    def sump_area(self) -> float:
        """Sump cross-section [m2]."""
        return math.pi * self.sump_radius**2

    @property
    def sump_volume(self) -> float:
        """Sump volume [m3]."""
        return self.sump_area * self.sump_height

    def validate(self) -> None:
        if self.area <= 0.0:
            raise ConfigError("reactor surface area must be positive")
        if self.sump_radius <= 0.0 or self.sump_height <= 0.0:
            raise ConfigError("sump dimensions must be positive")
        if self.paddlewheel_length <= 0.0:
            raise ConfigError("paddlewheel length must be positive")


@dataclass
class ThermalParams:
    """Energy-balance constants."""

    alpha_rad: float = 0.85        # shortwave absorptance of the culture [-]
    eps_w: float = 0.97            # longwave emissivity of water [-]
    sigma: float = 5.670e-8        # Stefan-Boltzmann [W m-2 K-4]
    x_liner: float = 0.003         # liner thickness [m]
    k_liner: float = 0.33          # liner conductivity [W m-1 K-1]
    x_ug: float = 0.5              # effective subgrade thickness [m]
    k_ug: float = 1.2              # subgrade conductivity [W m-1 K-1]
    t_ground: float = 18.0         # ground reference temperature [degC]
    k_m0: float = 3.0e-3           # evaporation mass-transfer coefficient [m s-1]
    c_wind: float = 0.0            # wind enhancement of k_m [(m s-1)-1]
    h_conv: float = 15.0           # air convective coefficient [W m-2 K-1]
    p_mix: float = 200.0           # paddlewheel power dissipated as heat [W]
    rho_w: float = 998.0           # water density [kg m-3]
    cp_w: float = 4180.0           # water specific heat [J kg-1 K-1]
    ua_hx: float = 8000.0          # heat-exchanger UA [W K-1]
    eps_reg: float = 1e-9          # regularization for the NTU ratio [-]


@dataclass
class BiologicalParams:
    """Growth, limitation and respiration constants."""

    mu_max: float = 0.8 / DAY_SECONDS  # maximum gross photosynthetic rate [s-1]
    eta_x: float = 0.95            # fraction of gross photosynthesis into growth [-]
    k_a: float = 0.06              # biomass light extinction [m2 g-1]
    i_k: float = 100.0             # irradiance half-saturation [umol m-2 s-1]
    n_hill: float = 2.0            # irradiance response exponent [-]
    t_min: float = 5.0             # viability window minimum [degC]
    t_opt: float = 30.0            # viability window optimum [degC]
    t_max: float = 45.0            # viability window maximum [degC]
    ph_min: float = 6.0            # pH window minimum [-]
    ph_opt: float = 8.0            # pH window optimum [-]
    ph_max: float = 10.0           # pH window maximum [-]
    do_max_pct: float = 383.21     # DO inhibition scale [% saturation]
    m_do: float = 4.0              # DO inhibition exponent [-]
    m_min: float = 1.2e-7          # basal maintenance at 20 degC [s-1]
    k_resp: float = 0.5            # respiration increase under light limitation [-]
    q10: float = 2.0               # metabolic temperature sensitivity [-]


@dataclass
class EngineeringParams:
    """Mass-transfer, stoichiometric and equilibrium constants."""

    alpha_co2: float = 0.06        # sump kLa scale for CO2 [-]
    beta_co2: float = 0.7          # sump kLa exponent for CO2 [-]
    alpha_o2: float = 0.55         # sump kLa scale for air [-]
    beta_o2: float = 0.7           # sump kLa exponent for air [-]
    k_atm_co2: float = 2.0e-5      # free-surface CO2 exchange [s-1]
    k_atm_o2: float = 4.0e-5       # free-surface O2 exchange [s-1]
    k_pw_co2: float = 3.0e-4       # paddlewheel-zone CO2 exchange [s-1]
    k_pw_o2: float = 6.0e-4        # paddlewheel-zone O2 exchange [s-1]
    k_strip_co2_by_o2: float = 0.2  # CO2 stripping driven by aeration [-]
    k_strip_o2_by_co2: float = 0.2  # O2 stripping driven by CO2 bubbling [-]
    y_alg_co2: float = 1.85        # g CO2 per g biomass [-]
    y_alg_o2: float = 1.42         # g O2 per g biomass [-]
    m_co2: float = 44.01           # CO2 molar mass [g mol-1]
    m_o2: float = 32.00            # O2 molar mass [g mol-1]
    dic_in: float = 4.0            # inlet medium DIC [mol m-3]
    cat_in: float = 3.9320884230697484  # inlet strong cations [mol m-3]
    kh_o2_ref: float = 1.3         # O2 Henry constant at T_ref [mol m-3 atm-1]
    kh_co2_ref: float = 34.0       # CO2 Henry constant at T_ref [mol m-3 atm-1]
    c_o2: float = 1700.0           # O2 Henry temperature factor [K]
    c_co2: float = 2400.0          # CO2 Henry temperature factor [K]
    k1_ref: float = 4.47e-7 * 1e3  # first carbonic dissociation at T_ref [mol m-3]
    k2_ref: float = 4.68e-11 * 1e3  # second carbonic dissociation at T_ref [mol m-3]
    kw_ref: float = 1e-14 * 1e6    # water autoprotolysis at T_ref [mol2 m-6]
    dh_k1: float = 7700.0          # effective enthalpy, first dissociation [J mol-1]
    dh_k2: float = 14900.0         # effective enthalpy, second dissociation [J mol-1]
    dh_kw: float = 55900.0         # effective enthalpy, autoprotolysis [J mol-1]
    r_gas: float = 8.314           # universal gas constant [J mol-1 K-1]
    p_atm: float = 1.0             # atmospheric pressure [atm]
    y_o2: float = 0.2095           # O2 molar fraction in air [-]
    y_co2: float = 4.2e-4          # CO2 molar fraction in air [-]
    y_pure_co2: float = 1.0        # molar fraction of the injected gas [-]
    t_ref_k: float = 298.15        # reference temperature [K]


@dataclass
class ModelParameters:
    """All calibratable constants, grouped by submodel."""

    thermal: ThermalParams = field(default_factory=ThermalParams)
    biological: BiologicalParams = field(default_factory=BiologicalParams)
    engineering: EngineeringParams = field(default_factory=EngineeringParams)

    def validate(self) -> None:
        th, bio, eng = self.thermal, self.biological, self.engineering
        positive = [
            ("thermal.sigma", th.sigma), ("thermal.x_liner", th.x_liner),
            ("thermal.k_liner", th.k_liner), ("thermal.x_ug", th.x_ug),
            ("thermal.k_ug", th.k_ug), ("thermal.rho_w", th.rho_w),
            ("thermal.cp_w", th.cp_w), ("thermal.eps_reg", th.eps_reg),
            ("biological.mu_max", bio.mu_max), ("biological.k_a", bio.k_a),
            ("biological.i_k", bio.i_k), ("biological.n_hill", bio.n_hill),
            ("biological.q10", bio.q10),
            ("engineering.m_co2", eng.m_co2), ("engineering.m_o2", eng.m_o2),
            ("engineering.kh_o2_ref", eng.kh_o2_ref),
            ("engineering.kh_co2_ref", eng.kh_co2_ref),
            ("engineering.k1_ref", eng.k1_ref), ("engineering.k2_ref", eng.k2_ref),
            ("engineering.kw_ref", eng.kw_ref), ("engineering.r_gas", eng.r_gas),
            ("engineering.p_atm", eng.p_atm), ("engineering.y_o2", eng.y_o2),
            ("engineering.y_co2", eng.y_co2), ("engineering.t_ref_k", eng.t_ref_k),
        ]
        for name, value in positive:
            if not (value > 0.0) or not math.isfinite(value):
                raise ConfigError(f"parameter {name} must be strictly positive")
        nonnegative = [
            ("thermal.alpha_rad", th.alpha_rad), ("thermal.eps_w", th.eps_w),
            ("thermal.k_m0", th.k_m0), ("thermal.c_wind", th.c_wind),
            ("thermal.h_conv", th.h_conv), ("thermal.p_mix", th.p_mix),
            ("thermal.ua_hx", th.ua_hx),
            ("biological.m_min", bio.m_min), ("biological.k_resp", bio.k_resp),
            ("engineering.alpha_co2", eng.alpha_co2),
            ("engineering.alpha_o2", eng.alpha_o2),
            ("engineering.k_atm_co2", eng.k_atm_co2),
            ("engineering.k_atm_o2", eng.k_atm_o2),
            ("engineering.k_pw_co2", eng.k_pw_co2),
            ("engineering.k_pw_o2", eng.k_pw_o2),
            ("engineering.k_strip_co2_by_o2", eng.k_strip_co2_by_o2),
            ("engineering.k_strip_o2_by_co2", eng.k_strip_o2_by_co2),
            ("engineering.y_alg_co2", eng.y_alg_co2),
            ("engineering.y_alg_o2", eng.y_alg_o2),
            ("engineering.dic_in", eng.dic_in), ("engineering.cat_in", eng.cat_in),
        ]
        for name, value in nonnegative:
            if value < 0.0 or not math.isfinite(value):
                raise ConfigError(f"parameter {name} must be finite and >= 0")
        if not bio.t_min < bio.t_opt < bio.t_max:
            raise ConfigError("temperature window must satisfy t_min < t_opt < t_max")
        if not bio.ph_min < bio.ph_opt < bio.ph_max:
            raise ConfigError("pH window must satisfy ph_min < ph_opt < ph_max")
        if not bio.do_max_pct > 100.0:
            raise ConfigError("do_max_pct must exceed 100 % saturation")
        if not 0.0 <= bio.eta_x <= 1.0:
            raise ConfigError("eta_x must lie in [0, 1]")
        if eng.y_pure_co2 != 1.0:
            raise ConfigError("y_pure_co2 must be 1 (pure CO2 injection)")


# Units shown as comments in the emitted parameter file, keyed by
# "<section>.<field>". Sections are geometry/thermal/biological/engineering.
PARAMETER_UNITS: dict[str, str] = {
    "geometry.length": "m",
    "geometry.width": "m",
    "geometry.sump_radius": "m",
    "geometry.sump_height": "m",
    "geometry.paddlewheel_length": "m",
    "thermal.alpha_rad": "-",
    "thermal.eps_w": "-",
    "thermal.sigma": "W m-2 K-4",
    "thermal.x_liner": "m",
    "thermal.k_liner": "W m-1 K-1",
    "thermal.x_ug": "m",
    "thermal.k_ug": "W m-1 K-1",
    "thermal.t_ground": "degC",
    "thermal.k_m0": "m s-1",
    "thermal.c_wind": "s m-1",
    "thermal.h_conv": "W m-2 K-1",
    "thermal.p_mix": "W",
    "thermal.rho_w": "kg m-3",
    "thermal.cp_w": "J kg-1 K-1",
    "thermal.ua_hx": "W K-1",
    "thermal.eps_reg": "-",
    "biological.mu_max": "s-1",
    "biological.eta_x": "-",
    "biological.k_a": "m2 g-1",
    "biological.i_k": "umol m-2 s-1",
    "biological.n_hill": "-",
    "biological.t_min": "degC",
    "biological.t_opt": "degC",
    "biological.t_max": "degC",
    "biological.ph_min": "-",
    "biological.ph_opt": "-",
    "biological.ph_max": "-",
    "biological.do_max_pct": "% saturation",
    "biological.m_do": "-",
    "biological.m_min": "s-1",
    "biological.k_resp": "-",
    "biological.q10": "-",
    "engineering.alpha_co2": "-",
    "engineering.beta_co2": "-",
    "engineering.alpha_o2": "-",
    "engineering.beta_o2": "-",
    "engineering.k_atm_co2": "s-1",
    "engineering.k_atm_o2": "s-1",
    "engineering.k_pw_co2": "s-1",
    "engineering.k_pw_o2": "s-1",
    "engineering.k_strip_co2_by_o2": "-",
    "engineering.k_strip_o2_by_co2": "-",
    "engineering.y_alg_co2": "g g-1",
    "engineering.y_alg_o2": "g g-1",
    "engineering.m_co2": "g mol-1",
    "engineering.m_o2": "g mol-1",
    "engineering.dic_in": "mol m-3",
    "engineering.cat_in": "mol m-3",
    "engineering.kh_o2_ref": "mol m-3 atm-1",
    "engineering.kh_co2_ref": "mol m-3 atm-1",
    "engineering.c_o2": "K",
    "engineering.c_co2": "K",
    "engineering.k1_ref": "mol m-3",
    "engineering.k2_ref": "mol m-3",
    "engineering.kw_ref": "mol2 m-6",
    "engineering.dh_k1": "J mol-1",
    "engineering.dh_k2": "J mol-1",
    "engineering.dh_kw": "J mol-1",
    "engineering.r_gas": "J mol-1 K-1",
    "engineering.p_atm": "atm",
    "engineering.y_o2": "-",
    "engineering.y_co2": "-",
    "engineering.y_pure_co2": "-",
    "engineering.t_ref_k": "K",
}

_SECTION_CLASSES = {
    "geometry": ReactorGeometry,
    "thermal": ThermalParams,
    "biological": BiologicalParams,
    "engineering": EngineeringParams,
}


def section_fields(section: str) -> list[str]:
    """Ordered field names of a parameter-file section."""
    return [f.name for f in fields(_SECTION_CLASSES[section])]


def default_parameters() -> ModelParameters:
    return ModelParameters()


def default_geometry() -> ReactorGeometry:
    return ReactorGeometry()
