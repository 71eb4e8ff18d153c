"""Growth-rate machinery: light climate, viability windows, inhibition,
and the gross-photosynthesis / growth / maintenance bundle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, ModelError
from .parameters import ModelParameters

# Below this optical depth the exponential attenuation term is replaced
# by its two-term series to avoid 0/0 in the dilute-culture limit.
_THIN_CULTURE_Z = 1e-8


@dataclass(frozen=True, slots=True)
class RateBundle:
    """Limitation factors and the resulting biological rates."""

    i_av: float      # depth-averaged irradiance [umol m-2 s-1]
    mu_i: float      # light limitation [-]
    mu_t: float      # temperature limitation [-]
    mu_ph: float     # pH limitation [-]
    mu_do: float     # dissolved-oxygen inhibition [-]
    p_gross: float   # gross photosynthetic rate [s-1]
    mu_g: float      # specific growth rate [s-1]
    m_resp: float    # maintenance/respiration rate [s-1]


def smooth_window(x: float, a: float, b: float, c: float) -> float:
    """Cubic smoothstep viability window: 0 at/below a, 1 at b, 0 at/above c.

    Both flanks use 3r^2 - 2r^3 with r the normalized distance into the
    flank, giving a continuous factor with zero slope at a, b and c.
    """
    if not (a < b < c):
        raise ConfigError("window bounds must satisfy a < b < c")
    if x <= a or x >= c:
        return 0.0
    if x <= b:
        r = (x - a) / (b - a)
    else:
        r = (c - x) / (c - b)
    return r * r * (3.0 - 2.0 * r)


def light_limitation(par: float, x_alg: float, depth: float,
                     params: ModelParameters):
    """(depth-averaged irradiance, light limitation factor).

    The mean irradiance over the water column follows exponential
    attenuation by the biomass; the removable singularity of
    (1 - exp(-z))/z at z -> 0 is handled by its series limit, so a clear
    culture sees the full surface irradiance.
    """
    if par < 0.0 or not math.isfinite(par):
        raise ModelError("PAR must be finite and non-negative")
    if depth <= 0.0:
        raise ModelError("depth must be positive")
    if x_alg < 0.0:
        raise ModelError("biomass concentration must be non-negative")
    bio = params.biological
    z = bio.k_a * depth * x_alg
    if z < _THIN_CULTURE_Z:
        i_av = par * (1.0 - 0.5 * z)
    else:
        i_av = par * (1.0 - math.exp(-z)) / z
    if i_av <= 0.0:
        return 0.0, 0.0
    i_n = i_av**bio.n_hill
    mu_i = i_n / (bio.i_k**bio.n_hill + i_n)
    return i_av, mu_i


def do_inhibition(do_pct: float, params: ModelParameters) -> float:
    """Growth inhibition by oxygen supersaturation, clamped to [0, 1].

    The raw expression goes negative above the inhibition scale; growth
    cannot run backwards through this factor, so it saturates at zero and
    losses are left to respiration.
    """
    if do_pct < 0.0 or not math.isfinite(do_pct):
        raise ModelError("DO percentage must be finite and non-negative")
    bio = params.biological
    mu = 1.0 - (do_pct / bio.do_max_pct) ** bio.m_do
    return min(1.0, max(0.0, mu))


def biological_rates(temp_c: float, ph: float, do_pct: float, par: float,
                     x_alg: float, depth: float,
                     params: ModelParameters) -> RateBundle:
    """Evaluate all limitation factors and the three biological rates.

    Gross photosynthesis multiplies the four factors; growth keeps the
    eta_x fraction of it; respiration rises under light limitation and
    with temperature through the Q10 law (referenced to 20 degC).
    """
    bio = params.biological
    i_av, mu_i = light_limitation(par, x_alg, depth, params)
    mu_t = smooth_window(temp_c, bio.t_min, bio.t_opt, bio.t_max)
    mu_ph = smooth_window(ph, bio.ph_min, bio.ph_opt, bio.ph_max)
    mu_do = do_inhibition(do_pct, params)
    p_gross = bio.mu_max * mu_i * mu_t * mu_ph * mu_do
    mu_g = bio.eta_x * p_gross
    m_resp = (bio.m_min * (1.0 + bio.k_resp * (1.0 - mu_i))
              * bio.q10 ** ((temp_c - 20.0) / 10.0))
    return RateBundle(i_av=i_av, mu_i=mu_i, mu_t=mu_t, mu_ph=mu_ph,
                      mu_do=mu_do, p_gross=p_gross, mu_g=mu_g, m_resp=m_resp)
