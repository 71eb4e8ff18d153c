"""Carbonate speciation and electroneutrality-implied proton dynamics.

DIC splits algebraically into CO2/HCO3-/CO3-- given the proton
concentration; the proton rate follows from differentiating the charge
balance Cat + H - HCO3 - 2 CO3 - OH = 0 in time, so pH is never
integrated as an independent state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ModelError


@dataclass(frozen=True, slots=True)
class CarbonateSpeciation:
    """Dissolved carbonate species [mol m-3] and the shared denominator."""

    co2: float
    hco3: float
    co3: float
    oh: float
    delta: float  # H^2 + H*K1 + K1*K2 [mol2 m-6]


def speciate_carbonates(dic: float, h: float, k1: float, k2: float,
                        kw: float) -> CarbonateSpeciation:
    """Split DIC into its three species; also reports OH- = KW/H.

    The three fractions share the denominator H^2 + H*K1 + K1*K2 and sum
    to one, so the species close the DIC balance to rounding error.
    """
    if not (h > 0.0) or not math.isfinite(h):
        raise ModelError("proton concentration must be strictly positive")
    if dic < 0.0 or not math.isfinite(dic):
        raise ModelError("DIC must be finite and non-negative")
    delta = h * h + h * k1 + k1 * k2
    co2 = dic * (h * h) / delta
    hco3 = dic * (h * k1) / delta
    co3 = dic * (k1 * k2) / delta
    return CarbonateSpeciation(co2=co2, hco3=hco3, co3=co3, oh=kw / h, delta=delta)


def alkalinity(dic: float, h: float, k1: float, k2: float, kw: float) -> float:
    """Strong-cation concentration balancing (dic, h): HCO3 + 2 CO3 + OH - H."""
    sp = speciate_carbonates(dic, h, k1, k2, kw)
    return sp.hco3 + 2.0 * sp.co3 + sp.oh - h


def charge_imbalance(h: float, dic: float, cat: float, k1: float, k2: float,
                     kw: float) -> float:
    """Residual of the charge balance; strictly increasing in h."""
    sp = speciate_carbonates(dic, h, k1, k2, kw)
    return cat + h - sp.hco3 - 2.0 * sp.co3 - sp.oh


def proton_derivative(dic: float, cat: float, h: float, dic_dot: float,
                      cat_dot: float, k1: float, k2: float, kw: float) -> float:
    """Proton rate that keeps the charge balance satisfied.

    dH/dt = -(f_DIC * dDIC/dt + f_Cat * dCat/dt) / f_H with the partial
    derivatives of the charge-balance residual taken at (dic, cat, h).
    f_Cat is identically 1 and f_H >= 1, so the expression is regular for
    any physical h; cat itself enters only through the current h.
    """
    if not (h > 0.0) or not math.isfinite(h):
        raise ModelError("proton concentration must be strictly positive")
    delta = h * h + h * k1 + k1 * k2
    g_frac = (h * k1) / delta          # HCO3 / DIC
    h_frac = (k1 * k2) / delta         # CO3 / DIC
    ddelta_dh = 2.0 * h + k1
    dg_dh = k1 * (k1 * k2 - h * h) / (delta * delta)
    dh_dh = -(k1 * k2) * ddelta_dh / (delta * delta)
    f_dic = -(g_frac + 2.0 * h_frac)
    f_h = 1.0 - dic * (dg_dh + 2.0 * dh_dh) + kw / (h * h)
    if f_h == 0.0:
        raise ModelError("charge-balance sensitivity f_H vanished")
    return -(f_dic * dic_dot + cat_dot) / f_h


def solve_ph_equilibrium(dic: float, cat: float, k1: float, k2: float,
                         kw: float, h_lo: float = 1e-14,
                         h_hi: float = 1e4) -> float:
    """Proton concentration satisfying the charge balance, by bisection.

    Used to construct consistent initial states. The residual is monotone
    in h, so plain bisection on a wide bracket converges unconditionally.
    """
    f_lo = charge_imbalance(h_lo, dic, cat, k1, k2, kw)
    f_hi = charge_imbalance(h_hi, dic, cat, k1, k2, kw)
    if f_lo > 0.0 or f_hi < 0.0:
        raise ModelError("charge balance has no root in the bracket")
    for _ in range(200):
        mid = math.sqrt(h_lo * h_hi)  # geometric: h spans many decades
        if charge_imbalance(mid, dic, cat, k1, k2, kw) < 0.0:
            h_lo = mid
        else:
            h_hi = mid
        if h_hi - h_lo <= 1e-15 * h_lo:
            break
    return 0.5 * (h_lo + h_hi)
