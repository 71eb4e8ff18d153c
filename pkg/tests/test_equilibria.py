import math

import pytest

from racewaybench import ModelError, dissociation_constants, evaluate_equilibria, henry_equilibria


def test_reference_temperature_returns_reference_values(params):
    k1, k2, kw = dissociation_constants(25.0, params)
    eng = params.engineering
    assert k1 == eng.k1_ref
    assert k2 == eng.k2_ref
    assert kw == eng.kw_ref
    kh_o2, kh_co2, *_ = henry_equilibria(25.0, params)
    assert kh_o2 == eng.kh_o2_ref
    assert kh_co2 == eng.kh_co2_ref


def test_positive_enthalpy_grows_with_temperature(params):
    k1_cold, _, _ = dissociation_constants(15.0, params)
    k1_ref, _, _ = dissociation_constants(25.0, params)
    k1_warm, _, _ = dissociation_constants(35.0, params)
    assert k1_cold < k1_ref < k1_warm


def test_dissociation_matches_direct_formula_at_15c(params):
    # independent high-precision evaluation of the exponential law
    eng = params.engineering
    t_k = 15.0 + 273.15
    arg = 1.0 / t_k - 1.0 / eng.t_ref_k
    for ref, dh, got in zip(
            (eng.k1_ref, eng.k2_ref, eng.kw_ref),
            (eng.dh_k1, eng.dh_k2, eng.dh_kw),
            dissociation_constants(15.0, params)):
        assert got == pytest.approx(ref * math.exp(-dh / eng.r_gas * arg),
                                    rel=1e-14)


def test_henry_oxygen_at_30c_matches_direct_formula(params):
    eng = params.engineering
    t_k = 30.0 + 273.15
    expected = (eng.kh_o2_ref
                * math.exp(eng.c_o2 * (1.0 / t_k - 1.0 / eng.t_ref_k))
                * eng.p_atm * eng.y_o2)
    _, _, x_o2_eq, _, _ = henry_equilibria(30.0, params)
    assert x_o2_eq == pytest.approx(expected, rel=1e-14)


def test_injected_over_atmospheric_co2_ratio(params):
    for temp in (5.0, 20.0, 35.0):
        _, _, _, co2_eq, co2_iny = henry_equilibria(temp, params)
        assert co2_iny / co2_eq == pytest.approx(
            1.0 / params.engineering.y_co2, rel=1e-12)


def test_gas_solubility_falls_with_temperature(params):
    eq_cold = evaluate_equilibria(10.0, params)
    eq_warm = evaluate_equilibria(30.0, params)
    assert eq_warm.kh_o2 < eq_cold.kh_o2
    assert eq_warm.kh_co2 < eq_cold.kh_co2
    assert eq_warm.x_o2_eq < eq_cold.x_o2_eq


def test_validity_window_enforced(params):
    with pytest.raises(ModelError):
        dissociation_constants(-15.0, params)
    with pytest.raises(ModelError):
        henry_equilibria(75.0, params)
    with pytest.raises(ModelError):
        dissociation_constants(float("nan"), params)


def test_all_outputs_strictly_positive(params):
    for temp in (-5.0, 0.0, 25.0, 55.0):
        eq = evaluate_equilibria(temp, params)
        assert min(eq.k1, eq.k2, eq.kw, eq.kh_o2, eq.kh_co2, eq.x_o2_eq,
                   eq.co2_eq, eq.co2_iny) > 0.0
