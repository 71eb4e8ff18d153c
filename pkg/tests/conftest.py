import pytest

from racewaybench import (ActuatorInputs, ActuatorLimits, MeteoSample,
                          ModelParameters, ReactorGeometry,
                          build_initial_state, par_from_global)


@pytest.fixture(scope="session")
def params():
    p = ModelParameters()
    p.validate()
    return p


@pytest.fixture(scope="session")
def geom():
    g = ReactorGeometry()
    g.validate()
    return g


@pytest.fixture(scope="session")
def limits():
    return ActuatorLimits()


def make_state(params, geom, x_alg=500.0, do_pct=110.0, dic=4.0, ph=8.0,
               temp=24.0, depth=0.15):
    return build_initial_state(params, geom, x_alg_gl=x_alg / 1000.0,
                               do_pct=do_pct, dic=dic, ph=ph, temp_c=temp,
                               depth_m=depth)


def random_state(rng, params, geom):
    """A physically plausible random operating point."""
    return make_state(
        params, geom,
        x_alg=rng.uniform(50.0, 2000.0),
        do_pct=rng.uniform(30.0, 300.0),
        dic=rng.uniform(0.5, 10.0),
        ph=rng.uniform(6.5, 9.5),
        temp=rng.uniform(10.0, 35.0),
        depth=rng.uniform(0.10, 0.30),
    )


def random_meteo(rng):
    rad = rng.uniform(0.0, 1000.0)
    return MeteoSample(rad_global=rad, rad_par=par_from_global(rad),
                       temp_ext=rng.uniform(5.0, 40.0),
                       rh=rng.uniform(20.0, 100.0),
                       wind=rng.uniform(0.0, 8.0))


def random_actuators(rng, limits):
    return ActuatorInputs(
        q_co2=rng.uniform(0.0, limits.q_co2_max),
        q_air=rng.uniform(0.0, limits.q_air_max),
        q_d=rng.choice([0.0, limits.pump_rate]),
        q_h=rng.choice([0.0, limits.pump_rate]),
        q_w=rng.uniform(0.0, limits.q_w_max),
        t_in_hx=rng.uniform(limits.t_in_min, limits.t_in_max),
    )


def quiet_meteo(temp_c=20.0, rh=60.0, wind=2.0, rad=0.0):
    return MeteoSample(rad_global=rad, rad_par=par_from_global(rad),
                       temp_ext=temp_c, rh=rh, wind=wind)


def actuators_off(t_in=20.0):
    return ActuatorInputs(q_co2=0.0, q_air=0.0, q_d=0.0, q_h=0.0, q_w=0.0,
                          t_in_hx=t_in)
