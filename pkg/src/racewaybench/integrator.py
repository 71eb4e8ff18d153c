"""Macro-step integration of the stiff seven-state ODE.

One macro step holds the actuator and meteorological inputs constant and
advances the state with an adaptive implicit scheme (Radau by
default, BDF selectable); gas-injection pulses make the carbonate subsystem
stiff enough that explicit methods are not viable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import BDF, Radau

from .errors import ConfigError, IntegrationError, ModelError
from .model import state_derivative
from .parameters import ModelParameters, ReactorGeometry
from .state import ActuatorInputs, MeteoSample, StateVector

_METHODS = {"bdf": BDF, "radau": Radau}

# Smallest proton concentration the guarded right-hand side will evaluate
# at; implicit trial iterates may otherwise wander to h <= 0.
_H_FLOOR = 1e-30

# The solver runs this much tighter than the configured tolerances, so
# the delivered macro-step accuracy sits comfortably within them (local
# error control alone only bounds the global error up to a small factor).
_SAFETY = 5.0


def default_abs_tol() -> np.ndarray:
    # Concentration states tight, temperature and volume looser.
    return np.array([1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-6, 1e-6])


@dataclass
class IntegratorConfig:
    """Tolerances and step-size policy for one macro step."""

    rel_tol: float = 1e-6
    abs_tol: np.ndarray = field(default_factory=default_abs_tol)
    min_substep: float = 1e-8      # [s]
    max_substep: float = 60.0      # [s]
    max_substeps_per_macro: int = 100000
    method: str = "radau"          # "radau" or "bdf"

    def validate(self) -> None:
        if not 0.0 < self.rel_tol < 1.0:
            raise ConfigError("rel_tol must lie in (0, 1)")
        if np.any(np.asarray(self.abs_tol) <= 0.0):
            raise ConfigError("abs_tol entries must be positive")
        if not 0.0 < self.min_substep <= self.max_substep:
            raise ConfigError("need 0 < min_substep <= max_substep")
        if self.method not in _METHODS:
            raise ConfigError(f"unknown method {self.method!r}; use bdf or radau")


def _guarded_rhs(meteo: MeteoSample, act: ActuatorInputs,
                 geom: ReactorGeometry, params: ModelParameters):
    """Right-hand side tolerant of slightly unphysical trial iterates.

    Concentrations are floored at zero and the proton concentration at a
    tiny positive value before evaluating the model, so implicit trial
    steps cannot leave the model's domain.
    """
    def rhs(_t, y):
        s = StateVector(
            x_alg=max(y[0], 0.0),
            x_o2=max(y[1], 0.0),
            dic=max(y[2], 0.0),
            cat=max(y[3], 0.0),
            h=max(y[4], _H_FLOOR),
            temp=y[5],
            vol=y[6],
        )
        d = state_derivative(s, meteo, act, geom, params, validate=False)
        if not all(map(math.isfinite, d)):
            raise ModelError(f"non-finite state derivative at state {s}")
        return d

    return rhs


def integrate_macro_step(state: StateVector, meteo: MeteoSample,
                         act: ActuatorInputs, geom: ReactorGeometry,
                         params: ModelParameters, t_m: float,
                         cfg: IntegratorConfig | None = None) -> StateVector:
    """Advance the state by t_m seconds with inputs held constant.

    Local error per substep is bounded by the configured tolerances.
    Concentrations that undershoot zero by less than their absolute
    tolerance are clamped to zero on output.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    cfg.validate()
    if not t_m > 0.0:
        raise ConfigError("macro-step length must be positive")
    state.validate(geom)
    meteo.validate()

    y0 = np.array(state.as_tuple(), dtype=float)
    solver = _METHODS[cfg.method](
        _guarded_rhs(meteo, act, geom, params), 0.0, y0, t_bound=t_m,
        rtol=cfg.rel_tol / _SAFETY,
        atol=np.asarray(cfg.abs_tol, dtype=float) / _SAFETY,
        max_step=min(cfg.max_substep, t_m),
    )
    steps = 0
    while solver.status == "running":
        solver.step()
        steps += 1
        if steps > cfg.max_substeps_per_macro:
            raise IntegrationError(
                f"exceeded {cfg.max_substeps_per_macro} substeps in one macro step",
                state=_to_state(solver.y))
        if (solver.status == "running" and solver.step_size is not None
                and solver.step_size < cfg.min_substep):
            raise IntegrationError(
                f"substep {solver.step_size:.3e} s fell below the minimum "
                f"{cfg.min_substep:.3e} s", state=_to_state(solver.y))
    if solver.status == "failed":
        raise IntegrationError("step-size underflow: local error target "
                               "unreachable", state=_to_state(solver.y))

    y = solver.y.copy()
    abs_tol = np.asarray(cfg.abs_tol, dtype=float)
    for i in (0, 1, 2, 3):  # non-negative concentration states
        if y[i] < 0.0:
            if y[i] >= -abs_tol[i]:
                y[i] = 0.0
            else:
                raise IntegrationError(
                    f"state component {i} went negative beyond tolerance "
                    f"({y[i]:.3e})", state=_to_state(y))
    if y[4] <= 0.0:
        raise IntegrationError("proton concentration lost positivity",
                               state=_to_state(y))
    return _to_state(y)


def _to_state(y) -> StateVector:
    return StateVector(x_alg=float(y[0]), x_o2=float(y[1]), dic=float(y[2]),
                       cat=float(y[3]), h=float(y[4]), temp=float(y[5]),
                       vol=float(y[6]))
