"""Simulation and benchmarking toolkit for outdoor microalgae raceway
photobioreactors: a coupled thermal/biological/physicochemical plant
model, a closed-loop benchmark protocol with four pluggable controller
slots, baseline controllers, and standardized cost functions and KPIs.
"""

from .biology import RateBundle, biological_rates, do_inhibition, light_limitation, smooth_window
from .carbonate import (CarbonateSpeciation, alkalinity, proton_derivative,
                        solve_ph_equilibrium, speciate_carbonates)
from .controllers import (ControlSignals, ControllerContext, EmpcConfig,
                          Forecast, Observation, References, Timeline,
                          build_controller, controller_names, onoff_hysteresis,
                          pi_step, predict_biomass, register_controller,
                          simc_tune, solve_empc_dilution)
from .equilibria import (EquilibriumSet, dissociation_constants,
                         evaluate_equilibria, henry_equilibria)
from .errors import (ConfigError, ControllerError, EvaluationError,
                     IntegrationError, ModelError, RacewayError, ScenarioError)
from .evaluation import (BENCHMARK_WEIGHTS, CostWeights, KpiReport,
                         LoopCostReport, compute_kpis, cost_consumption,
                         cost_smoothness, cost_tracking, loop_costs, normalize)
from .gastransfer import GasTransferSet, gas_transfer_coeffs
from .integrator import IntegratorConfig, integrate_macro_step
from .io import (RunManifest, export_results, generate_synthetic_scenario,
                 import_results, load_scenario, read_manifest, read_parameters,
                 write_parameters, write_scenario_csv)
from .model import (InstantEvaluation, compute_outputs, evaluate_instant,
                    par_from_global, state_derivative)
from .parameters import (BiologicalParams, EngineeringParams, ModelParameters,
                         ReactorGeometry, ThermalParams, default_geometry,
                         default_parameters)
from .simulation import (ControllerSet, DelayBuffer, ResultsLog, Scenario,
                         build_forecast, build_initial_state, run_simulation,
                         saturate_and_map)
from .state import (ActuatorInputs, ActuatorLimits, DerivedOutputs,
                    MeteoSample, StateVector)
from .thermal import ThermalFluxes, sky_temperature, thermal_fluxes

__version__ = "0.1.0"
