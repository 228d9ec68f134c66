"""Well-balanced finite volumes for 1D blood flow in arteries of variable stiffness."""
from ._backend import DEFAULT as BACKEND
from .analytic import (damped_wave_discharge, damped_wave_params, dead_man_state,
                       interface_coefficients, measure_pulse_amplitudes)
from .boundary import BoundaryDriver, SineWaveform, ghost_states
from .config import SimulationConfig, parse_config
from .core import (ConservedState, Grid1D, PhysicalParams, SimulationState, Snapshot,
                   SnapshotSeries, VesselGeometry, pressure, velocity)
from .flux import (cfl_timestep, eigenvalues, hll_flux, physical_flux, rusanov_flux,
                   sound_speed)
from .integrator import Problem, Solver, StepReport, friction_correct, run
from .scenarios import build_damped_wave, build_dead_man, build_stented_reflection
from .wellbalanced import interface_fluxes, p_term, reconstruct_interface

__version__ = "0.1.0"
