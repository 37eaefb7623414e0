"""Ground states of a coupled cubic-superlinear Schrodinger system.

Computes positive steady-state pairs by minimizing the energy functional
over the Nehari manifold on a Dirichlet-truncated box, and provides the
discrete calculus, fiber projection, split-step evolution check and CLI
around that solver.
"""

from .energy import (
    FunctionalBreakdown,
    PhysParams,
    StatePair,
    breakdown,
    eval_F,
    eval_I,
    eval_L,
    eval_Mp,
    eval_Nlam,
    grad_I,
    h_inner,
)
from .evolve import ComplexField, EvolutionSummary, evolve_split_step, steady_state_residual
from .grid import Field, GridSpec, dirichlet_energy, laplacian, quad_integral
from .minimize import SolveConfig, SolveReport, initial_guess, lambda_sweep, solve_ground_state
from .nehari import ProjectionResult, fiber_H, fiber_K, project

__all__ = [
    "GridSpec",
    "Field",
    "quad_integral",
    "dirichlet_energy",
    "laplacian",
    "PhysParams",
    "StatePair",
    "FunctionalBreakdown",
    "eval_L",
    "eval_Mp",
    "eval_Nlam",
    "eval_I",
    "eval_F",
    "breakdown",
    "grad_I",
    "h_inner",
    "ProjectionResult",
    "fiber_K",
    "fiber_H",
    "project",
    "SolveConfig",
    "SolveReport",
    "initial_guess",
    "solve_ground_state",
    "lambda_sweep",
    "ComplexField",
    "EvolutionSummary",
    "steady_state_residual",
    "evolve_split_step",
]

__version__ = "0.1.0"
