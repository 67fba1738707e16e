"""Forward Eulerian-Lagrangian Runge-Kutta finite volume schemes with cell merging."""
from .characteristics import BURGERS, FluxSpec
from .errors import GeometryError, MergeError, NumericalFailure, SolverError, TimeStepError
from .evolve import RKScheme
from .grid import CellAverageField, Dirichlet, MergedGrid, Periodic, UniformGrid1D
from .harness import ErrorReport, convergence_table, l1_error
from .problems import PROBLEM_IDS, ProblemSpec, get_problem
from .solver import Field2D, SolverConfig, advance_1d, choose_dt, solve_1d, solve_2d, step_1d, strang_step_2d

__all__ = [
    "BURGERS",
    "FluxSpec",
    "GeometryError",
    "MergeError",
    "NumericalFailure",
    "SolverError",
    "TimeStepError",
    "RKScheme",
    "CellAverageField",
    "Dirichlet",
    "MergedGrid",
    "Periodic",
    "UniformGrid1D",
    "ErrorReport",
    "convergence_table",
    "l1_error",
    "PROBLEM_IDS",
    "ProblemSpec",
    "get_problem",
    "Field2D",
    "SolverConfig",
    "advance_1d",
    "choose_dt",
    "solve_1d",
    "solve_2d",
    "step_1d",
    "strang_step_2d",
]
