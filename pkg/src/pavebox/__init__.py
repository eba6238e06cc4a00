"""pavebox: guaranteed pavings of nonlinear solution sets.

Rigorous interval arithmetic, forward-backward (HC4) and centered-form
contractors with Gauss-Jordan tree preconditioning, and a branch-and-prune
paver, served over HTTP or driven from the command line.
"""

__version__ = "0.1.0"

from .box import Box, IntervalMatrix
from .contractors import (
    CenteredContractor,
    Contractor,
    HC4,
    HC4Revise,
    centered_contract,
    centered_linear_propagate,
    compose,
    hc4_fixpoint,
    hc4_revise,
    repeat_until_fixpoint,
)
from .expr import Expr, Function, ParseError, differentiate, parse_expression, to_str
from .interval import EMPTY, Interval
from .paver import Paving, PaverConfig, box_proximity, curve_oracle, pave, project, proximity
from .problems import ProblemError, ProblemSpec, builtin_delay2, load_problem, parse_problem

__all__ = [
    "Box",
    "CenteredContractor",
    "Contractor",
    "EMPTY",
    "Expr",
    "Function",
    "HC4",
    "HC4Revise",
    "Interval",
    "IntervalMatrix",
    "ParseError",
    "Paving",
    "PaverConfig",
    "ProblemError",
    "ProblemSpec",
    "box_proximity",
    "builtin_delay2",
    "centered_contract",
    "centered_linear_propagate",
    "compose",
    "curve_oracle",
    "differentiate",
    "hc4_fixpoint",
    "hc4_revise",
    "load_problem",
    "parse_expression",
    "parse_problem",
    "pave",
    "project",
    "proximity",
    "repeat_until_fixpoint",
    "to_str",
]
