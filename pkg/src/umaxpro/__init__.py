"""Latin hypercube designs optimized under the periodic maximum projection criterion."""

__version__ = "0.1.0"

from .annealer import OptResult, Schedule, greedy_polish, optimize, optimize_batch
from .criteria import (CriterionSpec, CriterionState, InfiniteObjective, Metric, build_state,
                       maximin_value, maxpro_value, morris_mitchell_value, umaxpro_value)
from .design import (Design, LhsDesign, Placement, SubspaceSelector, project, realize,
                     translate_mod1, validate_lhs)
from .discrepancy import wd2, wd2_squared
from .samplers import halton, random_lhs, srs

__all__ = [
    "CriterionSpec", "CriterionState", "Design", "InfiniteObjective", "LhsDesign", "Metric",
    "OptResult", "Placement", "Schedule", "SubspaceSelector", "build_state", "greedy_polish",
    "halton", "maximin_value", "maxpro_value", "morris_mitchell_value", "optimize",
    "optimize_batch", "project", "random_lhs", "realize", "srs", "translate_mod1",
    "umaxpro_value", "validate_lhs", "wd2", "wd2_squared",
]
