"""Minimization of differences of submodular set functions.

Sets are Python ints used as bitmasks over ground sets ``{0, ..., n-1}``.
"""

from .bounds import subgradient, upper_bound_1, upper_bound_2, upper_bounds
from .constraints import constrained_mod_mod, min_modular_constrained
from .core import (
    CachedFunction,
    DSFunction,
    ModularFunction,
    SetFunction,
    SumFunction,
    TableFunction,
    brute_force_maximize,
    brute_force_minimize,
    format_set,
    members,
    random_submodular,
    to_mask,
)
from .decomp import lower_bound_1, lower_bound_2, monotone_ds, totally_normalize
from .dsopt import OptimizationTrace, OptimizerOptions, minimize, mod_mod, multi_start, sub_sup, sup_sub
from .sfm import minimize_submodular
from .submax import double_greedy, maximize_submodular

__version__ = "0.1.0"
