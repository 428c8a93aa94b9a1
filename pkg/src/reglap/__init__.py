"""Numerical toolkit for regional and full-space fractional Laplacians.

Closed-form constants and explicit test functions (catalog), adaptive PV
quadrature of the operators (operator), a deterministic Monte Carlo jump
chain for censored and killed stable-like processes (simulator), and
scripted boundary-decay / Harnack / Carleson experiments (experiments).
"""

from .catalog import (c_half_space, c_half_space_reflected, constants_table,
                      gamma_coeff, gamma_bar_coeff, h_power, i_coeff,
                      lambda_killed, lambda_regional, lateral_factor,
                      normalization_constant, u_power, w_power)
from .geometry import (Ball, GraphDomain, HalfSpace, LipschitzWedge,
                       graph_power, graph_zero)
from .kernels import (kernel_constant, kernel_halfspace_reflected,
                      kernel_halfspace_subordinate)
from .operator import (OperatorProblem, commutator_split, cross_term,
                       epsilon_sweep, fullspace_pv, regional_pv)
from .simulator import (HBox, JumpChainConfig, dynkin_check,
                        exit_probability, jump_rate, mean_exit_time,
                        run_many, run_path)
from .experiments import (ExperimentConfig, bhi_decay_fit, carleson_scan,
                          curved_bound_scan, fit_exponent, harnack_scan,
                          lipschitz_ratio)

__version__ = "0.1.0"
