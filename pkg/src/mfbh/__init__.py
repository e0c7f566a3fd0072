"""Exact thermodynamics of the long-range-hopping Bose-Hubbard model.

The infinite-volume pressure reduces to a one-dimensional optimisation over
a single-site order parameter ``r >= 0``; this package solves it, derives
density, condensate fraction and the order-parameter rate function, and
checks the reduction against exact diagonalisation of small systems.
"""

from .errors import BoseHubbardError, DomainError, NumericalFailure
from .fock import AUTO, FockOperators, ModelParams, build_K, build_fock_operators
from .gibbs import (DensityMatrix, GibbsState, entropy_identity_residual, expectation,
                    gibbs_state, pressure_tilde, relative_entropy)
from .legendre import (RateFunctionTable, berezin_lieb_lower_bound, duality_gap,
                       growth_exponent, rate_function)
from .oracle import FiniteSystem, build_finite_system, convergence_report, finite_pressure
from .phase import (PhasePoint, condensate_curve, critical_beta, isotherm, lambda_critical,
                    mu_of_density)
from .spectrum import SpectralDecomposition, eig_symmetric, log_sum_exp
from .varsolve import VariationalSolution, density_of_mu, objective, solve

__version__ = "0.1.0"
