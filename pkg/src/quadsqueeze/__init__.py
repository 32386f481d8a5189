"""Displacement-operator squeezed states for time-dependent quadratic potentials.

Typical use::

    from quadsqueeze import PotentialSpec, solve_basis, build_bundle
    spec = PotentialSpec.driven(omega=1.0, force=0.5)
    basis = solve_basis(spec, tau_max=10.0)
    bundle = build_bundle(basis)
"""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .auxiliary import (AuxiliaryBundle, build_bundle, check_formula_I, check_formula_II,
                        check_formula_III, check_formula_IV)
from .classical import ClassicalBasis, solve_basis, wronskian_drift, xi, xi_dot
from .errors import (CapacityError, ConfigurationError, ConvergenceWarning, DomainError,
                     NumericError)
from .potential import (CoefficientFunction, PotentialSpec, evaluate_potential,
                        schroedinger_residual)
from .squeeze import (BchCoords, DisplacementParam, NumberBasisExpansion, Ordering,
                      SqueezeParam, assemble_wavefunction, bch, expand_alpha_z,
                      expand_z_alpha)
from .states import (NumberState, WavefunctionGrid, hermite, psi_m, psi_m_grid, r_factor,
                     separable_coords)

__all__ = [
    "BACKEND", "AuxiliaryBundle", "build_bundle", "check_formula_I", "check_formula_II",
    "check_formula_III", "check_formula_IV", "ClassicalBasis", "solve_basis",
    "wronskian_drift", "xi", "xi_dot", "CapacityError", "ConfigurationError",
    "ConvergenceWarning", "DomainError", "NumericError", "CoefficientFunction",
    "PotentialSpec", "evaluate_potential", "schroedinger_residual", "BchCoords",
    "DisplacementParam", "NumberBasisExpansion", "Ordering", "SqueezeParam",
    "assemble_wavefunction", "bch", "expand_alpha_z", "expand_z_alpha", "NumberState",
    "WavefunctionGrid", "hermite", "psi_m", "psi_m_grid", "r_factor", "separable_coords",
]
