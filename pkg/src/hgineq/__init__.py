"""Numerical verification of Euler-operator functional inequalities on
anisotropic dilation structures (homogeneous groups realized on R^n)."""

from .catalog import (Tolerances, VerificationReport, VERIFIERS,
                      verify_dilation_scaling, verify_embedding_norms,
                      verify_fractional, verify_hardy_equivalence,
                      verify_higher_order, verify_lp_sobolev, verify_poincare,
                      verify_polar_mc, verify_slz, verify_weighted_l2_identity,
                      verify_weighted_lp)
from .euler import (OperatorSymbol, euler_adjoint_apply, euler_apply,
                    euler_power, multiplier_apply)
from .groups import (BUILTIN_GROUPS, HomogeneousGroup, QuasiNormSpec,
                     anisotropic_group, dilate, euclidean_group,
                     heisenberg_group, quasi_norm)
from .montecarlo import separable_group_integral, sphere_integral_mc
from .profiles import LogGrid, RadialProfile, standard_battery
from .quadrature import WeightSpec, ip_kernel, lp_norm, radial_integral, weighted_lp_norm
from .special import complex_gamma, embedding_constant

__version__ = "0.1.0"
