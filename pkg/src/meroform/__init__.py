"""Exact and high-precision Fourier coefficients of meromorphic modular forms."""
from .qseries import (LaurentSeries, TARGETS, canonical_target, delta_and_j, eisenstein,
                      oracle_coefficients)
from .ideals import (EISENSTEIN, GAUSSIAN, FieldTag, PrimitiveIdeal, bezout_pair,
                     canonical_rep, conjugate_ideal, enumerate_primitive_ideals,
                     field_from_name)
from .numerics import (InsufficientOrderError, PrecisionError, e2hat_at, eval_at,
                       eval_derivative_at, eval_form, special_value)
from .expansions import (A_value, C_value, CoefficientValue, F_coefficient, formula_coefficient,
                         formula_coefficients, recipe_for, tail_estimate)
from .pole_family import EllipticPointError, pole_family_coefficient, pole_family_oracle
from .poincare import (LatticeSumConfig, NearPoleError, F_script_direct, H_direct, fourier_H,
                       identity_residual)

__version__ = "0.1.0"
