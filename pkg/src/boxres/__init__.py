"""Box resolutions of monomial ideals in the Bergman space, checked exactly
on finite truncations."""

__version__ = "0.1.0"

from .complex import (BasisLabel, BoxComplex, SignMatrix, build_complex, build_psi,
                      exactness_report, kernel_basis, module_morphism_check, per_degree_oracle,
                      psi_norm_bound_check)
from .exact import Surd
from .geometry import BundleData, bundle_report, khom_formal_sum, restriction_factor
from .ideal import (MonomialIdeal, UnitIdealError, boxes_from_generators, complement_contains,
                    monomial_in_ideal)
from .lattice import (Box, box_contains, box_is_subset, enumerate_box_truncated, intersect_boxes,
                      intersect_family, shuffles)
from .toeplitz import (TruncatedOperator, decay_profile, omega, projection_commutator,
                       quotient_toeplitz, schatten_partial_sums, self_commutator, toeplitz_matrix)
