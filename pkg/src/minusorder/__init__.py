"""Minus order on idempotent matrices, its lattice operations, and J-projections."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .subspace import (DEFAULT_TOL, Subspace, ToleranceConfig, column_space, complement,
                       intersect, null_space, span)
from .idempotent import (CanonicalForm, Idempotent, abs_value, block_sqrt, block_tilde,
                         canonical_form, psd_sqrt, q_over, q_under, q_under_via_abs,
                         validate_idempotent)
from .symmetry import Symmetry, validate_symmetry
from .lattice import (Verdict, LatticeResult, OrderReport, DiffReport, diff_report,
                      inf_minus, leq_minus, order_report, strictly_below, sup_iterated,
                      sup_minus, sup_orth, sup_orthogonality_test, sup_with_symmetry)
from .krein import (construct_q_over_preimage, construct_q_under_preimage, is_j_projection,
                    j_projection_onto, thm37_case, thm37_counterexample)
from .random_gen import GenConfig, make_rng
from ._kernels import BACKEND
