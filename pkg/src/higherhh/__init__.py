"""Higher Hochschild homology of truncated simplicial sets, computed exactly."""

from __future__ import annotations

__version__ = "0.1.0"

from .field import QQ, GF, Field, FieldError
from .sparse import SparseMatrix, rank, solve
from .simplicial import (
    TruncatedSimplicialSet, SimplicialError, point, sphere, circle_two_cell, product, wedge,
    bouquet, torus, torus_cell_bouquet, FiniteGroup, cyclic_group, SetAction, TwistingFunction,
    tcp, klein_bottle, cyclic_cover, validate,
)
from .algebra import (
    Algebra, AlgebraError, truncated_poly, poly_weight_capped, quotient_by_poly,
    free_graded_commutative, exterior, ground_field_algebra, tensor_power, tensor,
    AlgebraAction, scaling_action, cyclic_permutation_action, trivial_algebra_action,
)
from .loday import (
    LodayError, BudgetExceeded, ComplexInvariantError, Coefficients, Twist, LodaySpec,
    LodayComplex, enumerate_basis, build_complex, face_image,
)
from .homology import HomologyTable, homology_dims, euler_check, solve_boundary, compare_tables
from .spectral import E2Page, e2_page, twisted_hochschild_exterior, collapse_check
from .torusdiag import (
    MultiMatrixChain, TotalComplexBlock, diagonal_class, volume_form, split_move_witness,
    relation_check, quotient_poly_image,
)
