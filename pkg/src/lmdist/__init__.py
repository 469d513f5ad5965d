"""lmdist: exact computer algebra for monomial-distance experiments.

Monomial distance and lex leading monomials, spans of shifted partial
derivatives with exact prime-field rank, design and matrix-product
polynomial families with their structured restrictions, the extension
counting bound with its shift-window parameter engine, and explicit
Hessian-rank witness points for the matrix-product polynomial.
"""

from .algebra import (
    DEFAULT_PRIME,
    QQ,
    PrimeField,
    binomial_exact,
    is_prime,
    largest_prime_in,
    ln_factorial_ratio_estimate,
    ln_factorial_ratio_exact,
)
from .budget import DEFAULT_BUDGET_CELLS, BudgetExceededError
from .bounds import (
    BoundParams,
    BoundReport,
    ExtensionCheck,
    extension_lower_bound,
    padding_slack_holds,
    shift_window,
    sweep,
    top_fanin_lower_bound,
    verify_extension_count,
)
from .families import (
    Depth4Circuit,
    ImmParams,
    LmFamilyMember,
    NwParams,
    RestrictionPlan,
    depth4_expand,
    depth4_upper_bound,
    imm_poly,
    imm_restricted_lm_family,
    imm_table,
    lm_of_segment,
    nw_poly,
    nw_prefix_derivative,
    nw_table,
)
from .poly import (
    Monomial,
    SparsePoly,
    VarTable,
    mono_distance,
    parse_monomial,
    parse_poly,
    simple_table,
)
from .spans import (
    CoeffMatrix,
    SpanBasis,
    derivative_span,
    lm_shift_count,
    rank_ff,
    shifted_span_dimension,
)
from .witness import (
    HessianMatrix,
    WitnessPoint,
    WitnessReport,
    canonical_singular_diag,
    construct_witness,
    det_hessian_at,
    imm_hessian_at,
    rank_exact_rational,
    rank_transfer_check,
    verify_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
