"""Exact symbolic and numerical computation in the Toeplitz algebra of N x| N^x.

The package is organised around the affine monoid of maps n -> m + a*n on the
natural numbers.  `semigroup` provides the quasi-lattice order and the
euclidean algorithm behind it, `algebra` rewrites words in the generating
isometries to canonical spanning monomials, `representation` realises the
generators as exact weighted permutations of basis vectors (the brute-force
oracles), `spectrum` parametrises the character space of the diagonal,
`states` evaluates the equilibrium states of the natural time evolution, and
`bostconnes` covers the related Hecke-algebra Euler-product machinery.
"""

from . import bostconnes, numtheory, representation, semigroup, spectrum, states
from .numtheory import (
    Factorization,
    ResidueClass,
    SupernaturalNumber,
    TruncatedAdele,
    crt_combine,
    crt_split,
    factorize,
    sn_divides,
    sn_gcd,
    sn_lcm,
    times_a_embed,
    zeta,
    zeta_e,
)
from .semigroup import (
    GroupElement,
    Join,
    SemigroupElement,
    euclid_smallest,
    euclid_smallest_direct,
    group_inv,
    group_mul,
    join,
    leq,
)
from .algebra import (
    ZERO,
    AlgebraElement,
    GaussianRational,
    Monomial,
    WordSyntaxError,
    adjoint,
    covariance_reduce,
    expectation_coaction,
    expectation_dual_action,
    monomial_mul,
    parse_word,
    reduce_word,
    sigma_analytic_factor,
    sigma_phase,
)

__all__ = [
    "Factorization",
    "ResidueClass",
    "SupernaturalNumber",
    "TruncatedAdele",
    "crt_combine",
    "crt_split",
    "factorize",
    "sn_divides",
    "sn_gcd",
    "sn_lcm",
    "times_a_embed",
    "zeta",
    "zeta_e",
    "GroupElement",
    "Join",
    "SemigroupElement",
    "euclid_smallest",
    "euclid_smallest_direct",
    "group_inv",
    "group_mul",
    "join",
    "leq",
    "ZERO",
    "AlgebraElement",
    "GaussianRational",
    "Monomial",
    "WordSyntaxError",
    "adjoint",
    "covariance_reduce",
    "expectation_coaction",
    "expectation_dual_action",
    "monomial_mul",
    "parse_word",
    "reduce_word",
    "sigma_analytic_factor",
    "sigma_phase",
]
