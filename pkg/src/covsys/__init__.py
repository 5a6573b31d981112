"""Exact covering systems of the integers: verification, prime-split reduction,
irreducibility and naturality testing, and desk-scale enumeration."""
from .arith import FactoredInteger, divisors, factorize
from .cyclotomic import (
    CosetTerm,
    CycVector,
    coset_vector,
    cyclotomic_polynomial,
    decompose,
    find_coset,
    from_exponents,
    lemma1_quotient,
    vanishes,
)
from .ecs import (
    CoverReport,
    Ecs,
    ResidueClass,
    is_exact,
    normalize,
    stats,
    verify_crt,
    verify_genfun,
    verify_scan,
)
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .reduction import (
    Corollary2Report,
    MergeCandidate,
    ReductionTrace,
    SplitStep,
    check_corollary2,
    is_irreducible,
    is_natural,
    is_prime_split,
    merge,
    merge_candidates,
    reduce_step,
    reduce_to_trivial,
    split,
)
from .search import count_ecs, enumerate_ecs, generate_natural, sweep

__version__ = "0.1.0"
