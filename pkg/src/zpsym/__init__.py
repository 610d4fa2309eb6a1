"""Canonical forms and exact class densities for random symmetric matrices over Z_p (odd p)."""

from .canonical import (
    QpClass,
    SymClass,
    isotropic_by_invariants,
    isotropy_by_invariants,
    isotropy_search,
    qp_class,
    rank_d,
    rank_mod_p,
    smith_normal_form,
    sym_canonical,
    sym_class,
)
from .errors import (
    BudgetExceeded,
    ExpectedCountTooSmall,
    LengthExceedsN,
    NotAUnit,
    PrecisionExhausted,
    PrecisionInsufficient,
    RepeatedSpecializationPoint,
    SingularClass,
    UndefinedSignature,
    ZeroAtPrecision,
    ZpSymError,
)
from .padic import PrecisionRing, RandomStream, SquareClass, chi, hilbert, sample_uniform, unit_part, val_p

__version__ = "0.1.0"
