"""Exception types raised across the package."""


class ZpSymError(Exception):
    """Base class for all errors raised by zpsym."""


class ZeroAtPrecision(ZpSymError):
    """A residue is zero modulo p^K, so it has no unit part."""


class NotAUnit(ZpSymError):
    """Inverse requested for a residue divisible by p."""


class PrecisionExhausted(ZpSymError):
    """The working precision K is too small to resolve the requested invariant."""


class SingularClass(ZpSymError):
    """An operation needs finite elementary divisors but got an infinite one."""


class UndefinedSignature(ZpSymError):
    """The orthogonal density alpha_0^- does not exist."""


class RepeatedSpecializationPoint(ZpSymError):
    """Hall-Littlewood symmetrization needs pairwise distinct variables."""


class LengthExceedsN(ZpSymError):
    """A partition has more parts than the matrix size allows."""


class BudgetExceeded(ZpSymError):
    """A brute-force enumeration would exceed its configured size budget."""


class PrecisionInsufficient(ZpSymError):
    """Monte Carlo cutoff cannot be resolved at the sampling precision."""


class ExpectedCountTooSmall(ZpSymError):
    """Chi-square validity rule violated: some expected count is below 5."""
