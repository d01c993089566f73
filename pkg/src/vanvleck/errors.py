"""Exception types shared across the package."""


class VanVleckError(Exception):
    """Base class for all package-specific errors."""


# --- polynomial / geometry -------------------------------------------------

class DegreeZero(VanVleckError):
    """Root extraction requested for a nonzero constant polynomial."""


class EmptyInput(VanVleckError):
    """An operation received an empty point/coefficient collection."""


# --- operators --------------------------------------------------------------

class LengthMismatch(VanVleckError):
    """Classical data lists (alphas, betas) differ in length."""


class NegativeFuchsIndex(VanVleckError):
    """Operator has Fuchs index < 0; transform it with y = 1/z first."""


class DegenerateOperator(VanVleckError):
    """deg Q_k != k + r, so the spectral counting theory does not apply."""


class NotMonic(VanVleckError):
    """Leading coefficient polynomial must be monic for this computation."""


# --- pencil -----------------------------------------------------------------

class DegreeTooHigh(VanVleckError):
    """Candidate spectral polynomial exceeds the admissible degree r."""


class FullRank(VanVleckError):
    """Pencil point has no left kernel: no eigenpolynomial exists there."""


# --- solver -----------------------------------------------------------------

class ResonanceError(VanVleckError):
    """Two diagonal coefficients collide; elimination would divide by ~0.

    Attributes:
        level: degree n at which the collision happened.
        witnesses: indices j < n with diagonal_coefficient(j) == diagonal_coefficient(n).
    """

    def __init__(self, message, level=None, witnesses=()):
        super().__init__(message)
        self.level = level
        self.witnesses = tuple(witnesses)


class UnsupportedFuchsIndex(VanVleckError):
    """Numeric solving restricted to r <= 2, or elimination exceeded its size bound."""


class RootFindingFailure(VanVleckError):
    """Root extraction on an eliminated polynomial did not converge.

    The offending coefficient array is attached as ``poly``.
    """

    def __init__(self, message, poly=None):
        super().__init__(message)
        self.poly = poly


class SpuriousRootError(VanVleckError):
    """A candidate from elimination failed downstream validation."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class DegreeDeficient(VanVleckError):
    """Kernel exists but contains no polynomial of the full degree n."""


# --- analysis ---------------------------------------------------------------

class PoleAtPoint(VanVleckError):
    """Cauchy transform evaluated too close to a root of the polynomial."""


class SupportViolation(VanVleckError):
    """Measure support / evaluation point violate the disk separation premise."""


class CoincidentRoots(VanVleckError):
    """Denominators in the root identity degenerate (coincident points)."""


class SpecViolation(VanVleckError):
    """Classical data does not satisfy the reality assumptions (increasing
    real alphas, strictly positive betas)."""


# --- io ---------------------------------------------------------------------

class ParseError(VanVleckError):
    """Operator or pairs file is malformed."""


class DigestMismatch(VanVleckError):
    """Pairs file was produced for a different operator."""


class AlreadyNonNegative(VanVleckError):
    """Infinity transform requested for an operator that does not need it."""
