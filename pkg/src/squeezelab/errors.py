"""Exception types raised across squeezelab."""


class SqueezelabError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(SqueezelabError, ValueError):
    """A parameter is non-finite or otherwise malformed."""


class ConstraintError(SqueezelabError, ValueError):
    """The deformation parameters violate the canonical commutation constraint."""


class DomainError(SqueezelabError, ValueError):
    """A family parameter lies outside the family's admissible range."""


class AdmissibilityError(SqueezelabError, ValueError):
    """Hamiltonian coefficients do not give square-integrable eigenfunctions."""


class SingularCoefficientError(SqueezelabError, ZeroDivisionError):
    """A coefficient that appears in a denominator vanishes."""


class LevelCapError(SqueezelabError, ValueError):
    """Requested level index exceeds the supported cap."""


class NormalizationError(SqueezelabError, ValueError):
    """A state expected to be unit-normalized is not."""


class NoClosedFormError(SqueezelabError, LookupError):
    """No closed-form expression exists for the requested (family, level)."""
