"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class PoleError(DomainError):
    """Evaluation point too close to a pole of a closed-form profile."""


class ParameterError(ValueError):
    """Inconsistent or inadmissible parameters for a solution family."""


class StencilError(DomainError):
    """A finite-difference stencil leaves the validity region."""


class NoBracketError(RuntimeError):
    """A root-finding bracket could not be established."""


class BlowUpError(OverflowError):
    """A numerical trajectory left the representable range."""
