"""Exception hierarchy shared by every layer of the library."""


class HQError(ValueError):
    """Base class for all parameter and domain failures."""

    status = "invalid"


class DomainError(HQError):
    status = "domain"


class ConvergenceDomainError(DomainError):
    """Raised when a defining series diverges for the requested (q, h)."""

    status = "convergence-domain"


class PoleError(DomainError):
    status = "pole"


class SingularTermError(DomainError):
    """A series term of the form [0]_q^(-p) with p > 0 was requested."""

    status = "singular"


class CapError(DomainError):
    """A degree or enumeration cap was exceeded."""

    status = "cap"


class PrincipalCharacterError(DomainError):
    status = "principal-character"
