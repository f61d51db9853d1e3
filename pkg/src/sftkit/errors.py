"""Exception hierarchy shared by every sftkit module."""


class SftError(Exception):
    """Base class for all library errors."""


class GroupMismatch(SftError):
    pass


class RelationViolation(SftError):
    """Generator images do not satisfy the source group's relations."""


class AlphabetMismatch(SftError):
    pass


class SupportOutOfDomain(SftError):
    """A pattern placement leaves the finite window it is tested on."""


class NotAQuotient(SftError):
    pass


class NotAnEmbedding(SftError):
    pass


class NonInjectiveOnSupport(SftError):
    pass


class WrongBaseGroup(SftError):
    pass


class ProjectionIncomplete(SftError):
    pass


class ChainTypeMismatch(SftError):
    pass


class RadiusTooSmall(SftError):
    pass


class BudgetExceeded(SftError):
    """Search stopped at its node limit without a verdict."""


class LatticeNotPreserved(SftError):
    pass


class DomainTooSmall(SftError):
    pass


class NotOrthogonal(SftError):
    pass


class ZeroDirection(SftError):
    pass


class NotUnimodular(SftError):
    pass


class MalformedInput(SftError):
    """A JSON definition could not be decoded into library objects."""
