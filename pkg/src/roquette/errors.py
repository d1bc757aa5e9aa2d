"""Exception hierarchy.

``DomainRejection`` subclasses are the inputs the decomposition refuses on
mathematical grounds (even order, mixed primes); ``InvariantViolation``
subclasses signal an internal bug rather than bad input.
"""


class GroupError(Exception):
    pass


class DomainRejection(GroupError):
    pass


class InvariantViolation(GroupError):
    pass


class NotAPGroup(DomainRejection):
    pass


class OddPrimeRequired(DomainRejection):
    pass


class DegreeMismatch(GroupError):
    pass


class SizeLimit(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotSubgroup(GroupError):
    pass


class PrimeMismatch(GroupError):
    pass


class NotElementaryAbelian(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class GroupMismatch(GroupError):
    pass


class BadModulus(GroupError):
    pass


class CyclicCenter(GroupError):
    pass


class BadConfiguration(GroupError):
    pass


class BadParameter(GroupError):
    pass


class SpecSyntaxError(GroupError):
    """Malformed group specification; ``pos`` is the 0-based offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class DivisibilityViolation(InvariantViolation):
    pass


class NonTermination(InvariantViolation):
    pass
