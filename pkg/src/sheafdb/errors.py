"""Exception hierarchy.

Every error raised by the library derives from :class:`SheafDBError`.
Errors caused by bad user input additionally derive from
:class:`MalformedInput`, which the CLI maps to exit code 2.
"""


class SheafDBError(Exception):
    pass


class MalformedInput(SheafDBError):
    pass


class MissingDomain(MalformedInput):
    def __init__(self, attribute):
        super().__init__(f"no domain declared for attribute {attribute!r}")
        self.attribute = attribute


class EmptyDomain(MalformedInput):
    def __init__(self, attribute):
        super().__init__(f"domain of attribute {attribute!r} is empty")
        self.attribute = attribute


class DuplicateContext(MalformedInput):
    def __init__(self, context):
        super().__init__(f"context {list(context)} appears more than once")
        self.context = context


class DuplicateAttribute(MalformedInput):
    pass


class UnknownAttribute(MalformedInput):
    def __init__(self, attribute):
        super().__init__(f"unknown attribute {attribute!r}")
        self.attribute = attribute


class ValueOutsideDomain(MalformedInput):
    def __init__(self, attribute, value):
        super().__init__(f"value {value!r} is not in the domain of {attribute!r}")
        self.attribute = attribute
        self.value = value


class FormatError(MalformedInput):
    """Interchange text that does not follow the model format."""

    def __init__(self, message, location="$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class NotNormalized(MalformedInput):
    def __init__(self, total, where=None):
        msg = f"total weight is {total}, expected one"
        if where is not None:
            msg = f"{where}: {msg}"
        super().__init__(msg)
        self.total = total


class EnumerationTooLarge(SheafDBError):
    def __init__(self, size, cap):
        super().__init__(f"enumeration of {size} tuples exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


class PartialMap(SheafDBError):
    def __init__(self, row):
        super().__init__(f"map is undefined on support element {row!r}")
        self.row = row


class NotSubset(SheafDBError):
    pass


class DomainMismatch(SheafDBError):
    def __init__(self, attribute):
        super().__init__(f"attribute {attribute!r} has different domains")
        self.attribute = attribute


class BaseMismatch(SheafDBError):
    pass


class WrongSemiring(MalformedInput):
    pass


class NonBinaryDomain(MalformedInput):
    def __init__(self, attribute):
        super().__init__(f"attribute {attribute!r} does not have domain {{0, 1}}")
        self.attribute = attribute


class NotAcyclic(SheafDBError):
    pass


class DimensionMismatch(SheafDBError):
    pass


class SolverError(SheafDBError):
    """A solver result failed its own exact re-verification."""


class PartyMismatch(SheafDBError):
    pass


class NoNearbyRational(SheafDBError):
    def __init__(self, value, max_denominator):
        super().__init__(
            f"{value!r} is not within 1e-9 of a rational with denominator <= {max_denominator}")
        self.value = value
        self.max_denominator = max_denominator
