"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: input errors exit 2, resource errors
exit 3, contract and condition failures exit 1.
"""


class NMError(Exception):
    """Base class for package errors."""


class InputError(NMError, ValueError):
    """Malformed text, unknown names, or values outside the declared universe."""


class ContractError(NMError):
    """A documented precondition does not hold."""


class ConditionError(ContractError):
    """A named algebraic condition required by an operation fails.

    ``report`` carries the failing :class:`~nmlab.conditions.ConditionReport`.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ClosureError(ContractError):
    """The domain lacks a closure property (intersections, unions, differences...)."""


class ResourceError(NMError):
    """A size budget was exceeded."""
