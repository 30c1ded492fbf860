"""Exception hierarchy shared by every module of the package."""


class FlowLatticeError(Exception):
    """Base class for all errors raised by flowlattice."""


class InvalidParameterError(FlowLatticeError, ValueError):
    """A constructor received parameters outside its domain."""


class InvalidDagError(FlowLatticeError, ValueError):
    """A graph violates the framed-DAG invariants."""


class ContractError(FlowLatticeError):
    """An operation was called outside its precondition."""


class ResourceLimitError(FlowLatticeError):
    """An exact computation would exceed the configured size caps."""


class NotAProperFaceError(FlowLatticeError):
    """An edge set covers a whole exceptional route, so it indexes no proper face."""


class TheoremViolation(FlowLatticeError, AssertionError):
    """Two independent evaluations of the same statement disagree."""
