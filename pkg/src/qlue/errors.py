"""Exception types shared across the package."""


class QlueError(Exception):
    """Base class for all package errors."""


class EmptyInput(QlueError):
    """An operation received an empty dataset or member list."""


class InvalidData(QlueError):
    """Dataset values violate a precondition (non-finite, negative energy, ...)."""


class InvalidInput(QlueError):
    """Scoring/config inputs are malformed (length mismatch, zero total energy)."""


class IndexOutOfRange(QlueError):
    """A point index does not exist in the dataset."""


class EmptyDomain(QlueError):
    """A Grover search was launched on an empty index domain."""


class ContractViolation(QlueError):
    """A simulator precondition was broken (dirty ancilla, leaked amplitude)."""
