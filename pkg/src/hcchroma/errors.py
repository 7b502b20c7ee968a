"""Exception types shared across the package."""


class HcchromaError(Exception):
    """Base class for all package errors."""


class InputError(HcchromaError, ValueError):
    """Bad argument values: out-of-range ids, invalid parameters."""


class FormatError(HcchromaError, ValueError):
    """An input file could not be parsed."""


class HypothesisError(HcchromaError, ValueError):
    """A mathematical hypothesis required by the operation does not hold."""


class StateError(HcchromaError, RuntimeError):
    """Operation applied to an object in the wrong state."""


class SizeError(HcchromaError, RuntimeError):
    """Instance exceeds a size cutoff or a search budget."""


class NumericError(HcchromaError, ArithmeticError):
    """An iterative numeric routine failed to converge."""


class InternalError(HcchromaError, RuntimeError):
    """An invariant that should hold by construction was violated."""
