"""Exception hierarchy for the bandit model-selection library.

Every error raised on purpose by :mod:`mcp_banditselect` derives from
:class:`BanditSelectError`. Each class also subclasses the closest builtin so
callers may catch either the library type or the plain Python one.
"""


class BanditSelectError(Exception):
    """Base class of all library errors."""


class InvalidParameterError(BanditSelectError, ValueError):
    """A scalar parameter lies outside its admissible domain."""


class InvalidRangeError(InvalidParameterError):
    """The aggregator range ``[beta, beta + ell]`` is empty or degenerate."""


class DimensionError(BanditSelectError, ValueError):
    """A vector does not have the dimension the state was built with."""


class NumericInputError(BanditSelectError, ValueError):
    """An input contains NaN or infinite values."""


class EmptyInputError(BanditSelectError, ValueError):
    """An operation received an empty sequence where one element is required."""


class InvalidActionError(BanditSelectError, IndexError):
    """An action id does not belong to the environment's action set."""


class DuplicateRecordError(BanditSelectError, ValueError):
    """Two regret records share the same (instance, algorithm, round) key."""


class DegenerateModelError(BanditSelectError, ZeroDivisionError):
    """A ball model has ``b + c = 0`` so its regularization weight is undefined."""


class InfeasibleDistributionError(BanditSelectError, ArithmeticError):
    """The inverse-gap-weighted distribution has a negative greedy mass."""


class InfeasiblePredictionError(BanditSelectError, ArithmeticError):
    """The aggregator's substitution prediction violates its two conditions."""


class AssumptionError(BanditSelectError, ValueError):
    """A generated environment violates the boundedness assumptions it declares."""


class ConfigError(BanditSelectError, ValueError):
    """An experiment configuration is invalid or inconsistent."""


class ExperimentRuntimeError(BanditSelectError, RuntimeError):
    """Too many instances of an experiment failed."""
