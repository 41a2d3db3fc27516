""" Exceptions raised by weak package.
    Domain errors derive from WeakException, command line reports them with
    exit code 1. Configuration problems derive from ConfigException and are
    reported with exit code 2, the same as usage and IO errors.
"""


class WeakException(Exception):
    """ Base class for errors in the noise correction math.
    """
    pass


class NonStochasticError(WeakException):
    """ Column or row of confusion matrix doesn't sum to one.
    """
    pass


class SingularError(WeakException):
    """ Matrix can not be inverted.
    """
    pass


class NegativeEntryError(WeakException):
    """ Probability matrix has negative or non finite entry.
    """
    pass


class ZeroColumnError(WeakException):
    """ Counts matrix has a column without any counts.
    """
    pass


class ZeroWeakLabelMassError(WeakException):
    """ Some weak label has zero marginal probability.
    """
    pass


class OrientationError(WeakException):
    """ Backward matrix was passed where forward is expected or vice versa.
    """
    pass


class DimensionMismatchError(WeakException):
    """ Sizes of operands do not agree.
    """
    pass


class EmptyWeakClassError(WeakException):
    """ Weak label has no samples and no smoothing was requested.
    """
    pass


class AllNonPositiveError(WeakException):
    """ Signed measure has no positive mass left after clipping.
    """
    pass


class DegenerateFitError(WeakException):
    """ Least squares fit has no spread in abscissa or too few points.
    """
    pass


class EmptyEvalSetError(WeakException):
    """ Error rate requested for an empty evaluation set.
    """
    pass


class ConfigException(Exception):
    """ Base class for configuration problems.
    """
    pass


class ParseError(ConfigException):
    """ Config file can not be parsed or contains unknown keys.
    """
    pass
