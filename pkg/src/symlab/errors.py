"""Exception types raised across the package."""


class SymlabError(Exception):
    """Base class for all errors raised by symlab."""


class DegenerateParameter(SymlabError, ValueError):
    """Bernoulli parameter outside the open interval (0, 1)."""


class InvalidArgument(SymlabError, ValueError):
    pass


class NonRepresentableMean(SymlabError, ValueError):
    """The mean of a distribution is not (close to) a small-denominator rational."""


class InvalidProgram(SymlabError, ValueError):
    pass


class CyclingSuspected(SymlabError, RuntimeError):
    """Simplex exceeded its iteration budget.

    Bland's rule guarantees termination, so hitting this means a tolerance bug.
    """


class InvalidProblem(SymlabError, ValueError):
    pass


class SolverInconsistency(SymlabError, RuntimeError):
    """An 'optimal' LP solution failed the post-solve symmetry check."""


class OracleTooLarge(SymlabError, ValueError):
    pass


class NotCentered(SymlabError, ValueError):
    pass


class InvalidInterval(SymlabError, ValueError):
    pass
