"""Exception hierarchy, mapped onto CLI exit codes by tbpwalk.cli."""


class TbpWalkError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TbpWalkError):
    """Bad configuration or misuse of an operation (exit code 1)."""


class ParameterError(UsageError, ValueError):
    """A numeric parameter is outside its valid domain (exit code 1)."""


class InputFormatError(TbpWalkError):
    """Malformed FASTA or annotation input (exit code 2)."""


class UndefinedMetricError(TbpWalkError):
    """Sensitivity or specificity is undefined for the given truth (exit code 3)."""
