"""
Error hierarchy for the walk search library
"""


class WalkSearchError(Exception):
    """Base class for all library errors"""


class ContractViolation(WalkSearchError, ValueError):
    """A precondition or numerical contract was broken"""


class DenseLimitError(ContractViolation):
    """Dense reference construction refused because N exceeds the cap"""


class NormDriftError(ContractViolation):
    """The evolved state lost its normalisation"""


class NoPeakError(WalkSearchError):
    """No valid first-cycle peak was found"""


class FitError(WalkSearchError, ValueError):
    """Least-squares input is degenerate"""
