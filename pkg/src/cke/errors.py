"""Exception types shared across the package."""

from __future__ import annotations


class CkeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CkeError):
    """A scenario, system, or grid-search description file is invalid."""


class ChannelMismatch(CkeError):
    """Plant and controller channel widths or names do not line up."""


class ControllerNotRealizable(CkeError):
    """A controller offered to the feedback loop fails its physicality check."""


class SynthesisError(CkeError):
    """Base class for estimator-synthesis failures."""


class SingularInnovation(SynthesisError):
    """The homodyne innovation covariance is singular.

    This signals a measurement channel that carries no shot noise, so the
    filter gain formula has no meaning for it.
    """


class IllConditioned(SynthesisError):
    """A solver input is too badly conditioned to certify the result."""


class NoStabilizingSolution(SynthesisError):
    """No Riccati solution passed the residual and Hurwitz certification."""


class NotHurwitz(SynthesisError):
    """A matrix required to be Hurwitz has an eigenvalue with Re >= 0."""


class NoFeasibleCandidate(CkeError):
    """Every controller candidate in a grid search was rejected."""


class SweepFailure(SynthesisError):
    """One or more rows of a sweep failed and failures were not allowed."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
