"""Exception hierarchy for the package.

The CLI maps these onto distinct exit codes: usage problems exit 2,
fixture/invariant problems exit 3, precision/ambiguity problems exit 4.
"""


class SunormError(Exception):
    """Base class for all package errors."""


class UsageError(SunormError):
    """Bad arguments to a library call or CLI invocation."""


class FixtureParseError(SunormError):
    """The fixture file could not be read or decoded."""


class InvariantViolation(SunormError):
    """A validated invariant failed; the message names the first culprit."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"{invariant}: {detail}")


class SupportError(SunormError):
    """A vector has valuation support outside the allowed place set."""


class PrecisionError(SunormError):
    """Certified bounds are too wide to decide a required comparison."""


class AmbiguousComparison(PrecisionError):
    """Two certified values overlap but cannot be proven equal or distinct."""


class LPError(SunormError):
    """Base class for linear-programming failures."""


class InfeasibleProblem(LPError):
    """The equality constraints admit no solution."""


class UnboundedProblem(LPError):
    """The objective is unbounded below (impossible for well-formed inputs)."""
