"""Exceptions raised by the solvers, evaluators and the CLI."""


class GmdError(Exception):
    """Base class; `exit_code` is what the CLI returns for this failure."""
    exit_code = 1


class UsageError(GmdError):
    """Invalid command-line input, detected before any computation starts."""
    exit_code = 2


class NoRootError(GmdError):
    """A threshold equation has no sign change inside its bracket."""
    exit_code = 3


class OutOfRegimeError(GmdError):
    """The closed-form high-SNR threshold is not defined for this sigma."""
    exit_code = 3


class TooLargeError(GmdError):
    """The exact enumeration would exceed the configured term limit."""
    exit_code = 4

    def __init__(self, terms: int, limit: int):
        super().__init__(
            f"exact sum needs {terms} terms (limit {limit}); "
            f"use the 'simulate' command for this configuration"
        )
        self.terms = terms
        self.limit = limit
