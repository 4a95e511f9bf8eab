"""Exception types shared across the package."""


class TorregError(Exception):
    """Base class for all library errors."""


class InputError(TorregError, ValueError):
    """Malformed or unsupported input (maps to CLI exit code 2)."""


class UnsupportedError(TorregError):
    """Input is well formed but outside what the engine handles."""


class BudgetExceeded(TorregError):
    """A search or Groebner computation hit its configured cap."""


class SearchExhausted(TorregError):
    """A bounded witness search ended without finding a witness."""


class VerificationFailure(TorregError):
    """Two computations that must agree did not; ``witness`` says where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
