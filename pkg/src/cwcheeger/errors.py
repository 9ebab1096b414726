"""Exception hierarchy shared by the library and the CLI."""


class CWError(Exception):
    """Base class for all errors raised by cwcheeger."""


class ParseError(CWError):
    """Malformed cwx or facet input."""


class ComplexValidationError(CWError):
    """The incidence data violates a complex invariant."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class BudgetExceeded(CWError):
    """An exact search would exceed the configured work budget."""


class InapplicableError(CWError):
    """The requested quantity is undefined for this input (e.g. an empty restriction)."""
