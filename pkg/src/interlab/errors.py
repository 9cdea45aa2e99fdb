"""Exception hierarchy shared by all interlab modules.

The CLI maps these onto exit codes: scenario/schema problems exit 2,
domain and input errors exit 3, internal invariant failures exit 4.
"""


class InterlabError(Exception):
    """Base class for all errors raised by interlab."""


class InputError(InterlabError):
    """Malformed arguments: unknown atoms, mismatched spaces, empty families."""


class ScenarioError(InputError):
    """A scenario file failed to parse or validate against the schema."""


class DomainError(InterlabError):
    """A mathematically well-formed input lies outside an operation's domain."""


class BudgetError(DomainError):
    """An exhaustive enumeration would exceed the configured budget."""


class InvariantError(InterlabError):
    """An internal cross-check failed; indicates a bug, never an input problem."""
