"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto process exit statuses without a lookup table.
"""


class OntensorError(Exception):
    exit_code = 1


class ValidationError(OntensorError, ValueError):
    """Bad input: malformed files, invalid graphs, out-of-domain arguments."""

    exit_code = 2


class MalformedFile(ValidationError):
    pass


class InvalidMatching(ValidationError):
    pass


class OddNodeCount(ValidationError):
    pass


class DisconnectedBubble(ValidationError):
    pass


class DisconnectedGraph(ValidationError):
    pass


class OpenGraph(ValidationError):
    pass


class StaleMelon(ValidationError):
    pass


class UnsupportedBubble(ValidationError):
    pass


class NoBracket(ValidationError):
    pass


class NonPositiveInput(ValidationError):
    pass


class DivisionByNonUnit(ValidationError, ZeroDivisionError):
    pass


class BudgetExceeded(OntensorError):
    exit_code = 3


class InternalInconsistency(OntensorError, RuntimeError):
    """Two independent routes to the same quantity disagree (a bug)."""

    exit_code = 4
