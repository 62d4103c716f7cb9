"""
Exception hierarchy for the toolkit.

Library code raises these; the CLI turns them into usage errors and the
HTTP layer into 4xx responses.
"""


class GGTError(Exception):
    """Base class for every toolkit error."""


class ConfigError(GGTError):
    """A configuration document or environment value is invalid."""


class GenusOutOfBounds(GGTError):
    """Requested surface genus exceeds the configured cap."""


class RadiusAboveCap(GGTError):
    """Requested ball radius exceeds the configured cap."""


class MalformedBudget(GGTError):
    """A search budget has a non-positive limit."""


class NotInBall(GGTError):
    """A word does not resolve to a vertex of the examined ball."""


class NotInSubgroup(GGTError):
    """An element expected to lie in H does not."""


class ArityMismatch(GGTError):
    """A cochain was evaluated on a tuple of the wrong length."""


class UnknownRegion(GGTError):
    """A region id is not part of the region model."""


class ScheduleError(GGTError):
    """A region-model schedule violates its measure invariants."""


class PreconditionError(GGTError):
    """An operation was called outside its documented domain."""


class StrategyDisagreement(GGTError):
    """The rewriting and normal-form equality strategies contradict each other."""


class ParseError(GGTError, ValueError):
    """Text does not spell a word over the letter alphabet."""
