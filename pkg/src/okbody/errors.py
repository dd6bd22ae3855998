"""Exception hierarchy shared by the library and the CLI.

The CLI maps ``ModelError`` to exit code 3 and ``ComputationError`` to exit
code 4; parse failures of scenario files surface as ``ScenarioParseError``
(exit code 2).
"""

from __future__ import annotations


class OkbodyError(ValueError):
    """Base class for all errors raised by okbody."""


class ModelError(OkbodyError):
    """An input model, flag or divisor is malformed or inconsistent.

    ``path`` optionally locates the offending field inside a scenario
    document (e.g. ``model.gram[1]``).
    """

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


class ComputationError(OkbodyError):
    """A well-formed input on which the requested computation cannot proceed."""


class NotPseudoEffectiveError(ComputationError):
    pass


class ScenarioParseError(OkbodyError):
    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path
