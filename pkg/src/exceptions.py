"""Exception hierarchy for the verification toolkit."""

from typing import Optional


class ICGSError(Exception):
    """Base class for every error raised by the toolkit."""


class ModelFormatError(ICGSError, ValueError):
    """A model, relation, history or machine description could not be read."""


class ActionNotEnabledError(ICGSError):
    """A joint action is not enabled by the protocol at a state."""

    def __init__(self, state: str, joint: tuple):
        super().__init__(f"action not enabled: {joint} at {state}")
        self.state = state
        self.joint = joint


class StrategyDomainError(ICGSError):
    """A strategy was queried on a history outside its domain."""


class FormulaSyntaxError(ICGSError, ValueError):
    """Formula text does not follow the concrete syntax."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class UnknownAgentError(ICGSError, ValueError):
    """A coalition names an agent the model does not have."""


class LimitExceededError(ICGSError):
    """An enumeration grew beyond the configured cap."""


class ConsistencyError(ICGSError):
    """Two independent procedures disagreed on the same instance."""
