"""Exception hierarchy shared across the toolkit.

Each class maps to one failure family so the CLI can report distinct
exit codes (see cli.py).
"""


class RacewayError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(RacewayError):
    """Malformed configuration: parameter files, manifests, bad arguments."""


class ScenarioError(RacewayError):
    """Semantically invalid disturbance scenario (ordering, coverage, NaNs)."""


class ModelError(RacewayError):
    """Model evaluation outside its physical/validity domain."""


class IntegrationError(RacewayError):
    """ODE integration failure; carries the offending state when known."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class ControllerError(RacewayError):
    """A controller produced unusable signals (non-finite, non-binary)."""


class EvaluationError(RacewayError):
    """Cost/KPI computation on degenerate data (zero reference or baseline)."""
