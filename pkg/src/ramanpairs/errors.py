"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid scenario configuration; message names the offending field."""


class IntegrationError(RuntimeError):
    """ODE integrator failed; carries the time at which it gave up."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


class CutoffError(RuntimeError):
    """Fock truncation too small for the requested accuracy."""
