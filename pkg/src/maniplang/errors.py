"""Shared exception base so the CLI can map failures to exit codes."""


class ManiplangError(Exception):
    """Base class for all errors raised by this package."""
