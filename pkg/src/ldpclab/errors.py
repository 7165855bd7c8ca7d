"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class BudgetError(RuntimeError):
    """A brute-force enumeration would exceed its cost budget (CLI exit code 3)."""
