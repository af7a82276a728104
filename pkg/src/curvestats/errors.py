"""Shared exception types (the CLI maps these onto exit codes)."""


class ResourceCapError(RuntimeError):
    """An enumeration or scan would exceed its configured cap."""


class EliminationDegenerateError(RuntimeError):
    """The common-zero decision exhausted its shear retry budget."""
