# src/errors.py
from __future__ import annotations


class LieCtrlError(ValueError):
    """Base class for every input error raised by the analysis package."""


class InvalidIndexError(LieCtrlError):
    pass


class DimensionMismatchError(LieCtrlError):
    pass


class GeneratorSetError(LieCtrlError):
    """Empty generator sets, duplicate labels, or a basis kind the caller cannot handle."""


class DecompositionError(LieCtrlError):
    """A declared direct-sum decomposition has a nonzero cross-component bracket."""


class CapExceededError(LieCtrlError):
    pass


class SpecError(LieCtrlError):
    """
    Invalid system spec.

    `field` is the dotted path of the offending entry (e.g. "generators[2]"),
    `location` a human readable position (line/column for JSON syntax errors).
    """

    def __init__(self, message: str, field: str | None = None, location: str | None = None):
        self.field = field
        self.location = location
        parts = [message]
        if field:
            parts.append(f"field={field}")
        if location:
            parts.append(f"at {location}")
        super().__init__(" | ".join(parts))
