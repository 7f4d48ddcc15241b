"""Exception types raised across the package."""

from __future__ import annotations


class IsaclError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(IsaclError, ValueError):
    """An argument violates a documented precondition."""


class EvaluationError(IsaclError):
    """The objective returned a non-finite value."""

    def __init__(self, position, value):
        self.position = position
        self.value = value
        super().__init__(f"objective returned {value!r} at position of length {len(position)}")


class TrainingError(IsaclError):
    """Gradient training diverged."""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"loss became non-finite ({loss!r}) at epoch {epoch}")


class ParseError(IsaclError, ValueError):
    """A series file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class GapError(IsaclError, ValueError):
    """A daily series has missing calendar days."""

    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(d.isoformat() for d in self.missing[:10])
        more = "" if len(self.missing) <= 10 else f" (+{len(self.missing) - 10} more)"
        super().__init__(f"series has {len(self.missing)} missing day(s): {shown}{more}")


class DivisionGuardError(IsaclError, ZeroDivisionError):
    """A relative error index would divide by zero."""

    def __init__(self, index: str):
        self.index = index
        super().__init__(f"{index}: denominator series contains a zero value")


class R2UndefinedError(IsaclError, ValueError):
    """R^2 is undefined for a constant actual series."""


class CompatibilityError(IsaclError, ValueError):
    """A saved model does not match the data it is applied to."""
