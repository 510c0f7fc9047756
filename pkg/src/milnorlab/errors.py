"""Exception hierarchy.

Every error raised deliberately by the library derives from
:class:`MilnorLabError`.  The three intermediate classes carry the CLI exit
code they map to, so the front end never has to special-case individual
errors.
"""

from __future__ import annotations


class MilnorLabError(Exception):
    exit_code = 1


class InputError(MilnorLabError):
    """Malformed input: bad expression, unknown variable, mismatched rings."""

    exit_code = 1


class ParseError(InputError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class UnknownVariableError(InputError):
    pass


class VariableMismatchError(InputError):
    pass


class PreconditionError(MilnorLabError):
    """The input is well formed but outside the domain of the operation."""

    exit_code = 2


class NotConvenientError(PreconditionError):
    pass


class DegenerateFaceError(PreconditionError):
    def __init__(self, message: str, normal: tuple[int, ...] | None = None):
        self.normal = normal
        super().__init__(message)


class MultiplicityConditionViolated(PreconditionError):
    def __init__(self, witness: tuple[int, ...]):
        self.witness = tuple(witness)
        super().__init__(
            "Newton multiplicity condition violated; witness P=("
            + ",".join(str(c) for c in self.witness)
            + ")"
        )


class CommonFactorError(PreconditionError):
    pass


class NotHomogeneousError(PreconditionError):
    pass


class ComputationError(MilnorLabError):
    """The computation could not reach a certified answer."""

    exit_code = 3


class TruncationError(ComputationError):
    pass


class RootFindingError(ComputationError):
    pass


class InternalConsistencyError(ComputationError):
    """Two independent characterizations of the same quantity disagreed."""
