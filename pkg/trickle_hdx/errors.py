"""Exception hierarchy for Trickle HDX.

Every error raised on purpose by the library derives from ``TrickleError``.
``exit_code`` is what the CLI returns when the error escapes a command:
1 for bad input, 2 for analyses that ran but did not certify.
"""

from typing import Any, List, Optional, Sequence


class TrickleError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class InputError(TrickleError):
    """The input (complex, parameter or file) is invalid."""

    exit_code = 1


class AnalysisFailure(TrickleError):
    """The computation ran but a condition or certificate did not hold."""

    exit_code = 2


class NonPure(InputError):
    pass


class PartiteViolation(InputError):
    pass


class NonpositiveWeight(InputError):
    pass


class EmptyComplex(InputError):
    pass


class FaceNotInComplex(InputError):
    pass


class LevelOutOfRange(InputError):
    pass


class NotPartite(InputError):
    pass


class GroundSetOverlap(InputError):
    pass


class CodimTooSmall(InputError):
    pass


class EmptyOrFullSet(InputError):
    pass


class WrongDimension(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class DeltaOutOfRange(InputError):
    pass


class BadParams(InputError):
    pass


class SizeCap(InputError):
    pass


class NoProperColoring(InputError):
    pass


class ConnectivityUnreachable(InputError):
    pass


class MalformedInput(InputError):
    pass


class Disconnected(AnalysisFailure):
    """A 1-skeleton that had to be connected is not.

    ``components`` lists the connected components as vertex-id lists and
    ``face`` the face whose link was being analysed, when known.
    """

    def __init__(
        self,
        message: str,
        components: Optional[Sequence[Sequence[str]]] = None,
        face: Optional[Sequence[str]] = None,
    ) -> None:
        super().__init__(message)
        self.components: List[List[str]] = [list(c) for c in components or []]
        self.face: Optional[List[str]] = list(face) if face is not None else None


class ConditionUnsatisfiable(AnalysisFailure):
    pass


class HypothesisViolated(AnalysisFailure):
    """A theorem hypothesis failed; ``inequality`` names which one."""

    def __init__(self, inequality: str, lhs: float, rhs: float) -> None:
        super().__init__(f"hypothesis violated: {inequality} ({lhs:.6g} > {rhs:.6g})")
        self.inequality = inequality
        self.lhs = lhs
        self.rhs = rhs


class DenominatorNonpositive(AnalysisFailure):
    def __init__(self, part: Any, level: int, denominator: float) -> None:
        super().__init__(
            f"h-table denominator for part {part} at level {level} is "
            f"{denominator:.6g}; the condition margin is exhausted"
        )
        self.part = part
        self.level = level
        self.denominator = denominator


class CertificateInvalid(AnalysisFailure):
    pass


class InvariantViolation(AnalysisFailure):
    pass
