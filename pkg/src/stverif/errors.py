"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class StverifError(Exception):
    """Base class. ``code`` is the short diagnostic identifier."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message


class SourceError(StverifError):
    """An error tied to a position in an ST source file."""

    code = "SourceError"

    def __init__(self, message: str, line: int = 0, col: int = 0, path: str = "<string>"):
        super().__init__(message)
        self.line = line
        self.col = col
        self.path = path

    def diagnostic(self) -> str:
        return f"{self.path}:{self.line}:{self.col}: {self.code}: {self.message}"

    def __str__(self) -> str:
        return self.diagnostic()


class UnknownCharacter(SourceError):
    code = "UnknownCharacter"


class UnterminatedComment(SourceError):
    code = "UnterminatedComment"


class STSyntaxError(SourceError):
    code = "SyntaxError"

    def __init__(self, message, line=0, col=0, path="<string>", expected=()):
        super().__init__(message, line, col, path)
        self.expected = tuple(expected)


class UnresolvedIdentifier(SourceError):
    code = "UnresolvedIdentifier"


class TypeMismatch(SourceError):
    code = "TypeMismatch"


class DuplicateDeclaration(SourceError):
    code = "DuplicateDeclaration"


class UnknownInstance(SourceError):
    code = "UnknownInstance"


# lowering / simulation


class NoSuchEntry(StverifError):
    code = "NoSuchEntry"


class RecursiveCall(StverifError):
    code = "RecursiveCall"


class MissingInput(StverifError):
    code = "MissingInput"

    def __init__(self, cycle: int, var: str):
        super().__init__(f"cycle {cycle}: no value for input {var!r}")
        self.cycle = cycle
        self.var = var


# bounded exploration


class BudgetExceeded(StverifError):
    code = "BudgetExceeded"


class UnboundedDomain(StverifError):
    code = "UnboundedDomain"


class NotViolated(StverifError):
    code = "NotViolated"


class CaseFileError(StverifError):
    code = "CaseFileError"


# timing diagrams / harnesses


class DiagramError(StverifError):
    code = "DiagramError"


class RaggedRow(DiagramError):
    code = "RaggedRow"


class UnconstrainedOutput(DiagramError):
    code = "UnconstrainedOutput"


class UnknownCellValue(DiagramError):
    code = "UnknownCellValue"


class SignalNotInInterface(DiagramError):
    code = "SignalNotInInterface"


class DirectionMismatch(DiagramError):
    code = "DirectionMismatch"


class ZeroCycleTime(StverifError):
    code = "ZeroCycleTime"


class NonConstantPreset(StverifError):
    code = "NonConstantPreset"


# requirements


class RequirementError(StverifError):
    code = "RequirementError"


class EmptyColumn(RequirementError):
    code = "EmptyColumn"


class NonContiguousGroups(RequirementError):
    code = "NonContiguousGroups"


class EmptyRow(RequirementError):
    code = "EmptyRow"


class TooManyInputs(RequirementError):
    code = "TooManyInputs"


class NondeterministicSpec(RequirementError):
    code = "NondeterministicSpec"


class IncompleteSpec(RequirementError):
    code = "IncompleteSpec"
