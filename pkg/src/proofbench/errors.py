"""Exception types shared across the workbench."""

from __future__ import annotations

from dataclasses import dataclass


class WorkbenchError(Exception):
    """Base class for all domain errors raised by this package."""


class UnboundParam(WorkbenchError):
    """A parameter variable was evaluated without a binding."""


class EmptyRange(WorkbenchError):
    """An iterated connective was unfolded with lower bound > upper bound."""


class LinkError(WorkbenchError):
    """A proof link does not resolve to a schema, or its sequent disagrees."""


class NotPropositional(WorkbenchError):
    """autoprop was applied to a sequent that is not propositional."""


class PreconditionError(WorkbenchError):
    """An operation was applied to a proof that violates its precondition."""


class InferenceError(WorkbenchError):
    """A rule application is malformed; message carries node context."""


class ArityError(InferenceError):
    """Premise count does not match the rule."""


class MissingAux(InferenceError):
    """A requested auxiliary occurrence is not present in the premise."""


class EigenvariableViolation(InferenceError):
    """The eigenvariable of a strong quantifier rule occurs in the conclusion."""


class EquivalenceMismatch(InferenceError):
    """The two sides of a fold/unfold equivalence rule do not rewrite to the
    same normal form."""


class ViewError(WorkbenchError):
    """A view request referenced a node id that does not exist."""


class ExportError(WorkbenchError):
    """The object cannot be serialized in the requested format."""


class Cancelled(WorkbenchError):
    """A long-running operation was cancelled cooperatively."""


class RefuterLimit(WorkbenchError):
    """The resolution refuter hit its clause or time limit."""


@dataclass(frozen=True)
class SourceSpan:
    """1-based position of a lexeme in the decoded input text."""

    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(WorkbenchError):
    """Syntax or semantic error in a text input, with an exact position."""

    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(f"{span}: expected {expected}, found {found!r}")


class StructureError(WorkbenchError):
    """An XML document violates the fixed document structure."""

    def __init__(self, path: str, missing: str, message: str | None = None):
        self.path = path
        self.missing = missing
        super().__init__(message or f"{path}: missing required {missing!r}")
