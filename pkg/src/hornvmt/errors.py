"""Exception hierarchy shared by the frontend, translator and oracles."""

from __future__ import annotations

from typing import Optional, Tuple

Span = Tuple[int, int]


class HornError(Exception):
    """Base class. ``span`` is a (start, end) byte range into the source, if known."""

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


# lexing / s-expressions
class LexError(HornError):
    pass


class UnterminatedString(LexError):
    pass


class IllegalCharacter(LexError):
    pass


class SExprError(HornError):
    pass


class UnbalancedParens(SExprError):
    pass


class UnexpectedEOF(SExprError):
    pass


# command layer
class ScriptError(HornError):
    pass


class UnsupportedLogic(ScriptError):
    pass


class UnsupportedSort(ScriptError):
    pass


class UnsupportedCommand(ScriptError):
    pass


class DuplicateRelation(ScriptError):
    pass


# terms
class TermError(HornError):
    pass


class UnknownIdentifier(TermError):
    pass


class ArityMismatch(TermError):
    pass


class SortMismatch(TermError):
    pass


class NestedQuantifier(TermError):
    pass


# clauses
class ClauseError(HornError):
    pass


class HeadNotAtomOrFalse(ClauseError):
    pass


class RelationAtomUnderNonConjunctiveContext(ClauseError):
    pass


class NonlinearClause(ClauseError):
    def __init__(self, clause_id: int, count: int, span: Optional[Span] = None):
        super().__init__(
            f"clause {clause_id} has {count} relation atoms in its body (linear clauses allow at most 1)",
            span,
        )
        self.clause_id = clause_id
        self.count = count


class ValidationError(HornError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(
            "; ".join(d.message for d in self.diagnostics) or "invalid system",
            first.span if first else None,
        )


# emission / oracle
class InvalidK(HornError):
    pass


class BudgetExceeded(HornError):
    pass


class UnsetRead(HornError):
    pass


class UnassignedVariable(HornError):
    pass


def line_col(source, offset: int) -> Tuple[int, int]:
    """1-based (line, column) of a byte offset; columns count bytes."""
    data = source.encode("utf-8") if isinstance(source, str) else source
    offset = max(0, min(offset, len(data)))
    line = data.count(b"\n", 0, offset) + 1
    start = data.rfind(b"\n", 0, offset) + 1
    return line, offset - start + 1
