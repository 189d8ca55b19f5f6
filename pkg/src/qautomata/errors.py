"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input errors exit 2, resource caps exit 3.
"""

from __future__ import annotations


class QAutomataError(Exception):
    """Base class for all library errors."""


class DocumentError(QAutomataError, ValueError):
    """Malformed input: unknown names, missing fields, non-total maps."""


class LatticeMismatchError(QAutomataError, ValueError):
    """Values or machines from different lattices were combined."""


class AlphabetMismatchError(QAutomataError, ValueError):
    """Machines over different alphabets were combined."""


class UnknownSymbolError(QAutomataError, ValueError):
    pass


class ParseError(DocumentError):
    """Syntax error in an expression, carrying the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class LatticeAxiomError(QAutomataError, ValueError):
    """A lattice description parsed but violates an axiom."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


class ResourceCapError(QAutomataError, RuntimeError):
    """A construction exceeded a configured size or length bound."""
