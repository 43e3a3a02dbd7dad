"""Custom exceptions for cocart."""

from __future__ import annotations

from typing import Any


class CocartError(Exception):
    """Base exception for all cocart errors."""

    pass


class IllFormed(CocartError):
    """Malformed input data (dangling names, non-parallel relations, bad tables)."""

    pass


class BudgetExceeded(CocartError):
    """A closure computation did not stabilize within its budget."""

    def __init__(self, message: str, budget: int) -> None:
        """Initialize budget error.

        Args:
            message: Error message
            budget: The bound that was exceeded
        """
        super().__init__(message)
        self.budget = budget


class UnknownMorphism(CocartError):
    """Morphism id or name not present in the category."""

    pass


class NotComposable(CocartError):
    """Composition requested for a pair with tgt(f) != src(g)."""

    pass


class NotParallel(CocartError):
    """Functors do not share source and target."""

    pass


class NotAFunctor(CocartError):
    """Object/morphism maps do not define a functor."""

    def __init__(self, message: str, issues: list[str] | None = None) -> None:
        """Initialize functor error.

        Args:
            message: Error message
            issues: Individual violated conditions
        """
        super().__init__(message)
        self.issues = issues or []


class BadDegrees(CocartError):
    """Arrow does not lie over a non-identity arrow of the base chain."""

    pass


class BadBase(CocartError):
    """Correspondence lives over the wrong chain."""

    pass


class BoundaryMismatch(CocartError):
    """Correspondences cannot be composed: the shared fiber differs."""

    pass


class NotCocartesian(CocartError):
    """A cocartesian fibration was required but none was found."""

    pass


class NoFractions(CocartError):
    """The marking does not admit a calculus of right fractions."""

    pass


class NotFiberSupported(CocartError):
    """Marking contains morphisms between different fibers."""

    pass


class NotConverged(CocartError):
    """Zig-zag localization did not stabilize at the configured depth."""

    def __init__(self, message: str, result: Any = None) -> None:
        """Initialize convergence error.

        Args:
            message: Error message
            result: The non-certified localization result
        """
        super().__init__(message)
        self.result = result


class NotCertified(CocartError):
    """A pipeline step relied on a non-certified localization."""

    pass


class NotInverting(CocartError):
    """Functor does not send the marking to isomorphisms."""

    pass


class NotPreserving(CocartError):
    """Functor does not carry W_C into W_D."""

    pass


class DerivedMissing(CocartError):
    """One side of a derived adjunction does not exist."""

    pass


class InternalContradiction(CocartError):
    """A mathematical cross-check failed; indicates a bug."""

    pass


class BulletFailed(CocartError):
    """A hypothesis of the resolution criterion failed."""

    def __init__(self, message: str, bullet: int) -> None:
        """Initialize resolution error.

        Args:
            message: Error message
            bullet: Index (1, 2 or 3) of the failed hypothesis
        """
        super().__init__(message)
        self.bullet = bullet


class HypothesisFailed(CocartError):
    """A hypothesis of the family criterion failed at a cell of the base."""

    def __init__(self, message: str, kind: str, cell: str) -> None:
        """Initialize family error.

        Args:
            message: Error message
            kind: "arrow", "triangle" or "adjoint"
            cell: Name of the offending arrow or triangle
        """
        super().__init__(message)
        self.kind = kind
        self.cell = cell


class WorkspaceError(CocartError):
    """Semantic error in a workspace (unknown name, invalid construct)."""

    def __init__(self, message: str, construct: str | None = None) -> None:
        """Initialize workspace error.

        Args:
            message: Error message
            construct: Name of the offending construct
        """
        super().__init__(message)
        self.construct = construct


class DSLSyntaxError(WorkspaceError):
    """Syntax error in a workspace source."""

    def __init__(self, message: str, line: int, column: int) -> None:
        """Initialize syntax error.

        Args:
            message: Error message
            line: 1-based line number
            column: 1-based column number
        """
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
