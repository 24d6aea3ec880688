"""Exception hierarchy and search budgets."""

from __future__ import annotations

from dataclasses import dataclass


class QuiverError(Exception):
    """Base class for every error raised by quiverlab."""


@dataclass(frozen=True)
class DanglingEndpoint:
    edge: str
    vertex: str

    def __str__(self) -> str:
        return f"edge {self.edge!r} references unknown vertex {self.vertex!r}"


@dataclass(frozen=True)
class DuplicateId:
    id: str
    kind: str = "vertex"

    def __str__(self) -> str:
        return f"duplicate {self.kind} id {self.id!r}"


class ValidationError(QuiverError, ValueError):
    """A raw quiver description violates one or more invariants.

    ``violations`` lists every problem found, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownVertex(QuiverError, KeyError):
    def __str__(self) -> str:
        return f"unknown vertex {self.args[0]!r}"


class UnknownEdge(QuiverError, KeyError):
    def __str__(self) -> str:
        return f"unknown edge {self.args[0]!r}"


class InvalidSize(QuiverError, ValueError):
    pass


class TotalityViolation(QuiverError, ValueError):
    """A morphism's vertex or edge map is not total, or lands outside the codomain."""


class PrecondViolation(QuiverError, ValueError):
    pass


class InvalidSpec(QuiverError, ValueError):
    pass


class InternalInconsistency(QuiverError, AssertionError):
    """A structural guarantee failed on an input that passed the injectivity test.

    This indicates a bug in quiverlab, never a bad input.
    """


class ParseError(QuiverError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class BudgetExceeded(QuiverError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"search budget of {limit} nodes exceeded")


class Budget:
    """Shared node counter for backtracking searches.

    ``limit=None`` means unbounded.  One instance may be threaded through
    several nested searches so that they draw from the same allowance.
    """

    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = None):
        if limit is not None and limit < 0:
            raise ValueError("budget must be non-negative")
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.limit)

    @classmethod
    def coerce(cls, budget: "Budget | int | None") -> "Budget":
        if isinstance(budget, Budget):
            return budget
        return cls(budget)

    def __repr__(self) -> str:
        return f"Budget(limit={self.limit}, used={self.used})"
