"""Error kinds, source spans and the exception hierarchy shared by every layer."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True, order=True)
class SourceSpan:
    """A region of a source file; lines and columns are 1-based, end is exclusive."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span starts after it ends: {self}")

    def cover(self, other: SourceSpan) -> SourceSpan:
        start = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return SourceSpan(self.file, *start, *end)

    def contains(self, other: SourceSpan) -> bool:
        return (self.start_line, self.start_col) <= (other.start_line, other.start_col) and (
            other.end_line,
            other.end_col,
        ) <= (self.end_line, self.end_col)

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"


class Kind(str, Enum):
    """Every failure the library can report, static or dynamic."""

    UNKNOWN_COLUMN = "UnknownColumn"
    DUPLICATE_COLUMN = "DuplicateColumn"
    SORT_MISMATCH = "SortMismatch"
    LENGTH_MISMATCH = "LengthMismatch"
    RAGGED_ROW = "RaggedRow"
    ILLEGAL_MISSING = "IllegalMissing"
    ROW_INDEX_OUT_OF_BOUNDS = "RowIndexOutOfBounds"
    HETEROGENEOUS_DYNAMIC_ACCESS = "HeterogeneousDynamicAccess"
    ARITY_MISMATCH = "ArityMismatch"
    CONTRACT_VIOLATION = "ContractViolation"
    PARSE_ERROR = "ParseError"
    LEX_ERROR = "LexError"
    SWAPPED_COLUMNS = "SwappedColumns"
    NON_TABLE_ARGUMENT = "NonTableArgument"
    UNBOUND_NAME = "UnboundName"
    RECURSION = "Recursion"
    UNRESOLVED_NAME = "UnresolvedName"
    # warnings
    UNUSED_BINDING = "UnusedBinding"
    POSSIBLY_MISSING = "PossiblyMissing"
    UNCHECKED_FUNCTION = "UncheckedFunction"
    # contract sub-kinds, reported as ContractViolation(<kind>)
    EMPTY_NAME = "EmptyName"
    EMPTY_SEPARATOR = "EmptySeparator"
    NON_INTEGRAL_INDEX = "NonIntegralIndex"
    HEAD_OUT_OF_RANGE = "HeadOutOfRange"
    UNSORTABLE_SORT = "UnsortableSort"
    MISSING_CELL = "MissingCell"
    INVALID_COMPARATOR = "InvalidComparator"
    SCHEMA_MISMATCH = "SchemaMismatch"
    DUPLICATE_RIGHT_KEY = "DuplicateRightKey"
    NAME_CLASH = "NameClash"
    DUPLICATE_COMBINATION = "DuplicateCombination"
    MISSING_NAME = "MissingName"
    SAMPLE_TOO_LARGE = "SampleTooLarge"
    INVALID_SEED = "InvalidSeed"
    EMPTY_INPUT = "EmptyInput"
    EMPTY_SPEC = "EmptySpec"
    ENSURE_VIOLATION = "EnsureViolation"
    TYPE_FAULT = "TypeFault"
    DIVISION_BY_ZERO = "DivisionByZero"


# Stable diagnostic codes. The order of this table is frozen; append only.
CODES: dict[Kind, str] = {
    Kind.UNKNOWN_COLUMN: "E001",
    Kind.DUPLICATE_COLUMN: "E002",
    Kind.SORT_MISMATCH: "E003",
    Kind.LENGTH_MISMATCH: "E004",
    Kind.RAGGED_ROW: "E005",
    Kind.ILLEGAL_MISSING: "E006",
    Kind.ROW_INDEX_OUT_OF_BOUNDS: "E007",
    Kind.HETEROGENEOUS_DYNAMIC_ACCESS: "E008",
    Kind.ARITY_MISMATCH: "E009",
    Kind.CONTRACT_VIOLATION: "E010",
    Kind.PARSE_ERROR: "E011",
    Kind.LEX_ERROR: "E012",
    Kind.SWAPPED_COLUMNS: "E013",
    Kind.NON_TABLE_ARGUMENT: "E014",
    Kind.UNBOUND_NAME: "E015",
    Kind.RECURSION: "E016",
    Kind.UNRESOLVED_NAME: "E017",
    Kind.UNUSED_BINDING: "W001",
    Kind.POSSIBLY_MISSING: "W002",
    Kind.UNCHECKED_FUNCTION: "W003",
}


class BenchError(Exception):
    """Base class for every error term the library raises.

    ``kind`` says what went wrong, ``span`` (when known) says where in a source
    program, and ``details`` carries the structured payload (indices, expected and
    actual sorts, offending names) that diagnostics render.
    """

    def __init__(self, kind: Kind, message: str, span: SourceSpan | None = None, **details):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span
        self.details = details
        self.trace: list[str] = []

    def __str__(self):
        return self.message

    def with_span(self, span: SourceSpan | None) -> BenchError:
        if self.span is None and span is not None:
            self.span = span
        return self


class TableError(BenchError):
    """A schema/cell grid that does not form a table."""


class ContractViolation(BenchError):
    """A Table API operation was called outside its requirements."""


class EnsureViolation(BenchError):
    """An operation produced output that breaks its own guarantees."""

    def __init__(self, message: str, span: SourceSpan | None = None, **details):
        super().__init__(Kind.ENSURE_VIOLATION, message, span, **details)


class ColumnNameError(BenchError):
    """Raised by column-name primitives (empty names, empty separators)."""


class LexError(BenchError):
    def __init__(self, message: str, span: SourceSpan, char: str):
        super().__init__(Kind.LEX_ERROR, message, span, char=char)


class ParseError(BenchError):
    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = (), found: str = ""):
        super().__init__(Kind.PARSE_ERROR, message, span, expected=expected, found=found)


class EvalError(BenchError):
    """A dynamic failure inside the interpreter that is not an API contract."""


@dataclass
class ManifestError(Exception):
    path: str
    reason: str

    def __str__(self):
        return f"{self.path}: {self.reason}"


__all__ = [
    "BenchError",
    "CODES",
    "ContractViolation",
    "EnsureViolation",
    "EvalError",
    "Kind",
    "LexError",
    "ManifestError",
    "ColumnNameError",
    "ParseError",
    "SourceSpan",
    "TableError",
]
