"""Exception types raised across the pipeline.

Every error is a :class:`GaitError` (itself a ``ValueError``) so callers can
catch the whole family at once; the CLI maps them to exit code 2.
"""
from __future__ import annotations


class GaitError(ValueError):
    """Base class for invalid-input and degenerate-data errors."""


# ingestion
class MalformedHeader(GaitError):
    pass


class BadFieldCount(GaitError):
    def __init__(self, line: int, expected: int, got: int):
        self.line = line
        super().__init__(f"line {line}: expected {expected} fields, got {got}")


class NonFiniteValue(GaitError):
    def __init__(self, line: int, col: int, text: str = ""):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: non-finite or unparseable value {text!r}")


class NonMonotonicIndex(GaitError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: frame_index not strictly increasing")


class DuplicateWalkId(GaitError):
    pass


class UnknownLabel(GaitError):
    def __init__(self, text: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}unknown emotion label {text!r}")


class WidthMismatch(GaitError):
    pass


class MalformedRow(GaitError):
    pass


class UnknownModelKind(GaitError):
    pass


class VersionMismatch(GaitError):
    pass


class CorruptPayload(GaitError):
    pass


# preprocessing
class EmptyWalk(GaitError):
    pass


class WrongStage(GaitError):
    pass


StageMismatch = WrongStage


class TooShort(GaitError):
    def __init__(self, rows: int, needed: int, what: str = "input"):
        self.rows = rows
        self.needed = needed
        super().__init__(f"{what} has {rows} rows, needs at least {needed}")


class LabelLengthMismatch(GaitError):
    pass


class NoSegments(GaitError):
    pass


class InvalidConfig(GaitError):
    pass


# features
class EmptyInput(GaitError):
    pass


class EmptyDirection(GaitError):
    pass


class BothSidesEmpty(GaitError):
    pass


class MissingSide(GaitError):
    pass


# classify
class DegenerateClass(GaitError):
    pass


class SingleClass(GaitError):
    pass


class NotBinary(GaitError):
    pass


class TooFewPerClass(GaitError):
    pass


# synthgait
class InvalidParams(GaitError):
    pass
