"""Exception hierarchy. Everything raised on bad data derives from GazemapError
so the CLI can map it to exit code 2 with provenance intact."""

from __future__ import annotations


class GazemapError(Exception):
    """Base class for all data/validation errors raised by this package."""


# --- session / model validation ---------------------------------------------

class UnsortedEvents(GazemapError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"events not sorted by t_ms, first offending index {index}")


class NonPositiveDuration(GazemapError):
    def __init__(self, duration_ms: int):
        self.duration_ms = duration_ms
        super().__init__(f"duration_ms must be > 0, got {duration_ms}")


class DurationTooShort(GazemapError):
    """duration_ms smaller than the last event timestamp."""

    def __init__(self, duration_ms: int, max_t_ms: int):
        self.duration_ms = duration_ms
        self.max_t_ms = max_t_ms
        super().__init__(
            f"duration_ms {duration_ms} is smaller than the last event at t={max_t_ms}"
        )


class BadPath(GazemapError):
    def __init__(self, path: str, index: int | None = None, reason: str = ""):
        self.path = path
        self.index = index
        at = f" at event index {index}" if index is not None else ""
        why = f" ({reason})" if reason else ""
        super().__init__(f"bad file path {path!r}{at}{why}")


class EmptyGroup(GazemapError):
    def __init__(self, message: str = "group size must be at least 1"):
        super().__init__(message)


class UnknownFile(GazemapError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"file {path!r} not present in the source inventory")


class LineOutOfRange(GazemapError):
    def __init__(self, path: str, line: int, line_count: int):
        self.path = path
        self.line = line
        self.line_count = line_count
        super().__init__(f"{path}:{line} beyond file line count {line_count}")


# --- log / questionnaire parsing ---------------------------------------------

class ParseError(GazemapError):
    """Base for stream parse errors; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class MalformedLine(ParseError):
    def __init__(self, lineno: int, message: str = "not a valid record"):
        super().__init__(lineno, message)


class MissingField(ParseError):
    def __init__(self, lineno: int, field: str):
        self.field = field
        super().__init__(lineno, f"missing required field {field!r}")


class BadValue(ParseError):
    def __init__(self, lineno: int, message: str = "bad value"):
        super().__init__(lineno, message)


class MissingHeader(GazemapError):
    def __init__(self, expected: str):
        self.expected = expected
        super().__init__(f"missing or wrong header, expected {expected!r}")


class RootNotFound(GazemapError):
    def __init__(self, root: str):
        self.root = root
        super().__init__(f"source root {root!r} does not exist or is not a directory")


class IoError(GazemapError):
    def __init__(self, path: str, cause: Exception | None = None):
        self.path = path
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"cannot read {path!r}{detail}")


# --- sequences ----------------------------------------------------------------

class EmptySequence(GazemapError):
    def __init__(self, which: str = "sequence"):
        super().__init__(f"{which} is empty")


class UnclassifiedPath(GazemapError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"path {path!r} has no module label")


class BothEmpty(GazemapError):
    def __init__(self):
        super().__init__("both sequences are empty")


# --- statistics ----------------------------------------------------------------

class EmptySample(GazemapError):
    def __init__(self, which: str = "sample"):
        super().__init__(f"{which} is empty")


class AllZeroDifferences(GazemapError):
    def __init__(self):
        super().__init__("all paired differences are zero")


class DegenerateVariance(GazemapError):
    def __init__(self, message: str = "sample variance is degenerate"):
        super().__init__(message)


class WeightSumInvalid(GazemapError):
    def __init__(self, total: int):
        self.total = total
        super().__init__(f"TLX weights must sum to 15, got {total}")


class RatingOutOfRange(GazemapError):
    def __init__(self, value: float):
        self.value = value
        super().__init__(f"TLX rating must be in [0, 20], got {value}")


class BadM(GazemapError):
    def __init__(self, m: int):
        self.m = m
        super().__init__(f"number of comparisons must be >= 1, got {m}")


# --- export / import ------------------------------------------------------------

class UnsupportedVersion(GazemapError):
    def __init__(self, version: object):
        self.version = version
        super().__init__(f"unsupported format_version {version!r}")


class SchemaError(GazemapError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")
