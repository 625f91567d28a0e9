"""Shared domain types.

Everything here is immutable after construction so instances can be shared
freely across workers. Field-level constraints are enforced in __post_init__;
cross-record rules (event ordering, duration bounds, path canonicality) live
in validate_session.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, NamedTuple, Optional

from gazemap.errors import (
    BadPath,
    DurationTooShort,
    NonPositiveDuration,
    UnsortedEvents,
)

ROLES = ("expert", "novice")
GROUPS = ("control", "experiment", "expert")

# Sentinel token key used when a gaze sample is line-resolved only. Treating
# the whole line as one token lets line-resolution logs flow through the
# max-per-token counting rule unchanged.
LINE_TOKEN = "‹line›"


def normalize_path(path: str) -> str:
    """Canonicalize a relative file path: forward slashes, no empty or '.'
    segments. Raises BadPath for absolute paths, drive letters, or '..'.

    Idempotent: normalize_path(normalize_path(p)) == normalize_path(p).
    """
    if not isinstance(path, str) or not path.strip():
        raise BadPath(str(path), reason="empty")
    p = path.replace("\\", "/")
    if p.startswith("/") or (len(p) > 1 and p[1] == ":"):
        raise BadPath(path, reason="absolute path")
    parts = [seg for seg in p.split("/") if seg not in ("", ".")]
    if not parts:
        raise BadPath(path, reason="empty after normalization")
    if any(seg == ".." for seg in parts):
        raise BadPath(path, reason="parent reference")
    return "/".join(parts)


class AttentionGrade(IntEnum):
    """Five attention levels plus NONE for lines with zero mean attention.
    Integer values make grade comparisons and run-max natural."""

    NONE = 0
    L1 = 1
    L2 = 2
    L3 = 3
    L4 = 4
    L5 = 5

    @property
    def label(self) -> str:
        return "None" if self is AttentionGrade.NONE else self.name

    @classmethod
    def from_label(cls, label: str) -> "AttentionGrade":
        if label == "None":
            return cls.NONE
        try:
            return cls[label]
        except KeyError:
            raise ValueError(f"unknown attention grade {label!r}") from None


@dataclass(frozen=True, slots=True)
class GazeEvent:
    """One timestamped gaze sample resolved to (file, line, optional token)."""

    t_ms: int
    file: str
    line: int
    column: Optional[int] = None
    token: Optional[str] = None
    valid: bool = True

    def __post_init__(self) -> None:
        if self.t_ms < 0:
            raise ValueError(f"t_ms must be >= 0, got {self.t_ms}")
        if self.line < 1:
            raise ValueError(f"line must be >= 1, got {self.line}")
        if self.column is not None and self.column < 1:
            raise ValueError(f"column must be >= 1, got {self.column}")

    @property
    def token_key(self) -> str:
        """Token string, or the whole-line sentinel when token is absent."""
        return self.token if self.token is not None else LINE_TOKEN


@dataclass(frozen=True, slots=True)
class Session:
    """A participant's ordered gaze events plus role/group/duration metadata."""

    participant_id: str
    role: str
    group: str
    task_id: str
    events: tuple[GazeEvent, ...]
    duration_ms: int

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {self.role!r}")
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        object.__setattr__(self, "events", tuple(self.events))

    def valid_events(self) -> tuple[GazeEvent, ...]:
        return tuple(e for e in self.events if e.valid)


def validate_session(s: Session) -> Session:
    """Check session-level invariants and return the session unchanged.

    Events flagged valid=False are kept (they are excluded later, at
    counting time). Idempotent by construction: no mutation happens here.
    """
    prev_t = -1
    for i, e in enumerate(s.events):
        if e.t_ms < prev_t:
            raise UnsortedEvents(i)
        prev_t = e.t_ms
        try:
            canonical = normalize_path(e.file)
        except BadPath as exc:
            raise BadPath(e.file, index=i, reason=str(exc)) from None
        if canonical != e.file:
            raise BadPath(e.file, index=i, reason="path not in canonical form")
    if s.duration_ms <= 0:
        raise NonPositiveDuration(s.duration_ms)
    if s.events and s.duration_ms < s.events[-1].t_ms:
        raise DurationTooShort(s.duration_ms, s.events[-1].t_ms)
    return s


@dataclass(frozen=True, slots=True)
class GazePrint:
    """Visual attention on the tokens of one line: token-key -> view count."""

    file: str
    line: int
    token_hits: Mapping[str, int]

    def __post_init__(self) -> None:
        if any(c < 1 for c in self.token_hits.values()):
            raise ValueError("token_hits counts must be >= 1")
        object.__setattr__(self, "token_hits", dict(self.token_hits))


@dataclass(frozen=True, slots=True)
class GazeTrail:
    """Per-file cluster of line attention: line -> LineHits value."""

    file: str
    line_hits: Mapping[int, float]

    def __post_init__(self) -> None:
        if any(line < 1 for line in self.line_hits):
            raise ValueError("lines must be >= 1")
        if any(v < 0 for v in self.line_hits.values()):
            raise ValueError("hit values must be >= 0")
        object.__setattr__(self, "line_hits", dict(self.line_hits))


class Block(NamedTuple):
    """Maximal run of consecutive graded lines, colored by its strongest line."""

    start: int
    end: int
    grade: AttentionGrade


@dataclass(frozen=True, slots=True)
class LineAttention:
    mean_norm_hits: float
    grade: AttentionGrade

    def __post_init__(self) -> None:
        if self.mean_norm_hits < 0:
            raise ValueError("mean_norm_hits must be >= 0")
        if (self.mean_norm_hits == 0) != (self.grade is AttentionGrade.NONE):
            raise ValueError("grade is NONE exactly when mean_norm_hits is 0")


@dataclass(frozen=True)
class GazeMap:
    """Aggregated group attention for a codebase: the unit the viewer renders."""

    project_id: str
    files: Mapping[str, Mapping[int, LineAttention]]
    ranking: tuple[tuple[str, float], ...]
    blocks: Mapping[str, tuple[Block, ...]]
    provenance: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "files", {p: dict(lines) for p, lines in self.files.items()}
        )
        object.__setattr__(self, "ranking", tuple(tuple(r) for r in self.ranking))
        object.__setattr__(
            self, "blocks", {p: tuple(Block(*b) for b in bs) for p, bs in self.blocks.items()}
        )
        object.__setattr__(self, "provenance", dict(self.provenance))
        validate_gaze_map(self)


def validate_gaze_map(g: GazeMap) -> GazeMap:
    """Enforce ranking order and block shape invariants."""
    for (path, total), (next_path, next_total) in zip(g.ranking, g.ranking[1:]):
        if (-total, path) > (-next_total, next_path):
            raise ValueError(
                f"ranking not sorted by (total desc, path asc) at {next_path!r}"
            )
    for path, _total in g.ranking:
        if path not in g.files:
            raise ValueError(f"ranked path {path!r} missing from files")
    for path, blocks in g.blocks.items():
        prev_end = 0
        for b in blocks:
            if not (1 <= b.start <= b.end):
                raise ValueError(f"bad block range {b} in {path!r}")
            if b.start <= prev_end:
                raise ValueError(f"overlapping or unordered blocks in {path!r}")
            if b.grade is AttentionGrade.NONE:
                raise ValueError(f"block with NONE grade in {path!r}")
            prev_end = b.end
    return g


class ModuleRule(NamedTuple):
    """One classification rule: kind is 'annotation' or 'folder'."""

    kind: str
    pattern: str
    label: str


@dataclass(frozen=True, slots=True)
class ModuleMap:
    """path -> single-character module label, plus the rules that produced it."""

    entries: Mapping[str, str]
    rules: tuple[ModuleRule, ...]

    def __post_init__(self) -> None:
        for path, label in self.entries.items():
            if len(label) != 1:
                raise ValueError(f"label for {path!r} must be a single character")
        object.__setattr__(self, "entries", dict(self.entries))
        object.__setattr__(self, "rules", tuple(ModuleRule(*r) for r in self.rules))

    def alphabet(self) -> frozenset[str]:
        return frozenset(self.entries.values())


@dataclass(frozen=True, slots=True)
class StatResult:
    """Outcome of one statistical procedure, serialization-friendly."""

    method: str
    statistic: float
    p_value: Optional[float]
    n1: int
    n2: int
    effect_size: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    notes: str = ""

    def __post_init__(self) -> None:
        if self.p_value is not None and not (0.0 <= self.p_value <= 1.0):
            raise ValueError(f"p_value must be in [0, 1], got {self.p_value}")
        if (
            self.ci_low is not None
            and self.ci_high is not None
            and self.ci_low > self.ci_high
        ):
            raise ValueError("ci_low must be <= ci_high")

    def to_dict(self) -> dict[str, object]:
        return {
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "effect_size": self.effect_size,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "n1": self.n1,
            "n2": self.n2,
            "notes": self.notes,
        }
