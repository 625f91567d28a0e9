"""Reading-order sequences: extraction from sessions, module abstraction,
and comparison via unit-cost DTW and the normalized global alignment score.

The DP inner loops live in gazemap.kernels (compiled when available); this
module owns encoding, validation, and normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from gazemap import kernels
from gazemap.errors import BothEmpty, EmptySequence, UnclassifiedPath
from gazemap.model import ModuleMap, Session


@dataclass(frozen=True, slots=True)
class FileSequence:
    """Run-length-collapsed chronological order of files one participant viewed."""

    items: tuple[str, ...]
    participant_id: str = ""
    task_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        for a, b in zip(self.items, self.items[1:]):
            if a == b:
                raise ValueError("consecutive duplicate items must be collapsed")

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, slots=True)
class ModuleSequence:
    """A file sequence abstracted to one character per module."""

    items: str
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.items)


def _collapse(items: Iterable[str]) -> list[str]:
    out: list[str] = []
    for item in items:
        if not out or out[-1] != item:
            out.append(item)
    return out


def file_sequence(
    s: Session, min_dwell_ms: int = 0, include_invalid: bool = False
) -> FileSequence:
    """Chronological file-visit sequence of one session.

    A visit is a maximal run of samples on the same file; its dwell lasts
    until the next file change (for the final visit, until session end).
    Visits shorter than min_dwell_ms are dropped before collapsing, so a
    brief flicker through another file does not split a visit in two.
    """
    if min_dwell_ms < 0:
        raise ValueError("min_dwell_ms must be >= 0")
    events = s.events if include_invalid else s.valid_events()
    visits: list[tuple[str, int]] = []  # (file, start t)
    for e in events:
        if not visits or visits[-1][0] != e.file:
            visits.append((e.file, e.t_ms))
    kept: list[str] = []
    for i, (path, start) in enumerate(visits):
        end = visits[i + 1][1] if i + 1 < len(visits) else s.duration_ms
        if end - start >= min_dwell_ms:
            kept.append(path)
    return FileSequence(
        items=tuple(_collapse(kept)),
        participant_id=s.participant_id,
        task_id=s.task_id,
    )


def _encode(a: Sequence[str], b: Sequence[str]) -> tuple[list[int], list[int]]:
    codes: dict[str, int] = {}
    for item in a:
        codes.setdefault(item, len(codes))
    for item in b:
        codes.setdefault(item, len(codes))
    return [codes[i] for i in a], [codes[i] for i in b]


def dtw_distance(a: FileSequence | Sequence[str], b: FileSequence | Sequence[str]) -> float:
    """Classic dynamic time warping distance with unit cost: a step costs 0
    when the aligned items are equal and 1 otherwise."""
    items_a = tuple(a.items if isinstance(a, FileSequence) else a)
    items_b = tuple(b.items if isinstance(b, FileSequence) else b)
    if not items_a or not items_b:
        raise EmptySequence()
    ca, cb = _encode(items_a, items_b)
    return kernels.dtw_unit(ca, cb)


def group_dtw_distribution(
    sequences: Sequence[FileSequence], reference: FileSequence
) -> list[float]:
    """Per-participant DTW distance to the reference, input order preserved."""
    if not reference.items:
        raise EmptySequence("reference")
    return [dtw_distance(seq, reference) for seq in sequences]


def module_sequence(f: FileSequence, m: ModuleMap) -> ModuleSequence:
    """Map each path to its module label and collapse consecutive repeats."""
    labels = []
    for path in f.items:
        label = m.entries.get(path)
        if label is None:
            raise UnclassifiedPath(path)
        labels.append(label)
    return ModuleSequence(
        items="".join(_collapse(labels)),
        provenance=f"{f.participant_id}/{f.task_id}" if f.participant_id else "",
    )


@dataclass(frozen=True, slots=True)
class AlignmentScore:
    """Normalized global alignment outcome; similarity + distance == 1."""

    score: int
    similarity: float
    distance: float


def nw_similarity(
    a: ModuleSequence | str, b: ModuleSequence | str
) -> AlignmentScore:
    """Global alignment score with match=+1, mismatch=0, gap=0, which equals
    the longest-common-subsequence length; normalized by the longer length."""
    items_a = a.items if isinstance(a, ModuleSequence) else a
    items_b = b.items if isinstance(b, ModuleSequence) else b
    if not items_a and not items_b:
        raise BothEmpty()
    if not items_a or not items_b:
        return AlignmentScore(score=0, similarity=0.0, distance=1.0)
    ca, cb = _encode(items_a, items_b)
    score = kernels.lcs_length(ca, cb)
    similarity = score / max(len(items_a), len(items_b))
    return AlignmentScore(score=score, similarity=similarity, distance=1.0 - similarity)


def group_file_sequence(members: Sequence[FileSequence], task_id: str = "") -> FileSequence:
    """One sequence for a whole group: member sequences concatenated in
    participant-id order, then collapsed. This aggregation convention is a
    tool decision and is recorded in CLI output metadata."""
    ordered = sorted(members, key=lambda f: f.participant_id)
    merged: list[str] = []
    for f in ordered:
        merged.extend(f.items)
    return FileSequence(
        items=tuple(_collapse(merged)),
        participant_id="+".join(f.participant_id for f in ordered),
        task_id=task_id,
    )
