"""Line-level attention overlap between groups via the Jaccard index."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from gazemap.ingest import FileInventory

LineKey = tuple[str, int]


def lines_viewed(means: Mapping[LineKey, float]) -> set[LineKey]:
    """(file, line) keys a group actually looked at: mean attention > 0."""
    return {k for k, v in means.items() if v > 0}


def jaccard(a: set, b: set) -> float:
    """|a intersect b| / |a union b|. Defined as 0 when both sets are empty;
    use jaccard_defined to tell that case apart from true zero overlap."""
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def jaccard_defined(a: set, b: set) -> bool:
    return bool(a or b)


@dataclass(frozen=True, slots=True)
class OverlapReport:
    """Per-file and aggregate line overlap between two groups.

    per_file covers every file at least one group viewed. aggregate is the
    Jaccard index over the flattened (file, line) pair sets; per_file_mean is
    the unweighted mean of the per-file scores. Both are reported because
    they answer different questions and can differ a lot.
    """

    per_file: Mapping[str, float]
    zero_overlap_count: int
    full_overlap_count: int
    aggregate: float
    per_file_mean: float

    def to_dict(self) -> dict[str, object]:
        return {
            "per_file": dict(self.per_file),
            "zero_overlap_count": self.zero_overlap_count,
            "full_overlap_count": self.full_overlap_count,
            "aggregate": self.aggregate,
            "per_file_mean": self.per_file_mean,
        }


def per_file_overlap(
    group_a: Mapping[LineKey, float],
    group_b: Mapping[LineKey, float],
    inventory: FileInventory | None = None,
) -> OverlapReport:
    """Compare two groups' viewed-line sets file by file and overall.

    Files neither group viewed carry no information and are excluded from
    per_file and from the zero/full counts. When an inventory is given,
    every viewed path must belong to it.
    """
    viewed_a = lines_viewed(group_a)
    viewed_b = lines_viewed(group_b)
    if inventory is not None:
        for path, _line in viewed_a | viewed_b:
            if path not in inventory.files:
                raise KeyError(f"path {path!r} not in inventory")

    by_file_a: dict[str, set[int]] = {}
    for path, line in viewed_a:
        by_file_a.setdefault(path, set()).add(line)
    by_file_b: dict[str, set[int]] = {}
    for path, line in viewed_b:
        by_file_b.setdefault(path, set()).add(line)

    per_file: dict[str, float] = {}
    zero = full = 0
    for path in sorted(set(by_file_a) | set(by_file_b)):
        score = jaccard(by_file_a.get(path, set()), by_file_b.get(path, set()))
        per_file[path] = score
        if score == 0.0:
            zero += 1
        elif score == 1.0:
            full += 1

    aggregate = jaccard(viewed_a, viewed_b)
    per_file_mean = sum(per_file.values()) / len(per_file) if per_file else 0.0
    return OverlapReport(
        per_file=per_file,
        zero_overlap_count=zero,
        full_overlap_count=full,
        aggregate=aggregate,
        per_file_mean=per_file_mean,
    )
