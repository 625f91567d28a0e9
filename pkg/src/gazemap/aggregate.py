"""Session aggregation: LineHits, duration normalization, group means,
five-level grading, file ranking, and GazeMap assembly.

All floating-point folds use math.fsum, which returns the correctly rounded
sum of its inputs regardless of order. That is what makes build_gaze_map
bit-identical under any permutation of the input sessions.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from typing import Iterable, Mapping, Sequence

from gazemap import __version__
from gazemap.errors import EmptyGroup, LineOutOfRange, NonPositiveDuration, UnknownFile
from gazemap.ingest import FileInventory
from gazemap.model import (
    AttentionGrade,
    Block,
    GazeMap,
    GazePrint,
    GazeTrail,
    LineAttention,
    Session,
)

LineKey = tuple[str, int]

DEFAULT_TOP_N = 10
DEFAULT_SKEW_THRESHOLD = 1.0


def gazeprints(s: Session) -> list[GazePrint]:
    """Per-(file, line) token view counts for one session, valid events only."""
    counts: dict[LineKey, Counter[str]] = defaultdict(Counter)
    for e in s.valid_events():
        counts[(e.file, e.line)][e.token_key] += 1
    return [
        GazePrint(file=f, line=line, token_hits=dict(c))
        for (f, line), c in sorted(counts.items())
    ]


def line_hits(s: Session) -> dict[LineKey, float]:
    """LineHits per (file, line): the maximum view count over that line's
    tokens. Lines never viewed are absent; invalid events never count."""
    return {
        (p.file, p.line): float(max(p.token_hits.values())) for p in gazeprints(s)
    }


def gaze_trails(s: Session) -> list[GazeTrail]:
    """Group one session's LineHits into per-file trails."""
    per_file: dict[str, dict[int, float]] = defaultdict(dict)
    for (f, line), hits in line_hits(s).items():
        per_file[f][line] = hits
    return [GazeTrail(file=f, line_hits=lines) for f, lines in sorted(per_file.items())]


def normalize(m: Mapping[LineKey, float], duration_ms: int) -> dict[LineKey, float]:
    """Divide every value by the session duration in seconds (unit: hits/second)."""
    if duration_ms <= 0:
        raise NonPositiveDuration(duration_ms)
    seconds = duration_ms / 1000.0
    return {k: v / seconds for k, v in m.items()}


def group_mean(
    maps: Sequence[Mapping[LineKey, float]], n: int
) -> dict[LineKey, float]:
    """Mean over all n group members; a member with no entry for a key
    contributes 0. Output covers the union of observed keys."""
    if n < 1:
        raise EmptyGroup()
    if len(maps) > n:
        raise ValueError(f"group size {n} smaller than number of maps {len(maps)}")
    keys: set[LineKey] = set()
    for m in maps:
        keys.update(m)
    return {
        k: math.fsum(m[k] for m in maps if k in m) / n for k in sorted(keys)
    }


def skewness(values: Sequence[float]) -> float:
    """Fisher-Pearson moment coefficient g1 = m3 / m2^(3/2), with the biased
    (divide-by-n) central moments. Zero-variance input yields 0."""
    if len(values) == 0:
        raise EmptyGroup("skewness of an empty list")
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((v - mean) ** 2 for v in values) / n
    if m2 == 0.0:
        return 0.0
    m3 = math.fsum((v - mean) ** 3 for v in values) / n
    return m3 / (m2 * math.sqrt(m2))


def _quantile(sorted_values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile of pre-sorted values, q in [0, 1]."""
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    h = (n - 1) * q
    lo = math.floor(h)
    hi = math.ceil(h)
    if lo == hi:
        return sorted_values[lo]
    return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])


def grade_boundaries(
    nonzero_values: Sequence[float], skew_threshold: float = DEFAULT_SKEW_THRESHOLD
) -> tuple[list[float], str]:
    """Four ascending grade boundaries over the nonzero means, plus the name
    of the binning mode used. Quantile bins when the distribution is heavily
    right-skewed, equal-width bins otherwise."""
    values = sorted(nonzero_values)
    if skewness(values) > skew_threshold:
        return [_quantile(values, q) for q in (0.2, 0.4, 0.6, 0.8)], "quantile"
    lo, hi = values[0], values[-1]
    width = (hi - lo) / 5.0
    return [lo + i * width for i in (1, 2, 3, 4)], "equal_width"


def grade(
    means: Mapping[LineKey, float],
    skew_threshold: float = DEFAULT_SKEW_THRESHOLD,
) -> dict[LineKey, AttentionGrade]:
    """Assign one of five attention grades to every key; zero means grade NONE.

    A value sitting exactly on a boundary goes to the higher grade. When all
    nonzero values are equal there is nothing to spread, so all get L3.
    """
    if any(v < 0 for v in means.values()):
        raise ValueError("means must be >= 0")
    nonzero = [v for v in means.values() if v > 0]
    out: dict[LineKey, AttentionGrade] = {}
    if not nonzero:
        return {k: AttentionGrade.NONE for k in means}
    if min(nonzero) == max(nonzero):
        for k, v in means.items():
            out[k] = AttentionGrade.NONE if v == 0 else AttentionGrade.L3
        return out
    boundaries, _mode = grade_boundaries(nonzero, skew_threshold)
    for k, v in means.items():
        if v == 0:
            out[k] = AttentionGrade.NONE
        else:
            level = 1 + sum(1 for b in boundaries if b <= v)
            out[k] = AttentionGrade(min(level, 5))
    return out


def rank_files(
    means: Mapping[LineKey, float], top_n: int = DEFAULT_TOP_N
) -> list[tuple[str, float]]:
    """Rank files by summed line means, descending, ties broken by path."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    per_file: dict[str, list[float]] = defaultdict(list)
    for (f, _line), v in sorted(means.items()):
        per_file[f].append(v)
    totals = [(f, math.fsum(vs)) for f, vs in per_file.items()]
    totals.sort(key=lambda item: (-item[1], item[0]))
    return totals[:top_n]


def blocks(grades: Mapping[int, AttentionGrade]) -> list[Block]:
    """Merge consecutive graded lines of one file into maximal runs; each
    run carries the strongest grade it contains."""
    graded = sorted(
        line for line, g in grades.items() if g is not AttentionGrade.NONE
    )
    out: list[Block] = []
    for line in graded:
        g = grades[line]
        if out and line == out[-1].end + 1:
            last = out[-1]
            out[-1] = Block(last.start, line, max(last.grade, g))
        else:
            out.append(Block(line, line, g))
    return out


def build_gaze_map(
    sessions: Sequence[Session],
    inventory: FileInventory,
    top_n: int = DEFAULT_TOP_N,
    skew_threshold: float = DEFAULT_SKEW_THRESHOLD,
    project_id: str | None = None,
    extra_provenance: Mapping[str, object] | None = None,
) -> GazeMap:
    """Full pipeline: line_hits -> normalize -> group_mean -> grade ->
    rank_files -> blocks, assembled into one GazeMap.

    Deterministic: the result is bit-identical for any ordering of sessions.
    """
    if not sessions:
        raise EmptyGroup("cannot build a gaze map from zero sessions")
    for s in sessions:
        for e in s.events:
            info = inventory.files.get(e.file)
            if info is None:
                raise UnknownFile(e.file)
            if e.valid and e.line > info.line_count:
                raise LineOutOfRange(e.file, e.line, info.line_count)

    normalized = [normalize(line_hits(s), s.duration_ms) for s in sessions]
    means = group_mean(normalized, n=len(sessions))
    grades = grade(means, skew_threshold)
    ranking = rank_files(means, top_n)

    files: dict[str, dict[int, LineAttention]] = defaultdict(dict)
    per_file_grades: dict[str, dict[int, AttentionGrade]] = defaultdict(dict)
    for (f, line), mean in sorted(means.items()):
        files[f][line] = LineAttention(mean_norm_hits=mean, grade=grades[(f, line)])
        per_file_grades[f][line] = grades[(f, line)]

    block_map = {f: tuple(blocks(g)) for f, g in sorted(per_file_grades.items())}

    provenance: dict[str, object] = {
        "tool": "gazemap",
        "version": __version__,
        "top_n": top_n,
        "skew_threshold": skew_threshold,
        "normalization": "hits_per_second",
        "grading": "five bins over nonzero line means; quantile bins when "
        "skewness exceeds the threshold, equal-width bins otherwise",
        "session_ids": sorted(s.participant_id for s in sessions),
    }
    if extra_provenance:
        provenance.update(extra_provenance)

    return GazeMap(
        project_id=project_id
        if project_id is not None
        else inventory.root.rstrip("/").rsplit("/", 1)[-1],
        files=dict(files),
        ranking=tuple(ranking),
        blocks=block_map,
        provenance=provenance,
    )
