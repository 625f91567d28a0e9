"""Pure-Python fallback for the dynamic-programming kernels.

Same contracts as the compiled versions in _dp.pyx; used when the extension
is unavailable or GAZEMAP_PURE_PY is set. Inputs are sequences of small ints
(callers encode their items first); results are exact, so both backends
return bit-identical values.
"""

from __future__ import annotations

from typing import Sequence

_INF = float("inf")


def dtw_unit(a: Sequence[int], b: Sequence[int]) -> float:
    """Minimal accumulated cost over monotone warping paths, unit step cost
    0 on equality and 1 otherwise. Both inputs must be non-empty."""
    n, m = len(a), len(b)
    prev = [_INF] * (m + 1)
    prev[0] = 0.0
    for i in range(1, n + 1):
        ai = a[i - 1]
        cur = [_INF] * (m + 1)
        for j in range(1, m + 1):
            cost = 0.0 if ai == b[j - 1] else 1.0
            best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            if prev[j - 1] < best:
                best = prev[j - 1]
            cur[j] = cost + best
        prev = cur
    return prev[m]


def lcs_length(a: Sequence[int], b: Sequence[int]) -> int:
    """Longest-common-subsequence length; equals the global alignment score
    under match=1, mismatch=0, gap=0."""
    n, m = len(a), len(b)
    prev = [0] * (m + 1)
    for i in range(1, n + 1):
        ai = a[i - 1]
        cur = [0] * (m + 1)
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = cur[j - 1]
                cur[j] = up if up >= left else left
        prev = cur
    return prev[m]
