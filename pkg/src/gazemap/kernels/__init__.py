"""Backend selection for the DP kernels.

Prefers the compiled extension (gazemap.kernels._dp); falls back to the
pure-Python implementation when the extension is missing or when the
GAZEMAP_PURE_PY environment variable is set to a non-empty value. Both
backends are exact, so the choice never affects results, only speed.
"""

from __future__ import annotations

import os
from array import array
from typing import Sequence

from gazemap.kernels import _pure

__all__ = ["BACKEND", "dtw_unit", "lcs_length"]

_compiled = None
if not os.environ.get("GAZEMAP_PURE_PY"):
    try:
        from gazemap.kernels import _dp as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"

if _compiled is not None:

    def dtw_unit(a: Sequence[int], b: Sequence[int]) -> float:
        return _compiled.dtw_unit(array("i", a), array("i", b))

    def lcs_length(a: Sequence[int], b: Sequence[int]) -> int:
        return _compiled.lcs_length(array("i", a), array("i", b))

else:
    dtw_unit = _pure.dtw_unit
    lcs_length = _pure.lcs_length
