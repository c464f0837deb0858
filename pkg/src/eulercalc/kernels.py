"""Backend selection for the sign-vector kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
pure-Python implementation is used.  Setting ``EULERCALC_PURE_PYTHON=1``
forces the fallback.  Both backends take and return plain Python data.
"""

from __future__ import annotations

import os
from typing import Sequence

from . import _pykernels

try:
    if os.environ.get("EULERCALC_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python requested")
    import numpy as _np

    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_INT64_MAX = 2**63 - 1


def _as_int8(rows: Sequence[Sequence[int]], width: int):
    arr = _np.asarray(rows, dtype=_np.int8) if rows else _np.zeros((0, width), dtype=_np.int8)
    return _np.ascontiguousarray(arr.reshape(len(rows), width))


def upset_sums(lower: Sequence[Sequence[int]], upper: Sequence[Sequence[int]],
               weights: Sequence[int], backend: str | None = None) -> list[int]:
    """For each ``D`` in ``lower``: the sum of ``weights[j]`` over ``upper[j] >= D``."""
    backend = backend or BACKEND
    width = len(lower[0]) if lower else (len(upper[0]) if upper else 0)
    bound = sum(abs(w) for w in weights)
    if backend == "cython" and _ckernels is not None and bound <= _INT64_MAX and width > 0:
        out = _ckernels.upset_sums(_as_int8(lower, width), _as_int8(upper, width),
                                   _np.asarray(weights, dtype=_np.int64))
        return out.tolist()
    return _pykernels.upset_sums(lower, upper, weights)


def leq_matrix(lower: Sequence[Sequence[int]], upper: Sequence[Sequence[int]],
               backend: str | None = None) -> list[list[bool]]:
    """``M[i][j]`` is True iff ``lower[i] <= upper[j]`` in the face order."""
    backend = backend or BACKEND
    width = len(lower[0]) if lower else (len(upper[0]) if upper else 0)
    if backend == "cython" and _ckernels is not None and width > 0:
        out = _ckernels.leq_matrix(_as_int8(lower, width), _as_int8(upper, width))
        return out.astype(bool).tolist()
    return _pykernels.leq_matrix(lower, upper)
