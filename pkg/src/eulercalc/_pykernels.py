"""Pure-Python sign-vector kernels (fallback for the compiled extension)."""

from __future__ import annotations

from typing import Sequence


def _below(d: Sequence[int], c: Sequence[int]) -> bool:
    for s, t in zip(d, c):
        if s and s != t:
            return False
    return True


def upset_sums(lower: Sequence[Sequence[int]], upper: Sequence[Sequence[int]],
               weights: Sequence[int]) -> list[int]:
    out = []
    for d in lower:
        acc = 0
        for c, w in zip(upper, weights):
            if w and _below(d, c):
                acc += w
        out.append(acc)
    return out


def leq_matrix(lower: Sequence[Sequence[int]], upper: Sequence[Sequence[int]]) -> list[list[bool]]:
    return [[_below(d, c) for c in upper] for d in lower]
