from __future__ import annotations

from fractions import Fraction

import pytest

from eulercalc import kernels
from eulercalc.constructible import PolyhedronSpec, indicator
from eulercalc.ratgeom import AffineForm

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request) -> str:
    return request.param


def interval(a, b, left: str = ">=", right: str = "<="):
    """Indicator of an interval on R; ``None`` for an infinite end."""
    cons = []
    if a is not None:
        cons.append((AffineForm((1,), -Fraction(a)), left))
    if b is not None:
        cons.append((AffineForm((1,), -Fraction(b)), right))
    return indicator(PolyhedronSpec(tuple(cons)), 1)


def point(a):
    return interval(a, a, ">=", "<=")
