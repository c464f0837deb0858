"""Random and named PL inputs for the identity suites.

Every generator takes an explicit :class:`random.Random`, so a seed fully
determines the instance.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, is_bounded
from .constructible import AffineCF, PolyhedronSpec, indicator
from .projective import ProjectiveCF, embed_eim, representatives
from .ratgeom import AffineForm, AffineMap, rank


def random_key(rng: random.Random, n: int, coef: int = 3, homogeneous: bool = False) -> tuple:
    while True:
        lin = [rng.randint(-coef, coef) for _ in range(n)]
        if any(lin):
            c = 0 if homogeneous else rng.randint(-coef, coef)
            return AffineForm(lin, c).key()


def random_arrangement(rng: random.Random, n: int, m: int, coef: int = 3) -> Arrangement:
    return Arrangement(n, {random_key(rng, n, coef) for _ in range(m)})


def random_cf(rng: random.Random, n: int, max_forms: int = 8, vmax: int = 5,
              density: float = 0.6) -> AffineCF:
    """Random values in ``[-vmax, vmax]`` on a random arrangement."""
    arr = random_arrangement(rng, n, rng.randint(1, max_forms))
    vals = {}
    for c in arr.cells:
        if rng.random() < density:
            vals[c.signs] = rng.randint(-vmax, vmax)
    return AffineCF(arr, vals)


def box_keys(n: int, radius: int) -> list[tuple]:
    keys = []
    for i in range(n):
        for off in (-radius, radius):
            keys.append(AffineForm.coordinate(n, i, off).key())
    return keys


def random_compact_cf(rng: random.Random, n: int, max_forms: int = 5, vmax: int = 5,
                      radius: int = 4, density: float = 0.7) -> AffineCF:
    """Random values on the bounded cells of a random arrangement inside a box."""
    keys = set(box_keys(n, radius))
    for _ in range(rng.randint(0, max_forms)):
        keys.add(random_key(rng, n))
    arr = Arrangement(n, keys)
    vals = {}
    for c in arr.cells:
        if rng.random() < density and is_bounded(arr, c):
            vals[c.signs] = rng.randint(-vmax, vmax)
    return AffineCF(arr, vals)


def random_1d(rng: random.Random, points: int = 3, vmax: int = 3, span: int = 4) -> AffineCF:
    """Random function on R with at most ``points`` breakpoints."""
    arr = Arrangement(1, {(1, -rng.randint(-span, span)) for _ in range(rng.randint(1, points))})
    return AffineCF(arr, {c.signs: rng.randint(-vmax, vmax) for c in arr.cells})


def random_surjection(rng: random.Random, m: int, k: int, coef: int = 2) -> AffineMap:
    """Random surjective affine map ``R^m -> R^k`` with small integer entries."""
    while True:
        mat = [[rng.randint(-coef, coef) for _ in range(m)] for _ in range(k)]
        if rank(mat) == k:
            return AffineMap.make(mat, [rng.randint(-coef, coef) for _ in range(k)], m)


def random_affine_map(rng: random.Random, m: int, k: int, coef: int = 2) -> AffineMap:
    mat = [[rng.randint(-coef, coef) for _ in range(m)] for _ in range(k)]
    return AffineMap.make(mat, [rng.randint(-coef, coef) for _ in range(k)], m)


def random_polytope(rng: random.Random, d: int, cuts: int = 4) -> list[AffineForm]:
    """Forms ``g_i`` with ``Z = {g_i >= 0}`` a compact full-dimensional polytope.

    The box ``[-3, 3]^d`` is cut by random half-spaces that keep the origin
    strictly inside.
    """
    forms = []
    for i in range(d):
        forms.append(AffineForm.coordinate(d, i, -3))
        forms.append(-AffineForm.coordinate(d, i, 3))
    for _ in range(cuts):
        lin = [rng.randint(-3, 3) for _ in range(d)]
        if any(lin):
            forms.append(AffineForm([-a for a in lin], rng.randint(1, 4)))
    return forms


def polytope_pair(forms: Sequence[AffineForm], d: int) -> tuple[AffineCF, AffineCF]:
    """``(1_Z, 1_int(Z))`` for ``Z = {g_i >= 0}``."""
    closed = indicator(PolyhedronSpec(tuple((g, ">=") for g in forms)), d)
    interior = indicator(PolyhedronSpec(tuple((g, ">") for g in forms)), d)
    return closed, interior


def box(lo: Sequence, hi: Sequence, closed: bool = True) -> AffineCF:
    n = len(lo)
    cons = []
    for i in range(n):
        cons.append((AffineForm.coordinate(n, i, lo[i]), ">=" if closed else ">"))
        cons.append((AffineForm.coordinate(n, i, hi[i]), "<=" if closed else "<"))
    return indicator(PolyhedronSpec(tuple(cons)), n)


def triangle(a: Sequence, b: Sequence, c: Sequence, closed: bool = True) -> AffineCF:
    """Indicator of the closed (or open) triangle with the given vertices in R^2."""
    pts = [tuple(Fraction(x) for x in p) for p in (a, b, c)]
    cons = []
    for i in range(3):
        p, q, r = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        lin = (q[1] - p[1], p[0] - q[0])
        g = AffineForm(lin, -(lin[0] * p[0] + lin[1] * p[1]))
        side = g(r)
        if side == 0:
            raise ValueError("degenerate triangle")
        cons.append((g if side > 0 else -g, ">=" if closed else ">"))
    return indicator(PolyhedronSpec(tuple(cons)), 2)


# ---------------------------------------------------------------------------
# projective inputs


def random_projective(rng: random.Random, n: int = 2, m: int = 3, vmax: int = 3) -> ProjectiveCF:
    arr = Arrangement(n + 1, {random_key(rng, n + 1, homogeneous=True) for _ in range(m)}, central=True)
    return ProjectiveCF(arr, {c.signs: rng.randint(-vmax, vmax) for c in representatives(arr)})


def radon_corpus() -> dict[str, ProjectiveCF]:
    """Named test functions on P^2."""
    from .projective import hyperplane_indicator, point_indicator

    tri = triangle((0, 0), (2, 0), (0, 2))
    far = triangle((3, 3), (5, 3), (3, 6))
    return {
        "point": point_indicator((1, 2, 3)),
        "line": hyperplane_indicator((1, -1, 2)),
        "constant": ProjectiveCF.constant(2),
        "triangle": embed_eim(tri),
        "two-triangles": embed_eim(tri + far),
        "triangle-boundary": embed_eim(tri - triangle((0, 0), (2, 0), (0, 2), closed=False)),
        "open-triangle": embed_eim(triangle((0, 0), (2, 0), (0, 2), closed=False)),
        "weighted": embed_eim(tri * -2 + box((1, 1), (4, 2)) * 3),
        "coordinate-simplex": ProjectiveCF.from_rule(
            Arrangement(3, (), central=True), lambda c: int(all(s >= 0 for s in c.signs))),
    }


# ---------------------------------------------------------------------------
# bodies in R^3


def cube_with_hole() -> AffineCF:
    cube = box((0, 0, 0), (3, 3, 3))
    hole = indicator(PolyhedronSpec((
        (AffineForm.coordinate(3, 0, 1), ">"), (AffineForm.coordinate(3, 0, 2), "<"),
        (AffineForm.coordinate(3, 1, 1), ">"), (AffineForm.coordinate(3, 1, 2), "<"),
        (AffineForm.coordinate(3, 2, 0), ">="), (AffineForm.coordinate(3, 2, 3), "<="),
    )), 3)
    return cube - hole


def bodies_r3() -> dict[str, AffineCF]:
    return {
        "cube": box((0, 0, 0), (2, 2, 2)),
        "two-cubes": box((0, 0, 0), (1, 1, 1)) + box((3, 0, 0), (4, 1, 1)),
        "cube-with-hole": cube_with_hole(),
    }


def slicing_planes() -> list[AffineForm]:
    h = Fraction(3, 2)
    return [
        AffineForm((0, 0, 1), -h),
        AffineForm((1, 0, 0), -h),
        AffineForm((0, 1, 0), -Fraction(1, 2)),
        AffineForm((1, 1, 1), -4),
        AffineForm((1, 2, 0), -3),
        AffineForm((0, 0, 1), -7),
        AffineForm((1, -1, 0), 0),
    ]
