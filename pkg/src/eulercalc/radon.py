"""Topological Radon transform on P^2 and hyperplane slices in R^3.

``radon_p2`` integrates a function on P^2 over every projective line
``h_y = {x : <x, y> = 0}``.  The result is stored on a central arrangement of
the dual plane whose walls are the duals ``v^perp`` of all vertices of the
source arrangement; on each dual cell the slice integral is evaluated
exactly at the sample point and re-checked at extra points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .arrangement import (
    Arrangement,
    FacePoset,
    hyperplane_chart,
    interior_points,
    is_bounded,
    restrict_to_flat,
)
from .constructible import AffineCF, integrate, restrict
from .errors import ConsistencyError, ValidationError
from .projective import (
    ProjectiveCF,
    hyperplane_indicator,
    integrate_proj,
    representatives,
)
from .ratgeom import AffineForm, nullspace, primitive_integers, rank


def _cross(a: Sequence, b: Sequence) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _primitive_direction(v: Sequence) -> tuple[int, ...]:
    return primitive_integers(list(v))[0]


def kernel_basis(y: Sequence) -> list[tuple]:
    """Deterministic rational basis of ``ker(y)``."""
    return nullspace([list(Fraction(c) for c in y)], len(y))


def _upper(d: tuple) -> tuple:
    """The representative of a direction of R^2 with angle in [0, pi)."""
    return d if d[1] > 0 or (d[1] == 0 and d[0] > 0) else (-d[0], -d[1])


def _by_angle(a: tuple, b: tuple) -> int:
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _line_integral(Phi: ProjectiveCF, u: tuple, w: tuple) -> int:
    """Integral over the projective line spanned by ``u`` and ``w``.

    The forms cut the line in finitely many points; sorting them by angle
    gives the points (weight +1) and the open arcs between them (weight -1).
    """
    dirs = []
    for k in Phi.arr.keys:
        p = sum((a * x for a, x in zip(k, u)), Fraction(0))
        q = sum((a * x for a, x in zip(k, w)), Fraction(0))
        if p or q:
            dirs.append(_upper((-q, p)))
    dirs.sort(key=cmp_to_key(_by_angle))
    pts: list[tuple] = []
    for d in dirs:
        if not pts or _by_angle(pts[-1], d) != 0:
            pts.append(d)
    if not pts:
        pts = [(Fraction(1), Fraction(0))]

    def at(st: tuple) -> int:
        return Phi(tuple(st[0] * a + st[1] * b for a, b in zip(u, w)))

    if len(pts) == 1:
        mids = [(-pts[0][1], pts[0][0])]
    else:
        mids = [(a[0] + b[0], a[1] + b[1]) for a, b in zip(pts, pts[1:])]
        mids.append((pts[-1][0] - pts[0][0], pts[-1][1] - pts[0][1]))
    return sum(at(p) for p in pts) - sum(at(m) for m in mids)


def slice_integral(Phi: ProjectiveCF, y: Sequence) -> int:
    """``int_{P^n} Phi . 1_{h_y}``."""
    y = tuple(Fraction(c) for c in y)
    if len(y) != Phi.arr.dim:
        raise ValidationError(f"dual vector of length {len(y)} for P^{Phi.n}")
    if not any(y):
        raise ValidationError("zero dual vector does not define a hyperplane")
    basis = kernel_basis(y)
    if len(basis) == 2:
        return _line_integral(Phi, basis[0], basis[1])
    return slice_integral_by_cells(Phi, y)


def slice_integral_by_cells(Phi: ProjectiveCF, y: Sequence) -> int:
    """Same as :func:`slice_integral`, by enumerating the restricted arrangement."""
    y = tuple(Fraction(c) for c in y)
    basis = kernel_basis(y)
    arr, chart, _ = restrict_to_flat(Phi.arr, (Fraction(0),) * len(y), basis, central=True)
    total = 0
    for c in representatives(arr):
        v = Phi(chart(c.sample))
        if v:
            total += v * (-1) ** (c.dim - 1)
    return total


@dataclass(frozen=True)
class DualArrangementPlan:
    """Walls of the dual plane on which the transform of ``source`` is constant."""

    source: ProjectiveCF
    vertices: tuple  # primitive integer vectors, one per projective vertex
    auxiliary: tuple  # extra points placed on planes with fewer than two vertices
    n: int = 2

    @property
    def vertex_duals(self) -> tuple:
        return tuple(v + (0,) for v in self.vertices + self.auxiliary)

    def arrangement(self) -> Arrangement:
        return Arrangement(3, self.vertex_duals, central=True)


def plan_p2(Phi: ProjectiveCF) -> DualArrangementPlan:
    if Phi.n != 2:
        raise ValidationError(f"the full transform is implemented on P^2 only, got P^{Phi.n}")
    normals = [k[:-1] for k in Phi.arr.keys]
    verts: set[tuple[int, ...]] = set()
    for i in range(len(normals)):
        for j in range(i + 1, len(normals)):
            c = _cross(normals[i], normals[j])
            if any(c):
                verts.add(_primitive_direction(c))
    aux: set[tuple[int, ...]] = set()
    for a in normals:
        on = [v for v in sorted(verts | aux) if sum(x * y for x, y in zip(a, v)) == 0]
        for b in nullspace([list(a)], 3):
            if (rank(on) if on else 0) >= 2:
                break
            pb = _primitive_direction(b)
            if rank(on + [pb]) > (rank(on) if on else 0):
                aux.add(pb)
                on.append(pb)
    return DualArrangementPlan(Phi, tuple(sorted(verts)), tuple(sorted(aux - verts)))


def radon_p2(Phi: ProjectiveCF, oversample: int = 3, seed: int = 0) -> ProjectiveCF:
    """Radon transform ``y -> int Phi . 1_{h_y}`` as a function on the dual plane."""
    plan = plan_p2(Phi)
    arr = plan.arrangement()
    rng = random.Random(seed)
    vals = {}
    for c in representatives(arr):
        v = slice_integral(Phi, c.sample)
        if oversample and c.dim > 1:
            for y in interior_points(arr, c, oversample, rng):
                w = slice_integral(Phi, y)
                if w != v:
                    raise ConsistencyError(
                        f"Radon transform not constant on dual cell {c.label}: {v} at {c.sample}, {w} at {y}")
        if v:
            vals[c.signs] = v
    return ProjectiveCF(arr, vals).coarsen()


def radon_dual_p2(Psi: ProjectiveCF, oversample: int = 3, seed: int = 0) -> ProjectiveCF:
    """Transpose transform from the dual plane back to P^2.

    The incidence ``<x, y> = 0`` is symmetric, so this is the same integral
    with the roles of the two planes exchanged.
    """
    return radon_p2(Psi, oversample=oversample, seed=seed)


@dataclass(frozen=True)
class InversionResult:
    lhs: ProjectiveCF
    rhs: ProjectiveCF
    equal: bool


def radon_invert_check(Phi: ProjectiveCF, oversample: int = 3, seed: int = 0) -> InversionResult:
    """Compare ``R' R Phi`` with ``-Phi + (int Phi) 1_{P^2}``."""
    lhs = radon_dual_p2(radon_p2(Phi, oversample, seed), oversample, seed)
    rhs = -Phi + ProjectiveCF.constant(2, integrate_proj(Phi))
    return InversionResult(lhs, rhs, lhs == rhs)


def lambda_value(x: Sequence, x2: Sequence) -> int:
    """``int_{P^2*} 1_{x in h_y} 1_{x' in h_y}``, via a slice on the dual side."""
    return slice_integral(hyperplane_indicator(x), x2)


def lambda_kernel_check(n: int = 2, pairs: int = 10, seed: int = 0) -> tuple[int, int]:
    """Return ``(a, b)``: the kernel value off and on the diagonal.

    Raises :class:`ConsistencyError` if the value is not the same for every
    sampled pair.
    """
    if n != 2:
        raise ValidationError("only n = 2 is supported")
    rng = random.Random(seed)
    off, diag = set(), set()
    done = 0
    while done < pairs or not off:
        x = tuple(rng.randint(-5, 5) for _ in range(3))
        x2 = tuple(rng.randint(-5, 5) for _ in range(3))
        if not any(x) or not any(x2):
            continue
        diag.add(lambda_value(x, x))
        (off if rank([x, x2]) == 2 else diag).add(lambda_value(x, x2))
        done += 1
    if len(off) != 1 or len(diag) != 1:
        raise ConsistencyError(f"kernel not of the form a/b: off-diagonal {off}, diagonal {diag}")
    return off.pop(), diag.pop()


# ---------------------------------------------------------------------------
# slices of compact bodies in R^3


def _require_compact(phi: AffineCF) -> None:
    for s in phi.values:
        if not is_bounded(phi.arr, phi.arr.cell_index[s]):
            raise ValidationError("function does not have compact support")


def plane_section(phi: AffineCF, plane: AffineForm) -> AffineCF:
    """``phi`` restricted to ``{plane = 0}`` in coordinates of that plane."""
    if plane.dim != phi.dim:
        raise ValidationError(f"plane in R^{plane.dim} for a function on R^{phi.dim}")
    if plane.is_degenerate:
        raise ValidationError("degenerate plane")
    p0, basis = hyperplane_chart(plane.key())
    section, _ = restrict(phi, p0, basis)
    return section


def slice_eval_r3(phi: AffineCF, plane: AffineForm) -> int:
    """``int phi . 1_plane`` for compactly supported ``phi`` on R^3."""
    if phi.dim != 3:
        raise ValidationError("slice evaluation is defined on R^3")
    _require_compact(phi)
    return integrate(plane_section(phi, plane))


def _components(cells) -> int:
    """Connected components of a union of cells (comparable cells touch)."""
    if not cells:
        return 0
    poset = FacePoset(cells)
    parent = list(range(len(cells)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(cells)):
        for j in range(len(cells)):
            if i != j and poset.leq(i, j):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(cells))})


@dataclass(frozen=True)
class Betti:
    b0: int
    b1: int
    complement_components: int

    def __iter__(self):
        return iter((self.b0, self.b1))


def betti_slice(phi: AffineCF) -> Betti:
    """Betti numbers of the compact planar set ``supp(phi)``.

    ``b0`` counts components through face-poset adjacency; ``b1`` is
    ``b0 - chi`` and is checked against ``b0(complement) - 1``.
    """
    if phi.dim != 2:
        raise ValidationError("betti_slice expects a function on the plane")
    _require_compact(phi)
    inside = [c for c in phi.arr.cells if phi.values.get(c.signs, 0)]
    outside = [c for c in phi.arr.cells if not phi.values.get(c.signs, 0)]
    b0 = _components(inside)
    chi = sum((-1) ** c.dim for c in inside)
    b1 = b0 - chi
    comp = _components(outside)
    if b1 != comp - 1:
        raise ConsistencyError(f"b1 = b0 - chi = {b1} but b0(complement) - 1 = {comp - 1}")
    return Betti(b0, b1, comp)
