"""Constructible functions on R^n and their Euler calculus.

An :class:`AffineCF` is a hyperplane arrangement together with an integer on
each cell; only nonzero values are stored.  Every cell is a relatively open
convex set, so its compactly supported Euler characteristic is
``(-1)**dim`` whether it is bounded or not.  That single fact makes the
integral, duality and direct image computable by finite sums.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernels
from .arrangement import (
    Arrangement,
    Cell,
    drop_silent_walls,
    interior_points,
    restrict_to_flat,
)
from .errors import ConsistencyError, ResourceError, ValidationError
from .ratgeom import (
    AffineForm,
    AffineMap,
    nullspace,
    primitive_integers,
    rank,
    rref,
    solve_linear,
    strict_feasible,
)

DEFAULT_MAX_CELLS = 200_000
RELATIONS = ("<", "<=", "=", ">=", ">")
_FLIP = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}


def _holds(sign: int, rel: str) -> bool:
    if rel == "<":
        return sign < 0
    if rel == "<=":
        return sign <= 0
    if rel == "=":
        return sign == 0
    if rel == ">=":
        return sign >= 0
    return sign > 0


@dataclass(frozen=True)
class PolyhedronSpec:
    """A locally closed polyhedron ``{x : form_i(x) rel_i 0}``."""

    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        cons = []
        for form, rel in self.constraints:
            if rel == "≤":
                rel = "<="
            elif rel == "≥":
                rel = ">="
            if rel not in RELATIONS:
                raise ValidationError(f"unknown relation {rel!r}")
            if not isinstance(form, AffineForm):
                vals = tuple(form)
                form = AffineForm(vals[:-1], vals[-1])
            cons.append((form, rel))
        dims = {f.dim for f, _ in cons}
        if len(dims) > 1:
            raise ValidationError("polyhedron constraints of mixed dimension")
        object.__setattr__(self, "constraints", tuple(cons))

    def contains(self, point: Sequence) -> bool:
        for f, rel in self.constraints:
            v = f(point)
            if not _holds((v > 0) - (v < 0), rel):
                return False
        return True


class AffineCF:
    """Integer-valued function on R^n constant on the cells of ``arr``."""

    __hash__ = None  # type: ignore[assignment]

    def __init__(self, arr: Arrangement, values: Mapping[tuple, int] | None = None,
                 validate: bool = False) -> None:
        if arr.central:
            raise ValidationError("affine functions live on affine arrangements")
        self.arr = arr
        vals = {}
        width = len(arr.keys)
        for signs, v in (values or {}).items():
            signs = tuple(signs)
            if len(signs) != width:
                raise ValidationError(f"sign vector of length {len(signs)} for {width} forms")
            v = int(v)
            if v:
                vals[signs] = v
        if validate:
            for signs in vals:
                arr.cell(signs)
        self.values: dict[tuple, int] = vals

    @property
    def dim(self) -> int:
        return self.arr.dim

    def __repr__(self) -> str:
        return f"<AffineCF R^{self.dim}, {len(self.arr.keys)} forms, {len(self.values)} nonzero cells>"

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, n: int, c: int = 1) -> "AffineCF":
        return cls(Arrangement(n), {(): c})

    @classmethod
    def zero(cls, n: int) -> "AffineCF":
        return cls(Arrangement(n), {})

    @classmethod
    def from_cells(cls, arr: Arrangement, rule) -> "AffineCF":
        """Build from ``rule(cell) -> int`` evaluated on every cell."""
        return cls(arr, {c.signs: rule(c) for c in arr.cells})

    # evaluation ---------------------------------------------------------
    def value(self, signs: Sequence[int]) -> int:
        return self.values.get(tuple(signs), 0)

    def __call__(self, point: Sequence) -> int:
        return self.values.get(self.arr.sign_vector(point), 0)

    def items(self) -> Iterable[tuple[Cell, int]]:
        for c in self.arr.cells:
            yield c, self.values.get(c.signs, 0)

    def is_zero(self) -> bool:
        return not self.values

    def refine(self, finer: Arrangement) -> "AffineCF":
        """Same function on a refining arrangement."""
        if finer == self.arr:
            return self
        pos = self.arr.projector_from(finer)
        vals = {}
        for c in finer.cells:
            v = self.values.get(tuple(c.signs[i] for i in pos), 0)
            if v:
                vals[c.signs] = v
        return AffineCF(finer, vals)

    def coarsen(self) -> "AffineCF":
        """Drop hyperplanes across which the function never jumps."""
        arr, values = drop_silent_walls(self.arr, self.value)
        return self if arr is self.arr else AffineCF(arr, values)

    # arithmetic ---------------------------------------------------------
    def _binary(self, other: "AffineCF", op) -> "AffineCF":
        a, b = refine_common(self, other)
        vals = {}
        for c in a.arr.cells:
            v = op(a.values.get(c.signs, 0), b.values.get(c.signs, 0))
            if v:
                vals[c.signs] = v
        return AffineCF(a.arr, vals)

    def __add__(self, other: "AffineCF") -> "AffineCF":
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other: "AffineCF") -> "AffineCF":
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self) -> "AffineCF":
        return AffineCF(self.arr, {s: -v for s, v in self.values.items()})

    def __mul__(self, other):
        if isinstance(other, AffineCF):
            return self._binary(other, lambda x, y: x * y)
        return scale(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineCF):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.arr == other.arr:
            return self.values == other.values
        return (self - other).is_zero()


# ---------------------------------------------------------------------------
# basic operations


def indicator(spec: PolyhedronSpec | Sequence, n: int) -> AffineCF:
    """``1_P`` for the locally closed polyhedron ``P``."""
    if not isinstance(spec, PolyhedronSpec):
        spec = PolyhedronSpec(tuple(spec))
    forms = []
    for form, rel in spec.constraints:
        if form.dim != n:
            raise ValidationError(f"constraint on R^{form.dim} for a polyhedron in R^{n}")
        norm, sign = form.normalized()
        if sign < 0:
            rel = _FLIP[rel]
        if norm.is_degenerate:
            c = norm.constant
            if not _holds((c > 0) - (c < 0), rel):
                return AffineCF.zero(n)
            continue
        forms.append((norm.key(), rel))
    arr = Arrangement(n, [k for k, _ in forms])
    pos = [(arr.position[k], rel) for k, rel in forms]
    vals = {}
    for c in arr.cells:
        if all(_holds(c.signs[i], rel) for i, rel in pos):
            vals[c.signs] = 1
    return AffineCF(arr, vals)


def evaluate(phi: AffineCF, point: Sequence) -> int:
    return phi(point)


def refine_common(phi: AffineCF, psi: AffineCF) -> tuple[AffineCF, AffineCF]:
    if phi.dim != psi.dim:
        raise ValidationError(f"functions on R^{phi.dim} and R^{psi.dim}")
    if phi.arr == psi.arr:
        return phi, psi
    arr = phi.arr.refine(psi.arr)
    return phi.refine(arr), psi.refine(arr)


def add(phi: AffineCF, psi: AffineCF) -> AffineCF:
    return phi + psi


def scale(phi: AffineCF, c: int) -> AffineCF:
    c = int(c)
    return AffineCF(phi.arr, {s: c * v for s, v in phi.values.items()})


def multiply(phi: AffineCF, psi: AffineCF) -> AffineCF:
    return phi._binary(psi, lambda x, y: x * y)


def external_product(phi: AffineCF, psi: AffineCF) -> AffineCF:
    """``(phi [x] psi)(x, y) = phi(x) psi(y)`` on R^{m+n}."""
    arr = Arrangement.product(phi.arr, psi.arr)
    m, n = phi.dim, psi.dim
    pa = [arr.position[k[:-1] + (0,) * n + (k[-1],)] for k in phi.arr.keys]
    pb = [arr.position[(0,) * m + k] for k in psi.arr.keys]
    width = len(arr.keys)
    vals = {}
    for sa, va in phi.values.items():
        for sb, vb in psi.values.items():
            s = [0] * width
            for i, v in zip(pa, sa):
                s[i] = v
            for i, v in zip(pb, sb):
                s[i] = v
            vals[tuple(s)] = va * vb
    return AffineCF(arr, vals)


def integrate(phi: AffineCF) -> int:
    """Euler integral: sum of ``value * (-1)**dim`` over cells."""
    idx = phi.arr.cell_index
    return sum(v * (-1) ** idx[s].dim for s, v in phi.values.items())


def dual(phi: AffineCF, backend: str | None = None) -> AffineCF:
    """Local duality ``D phi``.

    The value on a cell D is the sum of ``value(C) * (-1)**dim C`` over the
    cells C whose closure contains D: a small ball around a point of D meets
    exactly those cells, each in a relatively open convex piece.
    """
    idx = phi.arr.cell_index
    upper = list(phi.values)
    weights = [v * (-1) ** idx[s].dim for s, v in phi.values.items()]
    lower = [c.signs for c in phi.arr.cells]
    sums = kernels.upset_sums(lower, upper, weights, backend=backend)
    return AffineCF(phi.arr, {s: v for s, v in zip(lower, sums) if v})


def integrate_np(phi: AffineCF) -> int:
    return integrate(dual(phi))


def pullback(psi: AffineCF, g: AffineMap) -> AffineCF:
    """``g* psi = psi o g`` for an affine map ``g : R^k -> R^n``."""
    if g.n_out != psi.dim:
        raise ValidationError(f"map into R^{g.n_out} cannot pull back a function on R^{psi.dim}")
    forms = []
    for f in psi.arr.forms:
        pf = g.pull_form(f)
        if not pf.is_degenerate:
            forms.append(pf)
    arr = Arrangement(g.n_in, forms)
    vals = {}
    for c in arr.cells:
        v = psi(g(c.sample))
        if v:
            vals[c.signs] = v
    return AffineCF(arr, vals)


def restrict(phi: AffineCF, point: Sequence, basis: Sequence[Sequence]) -> tuple[AffineCF, AffineMap]:
    """``phi`` on the flat ``point + span(basis)``, in flat coordinates."""
    arr, chart, _ = restrict_to_flat(phi.arr, point, basis)
    vals = {}
    for c in arr.cells:
        v = phi(chart(c.sample))
        if v:
            vals[c.signs] = v
    return AffineCF(arr, vals), chart


def fiber(f: AffineMap, y: Sequence):
    """``(point, basis)`` of ``f^{-1}(y)``, or ``None`` if empty."""
    eqs = [AffineForm(row, t - Fraction(yi)) for row, t, yi in zip(f.matrix, f.translation, y)]
    if not eqs:
        return tuple(Fraction(0) for _ in range(f.n_in)), nullspace([], f.n_in)
    return solve_linear(eqs, f.n_in)


def fiber_integral(phi: AffineCF, f: AffineMap, y: Sequence) -> int:
    """``int_X 1_{f^{-1}(y)} phi`` computed directly on the fiber."""
    fb = fiber(f, y)
    if fb is None:
        return 0
    restricted, _ = restrict(phi, *fb)
    return integrate(restricted)


def fiber_integral_np(phi: AffineCF, f: AffineMap, y: Sequence) -> int:
    """``int^np`` of ``phi`` restricted to the fiber ``f^{-1}(y)``.

    For PL functions and affine ``f`` this equals ``(int^np_f phi)(y)``: the
    recession cone of a fiber of a relatively open polyhedron does not depend
    on the fiber, so boundedness of fibers is uniform.
    """
    fb = fiber(f, y)
    if fb is None:
        return 0
    restricted, _ = restrict(phi, *fb)
    return integrate_np(restricted)


# ---------------------------------------------------------------------------
# direct images


def _flats(arr: Arrangement):
    """Every nonempty intersection of hyperplanes, as ``(point, basis)``.

    The whole space is included.  Flats are identified by the reduced
    echelon form of their defining equations.
    """
    n = arr.dim
    start = (tuple(Fraction(0) for _ in range(n)), nullspace([], n), ())
    seen = {(): start}
    queue = [start]
    while queue:
        point, basis, eqs = queue.pop()
        for key in arr.keys:
            lin = [sum((Fraction(a) * b for a, b in zip(key, v)), Fraction(0)) for v in basis]
            if not any(lin):
                continue
            rows, _ = rref([list(e) for e in eqs] + [list(key[:-1]) + [-Fraction(key[-1])]], n + 1)
            canon = tuple(tuple(r) for r in rows)
            if canon in seen:
                continue
            sol = solve_linear([AffineForm(r[:-1], -r[-1]) for r in rows], n)
            entry = (sol[0], sol[1], canon)
            seen[canon] = entry
            queue.append(entry)
    return list(seen.values())


def image_walls(arr: Arrangement, f: AffineMap) -> list[tuple[int, ...]]:
    """Hyperplanes of R^k making every image ``f(flat)`` a union of cells.

    Images of dimension ``k-1`` contribute themselves; lower-dimensional
    images contribute defining equations unless the walls already cut them
    out.
    """
    k = f.n_out
    walls: set[tuple[int, ...]] = set()
    low: list[tuple] = []
    for point, basis, _ in _flats(arr):
        dirs = [f.linear_image(b) for b in basis]
        j = rank(dirs) if dirs else 0
        if j >= k:
            continue
        y0 = f(point)
        normals = nullspace(dirs, k) if dirs else nullspace([], k)
        if j == k - 1:
            nu = normals[0]
            walls.add(primitive_integers(list(nu) + [-sum((a * b for a, b in zip(nu, y0)), Fraction(0))])[0])
        else:
            low.append((j, y0, normals, dirs))
    low.sort(key=lambda t: -t[0])
    for j, y0, normals, dirs in low:
        containing = [w for w in walls
                      if all(sum((Fraction(a) * b for a, b in zip(w, d)), Fraction(0)) == 0 for d in dirs)
                      and sum((Fraction(a) * b for a, b in zip(w, y0)), Fraction(w[-1])) == 0]
        have = [list(w[:-1]) for w in containing]
        r = rank(have) if have else 0
        for nu in normals:
            if r == k - j:
                break
            if rank(have + [list(nu)]) > r:
                have.append(list(nu))
                r += 1
                walls.add(primitive_integers(list(nu) + [-sum((a * b for a, b in zip(nu, y0)), Fraction(0))])[0])
    return sorted(walls)


def _check_budget(count: int, max_cells: int | None, what: str) -> None:
    if max_cells is not None and count > max_cells:
        raise ResourceError(f"{what} exceeds the cell budget of {max_cells}", count)


def pushforward(phi: AffineCF, f: AffineMap, oversample: int = 0, rng: random.Random | None = None,
                max_cells: int | None = DEFAULT_MAX_CELLS) -> AffineCF:
    """Direct image ``(int_f phi)(y) = int 1_{f^{-1}(y)} phi`` for surjective affine ``f``.

    The target is cut by :func:`image_walls`; each target cell gets the
    exact fiber integral at its sample point.  With ``oversample > 0`` the
    fiber integral is recomputed at that many further points of every cell
    and any disagreement raises :class:`ConsistencyError`.
    """
    if f.n_in != phi.dim:
        raise ValidationError(f"map from R^{f.n_in} applied to a function on R^{phi.dim}")
    k = f.n_out
    if (rank(f.matrix) if f.matrix else 0) != k:
        raise ValidationError("pushforward needs a surjective affine map (full row rank)")
    phi = phi.coarsen()
    target = Arrangement(k, image_walls(phi.arr, f))
    _check_budget(len(target.cells), max_cells, "pushforward target arrangement")
    rng = rng or random.Random(0)
    vals = {}
    for c in target.cells:
        v = fiber_integral(phi, f, c.sample)
        if oversample and c.dim:
            for y in interior_points(target, c, oversample, rng):
                w = fiber_integral(phi, f, y)
                if w != v:
                    raise ConsistencyError(
                        f"pushforward not constant on target cell {c.label}: {v} at {c.sample}, {w} at {y}")
        if v:
            vals[c.signs] = v
    return AffineCF(target, vals)


def pushforward_np(phi: AffineCF, f: AffineMap, **kw) -> AffineCF:
    """Non-proper direct image ``D int_f D phi``."""
    return dual(pushforward(dual(phi), f, **kw))


def hom_cf(phi: AffineCF, psi: AffineCF) -> AffineCF:
    return dual(multiply(dual(psi), phi))


def epb(f: AffineMap, psi: AffineCF) -> AffineCF:
    """Exceptional inverse image ``D f* D psi``."""
    return dual(pullback(dual(psi), f))


# ---------------------------------------------------------------------------
# convolution, gamma-projector, kernels


def addition_map(n: int) -> AffineMap:
    return AffineMap(tuple(tuple(int(j == i or j == i + n) for j in range(2 * n)) for i in range(n)),
                     (0,) * n, 2 * n)


def _product_for_convolution(phi: AffineCF, psi: AffineCF, max_cells) -> AffineCF:
    if phi.dim != psi.dim:
        raise ValidationError(f"convolution of functions on R^{phi.dim} and R^{psi.dim}")
    phi, psi = phi.coarsen(), psi.coarsen()
    _check_budget(len(phi.arr.cells) * len(psi.arr.cells), max_cells, "external product")
    return external_product(phi, psi)


def convolve(phi: AffineCF, psi: AffineCF, max_cells: int | None = DEFAULT_MAX_CELLS,
             oversample: int = 0) -> AffineCF:
    """``phi * psi = int_s phi [x] psi`` with ``s(x, y) = x + y``."""
    prod = _product_for_convolution(phi, psi, max_cells)
    return pushforward(prod, addition_map(phi.dim), oversample=oversample, max_cells=max_cells)


def convolve_np(phi: AffineCF, psi: AffineCF, max_cells: int | None = DEFAULT_MAX_CELLS,
                oversample: int = 0) -> AffineCF:
    """Non-proper convolution ``int^np_s phi [x] psi``."""
    prod = _product_for_convolution(phi, psi, max_cells)
    return pushforward_np(prod, addition_map(phi.dim), oversample=oversample, max_cells=max_cells)


def cone_forms(gamma: PolyhedronSpec, n: int) -> list[AffineForm]:
    """Irredundant forms ``g_i`` with ``gamma = {g_i >= 0}``; validates the cone."""
    forms = []
    for form, rel in gamma.constraints:
        if form.dim != n:
            raise ValidationError(f"cone constraint on R^{form.dim} for R^{n}")
        if form.constant != 0:
            raise ValidationError("cone constraints must be homogeneous")
        if rel == ">=":
            forms.append(form)
        elif rel == "<=":
            forms.append(-form)
        else:
            raise ValidationError(f"cone must be closed: relation {rel!r} not allowed")
        if forms[-1].is_degenerate:
            forms.pop()
    # orientation matters here, so dedupe on the primitive vector times its sign
    oriented = set()
    for f in forms:
        norm, sign = f.normalized()
        oriented.add(tuple(sign * a for a in norm.key()))
    forms = [AffineForm.from_key(k) for k in sorted(oriented)]
    i = 0
    while i < len(forms):
        others = forms[:i] + forms[i + 1:]
        if strict_feasible([], others, [forms[i]], n=n) is None:
            forms.pop(i)
        else:
            i += 1
    if strict_feasible([], forms, [], n=n) is None:
        raise ValidationError("cone has empty interior")
    if (rank([f.linear for f in forms]) if forms else 0) != n:
        raise ValidationError("cone is not proper (contains a line)")
    return forms


def gamma_project(phi: AffineCF, gamma: PolyhedronSpec, **kw) -> AffineCF:
    """``phi (*np) 1_{-gamma}`` for a closed convex proper cone with interior."""
    n = phi.dim
    forms = cone_forms(gamma, n)
    antipodal = indicator(PolyhedronSpec(tuple((f, "<=") for f in forms)), n)
    return convolve_np(phi, antipodal, **kw)


def compose_kernels(k12: AffineCF, k23: AffineCF, middle_dim: int,
                    max_cells: int | None = DEFAULT_MAX_CELLS) -> AffineCF:
    """``int_{q13} q12* k12 . q23* k23`` on R^{n1+n3}."""
    n1 = k12.dim - middle_dim
    n3 = k23.dim - middle_dim
    if n1 < 0 or n3 < 0:
        raise ValidationError("middle dimension larger than a kernel's dimension")
    a = external_product(k12.coarsen(), AffineCF.constant(n3))
    b = external_product(AffineCF.constant(n1), k23.coarsen())
    arr = a.arr.refine(b.arr)
    _check_budget(len(arr.cells), max_cells, "kernel composition")
    prod = multiply(a, b)
    n = n1 + middle_dim + n3
    q13 = AffineMap.projection(n, list(range(n1)) + list(range(n1 + middle_dim, n)))
    return pushforward(prod, q13, max_cells=max_cells)
