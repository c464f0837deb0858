"""Cell complexes of affine and central hyperplane arrangements.

Forms are stored as coprime integer tuples ``(a_1, ..., a_n, b)`` and kept in
sorted order, so two arrangements with the same hyperplanes have identical
sign-vector conventions.  Signs are encoded as -1, 0, +1.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .errors import ConsistencyError, ValidationError
from .ratgeom import AffineForm, AffineMap, nullspace, primitive_integers, strict_feasible

SIGN_CHARS = {-1: "-", 0: "0", 1: "+"}
CHAR_SIGNS = {"-": -1, "−": -1, "0": 0, "+": 1}


@dataclass(frozen=True)
class Cell:
    signs: tuple
    dim: int
    sample: tuple

    @property
    def label(self) -> str:
        return "".join(SIGN_CHARS[s] for s in self.signs)


def _as_key(form, n: int) -> tuple[int, ...]:
    if isinstance(form, AffineForm):
        if form.dim != n:
            raise ValidationError(f"form on R^{form.dim} in an arrangement on R^{n}")
        key = form.key()
    else:
        vals = tuple(form)
        if len(vals) != n + 1:
            raise ValidationError(f"form with {len(vals)} coefficients in an arrangement on R^{n}")
        key = primitive_integers(vals)[0]
    if all(a == 0 for a in key[:-1]):
        raise ValidationError("constant form cannot be an arrangement hyperplane")
    return key


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _common_denominator(point: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for q in point:
        d = q.denominator
        den = den * d // math.gcd(den, d)
    return [int(q * den) for q in point], den


def signs_at(keys: Sequence[Sequence[int]], point: Sequence[Fraction]) -> tuple:
    X, den = _common_denominator(point)
    out = []
    for k in keys:
        s = k[-1] * den
        for a, x in zip(k, X):
            if a:
                s += a * x
        out.append((s > 0) - (s < 0))
    return tuple(out)


def hyperplane_chart(key: Sequence[int]) -> tuple[tuple, list[tuple]]:
    """Rational point and direction basis of ``{key . (x, 1) = 0}``."""
    n = len(key) - 1
    j = next(i for i in range(n) if key[i])
    aj = Fraction(key[j])
    p0 = [Fraction(0)] * n
    p0[j] = -Fraction(key[-1]) / aj
    basis = []
    for i in range(n):
        if i == j:
            continue
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        v[j] = -Fraction(key[i]) / aj
        basis.append(tuple(v))
    return tuple(p0), basis


def _pull_key(key: Sequence[int], p0: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]):
    """Form ``key`` expressed in the chart ``u -> p0 + sum u_i basis_i``."""
    lin = [sum((Fraction(a) * b for a, b in zip(key, v)), Fraction(0)) for v in basis]
    const = Fraction(key[-1]) + sum((Fraction(a) * p for a, p in zip(key, p0)), Fraction(0))
    return lin, const


def _from_chart(p0, basis, u) -> tuple:
    n = len(p0)
    return tuple(p0[j] + sum((u[i] * basis[i][j] for i in range(len(basis))), Fraction(0))
                 for j in range(n))


def _step_inside(keys, signs, point, direction) -> Fraction:
    """Largest-safe step (halved) along ``direction`` keeping all nonzero signs."""
    bound = None
    for k, s in zip(keys, signs):
        if not s:
            continue
        rate = sum((Fraction(a) * d for a, d in zip(k, direction)), Fraction(0))
        if rate * s < 0:
            val = sum((Fraction(a) * x for a, x in zip(k, point)), Fraction(k[-1]))
            t = abs(val / rate)
            bound = t if bound is None else min(bound, t)
    return Fraction(1) if bound is None else bound / 2


def _enumerate(keys: Sequence[tuple[int, ...]], n: int) -> list[tuple[tuple, int, tuple]]:
    """All cells of the arrangement as ``(signs, dim, sample)``.

    Hyperplanes are inserted one at a time.  The cells met by the new
    hyperplane H are read off from the cells of the previous arrangement
    restricted to H, computed recursively one dimension down; a relatively
    open cell meeting H without lying in it is split into three.
    """
    if n == 0:
        return [(tuple(_sign(k[-1]) for k in keys), 0, ())]
    if not keys:
        return [((), n, (Fraction(0),) * n)]
    if n == 1:
        return _enumerate_line(keys)
    cells = [((), n, (Fraction(0),) * n)]
    for idx, H in enumerate(keys):
        prev = keys[:idx]
        hits = _cells_on_hyperplane(prev, H, n)
        new = []
        for signs, dim, p in cells:
            h = signs_at((H,), p)[0]
            hit = hits.get(signs)
            if hit is None:
                if h == 0:
                    raise ConsistencyError("sample on hyperplane but cell not met by it")
                new.append((signs + (h,), dim, p))
                continue
            hdim, q = hit
            if hdim == dim:
                new.append((signs + (0,), dim, p))
                continue
            if h != 0:
                r = p
            else:
                zero_rows = [k[:-1] for k, s in zip(prev, signs) if s == 0]
                v = next(b for b in nullspace(zero_rows, n)
                         if sum((Fraction(a) * x for a, x in zip(H, b)), Fraction(0)) != 0)
                t = _step_inside(prev, signs, q, v)
                r = tuple(x + t * y for x, y in zip(q, v))
                h = signs_at((H,), r)[0]
            w = tuple(a - b for a, b in zip(q, r))
            t = _step_inside(prev, signs, q, w)
            r2 = tuple(a + t * b for a, b in zip(q, w))
            new.append((signs + (0,), dim - 1, q))
            new.append((signs + (h,), dim, r))
            new.append((signs + (-h,), dim, r2))
        cells = new
    cells.sort(key=lambda c: c[0])
    return cells


def _cells_on_hyperplane(prev, H, n) -> dict[tuple, tuple[int, tuple]]:
    p0, basis = hyperplane_chart(H)
    pulled = set()
    for k in prev:
        lin, const = _pull_key(k, p0, basis)
        if any(lin):
            pulled.add(primitive_integers(lin + [const])[0])
    sub = _enumerate(sorted(pulled), n - 1)
    out = {}
    for _, dim, u in sub:
        x = _from_chart(p0, basis, u)
        out[signs_at(prev, x)] = (dim, x)
    return out


def _enumerate_line(keys) -> list[tuple[tuple, int, tuple]]:
    pts = sorted({Fraction(-k[1], k[0]) for k in keys})
    samples: list[tuple[Fraction, int]] = [(pts[0] - 1, 1)]
    for i, t in enumerate(pts):
        samples.append((t, 0))
        samples.append(((t + pts[i + 1]) / 2 if i + 1 < len(pts) else t + 1, 1))
    cells = [(signs_at(keys, (t,)), d, (t,)) for t, d in samples]
    cells.sort(key=lambda c: c[0])
    return cells


class Arrangement:
    """Finite set of hyperplanes in R^n, optionally central.

    A central arrangement always contains the ``n`` coordinate hyperplanes,
    so each of its cells lies in a closed orthant and differs from its
    antipode; the origin is not counted as a cell.
    """

    def __init__(self, dim: int, forms: Iterable = (), central: bool = False) -> None:
        if dim < 0:
            raise ValidationError("negative dimension")
        keys = {_as_key(f, dim) for f in forms}
        if central:
            if any(k[-1] != 0 for k in keys):
                raise ValidationError("central arrangement with a non-homogeneous form")
            for i in range(dim):
                keys.add(tuple(int(i == j) for j in range(dim)) + (0,))
        self.dim = dim
        self.central = central
        self.keys: tuple[tuple[int, ...], ...] = tuple(sorted(keys))
        self._cells: tuple[Cell, ...] | None = None

    def __repr__(self) -> str:
        kind = "central " if self.central else ""
        return f"<{kind}Arrangement R^{self.dim}, {len(self.keys)} forms>"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Arrangement) and self.dim == other.dim
                and self.central == other.central and self.keys == other.keys)

    def __hash__(self) -> int:
        return hash((self.dim, self.central, self.keys))

    @property
    def forms(self) -> tuple[AffineForm, ...]:
        return tuple(AffineForm.from_key(k) for k in self.keys)

    def __len__(self) -> int:
        return len(self.keys)

    @cached_property
    def position(self) -> dict[tuple[int, ...], int]:
        return {k: i for i, k in enumerate(self.keys)}

    def sign_vector(self, point: Sequence) -> tuple:
        if len(point) != self.dim:
            raise ValidationError(f"point of dimension {len(point)} in R^{self.dim}")
        return signs_at(self.keys, [Fraction(x) for x in point])

    @property
    def cells(self) -> tuple[Cell, ...]:
        if self._cells is None:
            raw = _enumerate(self.keys, self.dim)
            cells = tuple(Cell(s, d, p) for s, d, p in raw if not (self.central and not any(s)))
            self._cells = cells
        return self._cells

    @cached_property
    def cell_index(self) -> dict[tuple, Cell]:
        return {c.signs: c for c in self.cells}

    def cell(self, signs: Sequence[int]) -> Cell:
        try:
            return self.cell_index[tuple(signs)]
        except KeyError:
            raise ValidationError(f"sign vector {signs!r} is not realizable") from None

    def refine(self, *others: "Arrangement") -> "Arrangement":
        """Union arrangement (common refinement)."""
        keys = set(self.keys)
        for o in others:
            if o.dim != self.dim:
                raise ValidationError("cannot refine arrangements of different dimensions")
            keys.update(o.keys)
        central = self.central and all(o.central for o in others)
        return Arrangement(self.dim, keys, central=central)

    def projector_from(self, finer: "Arrangement") -> list[int]:
        """Positions in ``finer`` of this arrangement's forms."""
        try:
            return [finer.position[k] for k in self.keys]
        except KeyError:
            raise ValidationError("arrangement is not a refinement") from None

    @classmethod
    def product(cls, a: "Arrangement", b: "Arrangement") -> "Arrangement":
        """Arrangement on R^{m+n} of the lifted forms, cells built as products."""
        m, n = a.dim, b.dim
        lift_a = [k[:-1] + (0,) * n + (k[-1],) for k in a.keys]
        lift_b = [(0,) * m + k[:-1] + (k[-1],) for k in b.keys]
        arr = cls(m + n, lift_a + lift_b)
        pa = [arr.position[k] for k in lift_a]
        pb = [arr.position[k] for k in lift_b]
        cells = []
        width = len(arr.keys)
        for ca in a.cells:
            for cb in b.cells:
                s = [0] * width
                for i, v in zip(pa, ca.signs):
                    s[i] = v
                for i, v in zip(pb, cb.signs):
                    s[i] = v
                cells.append(Cell(tuple(s), ca.dim + cb.dim, ca.sample + cb.sample))
        cells.sort(key=lambda c: c.signs)
        arr._cells = tuple(cells)
        return arr


def enumerate_cells(arr: Arrangement) -> tuple[Cell, ...]:
    return arr.cells


def naive_cells(arr: Arrangement) -> tuple[Cell, ...]:
    """All realizable sign vectors by brute force over ``3^m`` candidates.

    Independent of :func:`enumerate_cells`; meant as a test oracle.
    """
    forms = arr.forms
    cells = []
    for signs in itertools.product((-1, 0, 1), repeat=len(forms)):
        if arr.central and not any(signs):
            continue
        eq = [f for f, s in zip(forms, signs) if s == 0]
        pos = [f for f, s in zip(forms, signs) if s > 0]
        neg = [f for f, s in zip(forms, signs) if s < 0]
        p = strict_feasible(eq, pos, neg, n=arr.dim)
        if p is None:
            continue
        zero_rows = [f.linear for f in eq]
        dim = len(nullspace(zero_rows, arr.dim)) if zero_rows else arr.dim
        cells.append(Cell(tuple(signs), dim, p))
    return tuple(cells)


def locate(arr: Arrangement, point: Sequence) -> Cell:
    signs = arr.sign_vector(point)
    if arr.central and not any(signs):
        raise ValidationError("the origin is not a point of projective space")
    return arr.cell_index[signs]


def antipodal_pair(arr: Arrangement, cell: Cell) -> Cell:
    if not arr.central:
        raise ValidationError("antipodal pairing needs a central arrangement")
    neg = tuple(-s for s in cell.signs)
    if neg == cell.signs:
        raise ConsistencyError("cell equals its antipode; salience violated")
    return arr.cell_index[neg]


class FacePoset:
    """``D <= C`` iff ``D`` lies in the closure of ``C`` (sign weakening)."""

    def __init__(self, cells: Sequence[Cell]) -> None:
        self.cells = tuple(cells)
        signs = [c.signs for c in self.cells]
        self.matrix = kernels.leq_matrix(signs, signs)

    def leq(self, i: int, j: int) -> bool:
        return self.matrix[i][j]

    def up(self, i: int) -> list[int]:
        return [j for j, ok in enumerate(self.matrix[i]) if ok]

    def down(self, j: int) -> list[int]:
        return [i for i in range(len(self.cells)) if self.matrix[i][j]]


def face_poset(cells: Sequence[Cell]) -> FacePoset:
    return FacePoset(cells)


def drop_silent_walls(arr: Arrangement, value, keep: Sequence[tuple] = ()):
    """Remove hyperplanes across which ``value(signs)`` never changes.

    Returns ``(arrangement, values)`` with the nonzero values keyed by the
    coarser sign vectors; the original arrangement is returned unchanged when
    every wall is needed.  Forms listed in ``keep`` are never removed.
    """
    cells = list(arr.cells)
    keys = list(arr.keys)
    values = {c.signs: value(c.signs) for c in cells}
    i = 0
    while i < len(keys):
        if keys[i] in keep:
            i += 1
            continue
        groups: dict[tuple, list] = {}
        for c in cells:
            groups.setdefault(c.signs[:i] + c.signs[i + 1:], []).append(c)
        if any(len({values[c.signs] for c in g}) != 1 for g in groups.values()):
            i += 1
            continue
        keys.pop(i)
        new_cells = []
        for rest, g in groups.items():
            top = max(g, key=lambda c: c.dim)
            new_cells.append(Cell(rest, top.dim, top.sample))
        values = {rest: values[g[0].signs] for rest, g in groups.items()}
        cells = sorted(new_cells, key=lambda c: c.signs)
    nonzero = {s: v for s, v in values.items() if v}
    if len(keys) == len(arr.keys):
        return arr, nonzero
    coarse = Arrangement(arr.dim, keys, central=arr.central)
    coarse._cells = tuple(cells)
    return coarse, nonzero


def restrict_to_flat(arr: Arrangement, point: Sequence, basis: Sequence[Sequence], central: bool = False):
    """Pull ``arr`` back to the flat ``point + span(basis)``.

    Returns ``(arrangement, chart, contains)``: the arrangement of the
    non-degenerate pulled-back forms in flat coordinates, the chart mapping
    flat coordinates into the ambient space, and the indices of forms that
    vanish on the whole flat.  Forms parallel to the flat without containing
    it are dropped silently.
    """
    n = arr.dim
    point = tuple(Fraction(x) for x in point)
    basis = [tuple(Fraction(x) for x in b) for b in basis]
    if len(point) != n or any(len(b) != n for b in basis):
        raise ValidationError("flat given in the wrong dimension")
    if basis and len(nullspace([list(r) for r in zip(*basis)], len(basis))) != 0:
        raise ValidationError("flat direction vectors are linearly dependent")
    if central and any(point):
        raise ValidationError("central restriction needs a flat through the origin")
    d = len(basis)
    forms = []
    contains = []
    for i, k in enumerate(arr.keys):
        lin, const = _pull_key(k, point, basis)
        if any(lin):
            forms.append(tuple(lin) + (const,))
        elif const == 0:
            contains.append(i)
    matrix = tuple(tuple(basis[c][r] for c in range(d)) for r in range(n))
    chart = AffineMap(matrix, point, d)
    return Arrangement(d, forms, central=central), chart, tuple(contains)


def cell_direction_basis(arr: Arrangement, cell: Cell) -> list[tuple]:
    rows = [k[:-1] for k, s in zip(arr.keys, cell.signs) if s == 0]
    return nullspace(rows, arr.dim) if rows else nullspace([], arr.dim)


def interior_points(arr: Arrangement, cell: Cell, count: int, rng: random.Random) -> list[tuple]:
    """``count`` further exact points of ``cell`` (randomized, reproducible)."""
    basis = cell_direction_basis(arr, cell)
    if not basis:
        return [cell.sample] * count
    out = []
    while len(out) < count:
        coeffs = [rng.randint(-4, 4) for _ in basis]
        if not any(coeffs):
            continue
        v = tuple(sum((c * b[j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(arr.dim))
        t = _step_inside(arr.keys, cell.signs, cell.sample, v) * 2 * Fraction(rng.randint(1, 99), 100)
        out.append(tuple(x + t * y for x, y in zip(cell.sample, v)))
    return out


def is_bounded(arr: Arrangement, cell: Cell) -> bool:
    """True when the (relatively open) cell is a bounded set."""
    from .ratgeom import cone_is_trivial

    eq = [k[:-1] for k, s in zip(arr.keys, cell.signs) if s == 0]
    ge = [tuple(s * a for a in k[:-1]) for k, s in zip(arr.keys, cell.signs) if s != 0]
    return cone_is_trivial(eq, ge, arr.dim)
