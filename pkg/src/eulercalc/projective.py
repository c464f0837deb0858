"""Constructible functions on real projective space.

A function on P^n is stored on a central arrangement in R^{n+1}; the
antipodal cells C and -C are one projective cell and carry one value, kept
under the representative whose first nonzero sign is ``+``.  A salient cone
of dimension d projectivizes to an open (d-1)-cell, which gives the sign
``(-1)**(dim - 1)`` in the integral and in the duality sum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from . import kernels
from .arrangement import Arrangement, Cell, drop_silent_walls
from .constructible import AffineCF, dual
from .errors import ValidationError
from .ratgeom import nullspace, primitive_integers


def canonical(signs: Sequence[int]) -> tuple:
    signs = tuple(signs)
    for s in signs:
        if s:
            return signs if s > 0 else tuple(-x for x in signs)
    raise ValidationError("the zero sign vector is not a projective cell")


class ProjectiveCF:
    """Integer function on P^n constant on projectivized cells of ``arr``."""

    __hash__ = None  # type: ignore[assignment]

    def __init__(self, arr: Arrangement, values: Mapping[tuple, int] | None = None,
                 validate: bool = False) -> None:
        if not arr.central:
            raise ValidationError("projective functions need a central arrangement")
        self.arr = arr
        vals: dict[tuple, int] = {}
        for signs, v in (values or {}).items():
            if len(signs) != len(arr.keys):
                raise ValidationError(f"sign vector of length {len(signs)} for {len(arr.keys)} forms")
            key = canonical(signs)
            v = int(v)
            if key in vals and vals[key] != v:
                raise ValidationError(f"antipodal cells {signs} carry different values")
            if v:
                vals[key] = v
        if validate:
            for s in vals:
                arr.cell(s)
        self.values = vals

    @property
    def n(self) -> int:
        """Projective dimension."""
        return self.arr.dim - 1

    def __repr__(self) -> str:
        return f"<ProjectiveCF P^{self.n}, {len(self.arr.keys)} forms, {len(self.values)} nonzero cells>"

    @classmethod
    def constant(cls, n: int, c: int = 1) -> "ProjectiveCF":
        arr = Arrangement(n + 1, (), central=True)
        return cls(arr, {cell.signs: c for cell in arr.cells})

    @classmethod
    def from_rule(cls, arr: Arrangement, rule) -> "ProjectiveCF":
        return cls(arr, {c.signs: rule(c) for c in representatives(arr)})

    def value(self, signs: Sequence[int]) -> int:
        return self.values.get(canonical(signs), 0)

    def __call__(self, point: Sequence) -> int:
        signs = self.arr.sign_vector(point)
        if not any(signs):
            raise ValidationError("the origin is not a point of projective space")
        return self.values.get(canonical(signs), 0)

    def is_zero(self) -> bool:
        return not self.values

    def refine(self, finer: Arrangement) -> "ProjectiveCF":
        if finer == self.arr:
            return self
        pos = self.arr.projector_from(finer)
        vals = {}
        for c in representatives(finer):
            v = self.value(tuple(c.signs[i] for i in pos))
            if v:
                vals[c.signs] = v
        return ProjectiveCF(finer, vals)

    def coarsen(self) -> "ProjectiveCF":
        """Drop walls the function does not jump across (coordinate forms stay)."""
        n1 = self.arr.dim
        coords = [tuple(int(i == j) for i in range(n1)) + (0,) for j in range(n1)]
        arr, values = drop_silent_walls(self.arr, self.value, keep=coords)
        if arr is self.arr:
            return self
        return ProjectiveCF(arr, {s: v for s, v in values.items() if canonical(s) == s})

    def _binary(self, other: "ProjectiveCF", op) -> "ProjectiveCF":
        if self.n != other.n:
            raise ValidationError(f"functions on P^{self.n} and P^{other.n}")
        arr = self.arr if self.arr == other.arr else self.arr.refine(other.arr)
        a, b = self.refine(arr), other.refine(arr)
        vals = {}
        for c in representatives(arr):
            v = op(a.values.get(c.signs, 0), b.values.get(c.signs, 0))
            if v:
                vals[c.signs] = v
        return ProjectiveCF(arr, vals)

    def __add__(self, other: "ProjectiveCF") -> "ProjectiveCF":
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other: "ProjectiveCF") -> "ProjectiveCF":
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self) -> "ProjectiveCF":
        return ProjectiveCF(self.arr, {s: -v for s, v in self.values.items()})

    def __mul__(self, other):
        if isinstance(other, ProjectiveCF):
            return self._binary(other, lambda x, y: x * y)
        c = int(other)
        return ProjectiveCF(self.arr, {s: c * v for s, v in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveCF):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.arr == other.arr:
            return self.values == other.values
        return (self - other).is_zero()


def representatives(arr: Arrangement) -> list[Cell]:
    """One cell per antipodal pair (first nonzero sign ``+``)."""
    return [c for c in arr.cells if canonical(c.signs) == c.signs]


def _coordinate_position(arr: Arrangement, i: int) -> int:
    n1 = arr.dim
    return arr.position[tuple(int(j == i) for j in range(n1)) + (0,)]


def embed_eim(phi: AffineCF) -> ProjectiveCF:
    """Extension by zero from R^n = {x_{n+1} = 1} to P^n."""
    n = phi.dim
    keys = [k[:-1] + (k[-1], 0) for k in phi.arr.keys]
    arr = Arrangement(n + 1, keys, central=True)
    pos = [arr.position[primitive_integers(k)[0]] for k in keys]
    last = _coordinate_position(arr, n)
    vals = {}
    for c in representatives(arr):
        s = c.signs
        if s[last] == 0:
            continue
        if s[last] < 0:
            s = tuple(-x for x in s)
        v = phi.value(tuple(s[i] for i in pos))
        if v:
            vals[c.signs] = v
    return ProjectiveCF(arr, vals)


def restrict_chart(Phi: ProjectiveCF, i: int) -> AffineCF:
    """Restriction to the affine chart ``{x_i = 1}`` (1-based ``i``)."""
    n = Phi.n
    if not 1 <= i <= n + 1:
        raise ValidationError(f"chart index {i} outside 1..{n + 1}")
    j = i - 1
    forms = []
    for k in Phi.arr.keys:
        lin = k[:j] + k[j + 1:-1]
        if any(lin):
            forms.append(lin + (k[j],))
    arr = Arrangement(n, forms)
    vals = {}
    for c in arr.cells:
        x = c.sample[:j] + (Fraction(1),) + c.sample[j:]
        v = Phi(x)
        if v:
            vals[c.signs] = v
    return AffineCF(arr, vals)


def embed_oim(phi: AffineCF) -> ProjectiveCF:
    """``j_* phi = D j_! D phi``."""
    return dual_proj(embed_eim(dual(phi)))


def integrate_proj(Phi: ProjectiveCF) -> int:
    idx = Phi.arr.cell_index
    return sum(v * (-1) ** (idx[s].dim - 1) for s, v in Phi.values.items())


def dual_proj(Phi: ProjectiveCF, backend: str | None = None) -> ProjectiveCF:
    """Local duality on P^n, summed over the face poset of the central arrangement."""
    upper, weights = [], []
    for c in Phi.arr.cells:
        v = Phi.values.get(canonical(c.signs), 0)
        if v:
            upper.append(c.signs)
            weights.append(v * (-1) ** (c.dim - 1))
    lower = [c.signs for c in representatives(Phi.arr)]
    sums = kernels.upset_sums(lower, upper, weights, backend=backend)
    return ProjectiveCF(Phi.arr, {s: v for s, v in zip(lower, sums) if v})


def point_indicator(v: Sequence) -> ProjectiveCF:
    """``delta_[v]`` on P^n for a nonzero rational vector ``v`` in R^{n+1}."""
    v = tuple(Fraction(x) for x in v)
    if not any(v):
        raise ValidationError("zero vector does not define a projective point")
    n1 = len(v)
    normals = nullspace([list(v)], n1)
    arr = Arrangement(n1, [tuple(nu) + (0,) for nu in normals], central=True)
    target = canonical(arr.sign_vector(v))
    return ProjectiveCF(arr, {target: 1})


def hyperplane_indicator(y: Sequence) -> ProjectiveCF:
    """``1_{h_y}`` with ``h_y = {x : <x, y> = 0}``."""
    y = tuple(Fraction(x) for x in y)
    if not any(y):
        raise ValidationError("zero vector does not define a hyperplane")
    arr = Arrangement(len(y), [y + (0,)], central=True)
    pos = arr.position[primitive_integers(y + (0,))[0]]
    return ProjectiveCF.from_rule(arr, lambda c: int(c.signs[pos] == 0))
