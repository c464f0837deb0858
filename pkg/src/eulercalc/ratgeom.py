"""Exact rational linear algebra and LP feasibility.

Scalars are :class:`fractions.Fraction`; vectors are plain tuples of
fractions.  Nothing in this module ever touches a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

_MINUS_SIGNS = ("−", "–")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ASCII or unicode minus) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValidationError(f"rational must be given as a string, got {text!r}")
    s = text.strip()
    for m in _MINUS_SIGNS:
        s = s.replace(m, "-")
    if not s or "." in s or "e" in s.lower():
        raise ValidationError(f"not an exact rational string: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not an exact rational string: {text!r}") from exc


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


def vec(values: Iterable) -> tuple:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def primitive_integers(values: Sequence) -> tuple[tuple[int, ...], int]:
    """Scale ``values`` to coprime integers whose first nonzero entry is positive.

    Returns the integer tuple and the sign (+1/-1) of the scaling factor that
    was applied; an all-zero input is returned unchanged with sign +1.
    """
    fr = [Fraction(v) for v in values]
    den = 1
    for q in fr:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(ints), 1
    sign = 1
    for v in ints:
        if v:
            sign = 1 if v > 0 else -1
            break
    return tuple(sign * v // g for v in ints), sign


@dataclass(frozen=True)
class AffineForm:
    """The affine functional ``x -> linear . x + constant``."""

    linear: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "linear", vec(self.linear))
        object.__setattr__(self, "constant", parse_rational(self.constant)
                           if isinstance(self.constant, str) else Fraction(self.constant))

    @property
    def dim(self) -> int:
        return len(self.linear)

    @property
    def is_degenerate(self) -> bool:
        return all(a == 0 for a in self.linear)

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.dim:
            raise ValidationError(f"point of dimension {len(point)} for form on R^{self.dim}")
        return dot(self.linear, point) + self.constant

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-a for a in self.linear), -self.constant)

    def normalized(self) -> tuple["AffineForm", int]:
        """Coprime-integer representative and the sign of the rescaling."""
        ints, sign = primitive_integers(self.linear + (self.constant,))
        return AffineForm(ints[:-1], ints[-1]), sign

    def key(self) -> tuple[int, ...]:
        """Integer tuple ``(a_1, ..., a_n, b)`` of the normalized form."""
        return primitive_integers(self.linear + (self.constant,))[0]

    @classmethod
    def from_key(cls, key: Sequence[int]) -> "AffineForm":
        return cls(tuple(key[:-1]), key[-1])

    @classmethod
    def coordinate(cls, n: int, i: int, offset=0) -> "AffineForm":
        """The form ``x_i - offset`` on R^n (0-based ``i``)."""
        return cls(tuple(1 if j == i else 0 for j in range(n)), -Fraction(offset))


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + translation`` with exact entries.

    ``source_dim`` is only consulted when the matrix has no rows (maps to R^0).
    """

    matrix: tuple
    translation: tuple
    source_dim: int | None = None

    def __post_init__(self) -> None:
        rows = tuple(vec(r) for r in self.matrix)
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "translation", vec(self.translation))
        if len(rows) != len(self.translation):
            raise ValidationError("translation length does not match the number of matrix rows")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValidationError("ragged affine-map matrix")
        if rows:
            object.__setattr__(self, "source_dim", len(rows[0]))
        elif self.source_dim is None:
            object.__setattr__(self, "source_dim", 0)

    @classmethod
    def make(cls, matrix: Sequence[Sequence], translation: Sequence | None = None,
             n_in: int | None = None) -> "AffineMap":
        return cls(tuple(tuple(r) for r in matrix),
                   tuple(translation) if translation is not None else (0,) * len(matrix), n_in)

    @property
    def n_out(self) -> int:
        return len(self.matrix)

    @property
    def n_in(self) -> int:
        return self.source_dim

    def __call__(self, point: Sequence) -> tuple:
        if len(point) != self.n_in:
            raise ValidationError(f"point of dimension {len(point)} for map from R^{self.n_in}")
        return tuple(dot(row, point) + t for row, t in zip(self.matrix, self.translation))

    def linear_image(self, direction: Sequence) -> tuple:
        return tuple(dot(row, direction) for row in self.matrix)

    def rank(self) -> int:
        return rank(self.matrix)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self o inner``."""
        if inner.n_out != self.n_in:
            raise ValidationError("cannot compose affine maps of incompatible dimensions")
        cols = list(zip(*inner.matrix)) if inner.matrix else [()] * inner.n_in
        mat = tuple(tuple(dot(row, col) for col in cols) for row in self.matrix)
        trans = tuple(dot(row, inner.translation) + t for row, t in zip(self.matrix, self.translation))
        return AffineMap(mat, trans, inner.n_in)

    def pull_form(self, form: AffineForm) -> AffineForm:
        """The form ``form o self`` on the source space."""
        if form.dim != self.n_out:
            raise ValidationError("form dimension does not match map target")
        lin = tuple(sum((form.linear[r] * self.matrix[r][c] for r in range(self.n_out)), Fraction(0))
                    for c in range(self.n_in))
        return AffineForm(lin, dot(form.linear, self.translation) + form.constant)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), (0,) * n, n)

    @classmethod
    def projection(cls, n: int, coords: Sequence[int]) -> "AffineMap":
        """Coordinate projection R^n -> R^len(coords) (0-based coordinates)."""
        return cls(tuple(tuple(1 if j == c else 0 for j in range(n)) for c in coords),
                   (0,) * len(coords), n)


# ---------------------------------------------------------------------------
# Gaussian elimination


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][c]
        if p != 1:
            mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """Basis of ``{x in Q^n : row . x = 0 for every row}`` (deterministic)."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, pivots = rref(rows, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(tuple(v))
    return basis


def solve_linear(forms: Sequence[AffineForm], n: int | None = None):
    """Solve ``form(x) = 0`` for every form.

    Returns ``(point, basis)`` where ``point`` is one exact solution and
    ``basis`` spans the direction space of the solution set, or ``None`` when
    the system is inconsistent.
    """
    dims = {f.dim for f in forms}
    if n is not None:
        dims.add(n)
    if len(dims) > 1:
        raise ValidationError(f"forms of mixed dimensions {sorted(dims)}")
    if not dims:
        raise ValidationError("dimension required for an empty system")
    n = dims.pop()
    aug = [list(f.linear) + [-f.constant] for f in forms]
    red, pivots = rref(aug, n + 1) if aug else ([], [])
    if n in pivots:
        return None
    point = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        point[pc] = row[n]
    basis = nullspace([r[:n] for r in red], n)
    return tuple(point), basis


# ---------------------------------------------------------------------------
# Exact simplex


def _simplex_max(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Maximize ``c.z`` subject to ``A z <= b``, ``z >= 0`` with ``b >= 0``.

    Dense tableau over Fractions with Bland's rule (no cycling).  Returns
    ``(value, z)`` or ``None`` if unbounded.
    """
    m, nv = len(A), len(c)
    width = nv + m
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b[i])]
        if row[-1] < 0:
            raise ValueError("origin must be feasible")
        T.append(row)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [nv + i for i in range(m)]
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None
        r = best[1]
        p = T[r][enter]
        if p != 1:
            T[r] = [x / p for x in T[r]]
        prow = T[r]
        for i in range(m):
            f = T[i][enter]
            if i != r and f != 0:
                T[i] = [x - f * y for x, y in zip(T[i], prow)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, prow)]
        basis[r] = enter
    z = [Fraction(0)] * width
    for i, bv in enumerate(basis):
        z[bv] = T[i][-1]
    return obj[-1], z[:nv]


def strict_feasible(equalities: Sequence[AffineForm] = (), strict_positive: Sequence[AffineForm] = (),
                    strict_negative: Sequence[AffineForm] = (), n: int | None = None):
    """Exact point with every equality zero and every strict constraint strict.

    Returns ``None`` when no such point exists.  The equalities are solved
    first; the remaining strict system is homogenized with a variable
    ``x0 > 0`` and a margin ``t`` maximized subject to every constraint
    ``>= t`` and ``t <= 1``.  The system is strictly feasible exactly when the
    optimal margin is positive.
    """
    forms = list(equalities) + list(strict_positive) + list(strict_negative)
    dims = {f.dim for f in forms}
    if n is not None:
        dims.add(n)
    if len(dims) != 1:
        raise ValidationError(f"forms of mixed or unknown dimension {sorted(dims)}")
    n = dims.pop()
    sol = solve_linear(list(equalities), n)
    if sol is None:
        return None
    p, K = sol
    signed = [(1, f) for f in strict_positive] + [(-1, f) for f in strict_negative]
    if not signed:
        return p
    k = len(K)
    rows = []
    for s, f in signed:
        lin = [s * dot(f.linear, kv) for kv in K]
        rows.append((lin, s * f(p)))
    if k == 0:
        return p if all(c > 0 for _, c in rows) else None
    # variables: u+ (k), u- (k), x0, t
    A, b = [], []
    for lin, c0 in rows:
        A.append([-a for a in lin] + list(lin) + [-c0, Fraction(1)])
        b.append(0)
    A.append([Fraction(0)] * (2 * k) + [Fraction(-1), Fraction(1)])
    b.append(0)
    A.append([Fraction(0)] * (2 * k) + [Fraction(0), Fraction(1)])
    b.append(1)
    c = [Fraction(0)] * (2 * k + 1) + [Fraction(1)]
    res = _simplex_max(c, A, b)
    assert res is not None, "margin LP is bounded by construction"
    value, z = res
    if value <= 0:
        return None
    x0 = z[2 * k]
    u = [(z[i] - z[k + i]) / x0 for i in range(k)]
    point = tuple(p[j] + sum((u[i] * K[i][j] for i in range(k)), Fraction(0)) for j in range(n))
    return point


def cone_is_trivial(equalities: Sequence[Sequence], nonnegative: Sequence[Sequence], n: int) -> bool:
    """True when ``{d : e.d = 0, g.d >= 0}`` is ``{0}`` (linear parts only)."""
    if n == 0:
        return True
    basis = nullspace(list(equalities), n)
    k = len(basis)
    if k == 0:
        return True
    G = [[dot(g, kv) for kv in basis] for g in nonnegative]
    # variables u+ (k), u- (k); -G u <= 0, each |u_i| <= 1 via u+_i <= 1, u-_i <= 1
    A, b = [], []
    for g in G:
        A.append([-a for a in g] + list(g))
        b.append(0)
    for i in range(2 * k):
        A.append([Fraction(int(j == i)) for j in range(2 * k)])
        b.append(1)
    for i in range(k):
        for sgn in (1, -1):
            c = [Fraction(0)] * (2 * k)
            c[i] = Fraction(sgn)
            c[k + i] = Fraction(-sgn)
            value, _ = _simplex_max(c, A, b)
            if value > 0:
                return False
    return True
