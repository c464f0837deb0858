"""The invariant battery behind ``eulercalc check-suite``.

Each check builds its own instances from a seeded generator and returns a
:class:`CheckResult`.  Identity checks compare two independent routes to
the same function; oracle checks compare the combinatorial algorithms with
slower direct computations.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import generate as gen
from .arrangement import Arrangement, naive_cells
from .constructible import (
    AffineCF,
    PolyhedronSpec,
    compose_kernels,
    cone_forms,
    convolve,
    convolve_np,
    dual,
    fiber_integral,
    fiber_integral_np,
    gamma_project,
    indicator,
    integrate,
    integrate_np,
    multiply,
    pullback,
    pushforward,
    pushforward_np,
)
from .errors import EulerCalcError
from .projective import (
    ProjectiveCF,
    dual_proj,
    embed_eim,
    embed_oim,
    integrate_proj,
    restrict_chart,
)
from .radon import betti_slice, lambda_kernel_check, plane_section, radon_invert_check, slice_eval_r3
from .ratgeom import AffineForm, AffineMap, solve_linear, strict_feasible


@dataclass
class CheckResult:
    name: str
    passed: bool
    instances: int
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.instances} instances, {self.seconds:.2f}s"
        if self.note:
            text += f" ({self.note})"
        if self.failures:
            text += f"; first failure: {self.failures[0]}"
        return text


class _Tally:
    def __init__(self, name: str) -> None:
        self.name = name
        self.count = 0
        self.failures: list[str] = []
        self.start = time.perf_counter()

    def expect(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)

    def result(self, note: str = "") -> CheckResult:
        return CheckResult(self.name, not self.failures, self.count,
                           time.perf_counter() - self.start, self.failures, note)


def _interval(a, b, left: str, right: str) -> AffineCF:
    cons = []
    if a is not None:
        cons.append((AffineForm((1,), -Fraction(a)), left))
    if b is not None:
        cons.append((AffineForm((1,), -Fraction(b)), right))
    return indicator(PolyhedronSpec(tuple(cons)), 1)


# ---------------------------------------------------------------------------
# closed-form values


def check_integral_table() -> CheckResult:
    """Integrals of the six interval types and their non-proper counterparts."""
    t = _Tally("integral-table-1d")
    a, b = Fraction(-1, 3), Fraction(5, 2)
    table = [
        ("R", _interval(None, None, "", ""), -1, 1),
        ("(-inf,b)", _interval(None, b, "", "<"), -1, 0),
        ("(-inf,b]", _interval(None, b, "", "<="), 0, 1),
        ("[a,b]", _interval(a, b, ">=", "<="), 1, 1),
        ("(a,b)", _interval(a, b, ">", "<"), -1, -1),
        ("[a,b)", _interval(a, b, ">=", "<"), 0, 0),
    ]
    for name, phi, proper, nonproper in table:
        got = (integrate(phi), integrate_np(phi))
        t.expect(got == (proper, nonproper), f"{name}: got {got}, expected {(proper, nonproper)}")
    return t.result()


def check_chi_projective() -> CheckResult:
    t = _Tally("chi-projective")
    for n, want in ((1, 0), (2, 1), (3, 0)):
        got = integrate_proj(ProjectiveCF.constant(n))
        t.expect(got == want, f"chi(P^{n}) = {got}, expected {want}")
    return t.result()


def check_euler_formula(rng: random.Random, per_dim: int = 4) -> CheckResult:
    """``int 1_bd(Z) = (1 - (-1)^d) int 1_Z`` for random compact polytopes."""
    t = _Tally("euler-formula")
    for d in (1, 2, 3):
        for _ in range(per_dim):
            forms = gen.random_polytope(rng, d, cuts=3 if d == 3 else 4)
            closed, interior = gen.polytope_pair(forms, d)
            lhs = integrate(closed - interior)
            rhs = (1 - (-1) ** d) * integrate(closed)
            t.expect(lhs == rhs, f"d={d}: {lhs} != {rhs}")
    return t.result()


# ---------------------------------------------------------------------------
# duality and direct images


def check_duality_involution(rng: random.Random, count: int = 100) -> CheckResult:
    t = _Tally("duality-involution")
    for i in range(count):
        n = 1 + i % 3
        phi = gen.random_cf(rng, n, max_forms=8 if n < 3 else 6)
        t.expect(dual(dual(phi)) == phi, f"instance {i} on R^{n}")
    return t.result()


def check_duality_pushforward(rng: random.Random, count: int = 50) -> CheckResult:
    """``D int_f phi = int_f D phi`` for compactly supported ``phi``."""
    t = _Tally("duality-pushforward")
    for i in range(count):
        m = 2 if i % 4 else 3
        k = rng.randint(1, m - 1)
        phi = gen.random_compact_cf(rng, m, max_forms=3 if m == 2 else 1, radius=2)
        f = gen.random_surjection(rng, m, k)
        t.expect(dual(pushforward(phi, f)) == pushforward(dual(phi), f), f"instance {i}: R^{m} -> R^{k}")
    return t.result()


def fiber_square(f: AffineMap, g: AffineMap) -> tuple[AffineMap, AffineMap]:
    """``(g', f')`` on a chart of ``W = {(x, y) : f(x) = g(y)}``.

    ``g'`` maps W to the source of ``f`` and ``f'`` maps W to the source of
    ``g``.
    """
    m, n = f.n_in, g.n_in
    eqs = []
    for r in range(f.n_out):
        lin = tuple(f.matrix[r]) + tuple(-c for c in g.matrix[r])
        eqs.append(AffineForm(lin, f.translation[r] - g.translation[r]))
    sol = solve_linear(eqs, m + n)
    if sol is None:
        raise EulerCalcError("empty fiber product")
    point, basis = sol
    w = len(basis)

    def part(rows: range) -> AffineMap:
        return AffineMap.make([[basis[j][r] for j in range(w)] for r in rows], [point[r] for r in rows], w)

    return part(range(m)), part(range(m, m + n))


def check_base_change(rng: random.Random, count: int = 25) -> CheckResult:
    t = _Tally("base-change")
    for i in range(count):
        m, n = rng.randint(1, 2), rng.randint(1, 2)
        p = rng.randint(1, m)
        f = gen.random_surjection(rng, m, p)
        g = gen.random_affine_map(rng, n, p)
        phi = gen.random_cf(rng, m, max_forms=4)
        g1, f1 = fiber_square(f, g)
        lhs = pullback(pushforward(phi, f), g)
        rhs = pushforward(pullback(phi, g1), f1)
        t.expect(lhs == rhs, f"instance {i}: m={m} n={n} p={p}")
    return t.result()


def check_projection_formula(rng: random.Random, count: int = 25) -> CheckResult:
    t = _Tally("projection-formula")
    for i in range(count):
        m = rng.randint(1, 2)
        k = rng.randint(1, m)
        f = gen.random_surjection(rng, m, k)
        phi = gen.random_cf(rng, m, max_forms=4)
        psi = gen.random_cf(rng, k, max_forms=3)
        lhs = pushforward(multiply(phi, pullback(psi, f)), f)
        rhs = multiply(psi, pushforward(phi, f))
        t.expect(lhs == rhs, f"instance {i}: R^{m} -> R^{k}")
    return t.result()


def check_functoriality(rng: random.Random, count: int = 10) -> CheckResult:
    """``int_{g o f} = int_g int_f`` and the non-proper analogue."""
    t = _Tally("functoriality")
    for i in range(count):
        phi = gen.random_cf(rng, 3, max_forms=3, vmax=3)
        f = gen.random_surjection(rng, 3, 2)
        g = gen.random_surjection(rng, 2, 1)
        gf = g.compose(f)
        t.expect(pushforward(phi, gf) == pushforward(pushforward(phi, f), g), f"proper, instance {i}")
        t.expect(pushforward_np(phi, gf) == pushforward_np(pushforward_np(phi, f), g),
                 f"non-proper, instance {i}")
    return t.result()


@dataclass(frozen=True)
class ProjectionWitness:
    phi: AffineCF
    psi: AffineCF
    f: AffineMap
    lhs: AffineCF
    rhs: AffineCF


def search_nonproper_projection_witness(rng: random.Random, tries: int = 400,
                                        max_forms: int = 4) -> ProjectionWitness | None:
    """Look for ``int^np_f(phi . f*psi) != psi . int^np_f phi`` with ``f: R^2 -> R``.

    Returns the first witness found, or ``None`` when the sampled family
    contains none.
    """
    for _ in range(tries):
        f = gen.random_surjection(rng, 2, 1) if rng.random() < 0.5 else AffineMap.projection(2, [1])
        phi = gen.random_cf(rng, 2, max_forms=max_forms, vmax=2)
        psi = gen.random_1d(rng)
        lhs = pushforward_np(multiply(phi, pullback(psi, f)), f)
        rhs = multiply(psi, pushforward_np(phi, f))
        if lhs != rhs:
            return ProjectionWitness(phi, psi, f, lhs, rhs)
    return None


def check_nonproper_projection(rng: random.Random, tries: int = 200) -> CheckResult:
    """Witness search plus the fiberwise formula that explains its outcome.

    The search result is reported in the note; only the fiberwise identity
    ``(int^np_f phi)(y) = int^np (phi on f^{-1}(y))`` can fail the check.
    """
    t = _Tally("nonproper-projection")
    w = search_nonproper_projection_witness(rng, tries)
    for i in range(max(1, tries // 10)):
        m = rng.randint(2, 3)
        k = rng.randint(1, m - 1)
        f = gen.random_surjection(rng, m, k)
        phi = gen.random_cf(rng, m, max_forms=4 if m == 2 else 3, vmax=3)
        pushed = pushforward_np(phi, f)
        for _ in range(6):
            y = tuple(Fraction(rng.randint(-8, 8), rng.choice((1, 2))) for _ in range(k))
            t.expect(pushed(y) == fiber_integral_np(phi, f, y), f"fiberwise instance {i} at {y}")
    note = f"witness found among {tries} tries" if w is not None else f"no PL witness in {tries} tries"
    return t.result(note)


# ---------------------------------------------------------------------------
# kernels and convolution


def graph_kernel(f: AffineMap) -> AffineCF:
    """``1_{(x, f(x))}`` on R^{m+k}."""
    m, k = f.n_in, f.n_out
    cons = []
    for r in range(k):
        lin = tuple(-c for c in f.matrix[r]) + tuple(int(j == r) for j in range(k))
        cons.append((AffineForm(lin, -f.translation[r]), "="))
    return indicator(PolyhedronSpec(tuple(cons)), m + k)


def check_kernel_graphs(rng: random.Random, count: int = 5) -> CheckResult:
    t = _Tally("kernel-graphs")
    for i in range(count):
        f = gen.random_surjection(rng, 1, 1)
        g = gen.random_surjection(rng, 1, 1)
        got = compose_kernels(graph_kernel(f), graph_kernel(g), 1)
        t.expect(got == graph_kernel(g.compose(f)), f"graph composition {i}")
        lam = gen.random_cf(rng, 2, max_forms=3)
        diag = graph_kernel(AffineMap.identity(1))
        t.expect(compose_kernels(diag, lam, 1) == lam, f"left identity {i}")
        t.expect(compose_kernels(lam, diag, 1) == lam, f"right identity {i}")
    return t.result()


def check_kernel_associativity(rng: random.Random, count: int = 10) -> CheckResult:
    t = _Tally("kernel-associativity")
    for i in range(count):
        k12, k23, k34 = (gen.random_cf(rng, 2, max_forms=3, vmax=3) for _ in range(3))
        left = compose_kernels(compose_kernels(k12, k23, 1), k34, 1)
        right = compose_kernels(k12, compose_kernels(k23, k34, 1), 1)
        t.expect(left == right, f"triple {i}")
    return t.result()


def check_convolution(rng: random.Random, count: int = 25, triples: int = 10) -> CheckResult:
    t = _Tally("convolution")
    delta = _interval(0, 0, "=", "=")
    for i in range(count):
        phi, psi = gen.random_1d(rng), gen.random_1d(rng)
        t.expect(convolve(delta, psi) == psi, f"unit {i}")
        t.expect(convolve(phi, psi) == convolve(psi, phi), f"commutativity {i}")
        t.expect(convolve_np(phi, psi) == dual(convolve(dual(phi), dual(psi))), f"duality identity {i}")
    for i in range(triples):
        a, b, c = gen.random_1d(rng, 2), gen.random_1d(rng, 2), gen.random_1d(rng, 2)
        t.expect(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)), f"*-associativity {i}")
        t.expect(convolve_np(convolve_np(a, b), c) == convolve_np(a, convolve_np(b, c)),
                 f"np-associativity {i}")
    return t.result()


# ---------------------------------------------------------------------------
# gamma-projector


def interior_directions(forms: Sequence[AffineForm], n: int) -> list[tuple]:
    """A few vectors in the interior of the cone ``{g >= 0}``."""
    p = strict_feasible([], forms, [], n=n)
    out = [tuple(p)]
    for i in range(n):
        for s in (1, -1):
            v = tuple(4 * x + s * Fraction(int(j == i)) for j, x in enumerate(p))
            if all(g(v) > 0 for g in forms):
                out.append(v)
    return out


def gamma_violations(psi: AffineCF, directions: Sequence[Sequence]) -> list[str]:
    """Cells where ``psi(x) != psi(x - eps v)`` for small ``eps > 0``.

    A gamma-constructible function is a combination of indicators of sets
    ``U n F`` with ``U`` open and ``F`` closed, both stable under adding
    ``gamma``; such a function is constant along ``x - eps v`` for ``v`` in
    the interior of ``gamma``.
    """
    bad = []
    keys = psi.arr.keys
    for c in psi.arr.cells:
        for v in directions:
            limit = []
            for k, s in zip(keys, c.signs):
                if s:
                    limit.append(s)
                else:
                    d = -sum(a * x for a, x in zip(k[:-1], v))
                    limit.append((d > 0) - (d < 0))
            if psi.value(tuple(limit)) != psi.value(c.signs):
                bad.append(c.label)
                break
    return bad


def half_line() -> PolyhedronSpec:
    return PolyhedronSpec(((AffineForm((1,), 0), ">="),))


def plane_cone() -> PolyhedronSpec:
    """``{y >= 0, 2x - y >= 0}`` in R^2 with one redundant constraint."""
    return PolyhedronSpec((
        (AffineForm((0, 1), 0), ">="),
        (AffineForm((2, -1), 0), ">="),
        (AffineForm((1, 0), 0), ">="),
    ))


def check_gamma_projector(rng: random.Random, count: int = 25) -> CheckResult:
    t = _Tally("gamma-projector")
    delta = _interval(0, 0, "=", "=")
    t.expect(gamma_project(delta, half_line()) == _interval(None, 0, "", "<="), "delta_0 on the half-line")
    for gamma, n in ((half_line(), 1), (plane_cone(), 2)):
        dirs = interior_directions(cone_forms(gamma, n), n)
        for i in range(count):
            phi = gen.random_1d(rng, 3) if n == 1 else gen.random_cf(rng, 2, max_forms=2, vmax=3)
            once = gamma_project(phi, gamma)
            t.expect(gamma_project(once, gamma) == once, f"idempotence R^{n} instance {i}")
            bad = gamma_violations(once, dirs)
            t.expect(not bad, f"output not gamma-constructible on R^{n}, cells {bad[:3]}")
    return t.result()


# ---------------------------------------------------------------------------
# projective space and Radon transform


def check_projective_charts(rng: random.Random, count: int = 10) -> CheckResult:
    """Projective duality agrees with affine duality in every chart."""
    t = _Tally("projective-charts")
    for i in range(count):
        n = 1 + i % 2
        Phi = gen.random_projective(rng, n, m=3)
        D = dual_proj(Phi)
        t.expect(dual_proj(D) == Phi, f"involution {i}")
        for chart in range(1, n + 2):
            t.expect(restrict_chart(D, chart) == dual(restrict_chart(Phi, chart)), f"instance {i}, chart {chart}")
        phi = gen.random_cf(rng, n, max_forms=3)
        t.expect(integrate_proj(embed_eim(phi)) == integrate(phi), f"extension by zero {i}")
        t.expect(integrate_proj(embed_oim(phi)) == integrate_np(phi), f"direct image {i}")
    return t.result()


def check_radon(oversample: int = 3, seed: int = 0) -> CheckResult:
    t = _Tally("radon-inversion")
    for name, Phi in gen.radon_corpus().items():
        res = radon_invert_check(Phi, oversample=oversample, seed=seed)
        t.expect(res.equal, name)
    ab = lambda_kernel_check(2, pairs=10, seed=seed)
    t.expect(ab == (1, 0), f"lambda kernel (a, b) = {ab}")
    return t.result()


def check_r3_slices() -> CheckResult:
    t = _Tally("r3-slices")
    for name, body in gen.bodies_r3().items():
        for plane in gen.slicing_planes():
            value = slice_eval_r3(body, plane)
            b0, b1 = betti_slice(plane_section(body, plane))
            t.expect(value == b0 - b1, f"{name} on {plane}: {value} != {b0} - {b1}")
    return t.result()


# ---------------------------------------------------------------------------
# oracles


def dual_by_box(phi: AffineCF, x0: Sequence) -> int:
    """``D phi (x0)`` as the integral of ``phi`` over a small open box at ``x0``."""
    n = phi.dim
    x0 = tuple(Fraction(x) for x in x0)
    eps = Fraction(1)
    for form in phi.arr.forms:
        v = abs(form(x0))
        if v:
            eps = min(eps, v / (2 * sum(abs(a) for a in form.linear)))
    cons = []
    for i in range(n):
        cons.append((AffineForm.coordinate(n, i, x0[i] - eps), ">"))
        cons.append((AffineForm.coordinate(n, i, x0[i] + eps), "<"))
    return integrate(multiply(phi, indicator(PolyhedronSpec(tuple(cons)), n)))


def check_oracle_duality(rng: random.Random, count: int = 20) -> CheckResult:
    t = _Tally("oracle-duality-box")
    for i in range(count):
        n = 1 + i % 3
        phi = gen.random_cf(rng, n, max_forms=4 if n < 3 else 3)
        D = dual(phi)
        for c in phi.arr.cells:
            got = dual_by_box(phi, c.sample)
            t.expect(got == D(c.sample), f"instance {i}, cell {c.label}: box {got}, poset {D(c.sample)}")
    return t.result()


def check_oracle_enumeration(rng: random.Random, count: int = 30) -> CheckResult:
    t = _Tally("oracle-enumeration")
    for i in range(count):
        n = 1 + i % 3
        arr = gen.random_arrangement(rng, n, rng.randint(1, 6))
        fast = {(c.signs, c.dim) for c in arr.cells}
        slow = {(c.signs, c.dim) for c in naive_cells(arr)}
        t.expect(fast == slow, f"instance {i}: {len(fast)} vs {len(slow)} cells")
    return t.result()


def check_oracle_pushforward(rng: random.Random, count: int = 10, points: int = 12) -> CheckResult:
    t = _Tally("oracle-pushforward")
    for i in range(count):
        m = 2 if i % 3 else 3
        k = rng.randint(1, m - 1)
        phi = gen.random_cf(rng, m, max_forms=4 if m == 2 else 2)
        f = gen.random_surjection(rng, m, k)
        pushed = pushforward(phi, f, oversample=3, rng=rng)
        for _ in range(points):
            y = tuple(Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3))) for _ in range(k))
            t.expect(pushed(y) == fiber_integral(phi, f, y), f"instance {i} at {y}")
    return t.result()


# ---------------------------------------------------------------------------


def battery(seed: int = 0, scale: float = 1.0, oversample: int = 3) -> list[Callable[[], CheckResult]]:
    """Deferred checks, each with its own generator derived from ``seed``."""

    def n(base: int) -> int:
        return max(1, round(base * scale))

    def rng(tag: int) -> random.Random:
        return random.Random(seed * 1000 + tag)

    return [
        check_integral_table,
        check_chi_projective,
        lambda: check_euler_formula(rng(1), n(4)),
        lambda: check_duality_involution(rng(2), n(100)),
        lambda: check_duality_pushforward(rng(3), n(50)),
        lambda: check_base_change(rng(4), n(25)),
        lambda: check_projection_formula(rng(5), n(25)),
        lambda: check_functoriality(rng(6), n(10)),
        lambda: check_nonproper_projection(rng(7), n(200)),
        lambda: check_kernel_graphs(rng(8), n(5)),
        lambda: check_kernel_associativity(rng(9), n(10)),
        lambda: check_convolution(rng(10), n(25), n(10)),
        lambda: check_gamma_projector(rng(11), n(25)),
        lambda: check_projective_charts(rng(12), n(10)),
        lambda: check_radon(oversample, seed),
        check_r3_slices,
        lambda: check_oracle_duality(rng(13), n(20)),
        lambda: check_oracle_enumeration(rng(14), n(30)),
        lambda: check_oracle_pushforward(rng(15), n(10)),
    ]


def run_battery(seed: int = 0, scale: float = 1.0, oversample: int = 3,
                report: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for check in battery(seed, scale, oversample):
        try:
            res = check()
        except EulerCalcError as exc:
            name = getattr(check, "__name__", "check")
            res = CheckResult(name, False, 0, failures=[f"{type(exc).__name__}: {exc}"])
        results.append(res)
        if report:
            report(res.line())
    return results
