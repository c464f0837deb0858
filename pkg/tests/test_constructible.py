from __future__ import annotations

import random
from fractions import Fraction

import pytest

from eulercalc import generate as gen
from eulercalc.checks import (
    dual_by_box,
    gamma_violations,
    graph_kernel,
    half_line,
    interior_directions,
    plane_cone,
    search_nonproper_projection_witness,
)
from eulercalc.constructible import (
    AffineCF,
    PolyhedronSpec,
    compose_kernels,
    cone_forms,
    convolve,
    convolve_np,
    dual,
    epb,
    external_product,
    fiber_integral,
    fiber_integral_np,
    gamma_project,
    hom_cf,
    indicator,
    integrate,
    integrate_np,
    multiply,
    pullback,
    pushforward,
    pushforward_np,
    refine_common,
    scale,
)
from eulercalc.errors import ResourceError, ValidationError
from eulercalc.ratgeom import AffineForm, AffineMap

from .conftest import interval, point

PROJ_X = AffineMap.projection(2, [0])


# construction and evaluation


def test_indicator_of_closed_interval():
    phi = interval(0, 1)
    got = [phi(c.sample) for c in phi.arr.cells]
    assert got == [0, 1, 1, 1, 0]
    assert phi((Fraction(1, 2),)) == 1 and phi((0,)) == 1
    assert interval(0, 1, ">", "<")((0,)) == 0


def test_indicator_edge_cases():
    assert indicator(PolyhedronSpec(()), 2) == AffineCF.constant(2)
    assert indicator(PolyhedronSpec((((1, 0), ">"), ((1, 0), "<"))), 1).is_zero()
    with pytest.raises(ValidationError):
        PolyhedronSpec((((1, 0), "~"),))


def test_refine_common_shares_arrangement():
    a, b = refine_common(interval(0, 1), interval(1, 2))
    assert a.arr == b.arr and len(a.arr.keys) == 3
    c, d = refine_common(a, a)
    assert c is a and d is a


def test_algebra():
    assert interval(0, 2) - interval(0, 2, ">", "<") == point(0) + point(2)
    assert multiply(interval(0, 2), interval(1, 3)) == interval(1, 2)
    assert scale(interval(0, 2), 0).is_zero()


def test_external_product():
    square = gen.box((0, 0), (1, 1))
    assert external_product(interval(0, 1), interval(0, 1)) == square
    assert external_product(interval(0, 1), AffineCF.zero(1)).is_zero()
    rng = random.Random(2)
    for _ in range(15):
        phi, psi = gen.random_cf(rng, 1, 3), gen.random_cf(rng, rng.randint(1, 2), 3)
        assert integrate(external_product(phi, psi)) == integrate(phi) * integrate(psi)


# integrals and duality


@pytest.mark.parametrize("a,b,left,right,proper,nonproper", [
    (None, None, ">=", "<=", -1, 1),
    (None, 0, ">=", "<", -1, 0),
    (None, 0, ">=", "<=", 0, 1),
    (0, 1, ">=", "<=", 1, 1),
    (0, 1, ">", "<", -1, -1),
    (0, 1, ">=", "<", 0, 0),
])
def test_one_dimensional_integrals(a, b, left, right, proper, nonproper):
    phi = interval(a, b, left, right)
    assert integrate(phi) == proper
    assert integrate_np(phi) == nonproper


def test_open_unit_interval_integral():
    assert integrate(interval(0, 1, ">", "<")) == -1


def test_dual_of_closed_interval():
    assert dual(interval(0, 1)) == -interval(0, 1, ">", "<")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_dual_of_polytope(d):
    rng = random.Random(d)
    for _ in range(3):
        closed, interior = gen.polytope_pair(gen.random_polytope(rng, d, 3), d)
        assert dual(closed) == interior * (-1) ** d


def test_dual_matches_box_oracle(backend):
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(1, 2)
        phi = gen.random_cf(rng, n, 4)
        dphi = dual(phi, backend=backend)
        for c in phi.arr.cells[:: max(1, len(phi.arr.cells) // 6)]:
            assert dphi(c.sample) == dual_by_box(phi, c.sample)


def test_dual_is_involution(backend):
    rng = random.Random(4)
    for _ in range(20):
        phi = gen.random_cf(rng, rng.randint(1, 3), 5)
        assert dual(dual(phi, backend), backend) == phi


# maps


def test_pullback_identity_and_composition():
    rng = random.Random(6)
    psi = gen.random_cf(rng, 2, 4)
    assert pullback(psi, AffineMap.identity(2)) == psi
    g = gen.random_affine_map(rng, 2, 2)
    for c in pullback(psi, g).arr.cells:
        assert pullback(psi, g)(c.sample) == psi(g(c.sample))


def test_pushforward_of_triangle():
    tri = gen.triangle((0, 0), (3, 1), (1, 2))
    assert pushforward(tri, PROJ_X) == interval(0, 3)


def test_pushforward_identity_and_budget():
    rng = random.Random(7)
    phi = gen.random_cf(rng, 2, 4)
    assert pushforward(phi, AffineMap.identity(2)) == phi
    with pytest.raises(ResourceError) as err:
        pushforward(phi, AffineMap.identity(2), max_cells=1)
    assert err.value.count > 1


def test_pushforward_rejects_non_surjective():
    with pytest.raises(ValidationError):
        pushforward(AffineCF.constant(1), AffineMap.make([[0]], [0], 1))


def test_pushforward_agrees_with_fiber_oracle():
    rng = random.Random(9)
    for _ in range(10):
        phi = gen.random_cf(rng, 2, 4)
        f = gen.random_surjection(rng, 2, 1)
        pushed = pushforward(phi, f, oversample=2)
        for y in range(-6, 7):
            yy = (Fraction(y, 2),)
            assert pushed(yy) == fiber_integral(phi, f, yy)


def test_pushforward_point_target_in_plane():
    # a point mass in R^3 pushed to R^2: the only singular locus is a point
    p = gen.box((1, 1, 1), (1, 1, 1))
    assert pushforward(p, AffineMap.projection(3, [0, 1])) == gen.box((1, 1), (1, 1))


def test_integrate_after_pushforward():
    rng = random.Random(10)
    for _ in range(10):
        phi = gen.random_cf(rng, 2, 4)
        f = gen.random_surjection(rng, 2, 1)
        assert integrate(pushforward(phi, f)) == integrate(phi)


def test_pushforward_np_closed_half_plane():
    half = indicator(PolyhedronSpec((((0, 1, 0), ">="),)), 2)
    assert integrate_np(half) == 1
    # the closed half-plane projected along y: every fiber is a closed ray
    assert pushforward_np(half, PROJ_X) == AffineCF.constant(1, 1)


def test_pushforward_np_open_strip():
    strip = indicator(PolyhedronSpec((((1, 0, 1), ">"), ((1, 0, -1), "<"))), 2)
    got = pushforward_np(strip, PROJ_X)
    # definition: D int D
    assert got == dual(pushforward(dual(strip), PROJ_X))
    for y in (-2, -1, 0, 1, 2):
        assert got((y,)) == fiber_integral_np(strip, PROJ_X, (y,))


def test_pushforward_np_equals_proper_on_compact_support():
    rng = random.Random(12)
    for _ in range(8):
        phi = gen.random_compact_cf(rng, 2, 2)
        f = gen.random_surjection(rng, 2, 1)
        assert pushforward_np(phi, f) == pushforward(phi, f)


def test_nonproper_projection_search_is_negative():
    # recession cones of the fibers of a polyhedron are uniform, so no PL witness exists
    assert search_nonproper_projection_witness(random.Random(0), tries=40) is None


def test_hom_and_epb():
    rng = random.Random(13)
    psi = gen.random_cf(rng, 2, 4)
    assert hom_cf(AffineCF.constant(2), psi) == psi
    assert epb(AffineMap.identity(2), psi) == psi
    unit = interval(0, 1)
    assert epb(PROJ_X, unit) == dual(pullback(dual(unit), PROJ_X))
    # D(a [x] b) = Da [x] Db, so the exceptional pullback is unit [x] D1_R = -1 on the closed strip
    assert epb(PROJ_X, unit) == -closed_strip()


def closed_strip() -> AffineCF:
    return indicator(PolyhedronSpec((((1, 0, 0), ">="), ((1, 0, -1), "<="))), 2)


# convolution and the gamma-projector


def test_convolution_of_intervals():
    assert convolve(interval(0, 1), interval(0, 2)) == interval(0, 3)


def test_convolution_unit_and_np_identity():
    rng = random.Random(14)
    for _ in range(5):
        phi, psi = gen.random_1d(rng), gen.random_1d(rng)
        assert convolve(point(0), psi) == psi
        assert convolve_np(phi, psi) == dual(convolve(dual(phi), dual(psi)))


def test_convolution_budget():
    with pytest.raises(ResourceError):
        convolve(interval(0, 1), interval(0, 2), max_cells=3)


def test_gamma_project_delta():
    got = gamma_project(point(0), half_line())
    assert got == interval(None, 0)
    # by hand on the 3-cell arrangement: D delta = delta, D 1_(-inf,0] = -1_(-inf,0),
    # delta * -1_(-inf,0) = -1_(-inf,0), and D of that is 1_(-inf,0]
    assert got == dual(convolve(dual(point(0)), dual(interval(None, 0))))


def test_gamma_project_is_idempotent():
    rng = random.Random(15)
    for _ in range(5):
        phi = gen.random_1d(rng)
        once = gamma_project(phi, half_line())
        assert gamma_project(once, half_line()) == once


def test_gamma_output_scan_and_negative_control():
    forms = cone_forms(half_line(), 1)
    dirs = interior_directions(forms, 1)
    rng = random.Random(16)
    for _ in range(5):
        assert gamma_violations(gamma_project(gen.random_1d(rng), half_line()), dirs) == []
    assert gamma_violations(interval(None, 0, ">=", "<"), dirs)


def test_cone_validation():
    assert len(cone_forms(plane_cone(), 2)) == 2  # the redundant x >= 0 is removed
    with pytest.raises(ValidationError):
        cone_forms(PolyhedronSpec((((1, 0), ">"),)), 1)
    with pytest.raises(ValidationError):
        cone_forms(PolyhedronSpec((((1, 0, 0), ">="),)), 2)  # a half-plane contains a line
    with pytest.raises(ValidationError):
        cone_forms(PolyhedronSpec((((1, 0), ">="), ((1, 0), "<="))), 1)
    # orientation survives normalization
    assert [f.linear for f in cone_forms(PolyhedronSpec((((-2, 0), ">="),)), 1)] == [(-1,)]


# kernels


def test_graph_kernels_compose():
    f = AffineMap.make([[2]], [1], 1)
    g = AffineMap.make([[-1]], [3], 1)
    assert compose_kernels(graph_kernel(f), graph_kernel(g), 1) == graph_kernel(g.compose(f))


def test_diagonal_kernel_is_identity():
    rng = random.Random(17)
    lam = gen.random_cf(rng, 2, 3)
    diag = graph_kernel(AffineMap.identity(1))
    assert compose_kernels(diag, lam, 1) == lam


def test_compose_kernels_rejects_bad_middle():
    with pytest.raises(ValidationError):
        compose_kernels(AffineCF.constant(1), AffineCF.constant(2), 2)
