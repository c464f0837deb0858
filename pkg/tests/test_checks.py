from __future__ import annotations

import random
from fractions import Fraction

from eulercalc import checks
from eulercalc import generate as gen
from eulercalc.checks import CheckResult, dual_by_box, fiber_square, graph_kernel
from eulercalc.constructible import integrate, multiply
from eulercalc.errors import ValidationError
from eulercalc.ratgeom import AffineMap

from .conftest import interval, point


def test_box_oracle_by_hand():
    closed = interval(0, 1)
    assert dual_by_box(closed, (0,)) == 0  # [0, eps) has chi_c 0
    assert dual_by_box(closed, (Fraction(1, 2),)) == -1
    assert dual_by_box(point(0), (0,)) == 1
    # a naive "dual" that returns phi itself disagrees with the oracle
    assert dual_by_box(closed, (Fraction(1, 2),)) != closed((Fraction(1, 2),))


def test_fiber_square_commutes():
    rng = random.Random(0)
    for _ in range(20):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        p = rng.randint(1, m)
        f = gen.random_surjection(rng, m, p)
        g = gen.random_affine_map(rng, n, p)
        g1, f1 = fiber_square(f, g)
        for _ in range(5):
            w = tuple(Fraction(rng.randint(-5, 5)) for _ in range(g1.n_in))
            assert f(g1(w)) == g(f1(w))


def test_graph_kernel_is_supported_on_graph():
    f = AffineMap.make([[2]], [1], 1)
    k = graph_kernel(f)
    assert k((1, 3)) == 1 and k((1, 4)) == 0
    assert integrate(multiply(k, gen.box((0, 0), (1, 10)))) == 1


def test_generators_are_seeded():
    a = gen.random_cf(random.Random(5), 2, 4)
    b = gen.random_cf(random.Random(5), 2, 4)
    assert a.arr == b.arr and a.values == b.values


def test_random_polytope_contains_origin():
    rng = random.Random(1)
    for d in (1, 2, 3):
        closed, interior = gen.polytope_pair(gen.random_polytope(rng, d), d)
        assert interior((0,) * d) == 1 and closed((0,) * d) == 1


def test_result_line():
    ok = CheckResult("demo", True, 3, 0.5, [], "note")
    assert ok.line() == "PASS demo: 3 instances, 0.50s (note)"
    bad = CheckResult("demo", False, 2, 0.0, ["case 1"])
    assert bad.line().startswith("FAIL demo") and "case 1" in bad.line()


def test_battery_reports_errors_as_failures(monkeypatch):
    def explode():
        raise ValidationError("boom")

    monkeypatch.setattr(checks, "battery", lambda *a, **k: [explode])
    lines = []
    results = checks.run_battery(report=lines.append)
    assert not results[0].passed and "boom" in lines[0]


def test_battery_shape():
    assert len(checks.battery(scale=0.1)) == 19
