"""Acceptance criteria 1-12: exact checks under wall-clock limits.

Each test prints a single ``ACCEPTANCE k: PASS|FAIL`` line to the terminal.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from eulercalc import checks
from eulercalc import generate as gen
from eulercalc.arrangement import naive_cells
from eulercalc.constructible import (
    dual,
    fiber_integral,
    integrate,
    integrate_np,
    pushforward,
)
from eulercalc.projective import ProjectiveCF, integrate_proj
from eulercalc.radon import betti_slice, lambda_kernel_check, plane_section, radon_invert_check, slice_eval_r3

from .conftest import interval


class Outcome:
    def __init__(self) -> None:
        self.instances = 0
        self.failures: list[str] = []

    def expect(self, ok: bool, what: str) -> None:
        self.instances += 1
        if not ok:
            self.failures.append(what)

    def absorb(self, result: checks.CheckResult) -> None:
        self.instances += result.instances
        self.failures += [f"{result.name}: {f}" for f in result.failures]


@contextmanager
def criterion(capsys, number: int, title: str, limit: float):
    out = Outcome()
    start = time.perf_counter()
    try:
        yield out
    finally:
        seconds = time.perf_counter() - start
        ok = not out.failures and seconds < limit
        line = (f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {title}: "
                f"{out.instances} checks, {seconds:.2f}s (limit {limit:g}s)")
        if out.failures:
            line += f"; first failure: {out.failures[0]}"
        with capsys.disabled():
            print("\n" + line)
    assert not out.failures, out.failures[:5]
    assert seconds < limit, f"took {seconds:.2f}s, limit {limit}s"


def test_criterion_01_integral_table(capsys):
    a, b = Fraction(-2, 7), Fraction(3)
    table = [  # (function, int, int^np)
        (interval(None, None), -1, 1),
        (interval(None, b, ">=", "<"), -1, 0),
        (interval(None, b, ">=", "<="), 0, 1),
        (interval(a, b, ">=", "<="), 1, 1),
        (interval(a, b, ">", "<"), -1, -1),
        (interval(a, b, ">=", "<"), 0, 0),
    ]
    with criterion(capsys, 1, "1-D integral table", 1.0) as out:
        for phi, proper, nonproper in table:
            out.expect(integrate(phi) == proper, f"int {phi}")
            out.expect(integrate_np(phi) == nonproper, f"int^np {phi}")


def test_criterion_02_chi_projective(capsys):
    with criterion(capsys, 2, "chi(P^n) for n = 1, 2, 3", 1.0) as out:
        for n, chi in ((1, 0), (2, 1), (3, 0)):
            out.expect(integrate_proj(ProjectiveCF.constant(n)) == chi, f"P^{n}")


def test_criterion_03_duality_involution(capsys):
    with criterion(capsys, 3, "D o D = id", 60) as out:
        result = checks.check_duality_involution(random.Random(3), 100)
        out.absorb(result)
        assert result.instances >= 100


def test_criterion_04_duality_pushforward(capsys):
    with criterion(capsys, 4, "D int_f = int_f D on compact support", 60) as out:
        result = checks.check_duality_pushforward(random.Random(4), 50)
        out.absorb(result)
        assert result.instances >= 50


def test_criterion_05_base_change_and_projection(capsys):
    with criterion(capsys, 5, "base change and projection formula", 120) as out:
        bc = checks.check_base_change(random.Random(51), 25)
        pf = checks.check_projection_formula(random.Random(52), 25)
        out.absorb(bc)
        out.absorb(pf)
        assert bc.instances >= 25 and pf.instances >= 25


def test_criterion_06_kernel_associativity(capsys):
    with criterion(capsys, 6, "kernel associativity", 120) as out:
        result = checks.check_kernel_associativity(random.Random(6), 10)
        out.absorb(result)
        assert result.instances >= 10


def test_criterion_07_convolution(capsys):
    with criterion(capsys, 7, "convolution identities", 120) as out:
        # 25 pairs for unit, commutativity and the duality identity;
        # 25 triples for each of the two associativity laws
        result = checks.check_convolution(random.Random(7), 25, 25)
        out.absorb(result)
        assert result.instances >= 3 * 25 + 2 * 25


def test_criterion_08_gamma_projector(capsys):
    with criterion(capsys, 8, "gamma-projector idempotence", 120) as out:
        result = checks.check_gamma_projector(random.Random(8), 25)
        out.absorb(result)
        assert result.instances >= 1 + 2 * 2 * 25


def test_criterion_09_euler_formula(capsys):
    with criterion(capsys, 9, "Euler formula for polytopes, d = 1, 2, 3", 60) as out:
        result = checks.check_euler_formula(random.Random(9), 5)
        out.absorb(result)
        assert result.instances >= 15


def test_criterion_10_radon_inversion(capsys):
    corpus = gen.radon_corpus()
    with criterion(capsys, 10, "Radon inversion on P^2", 300) as out:
        assert len(corpus) >= 8
        for name, Phi in corpus.items():
            res = radon_invert_check(Phi, oversample=3)
            out.expect(res.equal, name)
            out.expect(res.rhs == -Phi + ProjectiveCF.constant(2, integrate_proj(Phi)), f"{name} rhs")
        out.expect(lambda_kernel_check(2, pairs=10) == (1, 0), "lambda kernel (a, b) = (1, 0)")
    assert any(v < 0 for v in corpus["weighted"].values.values())


def test_criterion_11_r3_slices(capsys):
    bodies = gen.bodies_r3()
    planes = gen.slicing_planes()
    with criterion(capsys, 11, "R^3 slice values against Betti numbers", 120) as out:
        assert len(bodies) >= 3 and len(planes) >= 5
        for name, body in bodies.items():
            for plane in planes:
                value = slice_eval_r3(body, plane)
                b = betti_slice(plane_section(body, plane))
                out.expect(value == b.b0 - b.b1, f"{name} on {plane}")
                out.expect(b.b1 == b.complement_components - 1, f"{name} complement on {plane}")


def test_criterion_12_oracles(capsys):
    rng = random.Random(12)
    with criterion(capsys, 12, "oracle equivalence", 600) as out:
        box = checks.check_oracle_duality(rng, 20)
        out.absorb(box)
        for n in (1, 2, 3):
            for m in range(1, 7):
                arr = gen.random_arrangement(rng, n, m)
                fast = {(c.signs, c.dim) for c in arr.cells}
                out.expect(fast == {(c.signs, c.dim) for c in naive_cells(arr)}, f"enumeration n={n} m={m}")
        for i in range(10):
            m = 2 if i % 3 else 3
            k = rng.randint(1, m - 1)
            phi = gen.random_cf(rng, m, max_forms=4 if m == 2 else 2)
            f = gen.random_surjection(rng, m, k)
            pushed = pushforward(phi, f, oversample=3, rng=rng)
            for _ in range(12):
                y = tuple(Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3))) for _ in range(k))
                out.expect(pushed(y) == fiber_integral(phi, f, y), f"pushforward {i} at {y}")
        out.expect(dual(interval(0, 1)) == -interval(0, 1, ">", "<"), "closed interval")
    assert box.instances >= 20
