"""Exit criteria, one test per criterion.

Each test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them at the end of the session.
"""

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from plauslogic import (
    Likelihood,
    and_map,
    apply,
    count_admissible,
    enumerate_admissible,
    evaluate,
    implies_map,
    matrix_form,
    not_map,
    or_map,
    parse,
    tensor,
)
from plauslogic import lefebvre as lf
from plauslogic import lindblad as lb

from . import oracles
from .test_connectives import PAPER_G_AND, PAPER_G_IMP, PAPER_G_OR

RESULTS: dict[str, str] = {}
N_RANDOM = 1000


@contextmanager
def criterion(key, title):
    try:
        yield
    except BaseException as exc:
        RESULTS[key] = f"FAIL  {key}: {title} -- {type(exc).__name__}: {str(exc).splitlines()[0][:120]}"
        raise
    RESULTS[key] = f"PASS  {key}: {title}"


def rand_likelihoods(rng, k, n):
    return [Likelihood(w) for w in rng.dirichlet(np.ones(k), size=n)]


def test_ac1_connective_closed_forms():
    with criterion("AC1", "A and B / A or B match pq and p+q-pq to 1e-12 (1000 draws, < 1 s)"):
        rng = np.random.default_rng(1)
        fa, fo = parse("A and B"), parse("A or B")
        start = time.perf_counter()
        worst = 0.0
        for p, q in rng.uniform(0, 1, (N_RANDOM, 2)):
            env = {"A": Likelihood.boolean(p), "B": Likelihood.boolean(q)}
            worst = max(worst,
                        np.abs(evaluate(fa, env).probs - [p * q, 1 - p * q]).max(),
                        np.abs(evaluate(fo, env).probs - [p + q - p * q, (1 - p) * (1 - q)]).max())
        elapsed = time.perf_counter() - start
        assert worst <= 1e-12, worst
        assert elapsed < 1.0, elapsed


def test_ac2_three_valued_matrices():
    with criterion("AC2", "3-valued G_and/G_or/G_imp exact; push-forwards match closed forms to 1e-12"):
        np.testing.assert_array_equal(matrix_form(and_map(3)), PAPER_G_AND)
        np.testing.assert_array_equal(matrix_form(or_map(3)), PAPER_G_OR)
        np.testing.assert_array_equal(matrix_form(implies_map(3)), PAPER_G_IMP)
        rng = np.random.default_rng(2)
        xs, ys = rand_likelihoods(rng, 3, N_RANDOM), rand_likelihoods(rng, 3, N_RANDOM)
        worst = 0.0
        for a, b in zip(xs, ys):
            p1, p2, p3 = a
            q1, q2, q3 = b
            ab = tensor(a, b)
            worst = max(
                worst,
                np.abs(apply(and_map(3), ab).probs
                       - [p1 * q1, p1 * q2 + p2 * q1 + p2 * q2, p3 + q3 - p3 * q3]).max(),
                np.abs(apply(or_map(3), ab).probs
                       - [p1 + q1 - p1 * q1, p2 * q2 + p2 * q3 + p3 * q2, p3 * q3]).max(),
                np.abs(apply(implies_map(3), ab).probs
                       - [p3 + q1 - p3 * q1, p2 * q2 + p2 * q3 + p1 * q2, p1 * q3]).max())
        assert worst <= 1e-12, worst


def test_ac3_logic_restrictions():
    with criterion("AC3", "Boolean tables; Lukasiewicz not/and/or, implies as (not A) or B; zero mismatches"):
        mismatches = []
        boolean = {"and": (and_map(2), lambda a, b: a and b),
                   "or": (or_map(2), lambda a, b: a or b),
                   "implies": (implies_map(2), lambda a, b: (not a) or b)}
        for name, (g, fn) in boolean.items():
            for a, b in itertools.product((True, False), repeat=2):
                out = apply(g, tensor(Likelihood.deterministic(0 if a else 1, 2),
                                      Likelihood.deterministic(0 if b else 1, 2)))
                if out != Likelihood.deterministic(0 if fn(a, b) else 1, 2):
                    mismatches.append(("bool", name, a, b))
        for a in (True, False):
            out = apply(not_map(2), Likelihood.deterministic(0 if a else 1, 2))
            if out != Likelihood.deterministic(1 if a else 0, 2):
                mismatches.append(("bool", "not", a))

        # implication is "not A or B", so its table is the composition of the
        # Lukasiewicz negation and disjunction tables
        luk = {"and": (and_map(3), oracles.luk_and),
               "or": (or_map(3), oracles.luk_or),
               "implies": (implies_map(3), lambda a, b: oracles.luk_or(oracles.luk_not(a), b))}
        for name, (g, fn) in luk.items():
            for a, b in itertools.product(range(3), repeat=2):
                out = apply(g, tensor(Likelihood.deterministic(a, 3), Likelihood.deterministic(b, 3)))
                if out != Likelihood.deterministic(fn(a, b), 3):
                    mismatches.append(("luk", name, a, b))
        for a in range(3):
            if apply(not_map(3), Likelihood.deterministic(a, 3)) != \
                    Likelihood.deterministic(oracles.luk_not(a), 3):
                mismatches.append(("luk", "not", a))
        assert mismatches == []


def test_ac4_de_morgan_and_excluded_middle():
    with criterion("AC4", "De Morgan laws to 1e-12 for k=2,3; A or not A at p=0.5 is 0.75"):
        rng = np.random.default_rng(4)
        for k in (2, 3):
            n = not_map(k)
            for a, b in zip(rand_likelihoods(rng, k, N_RANDOM), rand_likelihoods(rng, k, N_RANDOM)):
                lhs = apply(n, apply(and_map(k), tensor(a, b)))
                rhs = apply(or_map(k), tensor(apply(n, a), apply(n, b)))
                assert np.abs(lhs.probs - rhs.probs).max() <= 1e-12
                lhs = apply(n, apply(or_map(k), tensor(a, b)))
                rhs = apply(and_map(k), tensor(apply(n, a), apply(n, b)))
                assert np.abs(lhs.probs - rhs.probs).max() <= 1e-12
        em = evaluate("A or not A", {"A": Likelihood.boolean(0.5)})
        assert em.probs[0] == pytest.approx(0.75, abs=1e-15)
        assert em.probs[0] != 1.0


def test_ac5_counting():
    with criterion("AC5", "2^(2^N) counts for N=1..6, exhaustive N<=3, A_{N+1}=A_N^2"):
        expected = [4, 16, 256, 65536, 2 ** 32, 2 ** 64]
        counts = [count_admissible(2 ** n, 2) for n in range(1, 7)]
        assert counts == expected
        for n in (1, 2, 3):
            listed = {g.targets for g in enumerate_admissible(2 ** n, 2)}
            assert len(listed) == expected[n - 1]
        a = [count_admissible(2 ** n, 2) for n in range(0, 7)]
        assert all(a[n + 1] == a[n] ** 2 for n in range(6))


def test_ac6_lindblad_preparation():
    with criterion("AC6", "prepared stationary state = closed form and product to 1e-8 (100 draws, < 5 s)"):
        rng = np.random.default_rng(6)
        start = time.perf_counter()
        for a, b, c, d in rng.uniform(0.01, 10, (100, 4)):
            model = lb.build_rate_model(lb.preparation_ops(a, b, c, d), 2)
            res = lb.stationary(model, rng.dirichlet(np.ones(4)))
            norm = (a + c) * (b + d)
            closed = {(0, 0): c * d / norm, (0, 1): b * c / norm,
                      (1, 0): a * d / norm, (1, 1): a * b / norm}
            for bits, v in closed.items():
                assert abs(res.p[lb.state_index(bits)] - v) <= 1e-8
            m1, m2 = res.marginal(0), res.marginal(1)
            product = lb.to_likelihood(res.p).probs
            assert np.abs(product - tensor(m1, m2).probs).max() <= 1e-8
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, elapsed


def test_ac7_gate_equivalence():
    with criterion("AC7", "AND/OR, swapped and copy gates to 1e-8; conserved sectors drift < 1e-9"):
        rng = np.random.default_rng(7)
        for p, q in rng.uniform(0, 1, (100, 2)):
            and_expect = [p * q, 1 - p * q]
            or_expect = [p + q - p * q, (1 - p) * (1 - q)]
            first, second = lb.gate_and_or(p, q)
            assert np.abs(first.probs - and_expect).max() <= 1e-8
            assert np.abs(second.probs - or_expect).max() <= 1e-8
            first, second = lb.gate_and_or(p, q, swapped=True)
            assert np.abs(first.probs - or_expect).max() <= 1e-8
            assert np.abs(second.probs - and_expect).max() <= 1e-8
            c1, c2 = lb.gate_copy(p, q)
            assert np.abs(c1.probs - or_expect).max() <= 1e-8
            assert np.abs(c2.probs - or_expect).max() <= 1e-8

        model = lb.build_rate_model(lb.and_or_ops(1.0), 2)
        for p, q in rng.uniform(0, 1, (10, 2)):
            p0 = lb.prepare_product(p, q)
            for t in np.linspace(0, 50, 26):
                pt = lb.evolve(model, p0, t)
                assert abs(pt[lb.state_index((0, 0))] - p0[lb.state_index((0, 0))]) < 1e-9
                assert abs(pt[lb.state_index((1, 1))] - p0[lb.state_index((1, 1))]) < 1e-9


def test_ac8_lefebvre_numbers():
    with criterion("AC8", "5/8 exact, MC within 3 SE, 11/27 5/27 11/27, closed form = formula (< 2 s)"):
        start = time.perf_counter()
        assert lf.bipolar_uniform_expectation("analytic").mean == Fraction(5, 8)
        est = lf.bipolar_uniform_expectation("montecarlo", n_samples=100_000, seed=2024)
        assert abs(est.mean - 0.625) <= 3 * est.stderr
        third = [1 / 3] * 3
        x, y, z = lf.tripolar_choice(third, third, third)
        assert abs(x - 11 / 27) <= 1e-12 and abs(y - 5 / 27) <= 1e-12 and abs(z - 11 / 27) <= 1e-12
        rng = np.random.default_rng(8)
        for a, b, c in zip(*(rand_likelihoods(rng, 3, N_RANDOM) for _ in range(3))):
            closed = lf.tripolar_choice(a, b, c)
            via = lf.tripolar_via_formula(a, b, c)
            assert max(abs(u - v) for u, v in zip(closed, via)) <= 1e-12
        elapsed = time.perf_counter() - start
        assert elapsed < 2.0, elapsed


def test_ac9_exponential_decay():
    with criterion("AC9", "copy-gate rho_10(t) = rho_10(0) exp(-a t) within 1e-6 relative"):
        for a in (0.37, 1.0, 4.2):
            model = lb.build_rate_model(lb.copy_ops(a, 1.3), 2)
            p0 = lb.prepare_product(0.4, 0.3)
            i10 = lb.state_index((1, 0))
            for t in (0.1 / a, 1 / a, 5 / a):
                pt = lb.evolve(model, p0, t)
                rel = abs(pt[i10] / p0[i10] - math.exp(-a * t)) / math.exp(-a * t)
                assert rel <= 1e-6, (a, t, rel)
