"""Lefebvre's model of reflexive choice and its three-alternative extension.

Bipolar case: environment pressure ``x1``, past experience ``x2`` and
intention ``x3`` give the probability of choosing the positive pole as
``X = x1 + x3 (1 - x1)(1 - x2)``, which on Boolean inputs is the double
implication ``(x3 => x2) => x1``.  Reading the same formula in three-valued
probabilistic logic yields positive, negative and middle-way probabilities.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .formula import Implies, Atom, evaluate
from .likelihood import Likelihood

DOUBLE_IMPLICATION = Implies(Implies(Atom("x3"), Atom("x2")), Atom("x1"))


class TripolarOutcome(NamedTuple):
    positive: float
    negative: float
    middle: float


class Estimate(NamedTuple):
    """Expected choice probability; ``stderr`` is 0 for exact values."""

    mean: float | Fraction
    stderr: float
    n_samples: int | None = None


def _in_unit(name: str, v) -> None:
    if not 0 <= v <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


def bipolar_choice(x1, x2, x3):
    """Probability of the positive pole.  Works on floats, arrays or Fractions."""
    for name, v in (("x1", x1), ("x2", x2), ("x3", x3)):
        if np.ndim(v) == 0:
            _in_unit(name, v)
        elif np.any((np.asarray(v) < 0) | (np.asarray(v) > 1)):
            raise ValueError(f"{name} has entries outside [0, 1]")
    return x1 + x3 * (1 - x1) * (1 - x2)


def bipolar_expectation_exact() -> Fraction:
    # multilinear in independent inputs, so the mean is the value at the means
    half = Fraction(1, 2)
    return bipolar_choice(half, half, half)


def bipolar_montecarlo(n_samples: int, seed: int) -> Estimate:
    """Sample mean of ``X`` over independent uniform inputs.

    Draws an ``(n_samples, 3)`` block from ``numpy.random.default_rng(seed)``;
    columns are ``x1, x2, x3``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random((n_samples, 3))
    x = bipolar_choice(u[:, 0], u[:, 1], u[:, 2])
    stderr = float(x.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else math.nan
    return Estimate(float(x.mean()), stderr, n_samples)


def bipolar_uniform_expectation(mode: str = "analytic", n_samples: int | None = None,
                                seed: int | None = None) -> Estimate:
    if mode == "analytic":
        return Estimate(bipolar_expectation_exact(), 0.0)
    if mode == "montecarlo":
        if n_samples is None or seed is None:
            raise ValueError("montecarlo mode needs n_samples and seed")
        return bipolar_montecarlo(n_samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _triple(name: str, rho) -> Likelihood:
    if not isinstance(rho, Likelihood):
        rho = Likelihood(rho)
    if rho.k != 3:
        raise ValueError(f"{name} must be a three-valued likelihood, got k={rho.k}")
    return rho


def tripolar_choice(x1, x2, x3) -> TripolarOutcome:
    """Closed-form positive / negative / middle probabilities.

    ``x1, x2, x3`` are (T, U, F) likelihoods for pressure, experience and
    intention.
    """
    p1, _, p3 = _triple("x1", x1)
    q1, _, q3 = _triple("x2", x2)
    r1, _, r3 = _triple("x3", x3)
    positive = p1 + r1 * q3 - p1 * q3 * r1
    negative = p3 * (q1 + r3 - q1 * r3)
    return TripolarOutcome(positive, negative, 1.0 - positive - negative)


def tripolar_via_formula(x1, x2, x3) -> TripolarOutcome:
    """Same outcome, obtained by evaluating ``(x3 => x2) => x1`` on likelihoods."""
    env = {"x1": _triple("x1", x1), "x2": _triple("x2", x2), "x3": _triple("x3", x3)}
    t, u, f = evaluate(DOUBLE_IMPLICATION, env)
    return TripolarOutcome(t, f, u)


def tripolar_exact(x1: Sequence[Fraction], x2: Sequence[Fraction],
                   x3: Sequence[Fraction]) -> TripolarOutcome:
    """Closed form in exact rational arithmetic; inputs must each sum to 1."""
    for name, v in (("x1", x1), ("x2", x2), ("x3", x3)):
        if len(v) != 3 or sum(v) != 1 or min(v) < 0:
            raise ValueError(f"{name} must be three nonnegative fractions summing to 1")
    p1, _, p3 = x1
    q1, _, q3 = x2
    r1, _, r3 = x3
    positive = p1 + r1 * q3 - p1 * q3 * r1
    negative = p3 * (q1 + r3 - q1 * r3)
    return TripolarOutcome(positive, negative, 1 - positive - negative)
