"""Diagonal Lindblad dynamics of an ``n``-mode fermionic register.

With zero Hamiltonian and monomial jump operators the diagonal of the density
matrix obeys closed classical rate equations over the ``2**n`` occupation
states.  A jump operator ``sqrt(rate/2) * prod(f_i^+) prod(f_j) prod(N_l)``
moves probability between exactly one pair of occupation states per source
state, with transition rate ``2 |<m|R|s>|^2 = rate``.

States are indexed by their occupation bits read as a binary number, mode 0
being the most significant bit.  Occupation 1 is the truth class "true".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from .likelihood import Likelihood

MAX_MODES = 12
STATIONARY_TOL = 1e-10
DEFAULT_MAX_TIME = 1e8


class ConvergenceError(RuntimeError):
    """The trajectory did not reach a stationary state within the time budget."""


@dataclass(frozen=True)
class JumpOperator:
    """Monomial jump operator ``sqrt(rate/2) * f^+_create f_annihilate N_control``."""

    rate: float
    create: frozenset[int] = frozenset()
    annihilate: frozenset[int] = frozenset()
    control: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("create", "annihilate", "control"):
            object.__setattr__(self, name, frozenset(int(i) for i in getattr(self, name)))
        if not np.isfinite(self.rate) or self.rate < 0:
            raise ValueError(f"rate must be finite and nonnegative, got {self.rate!r}")
        if (self.create & self.annihilate) or (self.create & self.control) \
                or (self.annihilate & self.control):
            raise ValueError("create, annihilate and control sites must be disjoint")
        if any(i < 0 for i in self.sites):
            raise ValueError("mode indices must be nonnegative")

    @property
    def sites(self) -> frozenset[int]:
        return self.create | self.annihilate | self.control

    def to_dict(self) -> dict:
        return {"rate": self.rate, "create": sorted(self.create),
                "annihilate": sorted(self.annihilate), "control": sorted(self.control)}

    @classmethod
    def from_dict(cls, data: dict) -> "JumpOperator":
        return cls(float(data["rate"]), frozenset(data.get("create", ())),
                   frozenset(data.get("annihilate", ())), frozenset(data.get("control", ())))


def _bit(state: int, site: int, n: int) -> int:
    return (state >> (n - 1 - site)) & 1


def _mask(sites: Iterable[int], n: int) -> int:
    m = 0
    for s in sites:
        m |= 1 << (n - 1 - s)
    return m


def state_index(bits: Sequence[int]) -> int:
    """Index of an occupation bit vector, mode 0 most significant."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def state_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple(_bit(index, i, n) for i in range(n))


@dataclass(frozen=True)
class RateModel:
    """Generator ``Q`` of ``dp/dt = Q p``; ``Q[m, s]`` is the rate ``s -> m``."""

    n: int
    generator: np.ndarray = field(repr=False)

    def __post_init__(self):
        q = np.array(self.generator, dtype=float)
        if q.shape != (2 ** self.n, 2 ** self.n):
            raise ValueError(f"generator must be {2 ** self.n}x{2 ** self.n}")
        if not np.all(np.isfinite(q)):
            raise ValueError("generator has non-finite rates")
        off = q - np.diag(np.diag(q))
        if np.any(off < 0):
            raise ValueError("off-diagonal rates must be nonnegative")
        if not np.allclose(q.sum(axis=0), 0.0, atol=1e-12 * max(1.0, np.abs(q).max())):
            raise ValueError("generator columns must sum to zero")
        q.setflags(write=False)
        object.__setattr__(self, "generator", q)

    @property
    def n_states(self) -> int:
        return 2 ** self.n

    @property
    def max_rate(self) -> float:
        return float(np.max(-np.diag(self.generator), initial=0.0))

    def rate(self, target: Sequence[int], source: Sequence[int]) -> float:
        """Transition rate between two occupation bit vectors."""
        return float(self.generator[state_index(target), state_index(source)])


def build_rate_model(ops: Sequence[JumpOperator], n: int) -> RateModel:
    """Assemble the gain/loss generator of a set of jump operators on ``n`` modes."""
    if not 1 <= n <= MAX_MODES:
        raise ValueError(f"number of modes must be in [1, {MAX_MODES}], got {n}")
    q = np.zeros((2 ** n, 2 ** n))
    for op in ops:
        bad = [i for i in op.sites if i >= n]
        if bad:
            raise ValueError(f"mode index {bad[0]} out of range for n={n}")
        need_full = _mask(op.annihilate | op.control, n)
        need_empty = _mask(op.create, n)
        flip = _mask(op.create | op.annihilate, n)
        for s in range(2 ** n):
            if (s & need_full) == need_full and (s & need_empty) == 0:
                target = s ^ flip
                if target == s:
                    # pure number operator: diagonal in the occupation basis, no flow
                    continue
                q[target, s] += op.rate
                q[s, s] -= op.rate
    return RateModel(n, q)


def _check_distribution(p0, n_states: int, tol: float = 1e-9) -> np.ndarray:
    p = np.asarray(p0, dtype=float).ravel()
    if p.size != n_states:
        raise ValueError(f"distribution must have {n_states} entries, got {p.size}")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError("distribution entries must be finite and nonnegative")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    return p


def _propagate(q: np.ndarray, p: np.ndarray, t: float) -> np.ndarray:
    out = expm(q * t) @ p
    # expm may leave negatives at rounding level
    return np.clip(out, 0.0, None)


def evolve(model: RateModel, p0, t: float) -> np.ndarray:
    """Distribution at time ``t`` of ``dp/dt = Q p`` started from ``p0``."""
    if not np.isfinite(t) or t < 0:
        raise ValueError(f"duration must be finite and nonnegative, got {t!r}")
    p = _check_distribution(p0, model.n_states)
    if t == 0 or not np.any(model.generator):
        return p.copy()
    return _propagate(model.generator, p, t)


@dataclass(frozen=True)
class SteadyState:
    """Stationary distribution reached from a given start, with diagnostics."""

    p: np.ndarray
    time: float
    residual: float
    steps: int

    def marginal(self, site: int) -> Likelihood:
        return marginal(self.p, site)


def stationary(model: RateModel, p0, tol: float = STATIONARY_TOL,
               max_time: float = DEFAULT_MAX_TIME) -> SteadyState:
    """Follow the trajectory from ``p0`` until ``||Q p||_1 < tol``.

    The limit generally depends on ``p0``: gates such as the AND/OR
    generator leave whole sectors invariant.  Time steps start at the
    shortest relaxation scale and double, so slow modes are reached in a
    logarithmic number of steps.
    """
    q = model.generator
    p = _check_distribution(p0, model.n_states)
    rate = model.max_rate
    dt = 1.0 / rate if rate > 0 else 1.0
    t = 0.0
    steps = 0
    while True:
        residual = float(np.abs(q @ p).sum())
        if residual < tol:
            return SteadyState(p, t, residual, steps)
        if t >= max_time:
            raise ConvergenceError(
                f"no stationary state by t={t:g} (residual {residual:.3g} >= {tol:g})")
        dt = min(dt, max_time - t)
        p = _propagate(q, p, dt)
        t += dt
        steps += 1
        dt *= 2.0


def marginal(p, site: int) -> Likelihood:
    """Two-valued likelihood of one mode: class 0 is ``P(N_site = 1)``."""
    p = np.asarray(p, dtype=float)
    n = int(round(np.log2(p.size)))
    if 2 ** n != p.size:
        raise ValueError(f"distribution length {p.size} is not a power of two")
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for n={n}")
    occupied = np.array([_bit(s, site, n) for s in range(p.size)], dtype=bool)
    p_true = float(p[occupied].sum())
    p_false = float(p[~occupied].sum())
    return Likelihood((p_true, p_false))


def to_likelihood(p) -> Likelihood:
    """Reorder an occupation distribution into a tensor-product likelihood.

    Reversing the binary index maps "all modes occupied" to class index 0,
    which is how :func:`~plauslogic.likelihood.tensor` lays out the product
    of per-mode likelihoods.
    """
    return Likelihood(np.asarray(p, dtype=float)[::-1])


# -- the paper's two-mode circuits ---------------------------------------------

def preparation_ops(a: float, b: float, c: float, d: float) -> list[JumpOperator]:
    """Pumping and loss on both modes: ``f1^+``, ``f2^+``, ``f1``, ``f2``."""
    return [JumpOperator(a, create={0}), JumpOperator(b, create={1}),
            JumpOperator(c, annihilate={0}), JumpOperator(d, annihilate={1})]


def and_or_ops(rate: float = 1.0, swapped: bool = False) -> list[JumpOperator]:
    """Hopping ``f2^+ f1`` (mode 0 to mode 1), or the reverse when ``swapped``."""
    if swapped:
        return [JumpOperator(rate, create={0}, annihilate={1})]
    return [JumpOperator(rate, create={1}, annihilate={0})]


def copy_ops(a: float = 1.0, b: float = 1.0) -> list[JumpOperator]:
    """Controlled filling ``f2^+ N1`` and ``f1^+ N2``."""
    return [JumpOperator(a, create={1}, control={0}), JumpOperator(b, create={0}, control={1})]


def product_closed_form(a: float, b: float, c: float, d: float) -> np.ndarray:
    """Stationary distribution of the preparation generator, in index order 00, 01, 10, 11."""
    norm = (a + c) * (b + d)
    return np.array([c * d, b * c, a * d, a * b]) / norm


def resolve_rates(p: float | None, q: float | None, rates) -> tuple[float, float, float, float]:
    if rates is not None:
        a, b, c, d = (float(x) for x in rates)
        if min(a, b, c, d) < 0:
            raise ValueError("rates must be nonnegative")
    else:
        if p is None or q is None:
            raise ValueError("give either p and q or four rates")
        for name, v in (("p", p), ("q", q)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        a, c, b, d = p, 1.0 - p, q, 1.0 - q
    if a + c <= 0 or b + d <= 0:
        raise ValueError("degenerate rates: need a + c > 0 and b + d > 0")
    return a, b, c, d


def prepare_product(p: float | None = None, q: float | None = None, *, rates=None,
                    tol: float = STATIONARY_TOL, check_tol: float = 1e-8) -> np.ndarray:
    """Prepare ``rho(A) (x) rho(B)`` as the stationary state of the pumping generator.

    Either probabilities ``p, q`` (mapped to rates ``a=p, c=1-p, b=q, d=1-q``)
    or explicit ``rates=(a, b, c, d)``.  The simulated state is checked
    against the closed form before it is returned.
    """
    a, b, c, d = resolve_rates(p, q, rates)
    model = build_rate_model(preparation_ops(a, b, c, d), 2)
    result = stationary(model, np.full(4, 0.25), tol=tol)
    expected = product_closed_form(a, b, c, d)
    err = float(np.abs(result.p - expected).max())
    if err > check_tol:
        raise ConvergenceError(f"prepared state deviates from the product form by {err:.3g}")
    return result.p


def gate_and_or(p: float, q: float, swapped: bool = False, rate: float = 1.0,
                tol: float = STATIONARY_TOL) -> tuple[Likelihood, Likelihood]:
    """Run the hopping gate on the prepared product state.

    Returns the two single-mode likelihoods: (AND, OR), or (OR, AND) when
    ``swapped``.
    """
    p0 = prepare_product(p, q, tol=tol)
    result = stationary(build_rate_model(and_or_ops(rate, swapped), 2), p0, tol=tol)
    return result.marginal(0), result.marginal(1)


def gate_copy(p: float, q: float, a: float = 1.0, b: float = 1.0,
              tol: float = STATIONARY_TOL) -> tuple[Likelihood, Likelihood]:
    """Run the copy gate; both modes end up holding ``A or B``."""
    p0 = prepare_product(p, q, tol=tol)
    result = stationary(build_rate_model(copy_ops(a, b), 2), p0, tol=tol)
    return result.marginal(0), result.marginal(1)


def load_gate_spec(text: str) -> tuple[int, list[JumpOperator]]:
    """Parse ``{"n": 2, "ops": [{"rate": ..., "create": [...], ...}]}``."""
    data = json.loads(text)
    try:
        n = int(data["n"])
        ops = [JumpOperator.from_dict(o) for o in data["ops"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed gate spec: {exc}") from None
    return n, ops


def dump_gate_spec(n: int, ops: Sequence[JumpOperator]) -> str:
    return json.dumps({"n": n, "ops": [o.to_dict() for o in ops]})
