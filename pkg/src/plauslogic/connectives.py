"""Logical connectives as admissible maps.

Truth classes are totally ordered, class 0 being the most true.  For any
arity ``k``: ``not`` reverses the order, ``and`` keeps the less true of its
two inputs (max index) and ``or`` the more true one (min index).  For k=2 and
k=3 these reproduce the classical and the three-valued (T, U, F) matrices.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .likelihood import AdmissibleMap, Likelihood

ENUMERATION_CAP = 10**6

CONNECTIVES = ("not", "and", "or", "implies")


class EnumerationTooLarge(ValueError):
    """Raised when a listing of admissible maps would exceed the size cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} admissible maps exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


def _check_arity(k: int) -> None:
    if k < 2:
        raise ValueError(f"arity must be at least 2, got {k}")


@dataclass(frozen=True)
class ClassFunction:
    """A total function from class-index tuples to an output class."""

    input_dims: tuple[int, ...]
    output_dim: int
    table: dict

    def __post_init__(self):
        object.__setattr__(self, "input_dims", tuple(self.input_dims))
        for tup in itertools.product(*(range(k) for k in self.input_dims)):
            if tup not in self.table:
                raise ValueError(f"class function undefined at {tup}")
            out = self.table[tup]
            if not 0 <= out < self.output_dim:
                raise ValueError(f"output {out} at {tup} outside [0, {self.output_dim})")

    @property
    def arity(self) -> int:
        return len(self.input_dims)

    def __call__(self, *classes: int) -> int:
        return self.table[tuple(classes)]

    def __hash__(self):
        return hash((self.input_dims, self.output_dim, tuple(sorted(self.table.items()))))

    @classmethod
    def from_callable(cls, fn: Callable[..., int], input_dims: Sequence[int],
                      output_dim: int) -> "ClassFunction":
        table = {tup: int(fn(*tup))
                 for tup in itertools.product(*(range(k) for k in input_dims))}
        return cls(tuple(input_dims), output_dim, table)

    @classmethod
    def from_boolean(cls, fn: Callable[..., bool], arity: int) -> "ClassFunction":
        """Wrap a function of booleans; class 0 is ``True``."""
        return cls.from_callable(
            lambda *cs: 0 if fn(*(c == 0 for c in cs)) else 1, (2,) * arity, 2)

    def to_json(self) -> str:
        return json.dumps({
            "inputDims": list(self.input_dims),
            "outputDim": self.output_dim,
            "table": {",".join(map(str, k)): v for k, v in sorted(self.table.items())},
        })

    @classmethod
    def from_json(cls, text: str) -> "ClassFunction":
        data = json.loads(text)
        table = {tuple(int(x) for x in key.split(",")): int(v)
                 for key, v in data["table"].items()}
        return cls(tuple(data["inputDims"]), int(data["outputDim"]), table)


def from_class_function(f: ClassFunction) -> AdmissibleMap:
    """Flatten ``f`` into a column map, first argument most significant."""
    targets = tuple(f.table[tup]
                    for tup in itertools.product(*(range(k) for k in f.input_dims)))
    return AdmissibleMap(math.prod(f.input_dims), f.output_dim, targets)


@lru_cache(maxsize=None)
def not_map(k: int) -> AdmissibleMap:
    _check_arity(k)
    return AdmissibleMap(k, k, tuple(k - 1 - i for i in range(k)))


@lru_cache(maxsize=None)
def and_map(k: int) -> AdmissibleMap:
    _check_arity(k)
    return from_class_function(ClassFunction.from_callable(max, (k, k), k))


@lru_cache(maxsize=None)
def or_map(k: int) -> AdmissibleMap:
    _check_arity(k)
    return from_class_function(ClassFunction.from_callable(min, (k, k), k))


@lru_cache(maxsize=None)
def implies_map(k: int) -> AdmissibleMap:
    _check_arity(k)
    return from_class_function(
        ClassFunction.from_callable(lambda i, j: min(k - 1 - i, j), (k, k), k))


def connective_map(name: str, k: int) -> AdmissibleMap:
    try:
        build = {"not": not_map, "and": and_map, "or": or_map, "implies": implies_map}[name]
    except KeyError:
        raise ValueError(f"unknown connective {name!r}; expected one of {CONNECTIVES}") from None
    return build(k)


def count_admissible(input_dim: int, output_dim: int) -> int:
    """Number of admissible ``output_dim x input_dim`` matrices, exactly."""
    return output_dim ** input_dim


def boolean_function_count(n_vars: int) -> int:
    """Admissible maps for ``n_vars`` Boolean propositions, i.e. ``2**(2**n_vars)``."""
    return count_admissible(2 ** n_vars, 2)


def enumerate_admissible(input_dim: int, output_dim: int,
                         cap: int = ENUMERATION_CAP) -> Iterator[AdmissibleMap]:
    """Iterate over every admissible map once, in lexicographic target order.

    Raises :class:`EnumerationTooLarge` up front when the count exceeds ``cap``.
    """
    count = count_admissible(input_dim, output_dim)
    if count > cap:
        raise EnumerationTooLarge(count, cap)
    return (AdmissibleMap(input_dim, output_dim, targets)
            for targets in itertools.product(range(output_dim), repeat=input_dim))


def lift_arity(rho: Likelihood, k: int) -> Likelihood:
    """Embed a 2-valued likelihood into ``k`` classes: true -> 0, false -> k-1.

    Intermediate classes get no mass.  This is one possible mixed-arity
    bridge, not a canonical one.
    """
    _check_arity(k)
    if rho.k != 2:
        raise ValueError(f"lift_arity expects a 2-valued likelihood, got k={rho.k}")
    probs = np.zeros(k)
    probs[0], probs[-1] = rho[0], rho[1]
    return Likelihood(probs)
