"""Seeded random propositional formula generation.

A (params, index) pair fully determines the generated formula, so corpora are
reproducible and suites can shard instance indices across workers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .syntax import Atom, BOT, Box, Formula, And, Implies, Or

CONNECTIVES: tuple[str, ...] = ("leaf", "not", "and", "or", "implies", "box")

DEFAULT_WEIGHTS: tuple[tuple[str, float], ...] = (
    ("leaf", 4.0),
    ("not", 2.0),
    ("and", 2.0),
    ("or", 2.0),
    ("implies", 3.0),
    ("box", 2.0),
)


@dataclass(frozen=True)
class GenParams:
    """Generator parameters; atoms are named p0 .. p{num_atoms-1}."""

    seed: int
    max_depth: int = 5
    num_atoms: int = 4
    allow_box: bool = False
    connective_weights: tuple[tuple[str, float], ...] = DEFAULT_WEIGHTS

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        if self.num_atoms < 1:
            raise ValueError("num_atoms must be at least 1")
        if isinstance(self.connective_weights, Mapping):
            object.__setattr__(
                self, "connective_weights", tuple(sorted(self.connective_weights.items()))
            )
        else:
            object.__setattr__(self, "connective_weights", tuple(self.connective_weights))
        seen = set()
        positive = False
        for name, weight in self.connective_weights:
            if name not in CONNECTIVES:
                raise ValueError(f"unknown connective {name!r}, expected one of {', '.join(CONNECTIVES)}")
            if name in seen:
                raise ValueError(f"duplicate weight for {name!r}")
            seen.add(name)
            if weight < 0:
                raise ValueError("weights must be nonnegative")
            positive = positive or weight > 0
        if not positive:
            raise ValueError("at least one weight must be positive")

    def weight_of(self, name: str) -> float:
        for key, weight in self.connective_weights:
            if key == name:
                return weight
        return 0.0


def _leaf(rng: random.Random, params: GenParams) -> Formula:
    i = rng.randrange(params.num_atoms + 1)
    if i == params.num_atoms:
        return BOT
    return Atom(f"p{i}")


def _gen(rng: random.Random, depth: int, params: GenParams) -> Formula:
    if depth <= 0:
        return _leaf(rng, params)
    names = ["leaf", "not", "and", "or", "implies"]
    if params.allow_box:
        names.append("box")
    weights = [params.weight_of(n) for n in names]
    if sum(weights) <= 0:
        return _leaf(rng, params)
    pick = rng.choices(names, weights=weights, k=1)[0]
    if pick == "leaf":
        return _leaf(rng, params)
    if pick == "not":
        return Implies(_gen(rng, depth - 1, params), BOT)
    if pick == "box":
        return Box(_gen(rng, depth - 1, params))
    left = _gen(rng, depth - 1, params)
    right = _gen(rng, depth - 1, params)
    if pick == "and":
        return And(left, right)
    if pick == "or":
        return Or(left, right)
    return Implies(left, right)


def gen_formula(params: GenParams, index: int) -> Formula:
    """Generate the index-th formula of the corpus determined by params."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    rng = random.Random(params.seed * 2**64 + index)
    return _gen(rng, params.max_depth, params)
