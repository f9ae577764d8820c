"""Seeded pseudo-random elements and series.

Draws come from numpy's Philox counter-based generator seeded with the
user's integer seed, so a given seed reproduces the same sample on every
platform.  Every draw is converted to a Python ``int`` before use.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .algebra import MagAlgebra
from .freemodule import UNIT, Element, labelled, scalar
from .series import TreeSeries
from .trees import ArityBound, enumerate_trees, iter_trees


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _int(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def random_scalar(rng: np.random.Generator, size: int = 4):
    num = 0
    while num == 0:
        num = _int(rng, -size, size)
    return scalar(Fraction(num, _int(rng, 1, 3)))


def random_element(H: MagAlgebra, rng: np.random.Generator, max_degree: int,
                   max_terms: int = 4, unit_chance: float = 0.2) -> Element:
    terms = {}
    for _ in range(_int(rng, 1, max_terms)):
        d = _int(rng, 1, max_degree)
        shapes = enumerate_trees(d, H.bound)
        shape = shapes[_int(rng, 0, len(shapes) - 1)]
        word = tuple(H.alphabet[_int(rng, 0, len(H.alphabet) - 1)] for _ in range(d))
        b = labelled(shape, word)
        terms[b] = terms.get(b, 0) + random_scalar(rng)
    if float(rng.random()) < unit_chance:
        terms[UNIT] = random_scalar(rng)
    return Element(terms)


def random_series(bound: ArityBound, degree: int, rng: np.random.Generator,
                  density: float = 0.3) -> TreeSeries:
    terms = {}
    for t in iter_trees(degree, bound):
        if t.degree == 1 or float(rng.random()) < density:
            terms[t] = random_scalar(rng, 3)
    return TreeSeries(terms, degree, bound)
