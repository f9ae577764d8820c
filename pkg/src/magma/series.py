"""Truncated formal series of planar trees in one generator ``t = |``."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .bialgebra import J, Endomorphism, convolution_tree
from .freemodule import UNIT, Element, _Combination, _parse_sum, format_sum, scalar
from .trees import (
    EMPTY,
    INFINITY,
    LEAF,
    ArityBound,
    PlanarTree,
    TreeError,
    TreeSyntaxError,
    check_bound,
    corolla,
    format_bound,
    format_tree,
    graft,
    iter_trees,
    substitute_leaves,
)


class TreeSeries(_Combination):
    """Coefficients on non-empty trees of degree at most ``degree``, within ``bound``."""

    __slots__ = ("bound", "degree")
    _extra_slots = ("bound", "degree")

    def __init__(self, terms: Mapping | list = (), degree: int = 1, bound: ArityBound = INFINITY):
        if degree < 1:
            raise ValueError("truncation degree must be >= 1")
        self.bound = check_bound(bound)
        self.degree = degree
        super().__init__(terms)

    def _check_key(self, key) -> None:
        if not isinstance(key, PlanarTree):
            raise TypeError(f"series keys are PlanarTree, got {type(key).__name__}")
        if key is EMPTY:
            raise TreeError("tree series have no constant term")
        if key.degree > self.degree:
            raise TreeError(f"tree {format_tree(key)} is above the truncation degree {self.degree}")
        if key.max_arity > self.bound:
            raise TreeError(f"tree {format_tree(key)} violates arity bound {format_bound(self.bound)}")

    def truncate(self, degree: int) -> TreeSeries:
        return TreeSeries._from_dict({t: c for t, c in self.items() if t.degree <= degree},
                                     self.bound, degree)

    def homogeneous(self, d: int) -> dict[PlanarTree, object]:
        return {t: c for t, c in self.items() if t.degree == d}

    def sorted_items(self):
        return sorted(self.items(), key=lambda kv: kv[0].key)

    def __str__(self) -> str:
        return format_sum([(format_tree(t), False, c) for t, c in self.sorted_items()])


def generator(degree: int, bound: ArityBound = INFINITY) -> TreeSeries:
    """The series ``t``."""
    return TreeSeries({LEAF: 1}, degree, bound)


def f_series(degree: int, bound: ArityBound = INFINITY) -> TreeSeries:
    """Sum of every tree up to ``degree``."""
    return TreeSeries({t: 1 for t in iter_trees(degree, bound)}, degree, bound)


def g_series(degree: int, bound: ArityBound = INFINITY) -> TreeSeries:
    """``t`` minus every corolla of arity 2..min(degree, bound)."""
    terms = {LEAF: 1}
    for n in range(2, int(min(degree, bound)) + 1):
        terms[corolla(n)] = -1
    return TreeSeries(terms, degree, bound)


def compose(phi: TreeSeries, psi: TreeSeries, degree: Optional[int] = None) -> TreeSeries:
    """Substitute ``psi`` at every leaf of every tree of ``phi``; keep degrees <= ``degree``."""
    if phi.bound != psi.bound:
        raise TreeError(f"bound mismatch: {format_bound(phi.bound)} vs {format_bound(psi.bound)}")
    D = min(phi.degree, psi.degree) if degree is None else degree
    by_degree: dict[int, list] = {}
    for u, b in psi.sorted_items():
        by_degree.setdefault(u.degree, []).append((u, b))
    if not by_degree:
        return TreeSeries._from_dict({}, phi.bound, D)
    low = min(by_degree)
    pieces = sorted(by_degree.items())
    acc: dict = {}
    for T, a in phi.sorted_items():
        n = T.degree
        if n * low > D:
            continue

        def fill(i: int, budget: int, chosen: list, coef) -> None:
            if i == n:
                s = substitute_leaves(T, chosen)
                acc[s] = acc.get(s, 0) + coef
                return
            slack = budget - (n - i - 1) * low
            for d, entries in pieces:
                if d > slack:
                    break
                for u, b in entries:
                    chosen.append(u)
                    fill(i + 1, budget - d, chosen, coef * b)
                    chosen.pop()

        fill(0, D, [], a)
    return TreeSeries._from_dict({t: scalar(v) for t, v in acc.items() if v}, phi.bound, D)


def invert(phi: TreeSeries, degree: Optional[int] = None) -> TreeSeries:
    """The compositional inverse, solved one degree at a time."""
    D = phi.degree if degree is None else degree
    lead = phi.coefficient(LEAF)
    if not lead:
        raise ZeroDivisionError("series without a t term has no compositional inverse")
    inv_lead = scalar(Fraction(1) / Fraction(lead))
    phi = phi.truncate(min(D, phi.degree))
    terms = {LEAF: inv_lead}
    for n in range(2, D + 1):
        current = TreeSeries._from_dict(dict(terms), phi.bound, n)
        defect = compose(phi, current, n).homogeneous(n)
        for t, c in defect.items():
            terms[t] = scalar(-c * inv_lead)
    return TreeSeries._from_dict({t: c for t, c in terms.items() if c}, phi.bound, D)


#: ⋆_T(J) depends only on T and the bound, so it is shared between calls
_J_CACHE: dict[ArityBound, dict] = {}


def to_endomorphism(phi: TreeSeries, base: Endomorphism = J) -> Endomorphism:
    """``phi^⋆(base) = sum_T a_T ⋆_T(base)``; with the default base ``J`` this is the series' image."""
    cache = _J_CACHE.setdefault(phi.bound, {}) if base is J else {}
    trees = [(T, a, convolution_tree(T, base, phi.bound, cache)) for T, a in phi.sorted_items()]
    # an augmented base makes ⋆_T(base) vanish on trees whose root arity differs from T's
    augmented = not base.on_basis(UNIT)
    by_arity: dict[int, list] = {}
    for entry in trees:
        by_arity.setdefault(entry[0].arity, []).append(entry)

    def on_basis(b) -> Element:
        acc: dict = {}
        if not augmented:
            active = trees
        elif b.shape.arity:
            active = by_arity.get(0, []) + by_arity.get(b.shape.arity, [])
        else:
            active = by_arity.get(0, [])
        for _, a, f in active:
            for k, v in f.on_basis(b).items():
                acc[k] = acc.get(k, 0) + a * v
        return Element._from_dict({k: scalar(v) for k, v in acc.items() if v})

    return Endomorphism(on_basis, f"({phi})^⋆({base.name})")


def _read_tree(text: str, p: int) -> tuple[PlanarTree, int]:
    n = len(text)
    if p >= n:
        raise TreeSyntaxError("unexpected end of input", text, p)
    if text[p] == "|":
        return LEAF, p + 1
    if text[p] != "(":
        raise TreeSyntaxError(f"expected '|' or '(', found {text[p]!r}", text, p)
    start = p
    p += 1
    kids = []
    while True:
        q = p
        while q < n and text[q] == " ":
            q += 1
        if q < n and text[q] == ")":
            p = q + 1
            break
        if q >= n:
            raise TreeSyntaxError("unclosed '('", text, start)
        if kids and q == p:
            raise TreeSyntaxError("children must be separated by spaces", text, q)
        child, p = _read_tree(text, q)
        kids.append(child)
    if len(kids) < 2:
        raise TreeSyntaxError("a node needs at least 2 children", text, start)
    return graft(kids), p


def parse_series(text: str, degree: Optional[int] = None, bound: ArityBound = INFINITY) -> TreeSeries:
    """Parse e.g. ``"| - (| |) - 2*(| | |)"``; ``degree`` defaults to the largest tree present."""
    terms = _parse_sum(text, _read_tree)
    top = max((t.degree for t, _ in terms), default=1)
    return TreeSeries(terms, top if degree is None else max(degree, 1), bound)
