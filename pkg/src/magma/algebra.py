"""The free m-magmatic algebra Mag^m(V) on labelled planar trees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Mapping, Sequence, Union

from .freemodule import (
    UNIT,
    Element,
    LabelledTree,
    graft_labelled,
    labelled,
    leaf_tree,
    scalar,
)
from .trees import EMPTY, INFINITY, LEAF, ArityBound, PlanarTree, TreeError, check_bound, enumerate_trees, format_bound

LabelMap = Union[Mapping[str, Element], Callable[[str], Element]]


def _check_arity(n: int, bound: ArityBound) -> None:
    if n < 2:
        raise TreeError(f"operations have arity >= 2, got {n}")
    if n > bound:
        raise TreeError(f"arity {n} exceeds bound {format_bound(bound)}")


def mu_basis(bs: Sequence[LabelledTree]) -> LabelledTree:
    """Graft basis trees, dropping units; one survivor is returned as is, none gives the unit."""
    kept = [b for b in bs if b.shape is not EMPTY]
    if not kept:
        return UNIT
    if len(kept) == 1:
        return kept[0]
    return graft_labelled(kept)


def _mu_any(args: Sequence[Element]) -> Element:
    acc: dict = {}
    for combo in product(*(a.items() for a in args)):
        b = mu_basis([k for k, _ in combo])
        c = 1
        for _, v in combo:
            c *= v
        acc[b] = acc.get(b, 0) + c
    return Element._from_dict({k: scalar(v) for k, v in acc.items() if v})


def mu(args: Sequence[Element], bound: ArityBound = INFINITY) -> Element:
    """The unital n-ary product, n = len(args)."""
    _check_arity(len(args), bound)
    for a in args:
        if a.max_arity > bound:
            raise TreeError(f"argument {a} violates arity bound {format_bound(bound)}")
    return _mu_any(args)


def mu_tree(T: PlanarTree, args: Sequence[Element], bound: ArityBound = INFINITY) -> Element:
    """Evaluate the tree monomial ``T`` on ``args`` (one per leaf)."""
    if T is EMPTY:
        raise TreeError("mu_tree needs a non-empty tree")
    if len(args) != T.degree:
        raise TreeError(f"tree has {T.degree} leaves but {len(args)} arguments were given")
    if T.max_arity > bound:
        raise TreeError(f"tree violates arity bound {format_bound(bound)}")
    return _eval(T, list(args), bound)


def _eval(T: PlanarTree, args: list[Element], bound: ArityBound) -> Element:
    if T is LEAF:
        return args[0]
    parts = []
    i = 0
    for c in T.children:
        parts.append(_eval(c, args[i:i + c.degree], bound))
        i += c.degree
    return mu(parts, bound)


def free_extension(f: LabelMap, x: Element, bound: ArityBound = INFINITY) -> Element:
    """Apply the algebra morphism extending the label map ``f``."""
    get = f.__getitem__ if isinstance(f, Mapping) else f
    if x.max_arity > bound:
        raise TreeError(f"source element does not fit target arity bound {format_bound(bound)}")
    out = Element()
    for b, c in x.items():
        if b.shape is EMPTY:
            out = out + Element({UNIT: c})
        else:
            out = out + c * _eval(b.shape, [get(v) for v in b.labels], bound)
    return out


@dataclass(frozen=True)
class MagAlgebra:
    """Mag^m(V) with V spanned by a finite ordered alphabet."""

    bound: ArityBound = INFINITY
    alphabet: tuple[str, ...] = ("a", "b")

    def __post_init__(self):
        check_bound(self.bound)
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet letters must be distinct")

    def unit(self) -> Element:
        return Element({UNIT: 1})

    def leaf(self, v: str) -> Element:
        if v not in self.alphabet:
            raise TreeError(f"label {v!r} not in alphabet")
        return Element({leaf_tree(v): 1})

    def trees(self, d: int) -> tuple[PlanarTree, ...]:
        return enumerate_trees(d, self.bound)

    def basis(self, d: int) -> list[LabelledTree]:
        """Labelled trees of degree ``d`` (the unit for d = 0)."""
        out = []
        for shape in enumerate_trees(d, self.bound):
            for word in product(self.alphabet, repeat=d):
                out.append(labelled(shape, word))
        return out

    def basis_upto(self, max_degree: int, *, min_degree: int = 1) -> Iterator[LabelledTree]:
        for d in range(min_degree, max_degree + 1):
            yield from self.basis(d)

    def mu(self, *args: Element) -> Element:
        return mu(args, self.bound)

    def mu_tree(self, T: PlanarTree, args: Sequence[Element]) -> Element:
        return mu_tree(T, args, self.bound)

    def free_extension(self, f: LabelMap, x: Element) -> Element:
        return free_extension(f, x, self.bound)

    def contains(self, x: Element) -> bool:
        return x.max_arity <= self.bound and all(v in self.alphabet for b in x.keys() for v in b.labels)
