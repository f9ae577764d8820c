"""Ungrafting co-operations on Mag^m(V), reduced coproducts and primitives."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Optional

from .algebra import MagAlgebra
from .freemodule import (
    UNIT,
    Element,
    LabelledTree,
    TensorElement,
    scalar,
    shuffle_place,
    shuffles,
    unit_placements,
)
from .linalg import kernel
from .trees import EMPTY, INFINITY, LEAF, ArityBound, PlanarTree, TreeError, format_bound

#: returned by ``filtration_degree`` when no finite filtration level was found
NOT_CONNECTED = None


def _check_arity(n: int, bound: ArityBound) -> None:
    if n < 2:
        raise TreeError(f"co-operations have arity >= 2, got {n}")
    if n > bound:
        raise TreeError(f"arity {n} exceeds bound {format_bound(bound)}")


@lru_cache(maxsize=None)
def delta_basis(n: int, b: LabelledTree) -> TensorElement:
    """All ways of writing ``b`` as an n-fold grafting, empty slots allowed."""
    if b.shape is EMPTY:
        return TensorElement._from_dict({(UNIT,) * n: 1}, n)
    terms = {key: 1 for key in unit_placements(b, n)}
    k = b.shape.arity
    if k >= 2:
        kids = b.children()
        if n == k:
            terms[kids] = 1
        elif n > k:
            for placement in combinations(range(n), k):
                slots = [UNIT] * n
                for pos, c in zip(placement, kids):
                    slots[pos] = c
                terms[tuple(slots)] = 1
    return TensorElement._from_dict(terms, n)


def _linear(n: int, x: Element, on_basis) -> TensorElement:
    acc: dict = {}
    for b, c in x.items():
        for key, v in on_basis(n, b).items():
            acc[key] = acc.get(key, 0) + c * v
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, n)


def delta(n: int, x: Element, bound: ArityBound = INFINITY) -> TensorElement:
    _check_arity(n, bound)
    return _linear(n, x, delta_basis)


@lru_cache(maxsize=None)
def reduced_basis(n: int, b: LabelledTree) -> TensorElement:
    """Reduced co-operation on a basis tree, by the recursion on lower arities."""
    if b.shape is EMPTY:
        return TensorElement._from_dict({}, n)
    acc = dict(delta_basis(n, b).items())

    def sub(key, c):
        v = acc.get(key, 0) - c
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    for key in unit_placements(b, n):
        sub(key, 1)
    for m in range(2, n):
        lower = reduced_basis(m, b)
        if not lower:
            continue
        for sigma in shuffles(m, n - m):
            for key, c in shuffle_place(lower, n, sigma).items():
                sub(key, c)
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items()}, n)


def delta_reduced(n: int, x: Element, bound: ArityBound = INFINITY) -> TensorElement:
    """Reduced co-operation; the unit component of ``x`` is ignored."""
    _check_arity(n, bound)
    return _linear(n, x, reduced_basis)


@lru_cache(maxsize=None)
def _tree_basis(T: PlanarTree, b: LabelledTree, reduced: bool) -> TensorElement:
    if T is LEAF:
        return TensorElement._from_dict({(b,): 1}, 1)
    k = T.arity
    top = reduced_basis(k, b) if reduced else delta_basis(k, b)
    acc: dict = {}
    for key, c in top.items():
        parts = [_tree_basis(Ti, bi, reduced) for Ti, bi in zip(T.children, key)]
        if not all(parts):
            continue
        expanded = {(): c}
        for part in parts:
            nxt = {}
            for prefix, v in expanded.items():
                for tail, w in part.items():
                    nxt[prefix + tail] = v * w
            expanded = nxt
        for k2, v in expanded.items():
            acc[k2] = acc.get(k2, 0) + v
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, T.degree)


def delta_tree(T: PlanarTree, x: Element, reduced: bool = False, bound: ArityBound = INFINITY) -> TensorElement:
    """The co-operation shaped by ``T``: identity at a leaf, then recursively split at each inner vertex."""
    if T is EMPTY:
        raise TreeError("delta_tree needs a non-empty tree")
    if T.max_arity > bound:
        raise TreeError(f"tree violates arity bound {format_bound(bound)}")
    acc: dict = {}
    for b, c in x.items():
        if reduced and b.shape is EMPTY:
            continue
        for key, v in _tree_basis(T, b, reduced).items():
            acc[key] = acc.get(key, 0) + c * v
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, T.degree)


def counit(x: Element):
    return x.counit()


def _probe_arities(x: Element, bound: ArityBound, probe: Optional[int]) -> range:
    top = probe if probe is not None else max(2, x.degree)
    return range(2, int(min(top, bound)) + 1)


@lru_cache(maxsize=None)
def in_filtration(x: Element, r: int, bound: ArityBound = INFINITY, probe: Optional[int] = None) -> bool:
    """Membership in the r-th level of the connected filtration, by its inductive definition."""
    if r <= 0:
        return not x.augmentation()
    for n in _probe_arities(x, bound, probe):
        if not _tensor_in_filtration(delta_reduced(n, x, bound), r - 1, bound, probe):
            return False
    return True


def _tensor_in_filtration(y: TensorElement, r: int, bound: ArityBound, probe: Optional[int]) -> bool:
    # y lies in F^{(x) n} iff, for every slot, each slot-coefficient against the
    # remaining basis tensors lies in F
    if not y:
        return True
    for i in range(y.arity):
        groups: dict = {}
        for key, c in y.items():
            rest = key[:i] + key[i + 1:]
            g = groups.setdefault(rest, {})
            g[key[i]] = g.get(key[i], 0) + c
        for g in groups.values():
            if not in_filtration(Element(g), r, bound, probe):
                return False
    return True


def filtration_degree(x: Element, bound: ArityBound = INFINITY, probe: Optional[int] = None,
                      max_level: Optional[int] = None):
    """Smallest r with x in F_r, or ``NOT_CONNECTED`` if none up to ``max_level``."""
    if not x.augmentation():
        return 0
    cap = max_level if max_level is not None else x.degree + 2
    for r in range(1, cap + 1):
        if in_filtration(x, r, bound, probe):
            return r
    return NOT_CONNECTED


def is_primitive(x: Element, bound: ArityBound = INFINITY) -> bool:
    """True when ``x`` has no unit component and every reduced co-operation kills it."""
    if x.counit():
        return False
    return all(not delta_reduced(n, x, bound) for n in _probe_arities(x, bound, None))


def primitive_basis(H: MagAlgebra, d: int) -> list[Element]:
    """A basis of the primitive elements of degree ``d``, by exact elimination."""
    if d <= 0:
        return []
    basis = H.basis(d)
    arities = range(2, int(min(max(2, d), H.bound)) + 1)
    columns = []
    for b in basis:
        col = {}
        for n in arities:
            for key, c in reduced_basis(n, b).items():
                col[(n, key)] = c
        columns.append(col)
    out = []
    for combo in kernel(columns):
        out.append(Element({basis[j]: c for j, c in sorted(combo.items())}))
    return out
