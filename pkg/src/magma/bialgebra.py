"""Convolution, the primitive projector and the rigidity isomorphism on Mag^m(V).

``H`` is always the model bialgebra Mag^m(V) described by a ``MagAlgebra``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Optional, Sequence, Union

from .algebra import MagAlgebra, _mu_any, mu, mu_tree
from .coalgebra import delta, delta_basis, delta_tree, is_primitive
from .freemodule import (
    UNIT,
    ZERO,
    Element,
    LabelledTree,
    TensorElement,
    labelled,
    leaf,
    scalar,
    shuffle_place,
    shuffles,
    tensor,
    unit_placements,
)
from .linalg import Reducer
from .trees import EMPTY, INFINITY, LEAF, ArityBound, PlanarTree, TreeError, enumerate_trees, format_bound


class Endomorphism:
    """A linear map H -> H given by its values on basis trees (memoised)."""

    __slots__ = ("_f", "_cache", "name")

    def __init__(self, on_basis: Callable[[LabelledTree], Element], name: str = "f"):
        self._f = on_basis
        self._cache: dict[LabelledTree, Element] = {}
        self.name = name

    def on_basis(self, b: LabelledTree) -> Element:
        out = self._cache.get(b)
        if out is None:
            out = self._cache[b] = self._f(b)
        return out

    def __call__(self, x: Element) -> Element:
        return x.map_basis(self.on_basis)

    def __add__(self, other: Endomorphism) -> Endomorphism:
        return Endomorphism(lambda b: self.on_basis(b) + other.on_basis(b), f"({self.name} + {other.name})")

    def __sub__(self, other: Endomorphism) -> Endomorphism:
        return Endomorphism(lambda b: self.on_basis(b) - other.on_basis(b), f"({self.name} - {other.name})")

    def __rmul__(self, c) -> Endomorphism:
        c = scalar(c)
        return Endomorphism(lambda b: c * self.on_basis(b), f"{c}*{self.name}")

    def __matmul__(self, other: Endomorphism) -> Endomorphism:
        """Composition: ``(f @ g)(x) == f(g(x))``."""
        return Endomorphism(lambda b: self(other.on_basis(b)), f"{self.name}∘{other.name}")

    def __repr__(self) -> str:
        return f"Endomorphism({self.name})"


def _identity_basis(b: LabelledTree) -> Element:
    return Element._from_dict({b: 1})


def _j_basis(b: LabelledTree) -> Element:
    return ZERO if b.shape is EMPTY else Element._from_dict({b: 1})


def _uc_basis(b: LabelledTree) -> Element:
    return Element._from_dict({UNIT: 1}) if b.shape is EMPTY else ZERO


IDENTITY = Endomorphism(_identity_basis, "Id")
#: J = Id - u∘c, the projection killing the unit component
J = Endomorphism(_j_basis, "J")
UNIT_COUNIT = Endomorphism(_uc_basis, "u∘c")


def convolution(fs: Sequence[Endomorphism], bound: ArityBound = INFINITY) -> Endomorphism:
    """``mu_n ∘ (f_1 ⊗ ... ⊗ f_n) ∘ Delta_n`` with n = len(fs)."""
    n = len(fs)
    if n < 2 or n > bound:
        raise TreeError(f"convolution arity {n} outside 2..{format_bound(bound)}")
    fs = tuple(fs)
    # when every map kills the unit, only the root split of Delta_n survives
    augmented = all(not f.on_basis(UNIT) for f in fs)

    def on_basis(b: LabelledTree) -> Element:
        if augmented:
            if b.shape.arity != n:
                return ZERO
            terms = ((b.children(), 1),)
        else:
            terms = delta_basis(n, b).items()
        acc: dict = {}
        for key, c in terms:
            images = [f.on_basis(k) for f, k in zip(fs, key)]
            if not all(images):
                continue
            for k, v in _mu_any(images).items():
                acc[k] = acc.get(k, 0) + c * v
        return Element._from_dict({k: scalar(v) for k, v in acc.items() if v})

    return Endomorphism(on_basis, f"⋆{n}(" + ",".join(f.name for f in fs) + ")")


def convolution_tree(T: PlanarTree, f: Union[Endomorphism, Sequence[Endomorphism]],
                     bound: ArityBound = INFINITY, cache: Optional[dict] = None) -> Endomorphism:
    """Tree-shaped convolution: ``f`` at each leaf, ``⋆_k`` at each k-ary vertex.

    ``f`` may be one map (used at every leaf) or one map per leaf.  With a
    single map, ``cache`` (keyed by subtree) lets callers share work across trees.
    """
    if T is EMPTY:
        raise TreeError("convolution_tree needs a non-empty tree")
    if T.max_arity > bound:
        raise TreeError(f"tree violates arity bound {format_bound(bound)}")
    if isinstance(f, Endomorphism):
        return _conv_tree_single(T, f, bound, {} if cache is None else cache)
    fs = list(f)
    if len(fs) != T.degree:
        raise TreeError(f"tree has {T.degree} leaves but {len(fs)} maps were given")
    return _conv_tree_many(T, fs, bound)


def _conv_tree_single(T: PlanarTree, f: Endomorphism, bound: ArityBound, cache: dict) -> Endomorphism:
    if T is LEAF:
        return f
    out = cache.get(T)
    if out is None:
        out = cache[T] = convolution([_conv_tree_single(c, f, bound, cache) for c in T.children], bound)
    return out


def _conv_tree_many(T: PlanarTree, fs: list[Endomorphism], bound: ArityBound) -> Endomorphism:
    if T is LEAF:
        return fs[0]
    parts = []
    i = 0
    for c in T.children:
        parts.append(_conv_tree_many(c, fs[i:i + c.degree], bound))
        i += c.degree
    return convolution(parts, bound)


_STAR_J: dict[tuple[int, ArityBound], Endomorphism] = {}


def _star_j(n: int, bound: ArityBound) -> Endomorphism:
    key = (n, bound)
    out = _STAR_J.get(key)
    if out is None:
        out = _STAR_J.setdefault(key, convolution([J] * n, bound))
    return out


def idempotent_e(x: Element, bound: ArityBound = INFINITY) -> Element:
    """``e(x) = J(x) - sum_{n>=2} ⋆_n(J,...,J)(x)``, summed up to arity max(2, deg x)."""
    top = int(min(max(2, x.degree), bound))
    out = J(x)
    for n in range(2, top + 1):
        out = out - _star_j(n, bound)(x)
    return out


def projector_e(bound: ArityBound = INFINITY) -> Endomorphism:
    return Endomorphism(lambda b: idempotent_e(Element._from_dict({b: 1}), bound), "e")


class Rigidity:
    """The mutually inverse maps between H = Mag^m(V) and Mag^m(Prim H).

    ``primitives`` maps each label of the target alphabet to a primitive element
    of H; together they must form a basis of Prim H in the degrees used.  The
    default sends each letter v to the leaf (|, v).
    """

    def __init__(self, H: MagAlgebra, primitives: Optional[Mapping[str, Element]] = None):
        self.H = H
        if primitives is None:
            primitives = {v: leaf(v) for v in H.alphabet}
        self.primitives = dict(primitives)
        self._labels = sorted(self.primitives)
        self._solver = Reducer(track=True)
        for v in self._labels:
            p = self.primitives[v]
            if not is_primitive(p, H.bound):
                raise TreeError(f"label {v!r} is sent to the non-primitive element {p}")
            independent, _ = self._solver.add(dict(p.items()), {v: 1})
            if not independent:
                raise TreeError(f"primitive for {v!r} is linearly dependent on the others")
        self._e = projector_e(H.bound)
        self._coords: dict[LabelledTree, dict] = {}

    def coordinates(self, p: Element) -> dict[str, object]:
        """Express ``p`` in the chosen primitive basis (raises if ``p`` is outside its span)."""
        residue, tag = self._solver.reduce(dict(p.items()))
        if residue:
            raise TreeError(f"{p} is not in the span of the chosen primitives")
        return {v: scalar(-c) for v, c in tag.items() if c}

    def _factor(self, b: LabelledTree) -> dict:
        out = self._coords.get(b)
        if out is None:
            out = self._coords[b] = self.coordinates(self._e.on_basis(b))
        return out

    def psi(self, x: Element) -> Element:
        """H -> Mag^m(Prim H): sum over trees T of (T, e-projected factors of the reduced T-co-operation)."""
        out: dict = {}
        if x.counit():
            out[UNIT] = x.counit()
        top = x.degree
        for n in range(1, top + 1):
            for T in enumerate_trees(n, self.H.bound):
                for key, c in delta_tree(T, x, reduced=True, bound=self.H.bound).items():
                    factors = [self._factor(b) for b in key]
                    if not all(factors):
                        continue
                    for combo in product(*(f.items() for f in factors)):
                        word = tuple(v for v, _ in combo)
                        w = c
                        for _, a in combo:
                            w *= a
                        k = labelled(T, word)
                        out[k] = out.get(k, 0) + w
        return Element._from_dict({k: scalar(v) for k, v in out.items() if v})

    def phi(self, y: Element) -> Element:
        """Mag^m(Prim H) -> H: evaluate each tree monomial on the primitives its leaves name."""
        out = Element()
        for b, c in y.items():
            if b.shape is EMPTY:
                out = out + Element({UNIT: c})
                continue
            missing = [v for v in b.labels if v not in self.primitives]
            if missing:
                raise TreeError(f"labels {missing} have no primitive attached")
            out = out + c * mu_tree(b.shape, [self.primitives[v] for v in b.labels], self.H.bound)
        return out


def iso_psi(H: MagAlgebra, x: Element) -> Element:
    return Rigidity(H).psi(x)


def iso_phi(H: MagAlgebra, y: Element) -> Element:
    return Rigidity(H).phi(y)


@dataclass
class CaseResult:
    id: str
    input: str
    expected: str
    got: str
    passed: bool

    def to_json(self) -> dict:
        return {"id": self.id, "input": self.input, "expected": self.expected, "got": self.got, "pass": self.passed}


@dataclass
class LawReport:
    law: str
    statement: str
    arity_bound: ArityBound
    degree: int
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def counterexample(self) -> Optional[CaseResult]:
        return next((c for c in self.cases if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "arity_bound": format_bound(self.arity_bound),
            "degree": self.degree,
            "cases": [c.to_json() for c in self.cases],
            "pass": self.passed,
            "paper_ref": self.statement,
        }


def unit_placement_tensor(x: Element, m: int) -> TensorElement:
    acc: dict = {}
    for b, c in x.items():
        for key in unit_placements(b, m):
            acc[key] = acc.get(key, 0) + c
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, m)


def compat_rhs(m: int, xs: Sequence[Element], bound: ArityBound = INFINITY) -> TensorElement:
    """The right-hand side of the compatibility relation for ``Delta_m ∘ mu_n(xs)``."""
    n = len(xs)
    under = mu(xs, bound)
    out = unit_placement_tensor(under, m)
    if m == n:
        out = out + tensor(*xs)
    elif m > n:
        spread = tensor(*xs)
        for sigma in shuffles(n, m - n):
            out = out + shuffle_place(spread, m, sigma)
    return out


def check_compat(n: int, m: int, samples: Sequence[Sequence[Element]], bound: ArityBound = INFINITY) -> LawReport:
    """Compare ``Delta_m(mu_n(x_1..x_n))`` with the compatibility formula on each sample tuple."""
    report = LawReport("compat", "infinite magmatic compatibility relation", bound, 0)
    for i, xs in enumerate(samples):
        if len(xs) != n:
            raise ValueError(f"sample {i} has {len(xs)} arguments, expected {n}")
        if any(x.counit() for x in xs):
            raise ValueError("compatibility samples must have no unit component")
        got = delta(m, mu(xs, bound), bound)
        want = compat_rhs(m, xs, bound)
        report.cases.append(CaseResult(
            f"n={n},m={m},#{i}", " , ".join(str(x) for x in xs), want.format(), got.format(), got == want,
        ))
    report.degree = max((sum(x.degree for x in xs) for xs in samples), default=0)
    return report
