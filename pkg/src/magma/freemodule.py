"""Exact formal linear combinations over labelled-tree bases.

An ``Element`` is a finite sum of labelled trees (the unit is the labelled
empty tree) with rational coefficients.  A ``TensorElement`` of arity k is a
finite sum of k-tuples of such basis trees.  Coefficients are stored as
``int`` when integral and ``Fraction`` otherwise; zero coefficients are never
stored, so comparing term maps is comparing elements.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations, product
from math import comb
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from .trees import EMPTY, LEAF, PlanarTree, TreeError, TreeSyntaxError, graft

Scalar = Union[int, Fraction]

ASCII_TENSOR = "(x)"
UNICODE_TENSOR = "⊗"


def scalar(c) -> Scalar:
    """Normalise ``c`` to an exact rational (``int`` when integral)."""
    if isinstance(c, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return scalar(Fraction(c))
    raise TypeError(f"not an exact scalar: {c!r}")


def format_scalar(c: Scalar) -> str:
    return str(c)


class LabelledTree(NamedTuple):
    """A planar tree with its leaves labelled left to right."""

    shape: PlanarTree
    labels: tuple[str, ...]

    @property
    def degree(self) -> int:
        return self.shape.degree

    @property
    def is_unit(self) -> bool:
        return self.shape is EMPTY

    def children(self) -> tuple[LabelledTree, ...]:
        """Split into the labelled subtrees hanging from the root."""
        return _split(self)

    def __str__(self) -> str:
        return format_labelled(self)


UNIT = LabelledTree(EMPTY, ())


@lru_cache(maxsize=None)
def _split(b: LabelledTree) -> tuple[LabelledTree, ...]:
    out = []
    i = 0
    for c in b.shape.children:
        out.append(LabelledTree(c, b.labels[i:i + c.degree]))
        i += c.degree
    return tuple(out)


def labelled(shape: PlanarTree, labels: Iterable[str]) -> LabelledTree:
    labels = tuple(labels)
    if len(labels) != shape.degree:
        raise TreeError(f"{shape.degree} leaves but {len(labels)} labels")
    return LabelledTree(shape, labels)


def leaf_tree(v: str) -> LabelledTree:
    return LabelledTree(LEAF, (v,))


def graft_labelled(children: Sequence[LabelledTree]) -> LabelledTree:
    return LabelledTree(
        graft([c.shape for c in children]),
        tuple(v for c in children for v in c.labels),
    )


def basis_sort_key(b: LabelledTree):
    # unit last, then canonical tree order, then label word
    return (b.shape is EMPTY, b.shape.key, b.labels)


def format_labelled(b: LabelledTree) -> str:
    if b.shape is EMPTY:
        return "1"
    it = iter(b.labels)

    def walk(t: PlanarTree) -> str:
        if t is LEAF:
            return next(it)
        return "(" + " ".join(walk(c) for c in t.children) + ")"

    return walk(b.shape)


class _Combination:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            self._check_key(key)
            c = scalar(c)
            if c:
                acc[key] = acc.get(key, 0) + c
        self._terms = {k: scalar(v) for k, v in acc.items() if v}
        self._hash = None

    def _check_key(self, key) -> None:
        raise NotImplementedError

    @classmethod
    def _from_dict(cls, terms: dict, *extra):
        """Wrap an already-normalised dict without copying or checking."""
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        for name, value in zip(cls._extra_slots, extra):
            object.__setattr__(obj, name, value)
        return obj

    _extra_slots: tuple[str, ...] = ()

    def _extra(self) -> tuple:
        return tuple(getattr(self, n) for n in self._extra_slots)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key) -> Scalar:
        return self._terms.get(key, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self._terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self._extra() == other._extra() and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._extra(), frozenset(self._terms.items())))
        return self._hash

    def _combine(self, other, sign: int):
        if type(other) is not type(self):
            return NotImplemented
        if self._extra() != other._extra():
            raise ValueError(f"cannot add {type(self).__name__}s with {self._extra()} vs {other._extra()}")
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + sign * c
            if v:
                out[k] = scalar(v)
            else:
                out.pop(k, None)
        return self._from_dict(out, *self._extra())

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self._from_dict({k: -c for k, c in self._terms.items()}, *self._extra())

    def __mul__(self, c):
        try:
            c = scalar(c)
        except TypeError:
            return NotImplemented
        if not c:
            return self._from_dict({}, *self._extra())
        return self._from_dict({k: scalar(v * c) for k, v in self._terms.items()}, *self._extra())

    __rmul__ = __mul__

    def sorted_items(self) -> list:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"


class Element(_Combination):
    """A finite rational combination of labelled trees."""

    __slots__ = ()

    def _check_key(self, key) -> None:
        if not isinstance(key, LabelledTree):
            raise TypeError(f"Element keys are LabelledTree, got {type(key).__name__}")
        if len(key.labels) != key.shape.degree:
            raise TreeError("label word length must equal the number of leaves")

    @property
    def degree(self) -> int:
        """Largest degree of a basis tree present (0 for scalars and zero)."""
        return max((b.shape.degree for b in self._terms), default=0)

    @property
    def max_arity(self) -> int:
        return max((b.shape.max_arity for b in self._terms), default=0)

    def counit(self) -> Scalar:
        return self._terms.get(UNIT, 0)

    def augmentation(self) -> Element:
        """The part without the unit, i.e. ``J(x) = x - u(c(x))``."""
        if UNIT not in self._terms:
            return self
        return Element._from_dict({k: c for k, c in self._terms.items() if k.shape is not EMPTY})

    def homogeneous(self, d: int) -> Element:
        return Element._from_dict({k: c for k, c in self._terms.items() if k.shape.degree == d})

    def map_basis(self, f: Callable[[LabelledTree], Element]) -> Element:
        """Linear extension of ``f`` defined on basis trees."""
        acc: dict = {}
        for b, c in self._terms.items():
            for k, v in f(b)._terms.items():
                acc[k] = acc.get(k, 0) + c * v
        return Element._from_dict({k: scalar(v) for k, v in acc.items() if v})

    def sorted_items(self) -> list[tuple[LabelledTree, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: basis_sort_key(kv[0]))

    def __str__(self) -> str:
        return format_sum([(format_labelled(b), b.shape is EMPTY, c) for b, c in self.sorted_items()])


class TensorElement(_Combination):
    """A finite rational combination of k-tuples of labelled trees."""

    __slots__ = ("arity",)
    _extra_slots = ("arity",)

    def __init__(self, arity: int, terms: Mapping | Iterable = ()):
        if arity < 1:
            raise ValueError("tensor arity must be >= 1")
        self.arity = arity
        super().__init__(terms)

    def _check_key(self, key) -> None:
        if not isinstance(key, tuple) or len(key) != self.arity:
            raise ValueError(f"tensor keys must be {self.arity}-tuples, got {key!r}")
        for b in key:
            if not isinstance(b, LabelledTree):
                raise TypeError(f"tensor factors are LabelledTree, got {type(b).__name__}")

    def sorted_items(self) -> list[tuple[tuple[LabelledTree, ...], Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: tuple(basis_sort_key(b) for b in kv[0]))

    def unit_free(self) -> TensorElement:
        """Drop every pure tensor having the unit in some slot."""
        return TensorElement._from_dict(
            {k: c for k, c in self._terms.items() if all(b.shape is not EMPTY for b in k)}, self.arity
        )

    def format(self, sep: str = ASCII_TENSOR) -> str:
        rows = []
        for key, c in self.sorted_items():
            rows.append((sep.join(format_labelled(b) for b in key), False, c))
        return format_sum(rows)

    def __str__(self) -> str:
        return self.format(UNICODE_TENSOR)


def zero_tensor(arity: int) -> TensorElement:
    return TensorElement._from_dict({}, arity)


def element(b: LabelledTree, c: Scalar = 1) -> Element:
    return Element({b: c})


def unit_element(c: Scalar = 1) -> Element:
    return Element({UNIT: c})


def leaf(v: str, c: Scalar = 1) -> Element:
    return Element({leaf_tree(v): c})


ZERO = Element()


def tensor(*factors: Element) -> TensorElement:
    """Multilinear tensor product of elements."""
    acc: dict = {}
    for combo in product(*(f._terms.items() for f in factors)):
        key = tuple(b for b, _ in combo)
        c = 1
        for _, v in combo:
            c *= v
        acc[key] = acc.get(key, 0) + c
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, len(factors))


def slot_map(x: TensorElement, fs: Sequence[Callable[[LabelledTree], Element]]) -> TensorElement:
    """Apply ``f_1 (x) ... (x) f_k`` (each given on basis trees) to ``x``."""
    if len(fs) != x.arity:
        raise ValueError(f"need {x.arity} maps, got {len(fs)}")
    acc: dict = {}
    for key, c in x._terms.items():
        images = [fs[i](b)._terms.items() for i, b in enumerate(key)]
        for combo in product(*images):
            k = tuple(b for b, _ in combo)
            v = c
            for _, w in combo:
                v *= w
            acc[k] = acc.get(k, 0) + v
    return TensorElement._from_dict({k: scalar(v) for k, v in acc.items() if v}, x.arity)


class Shuffle(NamedTuple):
    """A (p, q)-shuffle, recorded by the 0-based slots taken by the first block."""

    p: int
    q: int
    placement: tuple[int, ...]


def shuffles(p: int, q: int) -> list[Shuffle]:
    if p < 0 or q < 0:
        raise ValueError("shuffle block sizes must be nonnegative")
    return [Shuffle(p, q, pl) for pl in combinations(range(p + q), p)]


def shuffle_count(p: int, q: int) -> int:
    return comb(p + q, p)


def shuffle_place(y: TensorElement, n: int, sigma: Shuffle) -> TensorElement:
    """Spread the ``p`` factors of ``y`` over ``sigma.placement`` in an ``n``-fold tensor, units elsewhere."""
    if y.arity != sigma.p or n != sigma.p + sigma.q:
        raise ValueError(f"shuffle ({sigma.p},{sigma.q}) does not fit arity {y.arity} -> {n}")
    out = {}
    for key, c in y._terms.items():
        slots = [UNIT] * n
        for pos, b in zip(sigma.placement, key):
            slots[pos] = b
        out[tuple(slots)] = c
    return TensorElement._from_dict(out, n)


def unit_placements(b: LabelledTree, n: int) -> Iterator[tuple[LabelledTree, ...]]:
    """``1^{i} (x) b (x) 1^{n-i-1}`` for i = 0..n-1."""
    for i in range(n):
        yield (UNIT,) * i + (b,) + (UNIT,) * (n - i - 1)


def format_sum(rows: Sequence[tuple[str, bool, Scalar]]) -> str:
    """Render ``(text, is_scalar_term, coefficient)`` rows as a signed sum."""
    if not rows:
        return "0"
    parts = []
    for i, (text, bare, c) in enumerate(rows):
        mag = -c if c < 0 else c
        if bare:
            body = format_scalar(mag)
        elif mag == 1:
            body = text
        else:
            body = f"{format_scalar(mag)}*{text}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


def _parse_sum(text: str, read_atom: Callable[[str, int], tuple[object, int]], unit=None):
    """Parse ``[-] term ((+|-) term)*`` where ``term := number ['*' atom] | atom``."""
    n = len(text)
    terms = []

    def skip(p: int) -> int:
        while p < n and text[p].isspace():
            p += 1
        return p

    p = skip(0)
    sign = 1
    if p < n and text[p] in "+-":
        sign = -1 if text[p] == "-" else 1
        p = skip(p + 1)
    while True:
        if p >= n:
            raise TreeSyntaxError("expected a term", text, p)
        m = _NUMBER.match(text, p)
        coef: Scalar = 1
        atom = None
        if m:
            coef = scalar(Fraction(m.group()))
            p = skip(m.end())
            if p < n and text[p] == "*":
                atom, p = read_atom(text, skip(p + 1))
            else:
                if unit is None:
                    raise TreeSyntaxError("constant terms are not allowed here", text, m.start())
                atom = unit
        else:
            atom, p = read_atom(text, p)
        terms.append((atom, sign * coef))
        p = skip(p)
        if p >= n:
            break
        if text[p] not in "+-":
            raise TreeSyntaxError(f"expected '+' or '-', found {text[p]!r}", text, p)
        sign = -1 if text[p] == "-" else 1
        p = skip(p + 1)
    return terms


def _read_labelled(text: str, p: int) -> tuple[LabelledTree, int]:
    n = len(text)
    if p < n and text[p] == "1":
        return UNIT, p + 1

    def node(p: int) -> tuple[LabelledTree, int]:
        if p >= n:
            raise TreeSyntaxError("unexpected end of input", text, p)
        if text[p] == "(":
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
                child, p = node(q)
                kids.append(child)
            if len(kids) < 2:
                raise TreeSyntaxError("a node needs at least 2 children", text, start)
            return graft_labelled(kids), p
        m = _IDENT.match(text, p)
        if not m:
            raise TreeSyntaxError(f"expected a label or '(', found {text[p]!r}", text, p)
        return leaf_tree(m.group()), m.end()

    return node(p)


def parse_element(text: str, bound=None, alphabet: Sequence[str] | None = None) -> Element:
    """Parse e.g. ``"3/2*(x (y z)) - (x y z) + 1"``."""
    terms = _parse_sum(text, _read_labelled, unit=UNIT)
    x = Element(terms)
    for b, _ in terms:
        if bound is not None and b.shape.max_arity > bound:
            raise TreeError(f"{format_labelled(b)} violates arity bound {bound}")
        if alphabet is not None:
            bad = [v for v in b.labels if v not in alphabet]
            if bad:
                raise TreeError(f"labels {bad} not in alphabet {list(alphabet)}")
    return x
