"""Reduced planar rooted trees.

Every internal vertex has at least two children.  Trees are hash-consed, so
two trees with the same shape are the same Python object and equality is an
identity check.  The empty tree ``EMPTY`` is the unit; it is never grafted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence, Union

INFINITY = math.inf
ArityBound = Union[int, float]


class TreeError(ValueError):
    """Raised when a tree constructor or arity bound is violated."""


class TreeSyntaxError(TreeError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def check_bound(m: ArityBound) -> ArityBound:
    if m == INFINITY:
        return INFINITY
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise TreeError(f"arity bound must be an integer >= 2 or INFINITY, got {m!r}")
    return m


def parse_bound(text: str) -> ArityBound:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    try:
        return check_bound(int(text))
    except ValueError as exc:
        raise TreeError(f"invalid arity bound {text!r}") from exc


def format_bound(m: ArityBound) -> str:
    return "inf" if m == INFINITY else str(m)


class PlanarTree:
    """An interned planar rooted tree.

    Do not instantiate directly; use ``EMPTY``, ``LEAF`` and ``graft``.
    """

    __slots__ = ("children", "degree", "height", "arity", "max_arity", "key", "__weakref__")

    children: tuple[PlanarTree, ...]
    degree: int
    height: int
    arity: int
    max_arity: int
    key: tuple

    def __reduce__(self):
        if self is EMPTY:
            return (_empty, ())
        if self is LEAF:
            return (_leaf, ())
        return (graft, (self.children,))

    @property
    def is_empty(self) -> bool:
        return self is EMPTY

    @property
    def is_leaf(self) -> bool:
        return self is LEAF

    def respects(self, bound: ArityBound) -> bool:
        return self.max_arity <= bound

    def __lt__(self, other: PlanarTree) -> bool:
        return self.key < other.key

    def __le__(self, other: PlanarTree) -> bool:
        return self.key <= other.key

    def __gt__(self, other: PlanarTree) -> bool:
        return self.key > other.key

    def __ge__(self, other: PlanarTree) -> bool:
        return self.key >= other.key

    def __str__(self) -> str:
        return format_tree(self)

    def __repr__(self) -> str:
        return f"PlanarTree({format_tree(self)!r})"


def _make(children: tuple[PlanarTree, ...], degree: int) -> PlanarTree:
    t = object.__new__(PlanarTree)
    t.children = children
    t.degree = degree
    t.arity = len(children)
    if children:
        t.height = 1 + max(c.height for c in children)
        t.max_arity = max(len(children), max(c.max_arity for c in children))
        # canonical order: degree, then root arity, then children lexicographically
        t.key = (degree, len(children), tuple(c.key for c in children))
    else:
        t.height = 0
        t.max_arity = 0
        t.key = (degree, 0, ())
    return t


EMPTY = _make((), 0)
LEAF = _make((), 1)

_INTERN: dict[tuple[PlanarTree, ...], PlanarTree] = {}


def _empty() -> PlanarTree:
    return EMPTY


def _leaf() -> PlanarTree:
    return LEAF


def graft(children: Sequence[PlanarTree]) -> PlanarTree:
    """Join ``children`` (at least two, none empty) under a new root."""
    children = tuple(children)
    tree = _INTERN.get(children)
    if tree is not None:
        return tree
    if len(children) < 2:
        raise TreeError(f"grafting needs at least 2 children, got {len(children)}")
    for c in children:
        if not isinstance(c, PlanarTree):
            raise TypeError(f"expected PlanarTree, got {type(c).__name__}")
        if c is EMPTY:
            raise TreeError("the empty tree cannot be grafted")
    tree = _make(children, sum(c.degree for c in children))
    return _INTERN.setdefault(children, tree)


@dataclass(frozen=True)
class TreeDecomposition:
    kind: str  # "empty", "leaf" or "graft"
    children: tuple[PlanarTree, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.children)


def ungraft(t: PlanarTree) -> TreeDecomposition:
    if t is EMPTY:
        return TreeDecomposition("empty")
    if t is LEAF:
        return TreeDecomposition("leaf")
    return TreeDecomposition("graft", t.children)


def corolla(n: int) -> PlanarTree:
    """The tree with one internal vertex and ``n`` leaves (``n == 1`` gives the leaf)."""
    if n == 1:
        return LEAF
    return graft((LEAF,) * n)


def height(t: PlanarTree) -> int:
    return t.height


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``n`` as a sum of ``k`` positive integers."""
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_trees(n: int, m: ArityBound = INFINITY) -> tuple[PlanarTree, ...]:
    """All trees with ``n`` leaves and root/inner arities at most ``m``, in canonical order."""
    m = check_bound(m)
    if n < 0:
        return ()
    if n == 0:
        return (EMPTY,)
    if n == 1:
        return (LEAF,)
    found = []
    for k in range(2, int(min(n, m)) + 1):
        for parts in compositions(n, k):
            for children in product(*(enumerate_trees(p, m) for p in parts)):
                found.append(graft(children))
    found.sort(key=lambda t: t.key)
    return tuple(found)


@lru_cache(maxsize=None)
def count_trees(n: int, m: ArityBound = INFINITY) -> int:
    """|Y_n^m|, computed from the generating-function recursion without building trees."""
    m = check_bound(m)
    if n < 0:
        return 0
    if n <= 1:
        return 1
    # forest[j]: ordered k-tuples of trees with j leaves in total, for the current k
    total = 0
    forest = [0] + [count_trees(j, m) for j in range(1, n)] + [0]
    single = forest[:]
    for k in range(2, int(min(n, m)) + 1):
        nxt = [0] * (n + 1)
        for j in range(n + 1):
            if forest[j]:
                for i in range(1, n - j + 1):
                    nxt[i + j] += forest[j] * single[i]
        forest = nxt
        total += forest[n]
    return total


def iter_trees(max_degree: int, m: ArityBound = INFINITY, *, min_degree: int = 1) -> Iterator[PlanarTree]:
    for n in range(min_degree, max_degree + 1):
        yield from enumerate_trees(n, m)


def format_tree(t: PlanarTree) -> str:
    if t is EMPTY:
        return "e"
    if t is LEAF:
        return "|"
    return "(" + " ".join(format_tree(c) for c in t.children) + ")"


def parse_tree(text: str, bound: ArityBound | None = None) -> PlanarTree:
    """Parse the tree grammar ``tree := "e" | "|" | "(" tree (WS tree)+ ")"``."""
    pos = 0
    n = len(text)

    def skip(p: int) -> int:
        while p < n and text[p] == " ":
            p += 1
        return p

    def node(p: int, top: bool) -> tuple[PlanarTree, int]:
        p = skip(p)
        if p >= n:
            raise TreeSyntaxError("unexpected end of input", text, p)
        ch = text[p]
        if ch == "|":
            return LEAF, p + 1
        if ch == "e":
            if not top:
                raise TreeSyntaxError("the empty tree cannot be a child", text, p)
            return EMPTY, p + 1
        if ch != "(":
            raise TreeSyntaxError(f"unexpected character {ch!r}", text, p)
        start = p
        p += 1
        kids = []
        while True:
            p = skip(p)
            if p < n and text[p] == ")":
                p += 1
                break
            if kids and text[p - 1] != " ":
                raise TreeSyntaxError("children must be separated by spaces", text, p)
            child, p = node(p, False)
            kids.append(child)
        if len(kids) < 2:
            raise TreeSyntaxError("a node needs at least 2 children", text, start)
        t = graft(kids)
        if bound is not None and t.arity > bound:
            raise TreeSyntaxError(f"node arity {t.arity} exceeds bound {format_bound(bound)}", text, start)
        return t, p

    tree, pos = node(pos, True)
    if skip(pos) != n:
        raise TreeSyntaxError("trailing input", text, skip(pos))
    return tree


def substitute_leaves(t: PlanarTree, parts: Sequence[PlanarTree]) -> PlanarTree:
    """Replace the i-th leaf of ``t`` by ``parts[i]`` (grafting at the leaves)."""
    if len(parts) != t.degree:
        raise TreeError(f"tree has {t.degree} leaves but {len(parts)} trees were given")
    it = iter(parts)

    def walk(s: PlanarTree) -> PlanarTree:
        if s is LEAF:
            return next(it)
        return graft([walk(c) for c in s.children])

    return walk(t)
