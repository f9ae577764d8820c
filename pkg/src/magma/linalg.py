"""Sparse exact Gaussian elimination over the rationals.

Vectors are dicts mapping hashable coordinates to nonzero ``int``/``Fraction``
values.  The pivot set is kept fully reduced (no pivot vector mentions another
pivot's coordinate), so reducing a new vector is one pass over its support.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .freemodule import scalar

Vector = dict


def _axpy(y: dict, a, x: Mapping) -> None:
    """y += a * x, in place, pruning zeros."""
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Reducer:
    def __init__(self, track: bool = False):
        self.pivots: dict[Hashable, tuple[dict, dict]] = {}
        self._where: dict[Hashable, set] = {}
        self.track = track

    def reduce(self, v: Mapping, tag: dict | None = None) -> tuple[dict, dict]:
        v = dict(v)
        tag = dict(tag or {})
        for k in [k for k in v if k in self.pivots]:
            c = v.get(k, 0)
            if not c:
                continue
            pv, pt = self.pivots[k]
            _axpy(v, -c, pv)
            if self.track:
                _axpy(tag, -c, pt)
        return v, tag

    def add(self, v: Mapping, tag: dict | None = None) -> tuple[bool, dict]:
        """Insert ``v``; returns (independent, combination) where a dependent ``v`` yields a kernel combination."""
        r, t = self.reduce(v, tag)
        if not r:
            return False, t
        p = min(r, key=repr)
        inv = Fraction(1) / r[p]
        r = {k: scalar(x * inv) for k, x in r.items()}
        t = {k: scalar(x * inv) for k, x in t.items()}
        for q in list(self._where.get(p, ())):
            qv, qt = self.pivots[q]
            c = qv.get(p, 0)
            if c:
                _axpy(qv, -c, r)
                if self.track:
                    _axpy(qt, -c, t)
                for k in r:
                    if k in qv:
                        self._where.setdefault(k, set()).add(q)
        self.pivots[p] = (r, t)
        for k in r:
            self._where.setdefault(k, set()).add(p)
        return True, t

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(vectors: Iterable[Mapping]) -> int:
    red = Reducer()
    for v in vectors:
        red.add(v)
    return red.rank


def kernel(columns: Iterable[Mapping]) -> list[dict[int, object]]:
    """Basis of {c : sum_j c_j * columns[j] = 0}, as sparse dicts indexed by column number."""
    red = Reducer(track=True)
    out = []
    for j, col in enumerate(columns):
        independent, combo = red.add(col, {j: 1})
        if not independent:
            out.append({k: scalar(v) for k, v in combo.items() if v})
    return out


def same_span(a: Iterable[Mapping], b: Iterable[Mapping]) -> bool:
    a, b = list(a), list(b)
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(a + b)
