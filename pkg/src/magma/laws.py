"""Law suites behind ``magma verify``.

Each law enumerates its cases deterministically, then checks them one by
one.  Case checks are independent, so they may be fanned out to worker
processes; results are always merged back in enumeration order.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

from .algebra import MagAlgebra, _mu_any, mu
from .bialgebra import CaseResult, LawReport, Rigidity, compat_rhs, idempotent_e, projector_e
from .coalgebra import delta, delta_reduced, primitive_basis
from .freemodule import UNIT, Element, LabelledTree, TensorElement, format_labelled, labelled
from .linalg import rank, same_span
from .sampling import make_rng, random_element, random_series
from .series import compose, f_series, g_series, generator, invert, to_endomorphism
from .trees import EMPTY, LEAF, ArityBound, corolla


@dataclass(frozen=True)
class VerifyConfig:
    law: str
    bound: ArityBound
    degree: int
    seed: int = 0
    samples: int = 50
    alphabet: tuple[str, ...] = ("a", "b")

    @property
    def algebra(self) -> MagAlgebra:
        return MagAlgebra(self.bound, self.alphabet)


@dataclass(frozen=True)
class Law:
    name: str
    statement: str
    cases: Callable[[VerifyConfig], list]
    check: Callable[[VerifyConfig, object], CaseResult]


def _el(b: LabelledTree) -> Element:
    return Element._from_dict({b: 1})


def _tuples(H: MagAlgebra, k: int, max_total: int, with_unit: bool) -> Iterator[tuple[LabelledTree, ...]]:
    """k-tuples of basis trees with total degree <= max_total, in canonical order."""
    lo = 0 if with_unit else 1
    by_degree = {d: H.basis(d) for d in range(lo, max_total + 1)}
    for degs in product(range(lo, max_total + 1), repeat=k):
        if sum(degs) > max_total:
            continue
        yield from product(*(by_degree[d] for d in degs))


def _arities(cfg: VerifyConfig, top: int) -> range:
    return range(2, int(min(top, cfg.bound)) + 1)


def _words(bs: Sequence[LabelledTree]) -> str:
    return ", ".join(format_labelled(b) for b in bs)


# unitality

def _unitality_cases(cfg):
    H = cfg.algebra
    return [(n, args) for n in _arities(cfg, 4) for args in _tuples(H, n - 1, cfg.degree, True)]


def _unitality_check(cfg, payload):
    n, args = payload
    reduced = _mu_any([_el(b) for b in args])
    bad = None
    for i in range(n):
        full = list(args[:i]) + [UNIT] + list(args[i:])
        got = mu([_el(b) for b in full], cfg.bound)
        if got != reduced:
            bad = (i, got)
            break
    return CaseResult(
        f"n={n}", _words(args), str(reduced),
        str(reduced) if bad is None else f"slot {bad[0]}: {bad[1]}", bad is None,
    )


# counitality

def _counitality_cases(cfg):
    H = cfg.algebra
    return [(n, b) for n in _arities(cfg, 4) for b in H.basis_upto(cfg.degree, min_degree=0)]


def _counitality_check(cfg, payload):
    n, b = payload
    d = delta(n, _el(b), cfg.bound)
    failures = []
    for j in range(n):
        acc: dict = {}
        for key, c in d.items():
            if all(k.shape is EMPTY for i, k in enumerate(key) if i != j):
                acc[key[j]] = acc.get(key[j], 0) + c
        if Element(acc) != _el(b):
            failures.append(f"slot {j}: {Element(acc)}")
    return CaseResult(f"n={n}", format_labelled(b), format_labelled(b),
                      "; ".join(failures) or format_labelled(b), not failures)


# compat

def _compat_cases(cfg):
    H = cfg.algebra
    ar = list(_arities(cfg, 4))
    return [(n, m, xs) for n in ar for m in ar for xs in _tuples(H, n, cfg.degree, False)]


def _compat_check(cfg, payload):
    n, m, xs = payload
    args = [_el(b) for b in xs]
    got = delta(m, mu(args, cfg.bound), cfg.bound)
    want = compat_rhs(m, args, cfg.bound)
    return CaseResult(f"n={n},m={m}", _words(xs), want.format(), got.format(), got == want)


# corolla-reduced

def _corolla_cases(cfg):
    ar = list(_arities(cfg, max(cfg.degree, 2)))
    return [(n, m) for n in ar for m in ar]


def _corolla_check(cfg, payload):
    n, m = payload
    v = cfg.alphabet[0]
    t = labelled(corolla(n), (v,) * n)
    got = delta_reduced(m, _el(t), cfg.bound)
    want = TensorElement(m, {tuple(labelled(LEAF, (v,)) for _ in range(n)): 1} if m == n else {})
    return CaseResult(f"n={n},m={m}", format_labelled(t), want.format(), got.format(), got == want)


# idempotent

def _idempotent_cases(cfg):
    rng = make_rng(cfg.seed)
    H = cfg.algebra
    return [random_element(H, rng, cfg.degree) for _ in range(cfg.samples)]


def _idempotent_check(cfg, x):
    ex = idempotent_e(x, cfg.bound)
    eex = idempotent_e(ex, cfg.bound)
    return CaseResult("e(e(x))=e(x)", str(x), str(ex), str(eex), ex == eex)


# image-prim

def _image_cases(cfg):
    return list(range(1, cfg.degree + 1))


def _image_check(cfg, d):
    H = cfg.algebra
    e = projector_e(cfg.bound)
    basis = H.basis(d)
    images = [dict(e.on_basis(b).items()) for b in basis]
    prims = [dict(p.items()) for p in primitive_basis(H, d)]
    component = [{b: 1} for b in basis] if d == 1 else []
    ok = same_span(images, prims) and same_span(prims, component)
    if d == 1:
        ok = ok and all(e.on_basis(b) == _el(b) for b in basis)
    got = f"rank Im e = {rank(images)}, dim Prim = {len(prims)}"
    return CaseResult(f"d={d}", f"degree {d}", f"rank {len(component)}", got, ok)


# kills-products

def _kills_cases(cfg):
    H = cfg.algebra
    return [(n, xs) for n in _arities(cfg, max(cfg.degree, 2)) for xs in _tuples(H, n, cfg.degree, False)]


def _kills_check(cfg, payload):
    n, xs = payload
    got = idempotent_e(mu([_el(b) for b in xs], cfg.bound), cfg.bound)
    return CaseResult(f"n={n}", _words(xs), "0", str(got), not got)


# finv

def _finv_cases(cfg):
    return list(range(1, cfg.degree + 1))


def _finv_check(cfg, D):
    f, g, t = f_series(D, cfg.bound), g_series(D, cfg.bound), generator(D, cfg.bound)
    gf, fg, ginv = compose(g, f, D), compose(f, g, D), invert(g, D)
    ok = gf == t and fg == t and ginv == f
    got = "ok" if ok else f"g∘f={gf}; f∘g={fg}; inv(g)={ginv}"
    return CaseResult(f"D={D}", f"g = {g}", "g∘f = f∘g = t, inv(g) = f", got, ok)


# conv-hom

def _convhom_cases(cfg):
    rng = make_rng(cfg.seed)
    return [(random_series(cfg.bound, cfg.degree, rng), random_series(cfg.bound, cfg.degree, rng))
            for _ in range(cfg.samples)]


def _convhom_check(cfg, pair):
    phi, psi = pair
    H = cfg.algebra
    lhs = to_endomorphism(compose(phi, psi, cfg.degree))
    rhs = to_endomorphism(phi, base=to_endomorphism(psi))
    for b in H.basis_upto(cfg.degree, min_degree=0):
        l, r = lhs.on_basis(b), rhs.on_basis(b)
        if l != r:
            return CaseResult("pair", f"phi = {phi}; psi = {psi}; x = {format_labelled(b)}", str(l), str(r), False)
    return CaseResult("pair", f"phi = {phi}; psi = {psi}", "equal on basis", "equal on basis", True)


# rigidity

def _rigidity_cases(cfg):
    return list(cfg.algebra.basis_upto(cfg.degree, min_degree=0))


@functools.lru_cache(maxsize=None)
def _rigidity(H: MagAlgebra) -> Rigidity:
    return Rigidity(H)


def _rigidity_check(cfg, b):
    R = _rigidity(cfg.algebra)
    x = _el(b)
    back = R.phi(R.psi(x))
    again = R.psi(R.phi(x))
    ok = back == x and again == x
    return CaseResult("Φ∘Ψ, Ψ∘Φ", format_labelled(b), format_labelled(b), f"{back}; {again}", ok)


LAWS: dict[str, Law] = {law.name: law for law in [
    Law("unitality", "unit axiom for the n-ary products", _unitality_cases, _unitality_check),
    Law("counitality", "counit axiom for the n-ary co-operations", _counitality_cases, _counitality_check),
    Law("compat", "infinite magmatic compatibility relation", _compat_cases, _compat_check),
    Law("corolla-reduced", "reduced co-operations of corollas", _corolla_cases, _corolla_check),
    Law("idempotent", "the projector e is idempotent", _idempotent_cases, _idempotent_check),
    Law("image-prim", "image of e equals Prim H = V; e is the identity on V", _image_cases, _image_check),
    Law("kills-products", "e vanishes on products of augmentation elements", _kills_cases, _kills_check),
    Law("finv", "g and f are compositional inverses", _finv_cases, _finv_check),
    Law("conv-hom", "series to convolution endomorphisms is a morphism for composition",
        _convhom_cases, _convhom_check),
    Law("rigidity", "connected H is isomorphic to Mag(Prim H)", _rigidity_cases, _rigidity_check),
]}


def _run_case(cfg: VerifyConfig, item):
    index, payload = item
    result = LAWS[cfg.law].check(cfg, payload)
    result.id = f"{index}:{result.id}"
    return result


def run_law(cfg: VerifyConfig, pool: Optional[ProcessPoolExecutor] = None) -> LawReport:
    law = LAWS[cfg.law]
    items = list(enumerate(law.cases(cfg)))
    fn = functools.partial(_run_case, cfg)
    if pool is None:
        results = [fn(it) for it in items]
    else:
        chunk = max(1, len(items) // 64)
        results = list(pool.map(fn, items, chunksize=chunk))
    return LawReport(law.name, law.statement, cfg.bound, cfg.degree, results)


def clear_caches() -> None:
    """Empty every memo table, so the next computation starts cold (used for timing)."""
    from . import bialgebra, coalgebra, freemodule, series, trees

    for fn in (trees.enumerate_trees, trees.count_trees, freemodule._split, coalgebra.delta_basis,
               coalgebra.reduced_basis, coalgebra._tree_basis, coalgebra.in_filtration, _rigidity):
        fn.cache_clear()
    for endo in (bialgebra.IDENTITY, bialgebra.J, bialgebra.UNIT_COUNIT):
        endo._cache.clear()
    bialgebra._STAR_J.clear()
    series._J_CACHE.clear()
