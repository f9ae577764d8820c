import pytest
from hypothesis import given, strategies as st

from magma.algebra import MagAlgebra
from magma.coalgebra import (
    delta,
    delta_reduced,
    delta_tree,
    filtration_degree,
    in_filtration,
    is_primitive,
    primitive_basis,
)
from magma.freemodule import UNIT, Element, TensorElement, labelled, leaf, parse_element, unit_element
from magma.trees import EMPTY, INFINITY, LEAF, TreeError, corolla, height, parse_tree

H_INF = MagAlgebra(INFINITY, ("a", "b"))
H1 = MagAlgebra(INFINITY, ("a",))
basis_upto_4 = st.sampled_from(list(H_INF.basis_upto(4, min_degree=0)))


def el(b):
    return Element({b: 1})


def lab(text):
    return next(iter(parse_element(text).keys()))


def tens(*parts):
    return tuple(UNIT if p == "1" else lab(p) for p in parts)


def test_delta_examples():
    t = lab("(a b)")
    assert delta(2, el(t)) == TensorElement(2, {tens("a", "b"): 1, (t, UNIT): 1, (UNIT, t): 1})
    t3 = lab("(a b c)")
    assert delta(2, el(t3)) == TensorElement(2, {(t3, UNIT): 1, (UNIT, t3): 1})
    assert delta(3, el(t)) == TensorElement(3, {
        (t, UNIT, UNIT): 1, (UNIT, t, UNIT): 1, (UNIT, UNIT, t): 1,
        tens("a", "b", "1"): 1, tens("a", "1", "b"): 1, tens("1", "a", "b"): 1,
    })
    assert delta(2, unit_element()) == TensorElement(2, {(UNIT, UNIT): 1})


def test_delta_bound():
    with pytest.raises(TreeError):
        delta(3, leaf("a"), bound=2)
    with pytest.raises(TreeError):
        delta(1, leaf("a"))


@given(basis_upto_4, st.integers(2, 5))
def test_counitality(b, n):
    d = delta(n, el(b))
    for j in range(n):
        acc = {}
        for key, c in d.items():
            if all(k.shape is EMPTY for i, k in enumerate(key) if i != j):
                acc[key[j]] = acc.get(key[j], 0) + c
        assert Element(acc) == el(b)


@given(basis_upto_4, st.integers(2, 5))
def test_delta_is_degree_homogeneous(b, n):
    for key, _ in delta(n, el(b)).items():
        assert sum(k.degree for k in key) == b.degree


def test_reduced_is_unit_free_part_exhaustively():
    for b in H1.basis_upto(6):
        for n in range(2, 7):
            r = delta_reduced(n, el(b))
            assert r == delta(n, el(b)).unit_free()
            assert all(k.shape is not EMPTY for key, _ in r.items() for k in key)


def test_reduced_unit_free_with_two_labels():
    for b in H_INF.basis_upto(5):
        for n in range(2, 6):
            assert delta_reduced(n, el(b)) == delta(n, el(b)).unit_free()


def test_reduced_examples():
    for n in range(2, 7):
        t = labelled(corolla(n), "a" * n)
        for m in range(2, 7):
            want = TensorElement(m, {tuple(lab("a") for _ in range(n)): 1} if m == n else {})
            assert delta_reduced(m, el(t)) == want
    assert delta_reduced(2, parse_element("(a (b c))")) == TensorElement(2, {tens("a", "(b c)"): 1})
    assert not delta_reduced(3, unit_element())


def test_delta_tree():
    x = parse_element("(a (b c)) + 2*(a b c)")
    assert delta_tree(LEAF, x) == TensorElement(1, {(b,): c for b, c in x.items()})
    for n in (2, 3):
        assert delta_tree(corolla(n), x, reduced=True) == delta_reduced(n, x)
        assert delta_tree(corolla(n), x) == delta(n, x)
    T = parse_tree("(| (| | (| | |)))")
    b = labelled(parse_tree("(| (| | (| | |)))"), "abcdef")
    out = delta_tree(T, el(b))
    assert out.arity == 6
    assert delta_tree(T, el(b), reduced=True) == TensorElement(6, {tuple(lab(v) for v in "abcdef"): 1})
    with pytest.raises(TreeError):
        delta_tree(EMPTY, x)
    with pytest.raises(TreeError):
        delta_tree(corolla(3), x, bound=2)


def test_delta_tree_plain_matches_iterated_delta():
    # (Id (x) Delta_2) o Delta_2 on every basis tree of degree <= 4
    T = parse_tree("(| (| |))")
    for b in H_INF.basis_upto(4, min_degree=0):
        acc = {}
        for (x, y), c in delta(2, el(b)).items():
            for (y1, y2), d in delta(2, el(y)).items():
                acc[(x, y1, y2)] = acc.get((x, y1, y2), 0) + c * d
        assert delta_tree(T, el(b)) == TensorElement(3, acc)


def test_filtration_examples():
    assert filtration_degree(unit_element(5)) == 0
    assert filtration_degree(leaf("a")) == 1
    for n in range(2, 6):
        assert filtration_degree(el(labelled(corolla(n), "a" * n))) == 2


def test_filtration_is_height_plus_one():
    for b in H_INF.basis_upto(5):
        assert filtration_degree(el(b)) == height(b.shape) + 1


def test_filtration_of_sums_is_max():
    x = parse_element("a + (a (a a)) + 1")
    assert filtration_degree(x) == 3
    assert in_filtration(x, 3) and not in_filtration(x, 2)


def test_first_levels_match_explicit_descriptions():
    for b in H_INF.basis_upto(5, min_degree=0):
        assert in_filtration(el(b), 1) == (b.degree <= 1)
        assert in_filtration(el(b), 2) == (b.degree <= 1 or b.shape.height == 1)


def test_primitives():
    assert is_primitive(leaf("a"))
    assert is_primitive(parse_element("a - 3*b"))
    assert not is_primitive(parse_element("(a a)"))
    assert not is_primitive(unit_element())
    assert not is_primitive(parse_element("(a b) - (b a)"))


@pytest.mark.parametrize("H", [MagAlgebra(INFINITY, ("a", "b")), MagAlgebra(2, ("a", "b")),
                               MagAlgebra(3, ("a", "b", "c"))])
def test_primitive_basis_is_the_leaves(H):
    assert primitive_basis(H, 1) == [leaf(v) for v in H.alphabet]
    top = 6 if len(H.alphabet) == 2 and H.bound == 2 else 5
    for d in range(2, top + 1):
        assert primitive_basis(H, d) == []
