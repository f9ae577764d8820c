import pickle
from functools import lru_cache
from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from magma.trees import (
    EMPTY,
    INFINITY,
    LEAF,
    TreeError,
    TreeSyntaxError,
    compositions,
    corolla,
    count_trees,
    enumerate_trees,
    format_tree,
    graft,
    height,
    iter_trees,
    parse_bound,
    parse_tree,
    substitute_leaves,
    ungraft,
)


# independent oracles

@lru_cache(maxsize=None)
def naive_count(n, m):
    """Split the leaves among k >= 2 children by every composition of n."""
    if n <= 1:
        return 1
    total = 0
    for k in range(2, min(n, m) + 1 if m != INFINITY else n + 1):
        for parts in compositions(n, k):
            prod = 1
            for p in parts:
                prod *= naive_count(p, m)
            total += prod
    return total


def bracketings(n):
    """Every full binary bracketing of n leaves, as strings."""
    if n == 1:
        return {"|"}
    out = set()
    for i in range(1, n):
        for left, right in product(bracketings(i), bracketings(n - i)):
            out.add(f"({left} {right})")
    return out


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def all_trees(max_degree, m=INFINITY):
    return list(iter_trees(max_degree, m))


trees_upto_6 = st.sampled_from(all_trees(6))


def test_small_counts_from_displays():
    assert [count_trees(n) for n in range(1, 5)] == [1, 1, 3, 11]
    assert count_trees(3, 2) == 2 and count_trees(4, 2) == 5
    assert count_trees(4, 3) == 10


@pytest.mark.parametrize("m", [2, 3, 4, INFINITY])
def test_count_matches_composition_oracle(m):
    for n in range(0, 10):
        assert count_trees(n, m) == naive_count(n, m)


def test_schroeder_values():
    assert [count_trees(n) for n in range(5, 9)] == [45, 197, 903, 4279]


def test_binary_counts_are_catalan_by_brute_force():
    for n in range(1, 9):
        trees = enumerate_trees(n, 2)
        assert len(trees) == catalan(n - 1) == len(bracketings(n))
        assert {format_tree(t) for t in trees} == bracketings(n)


@pytest.mark.parametrize("m", [2, 3, INFINITY])
def test_enumeration_is_canonical_and_complete(m):
    for n in range(0, 7):
        trees = enumerate_trees(n, m)
        assert len(trees) == count_trees(n, m)
        assert len(set(trees)) == len(trees)
        assert list(trees) == sorted(trees, key=lambda t: t.key)
        assert all(t.degree == n and t.respects(m) for t in trees)


def test_bounded_enumeration_is_a_filter():
    for n in range(1, 7):
        full = enumerate_trees(n)
        assert enumerate_trees(n, 3) == tuple(t for t in full if t.max_arity <= 3)


def test_empty_and_leaf():
    assert enumerate_trees(0) == (EMPTY,)
    assert enumerate_trees(1) == (LEAF,)
    assert EMPTY.degree == 0 and LEAF.degree == 1 and LEAF.height == 0
    assert ungraft(EMPTY).kind == "empty" and ungraft(LEAF).kind == "leaf"


def test_graft_validation():
    with pytest.raises(TreeError):
        graft([LEAF])
    with pytest.raises(TreeError):
        graft([LEAF, EMPTY])
    with pytest.raises(TypeError):
        graft([LEAF, "x"])


def test_hash_consing_gives_identity():
    a = graft([LEAF, graft([LEAF, LEAF])])
    b = parse_tree("(| (| |))")
    assert a is b
    assert pickle.loads(pickle.dumps(a)) is a
    assert pickle.loads(pickle.dumps(EMPTY)) is EMPTY


@given(trees_upto_6)
def test_format_parse_roundtrip(t):
    assert parse_tree(format_tree(t)) is t


@given(trees_upto_6)
def test_ungraft_inverts_graft(t):
    d = ungraft(t)
    if d.kind == "graft":
        assert graft(d.children) is t
        assert sum(c.degree for c in d.children) == t.degree


@given(trees_upto_6)
def test_height_bounds(t):
    assert 0 <= height(t) <= t.degree - 1
    if t is not LEAF:
        assert height(t) >= 1


def _is_binary_caterpillar(t):
    if t is LEAF:
        return True
    if t.arity != 2:
        return False
    inner = [c for c in t.children if c is not LEAF]
    return len(inner) <= 1 and all(_is_binary_caterpillar(c) for c in inner)


def test_height_is_degree_minus_one_exactly_on_caterpillars():
    for n in range(2, 8):
        tall = [t for t in enumerate_trees(n) if height(t) == n - 1]
        assert all(_is_binary_caterpillar(t) for t in tall)
        assert len(tall) == 2 ** (n - 2)
        assert sum(_is_binary_caterpillar(t) for t in enumerate_trees(n)) == len(tall)


def test_corolla_height_and_arity():
    for n in range(2, 7):
        c = corolla(n)
        assert c.height == 1 and c.arity == n and c.degree == n
    assert corolla(1) is LEAF


@pytest.mark.parametrize("text", ["(|)", "(||)", "(| e)", "(| |", "x", "(| |) |", ""])
def test_parse_rejects_bad_syntax(text):
    with pytest.raises(TreeSyntaxError):
        parse_tree(text)


def test_parse_bound_checks():
    assert parse_tree("(| | |)", bound=3) is corolla(3)
    with pytest.raises(TreeError):
        parse_tree("(| | |)", bound=2)
    assert parse_bound("inf") == INFINITY and parse_bound("3") == 3
    with pytest.raises(TreeError):
        parse_bound("1")
    with pytest.raises(TreeError):
        parse_bound("many")


def test_substitute_leaves():
    c2 = corolla(2)
    assert substitute_leaves(c2, [c2, LEAF]) is parse_tree("((| |) |)")
    with pytest.raises(TreeError):
        substitute_leaves(c2, [LEAF])


def test_compositions_count():
    for n in range(1, 9):
        for k in range(1, n + 1):
            assert len(list(compositions(n, k))) == comb(n - 1, k - 1)
