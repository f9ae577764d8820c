import pytest

from magma.algebra import MagAlgebra, mu
from magma.bialgebra import (
    IDENTITY,
    J,
    UNIT_COUNIT,
    Rigidity,
    check_compat,
    convolution,
    convolution_tree,
    idempotent_e,
    iso_phi,
    iso_psi,
    projector_e,
)
from magma.coalgebra import delta, is_primitive
from magma.freemodule import UNIT, Element, labelled, leaf, parse_element, tensor, unit_element
from magma.laws import _tuples
from magma.sampling import make_rng, random_element
from magma.series import f_series, g_series, to_endomorphism
from magma.trees import INFINITY, TreeError, corolla, parse_tree

H = MagAlgebra(INFINITY, ("a", "b"))


def el(b):
    return Element({b: 1})


def test_binary_compatibility_exhaustive():
    H2 = MagAlgebra(2, ("a", "b"))
    for x, y in _tuples(H2, 2, 6, with_unit=False):
        xy = mu([el(x), el(y)], 2)
        want = tensor(xy, unit_element()) + tensor(el(x), el(y)) + tensor(unit_element(), xy)
        assert delta(2, xy, 2) == want


def test_check_compat_report():
    samples = [[parse_element("a + (a b)"), parse_element("2*b")], [leaf("a"), parse_element("(b b b)")]]
    for m in (2, 3, 4):
        report = check_compat(2, m, samples)
        assert report.passed and len(report.cases) == 2
    with pytest.raises(ValueError):
        check_compat(2, 2, [[unit_element(), leaf("a")]])


def test_constant_maps():
    x = parse_element("3 + a - (a b)")
    assert IDENTITY(x) == x
    assert J(x) == parse_element("a - (a b)")
    assert UNIT_COUNIT(x) == unit_element(3)
    assert (IDENTITY - UNIT_COUNIT)(x) == J(x)


def test_convolution_identity():
    # J is the identity on the augmentation ideal, so ⋆_2(J, J) on (a b) is (a b)
    ab = parse_element("(a b)")
    assert convolution([J, J])(ab) == ab
    assert convolution([J, J])(parse_element("(a b c)")) == 0
    assert convolution([IDENTITY, IDENTITY])(leaf("a")) == 2 * leaf("a")
    with pytest.raises(TreeError):
        convolution([J])
    with pytest.raises(TreeError):
        convolution([J, J, J], bound=2)


def test_convolution_tree_variants_agree():
    T = parse_tree("(| (| |))")
    x = parse_element("(a (b a)) + ((a b) a) + (a b a)")
    assert convolution_tree(T, J)(x) == convolution_tree(T, [J, J, J])(x)
    assert convolution_tree(T, J)(x) == parse_element("(a (b a))")
    with pytest.raises(TreeError):
        convolution_tree(T, [J, J])


def test_e_on_examples():
    assert idempotent_e(leaf("a")) == leaf("a")
    assert idempotent_e(parse_element("(x y)")) == 0
    assert idempotent_e(unit_element()) == 0
    assert idempotent_e(parse_element("2*a - 3*(a (b a)) + 7")) == 2 * leaf("a")


def test_e_lemma_on_random_elements():
    rng = make_rng(5)
    e = projector_e()
    for _ in range(60):
        x = random_element(H, rng, 5)
        ex = e(x)
        assert e(ex) == ex
        assert is_primitive(ex) or ex == 0
        assert ex == x.homogeneous(1)


def test_e_kills_products():
    for n in (2, 3):
        for xs in _tuples(H, n, 4, with_unit=False):
            assert idempotent_e(mu([el(b) for b in xs])) == 0


@pytest.mark.parametrize("bound", [2, 3, INFINITY])
def test_rigidity_roundtrip(bound):
    Hm = MagAlgebra(bound, ("a", "b"))
    R = Rigidity(Hm)
    for b in Hm.basis_upto(4, min_degree=0):
        assert R.phi(R.psi(el(b))) == el(b)
        assert R.psi(R.phi(el(b))) == el(b)


def test_rigidity_with_a_twisted_primitive_basis():
    p, q = parse_element("a + b"), parse_element("a - b")
    R = Rigidity(H, {"p": p, "q": q})
    assert R.phi(parse_element("(p q)")) == mu([p, q])
    assert R.psi(leaf("a")) == parse_element("1/2*p + 1/2*q")
    assert R.psi(parse_element("(a a)")) == parse_element("1/4*(p p) + 1/4*(p q) + 1/4*(q p) + 1/4*(q q)")
    for b in H.basis_upto(4, min_degree=0):
        assert R.phi(R.psi(el(b))) == el(b)
    for b in MagAlgebra(INFINITY, ("p", "q")).basis_upto(4, min_degree=0):
        assert R.psi(R.phi(el(b))) == el(b)


def test_rigidity_rejects_bad_primitives():
    with pytest.raises(TreeError):
        Rigidity(H, {"p": parse_element("(a b)")})
    with pytest.raises(TreeError):
        Rigidity(H, {"p": leaf("a"), "q": 2 * leaf("a")})
    with pytest.raises(TreeError):
        Rigidity(H, {"p": leaf("a")}).phi(parse_element("(p z)"))
    with pytest.raises(TreeError):
        Rigidity(H, {"p": leaf("a")}).psi(leaf("b"))


def test_iso_helpers():
    x = parse_element("(a (b a)) - 2")
    assert iso_phi(H, iso_psi(H, x)) == x


def test_f_star_after_g_star_substitution_reading():
    # substituting g^⋆(J) for J inside f^⋆ gives back J
    D = 5
    f, g = f_series(D), g_series(D)
    FG = to_endomorphism(f, base=to_endomorphism(g))
    for b in H.basis_upto(D, min_degree=0):
        assert FG.on_basis(b) == J.on_basis(b)


def test_f_star_after_g_star_composition_reading_fails():
    # composing the two endomorphisms does not give J: g^⋆(J) = e kills degree 2
    D = 3
    F, G = to_endomorphism(f_series(D)), to_endomorphism(g_series(D))
    x = parse_element("(a a)")
    assert G(x) == 0
    assert (F @ G)(x) != J(x)
    assert (G @ G)(x) == 0
    assert to_endomorphism(g_series(D), base=G)(x) == -x


def test_report_json_schema():
    report = check_compat(2, 2, [[leaf("a"), leaf("b")]])
    js = report.to_json()
    assert set(js) == {"law", "arity_bound", "degree", "cases", "pass", "paper_ref"}
    assert set(js["cases"][0]) == {"id", "input", "expected", "got", "pass"}
    assert js["pass"] is True and js["arity_bound"] == "inf"
