from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from corpus import CURVES, SURFACES, curve, pair
from qozeta.cones import build_newton_path
from qozeta.errors import (
    InvalidInput,
    InvalidRoot,
    NonTerminatingNormalization,
    NotSquarefree,
    ParseError,
)
from qozeta.exactalg import QQ, UniPoly, adjoin_root
from qozeta.mpoly import (
    MPoly,
    QOPair,
    _monomial_exponent,
    discriminant_z,
    essential_variables,
    good_coordinates,
    is_quasi_ordinary,
    make_pair,
    newton_map_substitute,
    parse,
    resultant_z,
    sylvester_resultant_z,
    z_part,
)
from qozeta.zeta import depth, newton_tree


def mpolys(nx: int, max_exp: int = 3, max_zdeg: int = 3, min_zdeg: int = 0):
    exps = st.tuples(*([st.integers(0, max_exp)] * nx + [st.integers(0, max_zdeg)]))
    coeffs = st.integers(-5, 5).filter(bool)
    return st.dictionaries(exps, coeffs, min_size=1, max_size=5).map(
        lambda t: MPoly(nx, {e: Fraction(c) for e, c in t.items()})
    ).filter(lambda f: f.deg_z() >= min_zdeg)


# ---------------------------------------------------------------- parsing


def test_parse_supports():
    assert set(parse("z^2 - x1^3", ["x1", "z"]).support()) == {(3, 0), (0, 2)}
    assert set(parse("(z^2-x1^3)^2+x1^7", ["x1", "z"]).support()) == {(0, 4), (3, 2), (6, 0), (7, 0)}
    assert set(parse("z^2 - x1^2*x2^5", ["x1", "x2", "z"]).support()) == {(0, 0, 2), (2, 5, 0)}


def test_parse_precedence_and_unary_minus():
    names = ["x", "z"]
    assert parse("-x^2*3", names) == MPoly(1, {(2, 0): Fraction(-3)})
    assert parse("2*(x+z)^2", names) == parse("2*x^2+4*x*z+2*z^2", names)
    assert parse("z^2/2", names) == MPoly(1, {(0, 2): Fraction(1, 2)})


@pytest.mark.parametrize("text", ["z^2 - y", "z^^2", "z^-1", "(z+x", "2 z", "x^1.5"])
def test_parse_errors(text):
    with pytest.raises(InvalidInput):
        parse(text, ["x", "z"])


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("z^2 - y", ["x", "z"])
    assert info.value.position == 6


@settings(max_examples=150, deadline=None)
@given(mpolys(2))
def test_print_parse_round_trip(f):
    names = ["x1", "x2", "z"]
    assert parse(f.to_str(names), names) == f


@settings(max_examples=100, deadline=None)
@given(mpolys(1), mpolys(1), mpolys(1))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


# ---------------------------------------------------------------- discriminants


def test_discriminant_examples():
    names = ["x", "z"]
    assert discriminant_z(parse("z^2-x^3", names)) == parse("-4*x^3", names)
    assert discriminant_z(parse("z^2+2*z-x", names)) == parse("-4*x-4", names)
    assert discriminant_z(parse("z", names)) == parse("1", names)
    with pytest.raises(InvalidInput):
        discriminant_z(parse("x^2", names))


def test_quasi_ordinary_examples():
    names = ["x1", "x2", "z"]
    assert is_quasi_ordinary(parse("z^2-x1^3", ["x1", "z"])) == (True, (3,))
    assert is_quasi_ordinary(parse("z^2-x1^3*x2-x1^4", names)) == (False, None)
    assert is_quasi_ordinary(parse("z^2-x1^2*x2^5", names)) == (True, (2, 5))
    with pytest.raises(NotSquarefree):
        is_quasi_ordinary(parse("(z-x1)^2*(z-x2)", names))


def _sympy_resultant(f: MPoly, g: MPoly):
    gens = sympy.symbols(f"v0:{f.nx + 1}")

    def conv(p):
        return sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[v**e for v, e in zip(gens, ex)])
                   for ex, c in p.terms.items())

    return sympy.expand(sympy.resultant(conv(f), conv(g), gens[-1]))


@settings(max_examples=60, deadline=None)
@given(mpolys(2, max_zdeg=2, min_zdeg=1), mpolys(2, max_zdeg=2, min_zdeg=1))
def test_bareiss_resultant_matches_sympy(f, g):
    assert sylvester_resultant_z(f, g) == resultant_z(f, g)


@settings(max_examples=40, deadline=None)
@given(mpolys(2, max_exp=2, max_zdeg=2, min_zdeg=1), mpolys(2, max_exp=2, max_zdeg=2, min_zdeg=1))
def test_discriminant_multiplicativity(f, g):
    fg = f * g
    assume(not discriminant_z(fg).is_zero())
    lhs = discriminant_z(fg)
    rhs = discriminant_z(f) * discriminant_z(g) * resultant_z(f, g) ** 2
    assert lhs == rhs or lhs == -rhs


def test_resultant_over_gaussian_field():
    tower, i = adjoin_root(QQ, UniPoly([1, 0, 1]))
    f = MPoly(1, {(0, 2): Fraction(1), (2, 0): i})  # z^2 + i x^2
    g = MPoly(1, {(0, 1): Fraction(1), (1, 0): Fraction(-1)})  # z - x
    # res_z(z^2 + i x^2, z - x) = x^2 + i x^2
    assert resultant_z(f, g) == MPoly(1, {(2, 0): 1 + i})


@settings(max_examples=40, deadline=None)
@given(st.lists(mpolys(2, max_exp=2, max_zdeg=2, min_zdeg=1), min_size=2, max_size=3))
def test_factored_qo_test_matches_direct_discriminant(factors):
    f = MPoly.constant(2, 1)
    for g in factors:
        f = f * g
    f = z_part(f)
    assume(f.deg_z() >= 2)
    disc = discriminant_z(f)
    if disc.is_zero():
        with pytest.raises(NotSquarefree):
            is_quasi_ordinary(f)
        return
    alpha = _monomial_exponent(disc)
    assert is_quasi_ordinary(f) == ((True, alpha) if alpha is not None else (False, None))


# ---------------------------------------------------------------- good coordinates


def test_good_coordinates_shift():
    p = curve("(z-x^2)^2-x^5")
    good, log = good_coordinates(p)
    assert good.h == parse("z^2-x^5", ["x", "z"])
    assert len(log) == 1


def test_already_good():
    p = curve("(z^2-x^5)*(z-x^2)*(z^3-x^2)")
    good, log = good_coordinates(p)
    assert log == [] and good == p


def test_infinite_smooth_branch_rejected():
    with pytest.raises(NonTerminatingNormalization):
        good_coordinates(curve("z^2+2*z-x"), max_shifts=50)


@pytest.mark.parametrize("text", CURVES)
def test_good_coordinates_idempotent_curves(text):
    good, _ = good_coordinates(curve(text))
    again, log = good_coordinates(good)
    assert again == good and log == []


@pytest.mark.parametrize("text, names", SURFACES)
def test_good_coordinates_idempotent_surfaces(text, names):
    good, _ = good_coordinates(pair(text, names))
    again, log = good_coordinates(good)
    assert again == good and log == []


# ---------------------------------------------------------------- Newton maps


def test_newton_map_cusp():
    p = curve("z^2-x^3")
    e = build_newton_path(p).edges[0]
    out = newton_map_substitute(p, e, Fraction(1))
    assert out.N == (6,) and out.nu == (5,)
    assert out.h == parse("x^6*z^2+2*x^6*z", ["x", "z"])


def test_newton_map_depth_two_first_stage():
    p = curve("(z^2-x^3)^2+x^7")
    e = build_newton_path(p).edges[0]
    out = newton_map_substitute(p, e, Fraction(1))
    assert out.N == (12,) and out.nu == (5,)
    assert z_part(out.h) == parse("(z^2+2*z)^2+x^2", ["x", "z"])


def test_newton_map_rejects_non_root():
    p = curve("z^2-x^3")
    e = build_newton_path(p).edges[0]
    with pytest.raises(InvalidRoot):
        newton_map_substitute(p, e, Fraction(2))


def _walk(node):
    yield node
    for bs in node.branches:
        for b in bs:
            yield from _walk(b.child)


CORPUS = [(t, "x,z") for t in CURVES] + list(SURFACES)


@pytest.mark.parametrize("text, names", CORPUS)
def test_newton_maps_decrease_depth_and_keep_support_condition(text, names):
    tree = newton_tree(pair(text, names))
    for node in _walk(tree):
        q = node.pair
        assert all(n > 0 or v == 1 for n, v in zip(q.N, q.nu))
        # fresh Newton processes; pull-backs of quasi-ordinary germs are
        # quasi-ordinary, so the discriminant test is skipped
        parent = newton_tree(q, check=False).depth()
        for bs in node.branches:
            for b in bs:
                assert newton_tree(b.child.pair, check=False).depth() < parent


def test_support_condition_enforced():
    with pytest.raises(InvalidInput):
        QOPair(parse("z^2-x^3", ["x", "z"]), (2,))
    assert make_pair(parse("x*z", ["x", "z"]), (4,)).nu == (4,)


def test_essential_variables():
    assert essential_variables(pair("z^2-x1^3", "x1,x2,z")) == [0]
    assert essential_variables(pair("z", "x1,x2,z")) == []
    assert essential_variables(curve("x^2*z^2-x^5")) == [0]
