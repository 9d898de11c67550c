from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from utforms.errors import DivisionByZeroConstant, ParseError
from utforms.holo import parse, pretty
from utforms.holo.expr import Num, Var


def test_polynomial_has_no_singularities():
    h = parse("z^2 + 1")
    np.testing.assert_allclose(h.polynomial, [1, 0, 1])
    assert h.poles == () and h.cuts == ()
    assert h.is_entire


def test_simple_pole():
    h = parse("1/(z-3)")
    assert h.poles == (3 + 0j,)
    assert h.polynomial is None


def test_poles_of_rational_times_exp():
    h = parse("exp(z)/(z^2+1)")
    assert sorted(h.poles, key=lambda p: p.imag) == pytest.approx([-1j, 1j], abs=1e-8)


def test_literals_and_unary_signs():
    assert parse("2.5i").ast == Num(2.5j)
    assert parse("i").ast == Num(1j)
    assert parse("1e-3").ast == Num(1e-3 + 0j)
    assert parse("+z").ast == Var()
    assert parse("-z")(2.0) == -2.0


def test_evaluation_matches_numpy():
    h = parse("exp(z)/(z^2+1) - 3*sqrt(z+4) + log(2*z+5)")
    z = np.array([0.3 + 0.2j, -1.1 + 0.5j, 2.0])
    expected = np.exp(z) / (z**2 + 1) - 3 * np.sqrt(z + 4) + np.log(2 * z + 5)
    np.testing.assert_allclose(h(z), expected, rtol=1e-14)


def test_branch_cut_of_log():
    h = parse("log(z - 1)")
    (cut,) = h.cuts
    assert cut.point == 1
    assert cut.direction == -1
    assert h.is_singular_at(0.0)
    assert not h.is_singular_at(2.0)
    assert h.singularity_distance(1 + 2j) == pytest.approx(2.0)


def test_parse_errors_carry_byte_offsets():
    with pytest.raises(ParseError) as info:
        parse("z + $")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        parse("é + z")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        parse("(z + 1")
    assert info.value.offset == 6
    with pytest.raises(ParseError):
        parse("z^1.5")
    with pytest.raises(ParseError):
        parse("sin(z)")
    with pytest.raises(ParseError):
        parse("log(z^2)")
    with pytest.raises(ParseError):
        parse("z z")


def test_offset_counts_bytes_not_characters():
    with pytest.raises(ParseError) as info:
        parse("2·z")
    assert info.value.offset == 1
    with pytest.raises(ParseError) as info:
        parse("(· z)")
    assert info.value.offset == 1


def test_constant_zero_denominator():
    with pytest.raises(DivisionByZeroConstant):
        parse("1/(z-z)")
    with pytest.raises(DivisionByZeroConstant):
        parse("z/0")


def test_taylor_coefficients_of_exp():
    coef = parse("exp(z)").taylor(0.0, 5)
    np.testing.assert_allclose(coef, [1, 1, 1 / 2, 1 / 6, 1 / 24, 1 / 120], rtol=1e-15)


@given(st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False))
def test_taylor_matches_finite_differences_of_rational(c):
    h = parse("(z^3 - 2*z + 1)/(z - 5)")
    coef = h.taylor(c, 2)
    # derivatives of a rational function in closed form
    f = lambda z: (z**3 - 2 * z + 1) / (z - 5)
    df = lambda z: ((3 * z**2 - 2) * (z - 5) - (z**3 - 2 * z + 1)) / (z - 5) ** 2
    assert coef[0] == pytest.approx(f(c), rel=1e-12, abs=1e-12)
    assert coef[1] == pytest.approx(df(c), rel=1e-10, abs=1e-10)


leaves = st.one_of(
    st.just("z"),
    st.integers(0, 99).map(str),
    st.floats(0.01, 50, allow_nan=False).map(lambda x: f"{x!r}"),
    st.integers(1, 9).map(lambda k: f"{k}i"),
)


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*"), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(children, st.integers(0, 4)).map(lambda t: f"({t[0]})^{t[1]}"),
        children.map(lambda s: f"-{s}"),
        children.map(lambda s: f"exp({s})"),
        st.integers(1, 9).map(lambda k: f"sqrt({k}*z + 2)"),
        st.tuples(children, st.integers(2, 9)).map(lambda t: f"{t[0]} / (z - {t[1]})"),
    )


sources = st.recursive(leaves, _combine, max_leaves=12)


@given(sources)
def test_pretty_print_round_trip(source):
    h = parse(source)
    again = parse(pretty(h.ast))
    assert again.ast == h.ast
    assert pretty(again.ast) == pretty(h.ast)
