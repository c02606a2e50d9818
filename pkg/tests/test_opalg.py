import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from logdmod.chart import Chart
from logdmod.frontend import parse_expression
from logdmod.opalg import (OpElement, loc_multiply, localize, normal_form, t_inverse, transpose,
                           twist)
from logdmod.selftest import SMALL_CHARTS, random_operator

from conftest import A1, LL, LP, PT, g
from rewriting_oracle import oracle_product

AX = Chart(1, 1)


def test_theta_t_commutation():
    assert g(LL, "th") * g(LL, "t") == g(LL, "t") * g(LL, "th") + g(LL, "t")


def test_d_x_commutation():
    assert g(A1, "d") * g(A1, "x") == g(A1, "x") * g(A1, "d") + 1


def test_idealized_t_vanishes():
    assert (g(PT, "t") * g(PT, "th")).is_zero()
    assert g(PT, "t").is_zero()


def test_normal_form_tree():
    tree = ("mul", ("gen", "th", 1), ("gen", "t", 1))
    assert str(normal_form(tree, LL)) == "t1*th1 + t1"


def test_theta_squared_t():
    th, t = g(LL, "th"), g(LL, "t")
    assert th ** 2 * t == t * th ** 2 + 2 * t * th + t


def test_x_d_already_normal():
    assert str(g(A1, "x") * g(A1, "d")) == "x1*d1"


def test_log_plane_product():
    t1, t2, h1, h2 = g(LP, "t", 1), g(LP, "t", 2), g(LP, "th", 1), g(LP, "th", 2)
    assert (h1 + h2) * (t1 - t2) == (t1 - t2) * (h1 + h2) + (t1 - t2)


def test_transpose_examples():
    assert transpose(g(A1, "d")) == -g(A1, "d")
    x, th = g(AX, "x"), g(AX, "th")
    assert transpose(x * th) == -(x * th)
    assert transpose(g(LL, "th") * g(LL, "t")) == -(g(LL, "t") * g(LL, "th"))


def test_twist_examples():
    assert twist(g(LL, "th"), 1) == g(LL, "th") + 1
    assert twist(g(PT, "th"), 1) == g(PT, "th")
    t, th = g(LL, "t"), g(LL, "th")
    assert twist(t * th, 1) == t * th + t


def test_localization_examples():
    th = localize(g(LL, "th"), {1})
    tinv = t_inverse(LL, 1)
    assert str(loc_multiply(th, tinv)) == "t1^-1*(th1 - 1)"
    assert loc_multiply(localize(g(LL, "t"), {1}), tinv) == localize(OpElement.const(LL, 1), {1})
    d = localize(g(AX, "d"), {1})
    tinv = t_inverse(AX, 1)
    assert loc_multiply(d, tinv) == loc_multiply(tinv, d)


def test_localization_rejects_idealized():
    with pytest.raises(ValueError):
        localize(g(PT, "th"), {1})


def test_localization_is_ring_map():
    rng = random.Random(3)
    for _ in range(30):
        a, b = random_operator(rng, LP), random_operator(rng, LP)
        lhs = localize(a * b, {1, 2})
        rhs = loc_multiply(localize(a, {1, 2}), localize(b, {1, 2}))
        assert lhs == rhs


def test_inverse_conjugation():
    # t^-1 * t * th * t^-1 = th - 1 rewritten through the inverse
    tinv = t_inverse(LL, 1)
    t = localize(g(LL, "t"), {1})
    th = localize(g(LL, "th"), {1})
    lhs = loc_multiply(loc_multiply(tinv, th), t)
    assert lhs == localize(g(LL, "th") + 1, {1})


def test_chart_mismatch():
    with pytest.raises(ValueError):
        g(LL, "t") * g(LP, "t")


def test_against_rewriting_oracle():
    rng = random.Random(20240611)
    charts = list(SMALL_CHARTS) + [Chart(1, 1), Chart(2, 0)]
    for _ in range(1000):
        chart = rng.choice(charts)
        a = random_operator(rng, chart, max_degree=3)
        b = random_operator(rng, chart, max_degree=3)
        assert (a * b).terms == oracle_product(chart, a.terms, b.terms)


# -- properties ---------------------------------------------------------------

def ops(chart, max_degree=2):
    return st.integers(0, 2 ** 31).map(
        lambda s: random_operator(random.Random(s), chart, max_degree))


charts = st.sampled_from(list(SMALL_CHARTS) + [Chart(1, 1)])


@given(charts.flatmap(lambda c: st.tuples(ops(c), ops(c), ops(c))))
def test_associative(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)


@given(charts.flatmap(lambda c: st.tuples(ops(c), ops(c))))
def test_order_subadditive(ab):
    a, b = ab
    p = a * b
    if not p.is_zero():
        assert p.order() <= a.order() + b.order()


@given(charts.flatmap(lambda c: st.tuples(ops(c), ops(c))))
def test_transpose_anti_automorphism(ab):
    a, b = ab
    assert transpose(a * b) == transpose(b) * transpose(a)
    assert transpose(transpose(a)) == a


@given(charts.flatmap(ops))
def test_transpose_symbol(a):
    if a.is_zero():
        return
    ta = transpose(a)
    assert ta.order() == a.order()
    sign = (-1) ** a.order()
    assert ta.symbol() == {e: sign * c for e, c in a.symbol().items()}


@given(charts.flatmap(lambda c: st.tuples(ops(c), ops(c))), st.sampled_from([1, -1, 2]))
def test_twist_automorphism(ab, s):
    a, b = ab
    assert twist(a * b, s) == twist(a, s) * twist(b, s)
    assert twist(twist(a, s), -s) == a


@given(charts.flatmap(ops))
def test_print_parse_round_trip(a):
    assert parse_expression(str(a), a.chart) == a


@given(charts.flatmap(ops))
def test_unit(a):
    one = OpElement.const(a.chart, 1)
    assert a * one == a == one * a
    assert a * Fraction(1, 2) * 2 == a
