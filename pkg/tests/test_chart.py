from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from logdmod.chart import (Chart, StratumComponent, logdim_chart, logdim_subvariety,
                           stratum_ideal_monomials, strata_components)
from logdmod.comalg import CommIdeal, krull_dim

from conftest import LL, LP, PT


def mono(chart, **powers):
    e = [0] * chart.nvars
    for name, k in powers.items():
        e[chart.cotangent_names().index(name)] = k
    return tuple(e)


def var(chart, name):
    return {mono(chart, **{name: 1}): Fraction(1)}


def test_chart_quantities():
    assert (LL.dim, LL.logdim, LL.generic_rank, LL.depth) == (1, 1, 0, 1)
    assert (PT.dim, PT.logdim, PT.generic_rank, PT.depth) == (0, 1, 1, 0)
    assert (LP.dim, LP.logdim, LP.generic_rank, LP.depth) == (2, 2, 0, 2)
    c = Chart(2, 3, frozenset({2}))
    assert c.cotangent_names() == ["x1", "x2", "t1", "t2", "t3", "xi1", "xi2", "tau1", "tau2", "tau3"]
    assert c.operator_names() == ["x1", "x2", "t1", "t2", "t3", "d1", "d2", "th1", "th2", "th3"]


def test_invalid_chart():
    with pytest.raises(ValueError):
        Chart(0, 1, frozenset({2}))


def test_logdim_chart():
    assert [logdim_chart(c) for c in (LL, PT, LP)] == [1, 1, 2]


def test_strata_components():
    assert [c.vanishing for c in strata_components(LL, 1)] == [frozenset({1})]
    assert [c.vanishing for c in strata_components(LP, 1)] == [frozenset({1}), frozenset({2})]
    assert strata_components(PT, 1) == []
    assert [c.vanishing for c in strata_components(LP, 0)] == [frozenset()]
    assert [c.vanishing for c in strata_components(LP, -1)] == [frozenset()]
    assert strata_components(LP, 3) == []


def test_stratum_component_as_chart():
    comp = StratumComponent(LP, frozenset({1}))
    assert comp.codim == 1
    assert comp.as_chart() == Chart(0, 2, frozenset({1}))
    with pytest.raises(ValueError):
        StratumComponent(PT, frozenset({1}))


def test_stratum_ideal():
    assert stratum_ideal_monomials(LP, 0) == []
    assert sorted(stratum_ideal_monomials(LP, 1)) == [mono(LP, t1=1, t2=1)]
    assert sorted(stratum_ideal_monomials(LP, 2)) == sorted([mono(LP, t1=1), mono(LP, t2=1)])
    assert stratum_ideal_monomials(LP, 3) == [(0,) * LP.nvars]


def test_logdim_subvariety_examples():
    t, tau = var(LL, "t1"), var(LL, "tau1")
    assert logdim_subvariety(LL, [t, tau]) == 1
    assert logdim_subvariety(LL, [t]) == 2
    assert logdim_subvariety(LL, [tau]) == 1
    assert logdim_subvariety(LL, [{(0, 0): Fraction(1)}]) is None


def test_logdim_subvariety_rejects_wrong_variables():
    with pytest.raises(ValueError):
        logdim_subvariety(LL, [{(1, 0, 0): Fraction(1)}])


CHARTS = [LL, LP, PT, Chart(1, 1), Chart(1, 0), Chart(0, 2, frozenset({1})), Chart(1, 2)]


@pytest.mark.parametrize("chart", CHARTS)
def test_zero_section_logdim(chart):
    fiber = [var(chart, n) for n in chart.cotangent_names()[chart.n_free + chart.n_log:]]
    assert logdim_subvariety(chart, CommIdeal(chart, fiber)) == logdim_chart(chart)


@pytest.mark.parametrize("chart", CHARTS)
def test_full_cotangent_logdim(chart):
    expected = 2 * logdim_chart(chart)
    assert logdim_subvariety(chart, CommIdeal(chart, [])) == expected


def random_monomial_ideal(chart, data):
    gens = []
    for _ in range(data.draw(st.integers(0, 3))):
        e = tuple(data.draw(st.integers(0, 1)) for _ in range(chart.nvars))
        gens.append({e: Fraction(1)})
    return gens


@given(st.data())
def test_logdim_monotone(data):
    chart = data.draw(st.sampled_from(CHARTS))
    J = random_monomial_ideal(chart, data)
    extra = random_monomial_ideal(chart, data)
    a = logdim_subvariety(chart, J)
    b = logdim_subvariety(chart, J + extra)
    assert b is None or (a is not None and a >= b)


@given(st.data())
def test_logdim_at_least_krull_dim(data):
    chart = data.draw(st.sampled_from([c for c in CHARTS if not c.idealized]))
    J = random_monomial_ideal(chart, data)
    ld = logdim_subvariety(chart, J)
    kd = krull_dim(CommIdeal(chart, J))
    assert (ld is None) == (kd is None)
    if ld is not None:
        assert ld >= kd
