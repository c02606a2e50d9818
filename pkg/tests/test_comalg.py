import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from logdmod.chart import Chart
from logdmod.comalg import (CommIdeal, comm_gb, eliminate, gb_polys, intersect_polys, krull_dim,
                            krull_dim_polys, minimal_primes_sqfree, normal_form,
                            radical_member_polys, radical_membership, saturate_polys)

from conftest import LL, LP



def P(chart, text):
    from logdmod.frontend import parse_polynomial
    return parse_polynomial(text, chart)


def I(chart, *texts):
    return CommIdeal(chart, [P(chart, s) for s in texts])


def fmt(J):
    return sorted(J.formatted())


def test_gb_examples():
    assert fmt(comm_gb(I(LL, "t1", "tau1"))) == ["t1", "tau1"]
    assert fmt(comm_gb(I(LP, "t1 - t2", "tau1 + tau2"))) == ["t1 - t2", "tau1 + tau2"]
    assert fmt(comm_gb(I(LL, "t1", "t1*tau1 - 1"))) == ["1"]


def test_krull_dim_examples():
    assert krull_dim(I(LL, "t1", "tau1")) == 0
    assert krull_dim(I(LL, "tau1")) == 1
    assert krull_dim(I(LP, "t1 - t2", "tau1 + tau2")) == 2
    assert krull_dim(I(LL, "1")) is None


def test_radical_membership_examples():
    assert radical_membership(P(LL, "t1"), I(LL, "t1^2"))
    assert not radical_membership(P(LL, "t1"), I(LL, "tau1"))
    assert not radical_membership(P(LP, "t1*t2"), I(LP, "t1 - t2", "tau1 + tau2"))


def test_eliminate_examples():
    t_slots = [LL.t_slot(1)]
    assert fmt(eliminate(I(LL, "t1", "tau1"), t_slots)) == ["t1"]
    assert fmt(eliminate(I(LL, "tau1"), t_slots)) == []
    t_slots = [LP.t_slot(1), LP.t_slot(2)]
    assert fmt(eliminate(I(LP, "t1 - t2", "tau1 + tau2"), t_slots)) == ["t1 - t2"]


def test_minimal_primes_examples():
    assert minimal_primes_sqfree([{"t1", "t2"}]) == [frozenset({"t1"}), frozenset({"t2"})]
    assert minimal_primes_sqfree([{"t1"}]) == [frozenset({"t1"})]
    assert minimal_primes_sqfree([{"t1", "t2"}, {"t1", "t3"}]) == [
        frozenset({"t1"}), frozenset({"t2", "t3"})]


def test_idealized_generators_are_implicit():
    PT = Chart(0, 1, frozenset({1}))
    J = CommIdeal(PT, [])
    assert fmt(J) == ["t1"]


def test_intersection_and_saturation():
    A = [P(LL, "tau1")]
    B = [P(LL, "t1")]
    assert sorted(map(str, intersect_polys(LL.nvars, A, B))) == [str(P(LL, "t1*tau1"))]
    sat = saturate_polys(LL.nvars, [P(LL, "t1*tau1"), P(LL, "t1^2")], P(LL, "t1"))
    assert gb_polys(LL.nvars, sat) == [{(0, 0): Fraction(1)}]


# -- sympy as an independent oracle ------------------------------------------

def to_sympy(p, syms):
    return sum(sympy.Rational(c.numerator, c.denominator)
               * sympy.prod([s ** k for s, k in zip(syms, e)]) for e, c in p.items())


def from_sympy(expr, syms):
    poly = sympy.Poly(expr, *syms)
    return {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}


def random_poly(rng, nvars, terms=3, deg=2):
    p = {}
    for _ in range(rng.randint(1, terms)):
        e = [0] * nvars
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(nvars)] += 1
        p[tuple(e)] = p.get(tuple(e), 0) + rng.choice([-2, -1, 1, 2, 3])
    return {e: Fraction(c) for e, c in p.items() if c}


def monic(p, order_key):
    lead = max(p, key=order_key)
    c = p[lead]
    return {e: a / c for e, a in p.items()}


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


@pytest.mark.parametrize("seed", range(25))
def test_reduced_gb_matches_sympy(seed):
    rng = random.Random(seed)
    nvars = rng.choice([2, 3, 4])
    polys = [p for p in (random_poly(rng, nvars) for _ in range(rng.randint(1, 3))) if p]
    syms = sympy.symbols(f"v0:{nvars}")
    ours = gb_polys(nvars, polys)
    theirs = sympy.groebner([to_sympy(p, syms) for p in polys], *syms, order="grevlex")
    theirs = [from_sympy(g, syms) for g in theirs.exprs]
    norm = lambda gb: sorted(sorted(monic(p, grevlex_key).items()) for p in gb)
    assert norm(ours) == norm(theirs)


def sympy_dim(polys, nvars):
    """Largest U with I ∩ k[U] = 0, via lex elimination in sympy."""
    syms = sympy.symbols(f"v0:{nvars}")
    exprs = [to_sympy(p, syms) for p in polys]
    if list(sympy.groebner(exprs, *syms, order="grevlex").exprs) == [1]:
        return None
    for size in range(nvars, -1, -1):
        for U in itertools.combinations(range(nvars), size):
            rest = [syms[i] for i in range(nvars) if i not in U]
            keep = [syms[i] for i in U]
            G = sympy.groebner(exprs, *(rest + keep), order="lex")
            if not any(g.free_symbols <= set(keep) for g in G.exprs):
                return size
    return -1


@pytest.mark.parametrize("seed", range(20))
def test_krull_dim_matches_sympy_elimination(seed):
    rng = random.Random(100 + seed)
    nvars = rng.choice([2, 3])
    polys = [p for p in (random_poly(rng, nvars) for _ in range(rng.randint(1, 2))) if p]
    assert krull_dim_polys(nvars, polys) == sympy_dim(polys, nvars)


@pytest.mark.parametrize("seed", range(20))
def test_radical_membership_matches_sympy(seed):
    rng = random.Random(200 + seed)
    nvars = 2
    polys = [random_poly(rng, nvars) for _ in range(2)]
    f = random_poly(rng, nvars)
    y = sympy.Symbol("y")
    syms = sympy.symbols("v0:2")
    G = sympy.groebner([to_sympy(p, syms) for p in polys] + [1 - y * to_sympy(f, syms)],
                       *syms, y, order="grevlex")
    assert radical_member_polys(nvars, f, polys) == (list(G.exprs) == [1])


# -- properties ---------------------------------------------------------------

def poly_strategy(nvars):
    return st.integers(0, 2 ** 31).map(lambda s: random_poly(random.Random(s), nvars))


@given(st.lists(poly_strategy(3), min_size=1, max_size=3))
def test_dim_equals_leading_term_dim(polys):
    from logdmod.gbcore import ModuleOrder
    order = ModuleOrder(3)
    gb = gb_polys(3, polys, order)
    leads = [{max(g, key=lambda e: order.key((0, e))): Fraction(1)} for g in gb]
    assert krull_dim_polys(3, polys) == krull_dim_polys(3, leads)


@given(st.lists(poly_strategy(3), min_size=1, max_size=3), st.sets(st.integers(0, 2), min_size=1))
def test_eliminated_generators_lie_in_ideal(polys, keep):
    gb = gb_polys(3, polys)
    from logdmod.comalg import eliminate_polys
    for g in eliminate_polys(3, polys, keep):
        assert not normal_form(g, gb, 3)
        assert all(e[i] == 0 for e in g for i in range(3) if i not in keep)
