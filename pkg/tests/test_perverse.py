import random

import pytest
from hypothesis import given, strategies as st

from logdmod.charvar import char_ideal, is_holonomic, same_variety
from logdmod.comalg import CommIdeal
from logdmod.duality import verdier_dual
from logdmod.frontend import parse_polynomial
from logdmod.ncgb import (cohomology, complex_from_module, compose,
                          direct_sum_complex, is_zero_module, unit_vec)
from logdmod.perverse import (UNDETERMINED, check_ge0, check_le0, fiber, gabber_filtration,
                              ge0_table, grade_filtration_piece, is_log_perverse, le0_witness,
                              p_coherent, perverse_cohomology, perverse_truncate,
                              perverse_truncate_map, prime_certificate, same_filtration,
                              sato_kashiwara, sato_kashiwara_piece, submodule_presentation)
from logdmod.selftest import random_presentation

from conftest import FIXTURES, HOLONOMIC, LL, LP, c0, d_t, f_lp, g, module, o_ll

MEMBERSHIP = {
    ("O_LL", 0): (True, True), ("O_LL", 1): (False, True),
    ("C0", 0): (True, False), ("C0", 1): (True, True),
    ("D/Dt", 0): (True, False), ("D/Dt", 1): (True, True),
    ("F_LP", 0): (True, False), ("F_LP", 1): (False, True),
    ("O_PT", 0): (True, False), ("O_PT", 1): (True, True),
}


def cx(name, degree=0):
    return complex_from_module(FIXTURES[name](), degree)


@pytest.mark.parametrize("key", sorted(MEMBERSHIP))
def test_membership(key):
    name, degree = key
    v = is_log_perverse(cx(name, degree))
    assert (v.le0, v.ge0) == MEMBERSHIP[key]
    assert v.perverse == all(MEMBERSHIP[key])


def test_le0_witness_lists_support_checks():
    w = le0_witness(cx("C0", 1))
    assert (1, 1, True) in [tuple(x) for x in w]


def test_ge0_table_reports_violation_for_torsion_in_degree_zero():
    table = ge0_table(cx("C0", 0))
    assert any(not row[-1] for row in table)
    assert all(row[-1] for row in ge0_table(cx("C0", 1)))


def test_shift_moves_level():
    C = cx("O_LL", 0)
    assert check_le0(C, 0) and check_ge0(C, 0)
    assert check_le0(C, 1) and not check_ge0(C, 1)
    D = cx("O_LL", -1)
    assert check_le0(D, -1) and check_ge0(D, -1)


# -- truncation -------------------------------------------------------------

TRUNC_CASES = [(name, deg, n) for name in ("O_LL", "C0", "D/Dt", "O_PT", "O_LL+C0")
               for deg in (0, 1) for n in (-1, 0, 1)]


def build(name, deg):
    if name == "O_LL+C0":
        return direct_sum_complex(complex_from_module(o_ll(), deg), complex_from_module(c0(), deg))
    return cx(name, deg)


def vadd(*vs):
    out = {}
    for v in vs:
        for k, a in v.items():
            out[k] = out.get(k, 0) + a
    return {k: a for k, a in out.items() if a}


@pytest.mark.parametrize("name,deg,n", TRUNC_CASES)
def test_truncation_postconditions(name, deg, n):
    C = build(name, deg)
    A, B = perverse_truncate(C, n)
    assert A.check() and B.check()
    assert check_le0(A, n)
    assert check_ge0(B, n + 1)


@pytest.mark.parametrize("name,deg,n", TRUNC_CASES)
def test_truncation_triangle_maps(name, deg, n):
    C = build(name, deg)
    f = perverse_truncate_map(C, n)
    assert f.check()
    A = fiber(f)
    chart = C.chart
    # the composite fiber -> C -> B is null-homotopic through h(g, r) = -r
    for i in A.degrees():
        gi, ri = C.rank(i), f.target.rank(i - 1)
        proj = [unit_vec(chart, c) for c in range(gi)] + [{} for _ in range(ri)]
        composite = compose(chart, proj, f.at(i)) if gi else [{} for _ in range(ri)]

        def h(k):
            g_, r_ = C.rank(k), f.target.rank(k - 1)
            return [{} for _ in range(g_)] + [{(c, e): -a for (c, e), a in unit_vec(chart, j).items()}
                                              for j, c in enumerate(range(r_))]

        dh = compose(chart, A.d(i), h(i + 1)) if A.rank(i) else []
        hd = compose(chart, h(i), f.target.d(i - 1)) if A.rank(i) and f.target.rank(i - 1) else \
            [{} for _ in range(A.rank(i))]
        for a, b, c in zip(composite, dh, hd):
            assert a == vadd(b, c)


def test_truncation_of_c0_in_degree_zero():
    A, B = perverse_truncate(cx("C0", 0), -1)
    # C0 in degree 0 is concentrated in perverse degree <= -1
    assert all(is_zero_module(cohomology(B, k)) for k in B.degrees())
    assert not is_zero_module(cohomology(A, 0))


def test_truncation_of_o_ll_splits_nothing():
    A, B = perverse_truncate(cx("O_LL", 0), 0)
    assert all(is_zero_module(cohomology(B, k)) for k in B.degrees())
    A, B = perverse_truncate(cx("O_LL", 0), -1)
    assert all(is_zero_module(cohomology(A, k)) for k in A.degrees())


def test_mixed_sum_truncation_separates_torsion():
    C = build("O_LL+C0", 0)
    A, B = perverse_truncate(C, -1)
    HA = cohomology(A, 0)
    HB = cohomology(B, 0)
    t, tau = parse_polynomial("t1", LL), parse_polynomial("tau1", LL)
    assert same_variety(char_ideal(HA), CommIdeal(LL, [t, tau]))
    assert same_variety(char_ideal(HB), CommIdeal(LL, [tau]))


def test_depth_two_truncation_trivial_cases():
    C = cx("F_LP", 0)
    A, B = perverse_truncate(C, 0)
    assert A is C and not B.degrees() or all(B.rank(k) == 0 for k in B.degrees())
    C1 = cx("F_LP", 1)
    A, B = perverse_truncate(C1, -1)
    assert B is C1


def test_depth_two_mixed_is_undetermined():
    C = direct_sum_complex(cx("F_LP", 0), cx("F_LP", 1))
    assert perverse_truncate(C, 0) == UNDETERMINED
    assert perverse_truncate_map(C, 0) == UNDETERMINED


@pytest.mark.parametrize("name", ["O_LL", "C0", "O_PT"])
def test_holonomic_perverse_cohomology_is_holonomic(name):
    C = cx(name, 0)
    for n in (-1, 0, 1):
        P = perverse_cohomology(C, n)
        assert P != UNDETERMINED
        for k in P.degrees():
            H = cohomology(P, k)
            assert is_zero_module(H) or is_holonomic(H)


# -- duality and p-coherence -------------------------------------------------

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_holonomic_iff_dual_is_perverse(name):
    M = FIXTURES[name]()
    assert is_holonomic(M) == HOLONOMIC[name]
    assert is_log_perverse(verdier_dual(M).complex).perverse == HOLONOMIC[name]


def test_perversity_is_not_self_dual():
    # C0 placed in degree 1 is perverse, its dual C0 in degree 0 is not
    C = cx("C0", 1)
    assert is_log_perverse(C).perverse
    assert not is_log_perverse(verdier_dual(C).complex).perverse


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_p_coherence(name):
    expected = None if name == "F_LP" else True
    assert p_coherent(cx(name)) is expected


# -- filtrations ---------------------------------------------------------------

@pytest.mark.parametrize("name,levels", [
    ("O_LL", [False]), ("C0", [False]), ("O_PT", [False]),
    ("D/Dt", [True, False]), ("F_LP", [True, False]),
])
def test_gabber_levels(name, levels):
    M = FIXTURES[name]()
    r = gabber_filtration(M)
    assert r.method == "direct"
    assert [lv.as_dict()["zero"] for lv in r.levels] == levels
    assert r.levels[-1].logdim == _logdim_of(M)


def _logdim_of(M):
    from logdmod.chart import logdim_subvariety
    return logdim_subvariety(M.chart, char_ideal(M))


def test_gabber_level_bounds():
    for name, f in FIXTURES.items():
        M = f()
        for lv in gabber_filtration(M).levels:
            assert lv.logdim is None or lv.logdim <= M.chart.logdim + lv.level


def test_gabber_mixed_sum_uses_dual_route():
    M = o_ll().direct_sum(d_t())
    r = gabber_filtration(M)
    assert r.method == "dual-route"
    G0 = submodule_presentation(M, r.levels[0].generators)
    assert same_variety(char_ideal(G0), CommIdeal(LL, [parse_polynomial("tau1", LL)]))


@pytest.mark.parametrize("name", ["O_LL", "C0", "D/Dt", "O_PT"])
def test_direct_agrees_with_dual_route(name):
    M = FIXTURES[name]()
    assert same_filtration(M, gabber_filtration(M), sato_kashiwara(M))


def test_dual_route_is_undetermined_in_depth_two():
    assert sato_kashiwara(f_lp()).method == UNDETERMINED
    assert sato_kashiwara_piece(f_lp(), 0) == UNDETERMINED


def test_grade_filtration_of_pure_module():
    M = d_t()
    assert grade_filtration_piece(M, M.chart.dim) != []
    assert grade_filtration_piece(M, M.chart.dim - 1) == []


def test_prime_certificate():
    def J(*s):
        return CommIdeal(LP, [parse_polynomial(p, LP) for p in s])
    assert prime_certificate(J("t1 - t2", "tau1 + tau2"))
    assert prime_certificate(J("t1*tau1 - t2"))
    assert not prime_certificate(J("t1*t2"))


def test_zero_module_filtration():
    Z = module(LL, [[g(LL, "t") * 0 + 1]])
    r = gabber_filtration(Z)
    assert [lv.generators for lv in r.levels] == [[]]


def irregular():
    # t acts invertibly, yet Ch = V(t*tau) contains the whole fiber over t = 0
    return module(LL, [[3 * g(LL, "t") * g(LL, "th") + 1]])


def test_invertible_t_breaks_tilted_truncation():
    D = verdier_dual(irregular()).complex
    assert perverse_truncate(D, -1) == UNDETERMINED
    assert p_coherent(D) is None


def test_invertible_t_filtration_is_undetermined():
    M = irregular()
    r = gabber_filtration(M)
    assert r.method == UNDETERMINED and r.diagnostics
    assert sato_kashiwara(M).method == UNDETERMINED


@given(st.integers(0, 2 ** 31))
def test_random_filtration_is_nested_and_bounded(seed):
    M = random_presentation(random.Random(seed), LL)
    r = gabber_filtration(M)
    if r.method == UNDETERMINED:
        assert r.diagnostics
        return
    assert r.method in ("direct", "dual-route")
    L = M.chart.logdim
    for lv in r.levels:
        assert lv.logdim is None or lv.logdim <= L + lv.level
    last = submodule_presentation(M, r.levels[-1].generators)
    assert same_variety(char_ideal(last), char_ideal(M))


@given(st.integers(0, 2 ** 31), st.integers(-1, 1))
def test_random_truncation_postconditions(seed, n):
    M = random_presentation(random.Random(seed), LL)
    C = complex_from_module(M, 0)
    tr = perverse_truncate(C, n)
    if tr == UNDETERMINED:
        return
    A, B = tr
    assert check_le0(A, n) and check_ge0(B, n + 1)
