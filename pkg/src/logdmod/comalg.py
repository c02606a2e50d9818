"""Commutative algebra over the log cotangent ring k[x, t, xi, tau].

Polynomials are dicts from exponent tuples (chart layout) to Fractions.
Idealized t_j are implicit generators of every ``CommIdeal``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .chart import Chart
from .gbcore import (CommRing, ModuleOrder, VarBlockOrder, buchberger, make_basis,
                     reduce_vec, syzygy_module)


def _clean(p: dict) -> dict:
    return {tuple(e): Fraction(c) for e, c in p.items() if c}


def var_poly(nvars: int, slot: int, power: int = 1) -> dict:
    e = [0] * nvars
    e[slot] = power
    return {tuple(e): Fraction(1)}


def is_monomial_unit(e: tuple) -> bool:
    return not any(e)


class CommIdeal:
    """Ideal of the cotangent ring of ``chart``, given by generators."""

    def __init__(self, chart: Chart, gens: Iterable[dict] = ()):
        self.chart = chart
        out = []
        for g in gens:
            g = _clean(g)
            if g and g not in out:
                out.append(g)
        for s in chart.idealized_slots():
            v = var_poly(chart.nvars, s)
            if v not in out:
                out.append(v)
        self.gens = out

    def __repr__(self):
        from .opalg import format_poly
        names = self.chart.cotangent_names()
        return "<" + ", ".join(format_poly(g, names) for g in self.gens) + ">"

    def formatted(self) -> list[str]:
        from .opalg import format_poly
        names = self.chart.cotangent_names()
        return [format_poly(g, names) for g in self.gens]


def _ring(n: int) -> CommRing:
    return CommRing(n)


def _as_vecs(polys: Iterable[dict]) -> list[dict]:
    return [{(0, e): c for e, c in p.items()} for p in polys]


def _as_polys(vecs: Iterable[dict]) -> list[dict]:
    return [{e: c for (_, e), c in v.items()} for v in vecs]


def gb_polys(nvars: int, polys: Sequence[dict], order=None) -> list[dict]:
    order = order or ModuleOrder(nvars)
    return _as_polys(buchberger(_ring(nvars), _as_vecs(polys), order))


def comm_gb(I: CommIdeal, order=None) -> CommIdeal:
    """Reduced Gröbner basis (degrevlex unless ``order`` is given)."""
    gb = gb_polys(I.chart.nvars, I.gens, order)
    J = CommIdeal.__new__(CommIdeal)
    J.chart, J.gens = I.chart, gb
    return J


def normal_form(f: dict, gb: Sequence[dict], nvars: int, order=None) -> dict:
    order = order or ModuleOrder(nvars)
    basis = make_basis(_ring(nvars), _as_vecs(gb), order)
    return _as_polys([reduce_vec(basis, {(0, e): Fraction(c) for e, c in f.items()})])[0]


def is_unit_ideal(gb: Sequence[dict]) -> bool:
    return any(len(g) == 1 and is_monomial_unit(next(iter(g))) for g in gb)


def _dim_from_leads(leads: Sequence[tuple], nvars: int) -> tuple[int, tuple]:
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in leads]
    for size in range(nvars, -1, -1):
        for U in combinations(range(nvars), size):
            Us = set(U)
            if all(not s <= Us for s in supports):
                return size, U
    return -1, ()


def krull_dim_polys(nvars: int, polys: Sequence[dict]) -> int | None:
    if not polys:
        return nvars
    order = ModuleOrder(nvars)
    gb = gb_polys(nvars, polys, order)
    if is_unit_ideal(gb):
        return None
    leads = [max(g, key=lambda e: order.key((0, e))) for g in gb]
    return _dim_from_leads(leads, nvars)[0]


def krull_dim(I: CommIdeal) -> int | None:
    """Krull dimension of the cotangent ring modulo I; ``None`` when V(I) is empty."""
    return krull_dim_polys(I.chart.nvars, I.gens)


def max_independent_set(I: CommIdeal) -> tuple[int, ...] | None:
    """Lexicographically first maximal independent variable set (slots)."""
    nvars = I.chart.nvars
    order = ModuleOrder(nvars)
    gb = gb_polys(nvars, I.gens, order)
    if is_unit_ideal(gb):
        return None
    leads = [max(g, key=lambda e: order.key((0, e))) for g in gb]
    return _dim_from_leads(leads, nvars)[1]


def radical_member_polys(nvars: int, f: dict, polys: Sequence[dict]) -> bool:
    """f in rad(I) via the Rabinowitsch trick: 1 in I + <1 - y f>."""
    f = _clean(f)
    if not f:
        return True
    ext = [{e + (0,): c for e, c in p.items()} for p in polys]
    yf = {e + (1,): -c for e, c in f.items()}
    yf[(0,) * (nvars + 1)] = yf.get((0,) * (nvars + 1), 0) + 1
    ext.append({e: c for e, c in yf.items() if c})
    return is_unit_ideal(gb_polys(nvars + 1, ext))


def radical_membership(f: dict, I: CommIdeal) -> bool:
    return radical_member_polys(I.chart.nvars, f, I.gens)


def radical_contained(I_gens: Sequence[dict], J_gens: Sequence[dict], nvars: int) -> bool:
    """rad(I) ⊆ rad(J), i.e. V(J) ⊆ V(I)."""
    return all(radical_member_polys(nvars, g, J_gens) for g in I_gens)


def radical_equal(I: CommIdeal, J: CommIdeal) -> bool:
    n = I.chart.nvars
    return radical_contained(I.gens, J.gens, n) and radical_contained(J.gens, I.gens, n)


def eliminate_polys(nvars: int, polys: Sequence[dict], keep: Iterable[int]) -> list[dict]:
    keep = set(keep)
    elim = [i for i in range(nvars) if i not in keep]
    order = VarBlockOrder(nvars, elim)
    gb = gb_polys(nvars, polys, order)
    return [g for g in gb if all(e[i] == 0 for e in g for i in elim)]


def eliminate(I: CommIdeal, keep: Iterable[int]) -> CommIdeal:
    """Generators of I ∩ k[keep] (``keep`` are variable slots)."""
    gens = eliminate_polys(I.chart.nvars, I.gens, keep)
    J = CommIdeal.__new__(CommIdeal)
    J.chart, J.gens = I.chart, gens
    return J


def minimal_primes_sqfree(gens: Sequence[Iterable]) -> list[frozenset]:
    """Minimal primes of a squarefree monomial ideal.

    Each generator is given by its support (an iterable of variable labels);
    the minimal primes are the minimal vertex covers of that hypergraph.
    """
    edges = [frozenset(g) for g in gens]
    if any(not e for e in edges):
        return []
    verts = sorted(set().union(*edges)) if edges else []
    covers: list[frozenset] = []
    for size in range(len(verts) + 1):
        for C in combinations(verts, size):
            Cs = frozenset(C)
            if all(e & Cs for e in edges) and not any(c <= Cs for c in covers):
                covers.append(Cs)
    return sorted(covers, key=lambda c: (len(c), sorted(c)))


def intersect_polys(nvars: int, A: Sequence[dict], B: Sequence[dict]) -> list[dict]:
    """I ∩ J: for each syzygy (alpha, beta) of [A, B], sum alpha_i a_i is common."""
    A = [_clean(p) for p in A if p]
    B = [_clean(p) for p in B if p]
    if not A or not B:
        return []
    ring = _ring(nvars)
    one = (0,) * nvars
    _, syz = syzygy_module(ring, _as_vecs(A + B), 1, ModuleOrder(nvars), one)
    out = []
    for s in syz:
        f: dict = {}
        for (c, e), a in s.items():
            if c < len(A):
                for e2, a2 in A[c].items():
                    k = tuple(x + y for x, y in zip(e, e2))
                    f[k] = f.get(k, 0) + a * a2
        f = {e: a for e, a in f.items() if a}
        if f:
            out.append(f)
    return gb_polys(nvars, out) if out else []


def quotient_by_unit(nvars: int, U: Sequence[dict], comp: int, m: int) -> list[dict]:
    """(U : e_comp) = {f : f e_comp ∈ U} for a submodule U of k[vars]^m.

    Computed from syzygies of [U rows, e_comp] (``U`` are module vectors).
    """
    ring = _ring(nvars)
    one = (0,) * nvars
    gens = [dict(u) for u in U] + [{(comp, one): Fraction(1)}]
    order = ModuleOrder(nvars)
    _, syz = syzygy_module(ring, gens, m, order, one)
    last = len(gens) - 1
    out = []
    for s in syz:
        p = {e: c for (c_, e), c in s.items() if c_ == last}
        if p:
            out.append(p)
    return gb_polys(nvars, out) if out else []


def annihilator_of_quotient(nvars: int, U: Sequence[dict], m: int) -> list[dict]:
    """Ann(k[vars]^m / U) = intersection over components of (U : e_c)."""
    acc = None
    for c in range(m):
        q = quotient_by_unit(nvars, U, c, m)
        acc = q if acc is None else intersect_polys(nvars, acc, q)
        if not acc:
            return []
    return gb_polys(nvars, acc) if acc else []


def saturate_polys(nvars: int, polys: Sequence[dict], f: dict) -> list[dict]:
    """I : f^infinity, by eliminating y from I + <1 - y f>."""
    ext = [{e + (0,): c for e, c in p.items()} for p in polys]
    yf = {e + (1,): -c for e, c in _clean(f).items()}
    one = (0,) * (nvars + 1)
    yf[one] = yf.get(one, 0) + 1
    ext.append({e: c for e, c in yf.items() if c})
    kept = eliminate_polys(nvars + 1, ext, range(nvars))
    return [{e[:nvars]: c for e, c in p.items()} for p in kept]
