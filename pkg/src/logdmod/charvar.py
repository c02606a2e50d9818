"""Characteristic varieties, log dimension, restriction to strata, and
splitting a module along a log stratum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .chart import (Chart, StratumComponent, logdim_subvariety, stratum_ideal_monomials,
                    strata_components)
from .comalg import (CommIdeal, annihilator_of_quotient, eliminate, krull_dim,
                     radical_member_polys, saturate_polys)
from .ncgb import (ModulePresentation, PresComplex, cohomology, cohomology_is_zero,
                   free_resolution, has_incoming, is_zero_module, left_gb, localized_gb,
                   simplified, subquotient)


def _ideal(chart: Chart, gens) -> CommIdeal:
    return CommIdeal(chart, gens)


def symbol_vector(chart: Chart, v: dict) -> dict:
    """Principal symbol of a vector in D^m (all components shifted by 0)."""
    fs = chart.fiber_slots()
    w = {k: sum(k[1][s] for s in fs) for k in v}
    top = max(w.values())
    return {k: a for k, a in v.items() if w[k] == top}


def symbol_module(M: ModulePresentation, order="symbols") -> list[dict]:
    """Generators of gr(relations) inside the free module over gr D.

    ``order`` must refine the order filtration (weight 1 on xi and tau).
    """
    rows = localized_gb(M) if M.localized else M.left_rows()
    gb = left_gb(M.chart, rows, order)
    return [symbol_vector(M.chart, g) for g in gb]


def char_ideal(M: ModulePresentation, order="symbols") -> CommIdeal:
    """Ann of gr M: its zero set is Ch(M)."""
    chart = M.chart
    if M.rank == 0:
        return _ideal(chart, [{(0,) * chart.nvars: Fraction(1)}])
    U = symbol_module(M, order)
    ann = annihilator_of_quotient(chart.nvars, U, M.rank)
    if M.localized:
        f = {}
        e = [0] * chart.nvars
        for j in M.localized:
            e[chart.t_slot(j)] = 1
        f[tuple(e)] = Fraction(1)
        ann = saturate_polys(chart.nvars, ann, f)
    return _ideal(chart, ann)


def cohomology_char_ideal(C: PresComplex, k: int) -> CommIdeal:
    """char_ideal(H^k(C)).

    When nothing maps into degree k, H^k is a submodule of a free module, so
    its graded module is torsion-free and Ch is either empty or everything;
    this avoids presenting H^k at all.
    """
    chart = C.chart
    if not has_incoming(C, k):
        if cohomology_is_zero(C, k):
            return _ideal(chart, [{(0,) * chart.nvars: Fraction(1)}])
        return _ideal(chart, [])
    return char_ideal(cohomology(C, k))


def is_empty_ch(J: CommIdeal) -> bool:
    return krull_dim(J) is None


def log_dim_ch(M: ModulePresentation) -> int | None:
    """Log dimension of Ch(M); ``None`` for the zero module."""
    return logdim_subvariety(M.chart, char_ideal(M))


def is_holonomic(M: ModulePresentation) -> bool:
    """logdim Ch(M) equals logdim X (the zero module counts as holonomic)."""
    d = log_dim_ch(M)
    return d is None or d == M.chart.logdim


def support_ideal(J: CommIdeal) -> CommIdeal:
    return eliminate(J, J.chart.base_slots())


def stratum_dims(J: CommIdeal) -> dict[int, int | None]:
    """k -> dim(Ch ∩ T*X|X^k), maximized over the components of X^k."""
    chart = J.chart
    out = {}
    for k in range(chart.depth + 1):
        best = None
        for comp in strata_components(chart, k):
            d = krull_dim(_ideal(chart, J.gens + [_t_poly(chart, j) for j in comp.vanishing]))
            if d is not None and (best is None or d > best):
                best = d
        out[k] = best
    return out


def _t_poly(chart: Chart, j: int) -> dict:
    e = [0] * chart.nvars
    e[chart.t_slot(j)] = 1
    return {tuple(e): Fraction(1)}


@dataclass
class ChReport:
    ideal: CommIdeal
    stratum_dims: dict
    logdim: int | None
    holonomic: bool
    support: CommIdeal

    def as_dict(self) -> dict:
        return {
            "char_ideal": self.ideal.formatted(),
            "stratum_dims": {str(k): v for k, v in sorted(self.stratum_dims.items())},
            "logdim_ch": self.logdim,
            "holonomic": self.holonomic,
            "support": self.support.formatted(),
        }


def ch_report(M: ModulePresentation) -> ChReport:
    J = char_ideal(M)
    ld = logdim_subvariety(M.chart, J)
    return ChReport(J, stratum_dims(J), ld, ld is None or ld == M.chart.logdim,
                    support_ideal(J))


def radical_contains(chart: Chart, big: CommIdeal | Sequence[dict], small_gens: Sequence[dict]) -> bool:
    """Every polynomial in ``small_gens`` lies in rad(big)."""
    gens = big.gens if isinstance(big, CommIdeal) else list(big)
    return all(radical_member_polys(chart.nvars, g, gens) for g in small_gens)


def same_variety(I: CommIdeal, J: CommIdeal) -> bool:
    return radical_contains(I.chart, I, J.gens) and radical_contains(I.chart, J, I.gens)


# -- restriction to strata ---------------------------------------------------

def _rechart(v: dict, chart: Chart) -> dict:
    slots = chart.idealized_slots()
    return {k: a for k, a in v.items() if not any(k[1][s] for s in slots)}


def restrict_complex(C: PresComplex, comp: StratumComponent) -> PresComplex:
    """O_{X_T} ⊗ C for a complex of free modules: reduce all maps modulo t_T."""
    target = comp.as_chart()
    maps = {k: [_rechart(r, target) for r in rows] for k, rows in C.maps.items()}
    return PresComplex(target, dict(C.ranks), maps, C.side)


def restrict_to_stratum(M: ModulePresentation, comp: StratumComponent,
                        include_zero: bool = False) -> list[tuple[int, ModulePresentation]]:
    """Nonzero cohomology of the derived restriction of M to a stratum component.

    Returns ``(degree, module)`` pairs, modules over the stratum chart.
    """
    if comp.chart != M.chart:
        raise ValueError("stratum component belongs to a different chart")
    R = restrict_complex(free_resolution(M), comp)
    out = []
    for k in R.degrees():
        H = cohomology(R, k)
        if include_zero or not is_zero_module(H):
            out.append((k, simplified(H)))
    return out


# -- splitting by support ----------------------------------------------------

@dataclass
class SupportSplit:
    """0 -> G -> M -> G' -> 0 with G = I^n M and G' = M / I^n M."""

    n: int
    generators: list
    G: ModulePresentation
    G_prime: ModulePresentation
    ch_G: CommIdeal
    ch_G_prime: CommIdeal


def _power_monomials(chart: Chart, k: int, n: int) -> list[tuple]:
    base = stratum_ideal_monomials(chart, k)
    out = set()
    for combo in combinations_with_replacement(base, n):
        e = tuple(sum(col) for col in zip(*combo))
        out.add(e)
    return sorted(out)


def split_by_support(M: ModulePresentation, k: int, Z: CommIdeal,
                     max_exponent: int = 32) -> SupportSplit:
    """Find the least n with Ch(I^n M) ⊆ V(Z) and Ch(M/I^n M) ⊆ T*X|X^k.

    I is the ideal of X^k.  Raises ``ValueError`` when no n up to
    ``max_exponent`` works (for instance when Ch(M) is not covered by the
    stratum together with V(Z)).
    """
    chart = M.chart
    rows = M.left_rows()
    Ik = [{e: Fraction(1)} for e in stratum_ideal_monomials(chart, k)]
    for n in range(1, max_exponent + 1):
        gens = []
        for u in _power_monomials(chart, k, n):
            for i in range(M.rank):
                gens.append({(i, u): Fraction(1)})
        G = subquotient(chart, gens, rows, M.rank)
        Gp = ModulePresentation(chart, M.rank, tuple(rows) + tuple(gens), "left")
        JG, JGp = char_ideal(G), char_ideal(Gp)
        if radical_contains(chart, JG, Z.gens) and radical_contains(chart, JGp, Ik):
            return SupportSplit(n, gens, G, Gp, JG, JGp)
    raise ValueError(f"no splitting found with exponent up to {max_exponent}")
