"""Seeded random presentations and the property checks run by ``logdmod selftest``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chart import Chart, StratumComponent, logdim_subvariety, strata_components
from .charvar import char_ideal, radical_contains, restrict_to_stratum, same_variety
from .comalg import CommIdeal, krull_dim
from .duality import dim_ch_complex, dual_degree_support_bounds, lowest_dual_degree, verdier_dual
from .ncgb import ModulePresentation, is_zero_module
from .opalg import OpElement

SMALL_CHARTS = (
    Chart(1, 0), Chart(2, 0), Chart(0, 1), Chart(0, 2), Chart(1, 1),
    Chart(0, 1, frozenset({1})), Chart(0, 2, frozenset({1})), Chart(1, 1, frozenset({1})),
)


def random_operator(rng: random.Random, chart: Chart, max_degree: int = 2,
                    max_terms: int = 3) -> OpElement:
    """Sum of a few PBW monomials of total degree <= max_degree with small coefficients."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * chart.nvars
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(chart.nvars)] += 1
        c = rng.choice((-2, -1, 1, 1, 2, 3))
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return OpElement(chart, terms)


def random_presentation(rng: random.Random, chart: Chart | None = None,
                        max_degree: int = 2) -> ModulePresentation:
    chart = chart or rng.choice(SMALL_CHARTS)
    rank = rng.choice((1, 1, 1, 2))
    nrows = rng.randint(1, 2)
    rows = []
    for _ in range(nrows):
        row = []
        for _ in range(rank):
            row.append(random_operator(rng, chart, max_degree) if rng.random() < 0.8
                       else OpElement.zero(chart))
        rows.append(row)
    return ModulePresentation.from_rows(chart, rank, rows)


def t_poly(chart: Chart, j: int) -> dict:
    e = [0] * chart.nvars
    e[chart.t_slot(j)] = 1
    return {tuple(e): Fraction(1)}


def check_bernstein(M: ModulePresentation) -> bool:
    """logdim Ch(M) >= logdim X for nonzero M."""
    d = logdim_subvariety(M.chart, char_ideal(M))
    return d is None or d >= M.chart.logdim


def check_restriction(M: ModulePresentation, comp: StratumComponent) -> bool:
    """Ch of the degree-0 restriction equals Ch(M) cut down to the stratum."""
    J = char_ideal(M)
    target = comp.as_chart()
    restricted = CommIdeal(target, J.gens + [t_poly(M.chart, j) for j in comp.vanishing])
    H0 = [H for k, H in restrict_to_stratum(M, comp) if k == 0]
    if not H0:
        return krull_dim(restricted) is None
    return same_variety(char_ideal(H0[0]), restricted)


def check_restriction_inclusion(M: ModulePresentation, comp: StratumComponent) -> bool:
    """Ch of every restriction cohomology lies in Ch(M) cut down to the stratum."""
    J = char_ideal(M)
    target = comp.as_chart()
    gens = J.gens + [t_poly(M.chart, j) for j in comp.vanishing]
    for _, H in restrict_to_stratum(M, comp):
        if not radical_contains(target, char_ideal(H), gens):
            return False
    return True


def check_duality_dims(M: ModulePresentation) -> bool:
    """dim Ch(DM) = dim Ch(M), the per-degree bounds, and the lowest dual degree."""
    dM = krull_dim(char_ideal(M))
    D = verdier_dual(M)
    if dim_ch_complex(D) != dM:
        return False
    if not all(b.ok for b in dual_degree_support_bounds(M)):
        return False
    low = lowest_dual_degree(M)
    return (low is None) == (dM is None) and (low is None or low == M.chart.logdim - dM)


@dataclass
class SelftestReport:
    seed: int
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"seed": self.seed, "counts": dict(sorted(self.counts.items())),
                "violations": list(self.violations), "notes": list(self.notes),
                "ok": self.ok}


def run_selftest(seed: int = 0, bernstein: int = 50, restriction: int = 20,
                 duality: int = 20) -> SelftestReport:
    rng = random.Random(seed)
    rep = SelftestReport(seed)

    def record(name, i, M, ok):
        rep.counts[name] = rep.counts.get(name, 0) + 1
        if not ok:
            rep.violations.append({"property": name, "instance": i,
                                   "rows": M.formatted_rows(), "chart": M.chart.describe()})

    for i in range(bernstein):
        M = random_presentation(rng)
        record("bernstein", i, M, check_bernstein(M))
    for i in range(restriction):
        M = random_presentation(rng, rng.choice([c for c in SMALL_CHARTS if c.depth]))
        comps = [c for k in range(1, M.chart.depth + 1) for c in strata_components(M.chart, k)]
        comp = rng.choice(comps)
        record("restriction_inclusion", i, M, check_restriction_inclusion(M, comp))
        if not check_restriction(M, comp):
            # degree-0 equality can fail when t acts invertibly on M, e.g. D/D(t*th - 1)
            rep.notes.append({"property": "restriction_equality", "instance": i,
                              "rows": M.formatted_rows(), "chart": M.chart.describe(),
                              "stratum": comp.label()})
    for i in range(duality):
        M = random_presentation(rng)
        if is_zero_module(M):
            continue
        record("duality_dims", i, M, check_duality_dims(M))
    return rep
