"""The log perverse t-structure, perverse truncation, and the log Gabber /
Sato-Kashiwara filtration.

Membership tests work on any chart.  Truncation is exact on charts of
depth <= 1, where the t-structure is a tilt of the standard one:
writing s = n + r_X,

    C in lsD^{<=n}  iff  H^i(C) = 0 for i > s + 1 and H^{s+1}(C) lives on X^1,
    C in lsD^{>=n}  iff  H^i(C) = 0 for i < s and H^s(C) has no X^1-torsion.

On deeper charts truncation answers only when the complex already lies on
one side, and reports "undetermined" otherwise.

Membership is decided through characteristic varieties of the dual, while
the tilt follows the local cohomology description.  The two can disagree
when some t_j acts invertibly on a cohomology module with characteristic
variety over the boundary (D/D(t*th - 1) on the log line), so every
truncation is checked against the membership tests before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chart import Chart, logdim_subvariety, stratum_ideal_monomials, strata_components
from .charvar import char_ideal, cohomology_char_ideal, radical_contains
from .comalg import CommIdeal, gb_polys, krull_dim
from .duality import DUAL_TWIST, DualComplex, _dual_matrix, verdier_dual
from .ncgb import (Lifter, ModulePresentation, PresComplex, SubmoduleGB, apply_map,
                   cohomology_is_zero, compose, complex_from_module, free_resolution,
                   kernel_gens, saturate, subquotient, unit_vec)

UNDETERMINED = "undetermined"


def _as_complex(C) -> PresComplex:
    if isinstance(C, PresComplex):
        return C
    if isinstance(C, DualComplex):
        return C.complex
    if isinstance(C, ModulePresentation):
        return complex_from_module(C)
    raise TypeError(f"expected a complex, got {type(C).__name__}")


def _nonzero_char_ideals(C: PresComplex) -> dict[int, CommIdeal]:
    """Degree -> char ideal of H^k(C), for nonzero cohomology only."""
    return {k: cohomology_char_ideal(C, k) for k in C.degrees() if not cohomology_is_zero(C, k)}


# -- membership ---------------------------------------------------------------

@dataclass
class PerverseVerdict:
    le0: bool
    ge0: bool
    le0_witness: list = field(default_factory=list)
    ge0_table: list = field(default_factory=list)

    @property
    def perverse(self) -> bool:
        return self.le0 and self.ge0

    def as_dict(self) -> dict:
        return {
            "le0": self.le0,
            "ge0": self.ge0,
            "perverse": self.perverse,
            "le0_witness": [{"k": k, "degree": d, "ok": ok} for k, d, ok in self.le0_witness],
            "ge0_table": [{"k": k, "stratum": lab, "degree": l, "dim": d, "bound": b, "ok": ok}
                          for k, lab, l, d, b, ok in self.ge0_table],
        }


def le0_witness(C, n: int = 0) -> list[tuple[int, int, bool]]:
    """(k, degree k + r_X + n, supp H^degree ⊆ X^k) for every relevant k."""
    C = _as_complex(C)
    chart = C.chart
    rX = chart.generic_rank
    coh = _nonzero_char_ideals(C)
    out = []
    for deg in sorted(coh):
        k = deg - rX - n
        if k <= 0:
            out.append((k, deg, True))
            continue
        J = coh[deg]
        gens = [{e: Fraction(1)} for e in stratum_ideal_monomials(chart, k)]
        out.append((k, deg, radical_contains(chart, J, gens)))
    return out


def check_le0(C, n: int = 0) -> bool:
    """C lies in lsD^{<= n}: supp H^{k + r_X + n}(C) ⊆ X^k for all k."""
    return all(ok for _, _, ok in le0_witness(C, n))


def ge0_table(C, n: int = 0) -> list[tuple]:
    """Rows (k, stratum, l, dim, bound, ok) testing
    dim(Ch(H^l(DC)) ∩ T*X|stratum) <= logdim X - n - l - k - r_X."""
    C = _as_complex(C)
    chart = C.chart
    D = verdier_dual(C)
    L, rX = chart.logdim, chart.generic_rank
    rows = []
    for l in D.nonzero_degrees():
        J = D.char_ideal(l)
        for k in range(chart.depth + 1):
            for comp in strata_components(chart, k):
                extra = []
                for j in sorted(comp.vanishing):
                    e = [0] * chart.nvars
                    e[chart.t_slot(j)] = 1
                    extra.append({tuple(e): Fraction(1)})
                d = krull_dim(CommIdeal(chart, J.gens + extra))
                bound = L - n - l - k - rX
                rows.append((k, comp.label(), l, d, bound, d is None or d <= bound))
    return rows


def check_ge0(C, n: int = 0) -> bool:
    """C lies in lsD^{>= n}: logdim Ch(H^l(DC)) <= logdim X - n - l for all l."""
    return all(row[-1] for row in ge0_table(C, n))


def is_log_perverse(C) -> PerverseVerdict:
    wit = le0_witness(C, 0)
    tab = ge0_table(C, 0)
    return PerverseVerdict(all(ok for *_, ok in wit), all(r[-1] for r in tab), wit, tab)


# -- free models of truncations ----------------------------------------------

def identity_rows(chart: Chart, r: int) -> list[dict]:
    return [unit_vec(chart, i) for i in range(r)]


@dataclass
class ChainMap:
    source: PresComplex
    target: PresComplex
    maps: dict  # degree -> rows (source rank) of vectors in the target term

    def at(self, k: int) -> list[dict]:
        return self.maps.get(k) or [{} for _ in range(self.source.rank(k))]

    def check(self) -> bool:
        chart = self.source.chart
        for k in set(self.source.degrees()) | set(self.target.degrees()):
            left = compose(chart, self.source.d(k), self.at(k + 1)) if self.source.rank(k) else []
            right = compose(chart, self.at(k), self.target.d(k)) if self.source.rank(k) else []
            if any(a != b for a, b in zip(left, right)):
                return False
        return True


def truncation_model(G: PresComplex, s: int, torsion_dirs: Sequence[int] = ()) -> ChainMap:
    """Free model R of tau_{>=s} G, with H^s(R) = H^s(G) / (t-torsion) when
    ``torsion_dirs`` is given, and the canonical chain map G -> R."""
    chart = G.chart
    rs = G.rank(s)
    B = [b for b in G.d(s - 1) if b] if (s - 1) in G.maps else []
    Z = saturate(chart, B, rs, torsion_dirs) if (torsion_dirs and B) else list(B)
    ranks = {k: r for k, r in G.ranks.items() if k >= s}
    maps = {k: rows for k, rows in G.maps.items() if k >= s}
    if rs:
        res = free_resolution(ModulePresentation(chart, rs, tuple(Z)))
        for k, r in res.ranks.items():
            if k < 0:
                ranks[k + s] = r
        for k, rows in res.maps.items():
            maps[k + s] = rows
    R = PresComplex(chart, ranks, maps, "left")
    phi: dict = {k: identity_rows(chart, r) for k, r in G.ranks.items() if k >= s}
    for k in sorted((k for k in G.degrees() if k < s), reverse=True):
        nxt = phi.get(k + 1) or [{} for _ in range(G.rank(k + 1))]
        targets = compose(chart, G.d(k), nxt)
        if all(not t for t in targets):
            phi[k] = [{} for _ in range(G.rank(k))]
            continue
        if R.rank(k) == 0:
            raise ArithmeticError("chain map cannot be lifted: truncation model is not exact")
        L = Lifter(chart, R.d(k), R.rank(k + 1))
        rows = []
        for t in targets:
            c = L.lift(t) if t else {}
            if c is None:
                raise ArithmeticError("chain map cannot be lifted: truncation model is not exact")
            rows.append(c)
        phi[k] = rows
    return ChainMap(G, R, phi)


def fiber(f: ChainMap) -> PresComplex:
    """Cone(f)[-1]: degree i holds G^i ⊕ R^(i-1), differential [[d_G, -f], [0, -d_R]]."""
    G, R = f.source, f.target
    chart = G.chart
    degs = set(G.degrees()) | {k + 1 for k in R.degrees()}
    ranks = {i: G.rank(i) + R.rank(i - 1) for i in degs}
    maps = {}
    for i in degs:
        gi1 = G.rank(i + 1)
        rows = []
        for g_row, f_row in zip(G.d(i), f.at(i)):
            v = dict(g_row)
            for (c, e), a in f_row.items():
                v[(gi1 + c, e)] = -a
            rows.append(v)
        for r_row in R.d(i - 1):
            rows.append({(gi1 + c, e): -a for (c, e), a in r_row.items()})
        maps[i] = rows
    return PresComplex(chart, ranks, maps, "left")


def _torsion_dirs(chart: Chart) -> tuple[int, ...]:
    return chart.free_log if chart.depth == 1 else ()


def perverse_truncate(C, n: int):
    """(tau^p_{<=n} C, tau^p_{>n} C) as free complexes, or ``UNDETERMINED``."""
    C = _as_complex(C)
    chart = C.chart
    if chart.depth <= 1:
        f = _checked_model(C, n)
        return UNDETERMINED if f is None else (fiber(f), f.target)
    zero = PresComplex(chart, {}, {}, "left")
    if check_le0(C, n):
        return C, zero
    if check_ge0(C, n + 1):
        return zero, C
    return UNDETERMINED


def perverse_truncate_map(C, n: int):
    """The chain map C -> tau^p_{>n} C (depth <= 1 only)."""
    C = _as_complex(C)
    if C.chart.depth > 1:
        return UNDETERMINED
    f = _checked_model(C, n)
    return UNDETERMINED if f is None else f


def _checked_model(C: PresComplex, n: int) -> ChainMap | None:
    """Tilted truncation at level n, or None when it fails the membership tests."""
    f = truncation_model(C, n + 1 + C.chart.generic_rank, _torsion_dirs(C.chart))
    if check_le0(fiber(f), n) and check_ge0(f.target, n + 1):
        return f
    return None


def perverse_cohomology(C, n: int):
    """lsH^n(C) = tau^p_{<=n} tau^p_{>=n} C, or ``UNDETERMINED``."""
    C = _as_complex(C)
    hi = perverse_truncate(C, n - 1)
    if hi == UNDETERMINED:
        return UNDETERMINED
    lo = perverse_truncate(hi[1], n)
    if lo == UNDETERMINED:
        return UNDETERMINED
    return lo[0]


def p_coherent(C):
    """True when every perverse cohomology is coherent; ``None`` if undecided.

    Depth <= 1 charts always qualify (truncations are computed above).  On
    deeper charts holonomic complexes and complexes in a single perverse
    degree qualify; other inputs are undecided.
    """
    C = _as_complex(C)
    chart = C.chart
    coh = _nonzero_char_ideals(C)
    if chart.depth <= 1:
        if not coh:
            return True
        lo = min(coh) - chart.generic_rank - 2
        hi = max(coh) - chart.generic_rank
        ok = all(perverse_truncate(C, n) != UNDETERMINED for n in range(lo, hi + 1))
        return True if ok else None
    if all(logdim_subvariety(chart, J) in (None, chart.logdim) for J in coh.values()):
        return True
    for k in range(-chart.nvars - 2, chart.nvars + 3):
        if check_le0(C, k) and check_ge0(C, k):
            return True
    return None


# -- filtrations ------------------------------------------------------------

def dual_chain_map(f: ChainMap, D_src: PresComplex, D_tgt: PresComplex) -> ChainMap:
    """D(f) : D(target) -> D(source) for a chain map of free complexes."""
    chart = f.source.chart
    shift = chart.dim
    maps = {}
    for k, rows in f.maps.items():
        maps[-k - shift] = _dual_matrix(chart, rows, f.target.rank(k), DUAL_TWIST)
    return ChainMap(D_tgt, D_src, maps)


def _image_filtration_step(M: ModulePresentation, s: int, torsion_dirs,
                           level: int | None = None) -> list[dict] | None:
    """Generators in D^m of the image of H^0(D tau D M) -> M, where tau is
    the (possibly tilted) truncation at degree s of the dual.  With ``level``
    set, the truncation must pass the perverse membership tests at that
    level, otherwise None is returned."""
    F = free_resolution(M)
    DM = verdier_dual(F).complex
    f = truncation_model(DM, s, torsion_dirs)
    if level is not None and not (check_le0(fiber(f), level)
                                  and check_ge0(f.target, level + 1)):
        return None
    DR = verdier_dual(f.target).complex
    Df = dual_chain_map(f, verdier_dual(DM).complex, DR)
    Z = kernel_gens(M.chart, DR, 0) if DR.rank(0) else []
    out = []
    for z in Z:
        v = apply_map(M.chart, z, Df.at(0))
        if v:
            out.append(v)
    return _reduced_gens(M, out)


def _reduced_gens(M: ModulePresentation, gens: list[dict]) -> list[dict]:
    S = SubmoduleGB(M.chart, M.left_rows(), M.rank)
    out = []
    for g in gens:
        r = S.reduce(g)
        if r:
            out.append(r)
    return out


def grade_filtration_piece(M: ModulePresentation, c: int) -> list[dict]:
    """Generators of the largest submodule of M with dim Ch <= c."""
    return _image_filtration_step(M, M.chart.logdim - c, ())


def sato_kashiwara_piece(M: ModulePresentation, i: int):
    """S_i(M) via the perverse truncation of the dual (depth <= 1 only)."""
    chart = M.chart
    if chart.depth > 1:
        return UNDETERMINED
    gens = _image_filtration_step(M, -i + chart.generic_rank, _torsion_dirs(chart), -i - 1)
    return UNDETERMINED if gens is None else gens


def submodule_presentation(M: ModulePresentation, gens: Sequence[dict]) -> ModulePresentation:
    return subquotient(M.chart, list(gens), M.left_rows(), M.rank)


def _logdim(M: ModulePresentation) -> int | None:
    return logdim_subvariety(M.chart, char_ideal(M))


def _dim(M: ModulePresentation) -> int | None:
    return krull_dim(char_ideal(M))


def _is_linear(p: dict) -> bool:
    return all(sum(e) <= 1 for e in p)


def prime_certificate(J: CommIdeal) -> bool:
    """A sufficient test that rad(J) is prime: the reduced Gröbner basis
    consists of polynomials of degree <= 1, or of one irreducible polynomial."""
    gb = gb_polys(J.chart.nvars, J.gens)
    if not gb:
        return True
    if all(_is_linear(g) for g in gb):
        return not any(len(g) == 1 and not any(next(iter(g))) for g in gb)
    if len(gb) == 1:
        return _irreducible_radical(J.chart, gb[0])
    return False


def _irreducible_radical(chart: Chart, p: dict) -> bool:
    import sympy
    names = chart.cotangent_names()
    syms = sympy.symbols(names)
    expr = sum(sympy.Rational(c.numerator, c.denominator)
               * sympy.prod([s ** k for s, k in zip(syms, e)]) for e, c in p.items())
    _, factors = sympy.factor_list(expr, *syms)
    return len(factors) == 1


@dataclass
class FiltrationLevel:
    level: int
    generators: list
    logdim: int | None
    chart: Chart
    rank: int

    def as_dict(self) -> dict:
        from .ncgb import format_vec
        return {"level": self.level,
                "generators": [format_vec(g, self.rank, self.chart) for g in self.generators],
                "logdim_ch": self.logdim,
                "zero": not self.generators}


@dataclass
class FiltrationReport:
    levels: list
    method: str
    diagnostics: list = field(default_factory=list)

    def level(self, i: int) -> FiltrationLevel | None:
        for lv in self.levels:
            if lv.level == i:
                return lv
        return None

    def as_dict(self) -> dict:
        return {"method": self.method,
                "levels": [lv.as_dict() for lv in self.levels],
                "diagnostics": list(self.diagnostics)}


def _same_or_contained(M: ModulePresentation, A: list[dict], B: list[dict]) -> bool:
    """span(A) ⊆ span(B) + relations."""
    S = SubmoduleGB(M.chart, list(B) + M.left_rows(), M.rank)
    return S.contains_all(A)


def _gabber_direct(M: ModulePresentation, i: int) -> list[dict] | None:
    chart = M.chart
    L, depth = chart.logdim, chart.depth
    upper = grade_filtration_piece(M, chart.dim + i)
    U = submodule_presentation(M, upper)
    ldU = _logdim(U)
    if ldU is None or ldU <= L + i:
        return upper
    lower = grade_filtration_piece(M, chart.dim + i - depth)
    # Q = U / lower; if Q is pure with irreducible Ch, no part of it can join G_i
    Q = subquotient(chart, upper, lower + M.left_rows(), M.rank)
    d = _dim(Q)
    if d is None:
        return lower
    if grade_filtration_piece(Q, d - 1):
        return None
    if not prime_certificate(char_ideal(Q)):
        return None
    if _logdim(Q) <= L + i:
        return None
    return lower


def gabber_filtration(M: ModulePresentation) -> FiltrationReport:
    """Log Gabber filtration G_0 ⊆ G_1 ⊆ ... ⊆ G_top = M.

    Each level is first attempted directly from the classical grade
    filtration with a purity certificate; charts of depth <= 1 fall back on
    the Sato-Kashiwara construction through perverse truncation.
    """
    if M.side != "left":
        raise ValueError("the filtration is defined for left modules")
    chart = M.chart
    L = chart.logdim
    full = [unit_vec(chart, c) for c in range(M.rank)]
    top = _logdim(M)
    if top is None:
        return FiltrationReport([FiltrationLevel(0, [], None, chart, M.rank)], "direct")
    levels, methods, diag = [], set(), []
    for i in range(0, top - L + 1):
        if i == top - L:
            gens, how = _reduced_gens(M, full), "direct"
        else:
            gens, how = _gabber_direct(M, i), "direct"
            if gens is None:
                sk = sato_kashiwara_piece(M, i)
                if sk == UNDETERMINED:
                    diag.append(f"level {i}: no purity certificate and no valid truncation "
                                "of the dual")
                    return FiltrationReport(levels, UNDETERMINED, diag)
                gens, how = sk, "dual-route"
        methods.add(how)
        P = submodule_presentation(M, gens)
        levels.append(FiltrationLevel(i, gens, _logdim(P), chart, M.rank))
    method = "dual-route" if "dual-route" in methods else "direct"
    report = FiltrationReport(levels, method, diag)
    verify_filtration(M, report)
    return report


def sato_kashiwara(M: ModulePresentation) -> FiltrationReport:
    """S_i(M) for every level, computed only through the dual route."""
    chart = M.chart
    L = chart.logdim
    top = _logdim(M)
    if top is None:
        return FiltrationReport([FiltrationLevel(0, [], None, chart, M.rank)], "dual-route")
    if chart.depth > 1:
        return FiltrationReport([], UNDETERMINED,
                                ["perverse truncation needs a chart of depth <= 1"])
    levels = []
    for i in range(0, top - L + 1):
        gens = sato_kashiwara_piece(M, i)
        if gens == UNDETERMINED:
            return FiltrationReport(levels, UNDETERMINED,
                                    [f"level {i}: truncation of the dual fails the membership "
                                     "tests"])
        levels.append(FiltrationLevel(i, gens, _logdim(submodule_presentation(M, gens)),
                                      chart, M.rank))
    return FiltrationReport(levels, "dual-route")


def verify_filtration(M: ModulePresentation, report: FiltrationReport) -> None:
    """Nesting and per-level log dimension bounds; raises on violation."""
    L = M.chart.logdim
    prev = None
    for lv in report.levels:
        if lv.logdim is not None and lv.logdim > L + lv.level:
            raise ArithmeticError(f"level {lv.level} exceeds its log dimension bound")
        if prev is not None and not _same_or_contained(M, prev.generators, lv.generators):
            raise ArithmeticError(f"level {prev.level} is not contained in level {lv.level}")
        prev = lv


def same_filtration(M: ModulePresentation, a: FiltrationReport, b: FiltrationReport) -> bool:
    if len(a.levels) != len(b.levels):
        return False
    for x, y in zip(a.levels, b.levels):
        if not (_same_or_contained(M, x.generators, y.generators)
                and _same_or_contained(M, y.generators, x.generators)):
            return False
    return True
