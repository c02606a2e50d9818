"""Verdier duality on charts with smooth underlying scheme.

For a left module M with free resolution F, the dual is

    D(M) = Hom_D(F, D) [dim X], side-changed to the left by transposition
           and twisted by the line bundle t * O (one factor per free log
           direction).

On a free complex the recipe is: the term F^d moves to degree -d - dim X,
and a map with matrix A becomes s(A^*T), where ^* is the transposition
anti-automorphism applied entrywise and s is the twist th_j -> th_j - 1.
Because s(p)^* = s^-1(p^*), applying the recipe twice returns the
original complex verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chart import logdim_subvariety
from .charvar import char_ideal, cohomology_char_ideal
from .comalg import krull_dim
from .ncgb import (ModulePresentation, PresComplex, cohomology, cohomology_is_zero, entry,
                   free_resolution, simplified, vec_transpose)
from .opalg import transpose_terms, twist_terms

#: shift applied to th_j when tensoring with Hom(omega_X, omega of the underlying scheme)
DUAL_TWIST = -1


def _dual_matrix(chart, rows, r_src: int, twist) -> list[dict]:
    """Rows of s(A^*T) for a map given by ``rows`` (one vector per source basis element)."""
    out: list[dict] = []
    cols: dict[int, dict] = {}
    for i, row in enumerate(rows):
        for j in sorted({c for c, _ in row}):
            p = transpose_terms(chart, entry(row, j))
            if twist:
                p = twist_terms(chart, p, twist)
            v = cols.setdefault(j, {})
            for e, a in p.items():
                v[(i, e)] = a
    for j in range(r_src):
        out.append(cols.get(j, {}))
    return out


def hom_to_ring(C: PresComplex, shift: int = 0, twist=0) -> PresComplex:
    """Hom(C, D), side-changed to the left, with term F^d placed in degree -d - shift."""
    chart = C.chart
    ranks = {-d - shift: r for d, r in C.ranks.items()}
    maps = {}
    for k, rows in C.maps.items():
        # d^k : F^k -> F^(k+1) dualizes to a map from degree -(k+1)-shift to -k-shift
        maps[-(k + 1) - shift] = _dual_matrix(chart, rows, C.rank(k + 1), twist)
    return PresComplex(chart, ranks, maps, "left")


@dataclass
class DualComplex:
    complex: PresComplex
    resolution: PresComplex
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def chart(self):
        return self.complex.chart

    def _cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def cohomology(self, k: int) -> ModulePresentation:
        return self._cached(("H", k), lambda: cohomology(self.complex, k))

    def is_zero(self, k: int) -> bool:
        return self._cached(("zero", k), lambda: cohomology_is_zero(self.complex, k))

    def char_ideal(self, k: int):
        return self._cached(("ch", k), lambda: cohomology_char_ideal(self.complex, k))

    def nonzero_degrees(self) -> list[int]:
        return [k for k in self.complex.degrees() if not self.is_zero(k)]


def as_left(M: ModulePresentation) -> ModulePresentation:
    """Side change through transposition (identity on left modules)."""
    if M.side == "left":
        return M
    return ModulePresentation(M.chart, M.rank, tuple(M.left_rows()), "left", M.localized)


def side_change(M: ModulePresentation) -> ModulePresentation:
    """Left <-> right via the log canonical bundle, realized by transposition."""
    rows = tuple(vec_transpose(M.chart, r) for r in M.rows)
    return ModulePresentation(M.chart, M.rank, rows, "right" if M.side == "left" else "left",
                              M.localized)


def verdier_dual(obj) -> DualComplex:
    """Dual of a left module (via its Schreyer resolution) or of a free complex."""
    if isinstance(obj, ModulePresentation):
        if obj.localized:
            raise ValueError("duality of localized presentations is not supported")
        F = free_resolution(as_left(obj))
    elif isinstance(obj, PresComplex):
        F = obj
    elif isinstance(obj, DualComplex):
        F = obj.complex
    else:
        raise TypeError(f"cannot dualize {type(obj).__name__}")
    D = hom_to_ring(F, shift=F.chart.dim, twist=DUAL_TWIST)
    return DualComplex(D, F)


def ext_module(M: ModulePresentation, i: int) -> ModulePresentation:
    """Ext^i_D(M, D) as a right module."""
    F = free_resolution(as_left(M))
    E = hom_to_ring(F)
    H = simplified(cohomology(E, i))
    return ModulePresentation(H.chart, H.rank, tuple(vec_transpose(H.chart, r) for r in H.rows),
                              "right")


def _dual_logdim(D: DualComplex) -> int | None:
    best = None
    for k in D.nonzero_degrees():
        v = logdim_subvariety(D.chart, D.char_ideal(k))
        if v is not None and (best is None or v > best):
            best = v
    return best


def check_logdim_duality(M: ModulePresentation) -> bool:
    """logdim Ch(M) equals the log dimension of Ch of the dual complex."""
    return logdim_subvariety(M.chart, char_ideal(M)) == _dual_logdim(verdier_dual(M))


@dataclass
class DegreeBound:
    degree: int
    dim_ch: int | None
    bound: int
    ok: bool

    def as_tuple(self):
        return (self.degree, self.dim_ch, "ok" if self.ok else "violated")


def dual_degree_support_bounds(M: ModulePresentation) -> list[DegreeBound]:
    """Per nonzero degree l of the dual: dim Ch(H^l) against logdim X - l."""
    D = verdier_dual(M)
    L = M.chart.logdim
    out = []
    for k in D.nonzero_degrees():
        d = krull_dim(D.char_ideal(k))
        bound = L - k
        out.append(DegreeBound(k, d, bound, d is None or d <= bound))
    return out


def lowest_dual_degree(M: ModulePresentation) -> int | None:
    """Lowest degree with nonzero dual cohomology; predicted to be logdim X - dim Ch(M)."""
    degs = verdier_dual(M).nonzero_degrees()
    return degs[0] if degs else None


def dim_ch_complex(C) -> int | None:
    """max_l dim Ch(H^l) of a complex or dual complex."""
    if isinstance(C, DualComplex):
        degs, ch = C.nonzero_degrees(), C.char_ideal
    else:
        degs = [k for k in C.degrees() if not cohomology_is_zero(C, k)]
        ch = lambda k: cohomology_char_ideal(C, k)  # noqa: E731
    best = None
    for k in degs:
        d = krull_dim(ch(k))
        if d is not None and (best is None or d > best):
            best = d
    return best
