"""Left Gröbner bases, syzygies and free resolutions over the log Weyl algebra.

Conventions
-----------
A vector in D^m is a dict ``{(component, exponent): Fraction}``.  A map
D^a -> D^b is a list of ``a`` vectors in D^b (the images of the basis
vectors), acting by ``v -> v . F`` so that composition is a matrix
product.  A left module presentation is ``D^m / (sum of D r_i)``.

Right modules are presented by their natural right relations; every
computation goes through the transposed left relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chart import Chart
from .gbcore import (Basis, ModuleOrder, SchreyerOrder, axpy, buchberger, divides,
                     elem_times_vec, exp_lcm, exp_sub, make_basis, mono_times_vec,
                     reduce_vec, scale, syzygy_module)
from .opalg import OpElement, algebra, format_poly, transpose_terms, twist_terms

# -- vectors -----------------------------------------------------------------


def row_to_vec(row: Sequence[OpElement]) -> dict:
    v: dict = {}
    for c, op in enumerate(row):
        for e, a in op.terms.items():
            v[(c, e)] = a
    return v


def vec_to_row(v: dict, m: int, chart: Chart) -> list[OpElement]:
    parts: list[dict] = [{} for _ in range(m)]
    for (c, e), a in v.items():
        parts[c][e] = a
    return [OpElement(chart, p) for p in parts]


def unit_vec(chart: Chart, comp: int) -> dict:
    return {(comp, (0,) * chart.nvars): Fraction(1)}


def entry(v: dict, comp: int) -> dict:
    return {e: a for (c, e), a in v.items() if c == comp}


def vec_transpose(chart: Chart, v: dict) -> dict:
    out: dict = {}
    comps = sorted({c for c, _ in v})
    for c in comps:
        for e, a in transpose_terms(chart, entry(v, c)).items():
            out[(c, e)] = a
    return out


def vec_twist(chart: Chart, v: dict, direction) -> dict:
    out: dict = {}
    for c in sorted({c for c, _ in v}):
        for e, a in twist_terms(chart, entry(v, c), direction).items():
            out[(c, e)] = a
    return out


def shift_comps(v: dict, offset: int) -> dict:
    return {(c + offset, e): a for (c, e), a in v.items()}


def format_vec(v: dict, m: int, chart: Chart) -> list[str]:
    names = chart.operator_names()
    return [format_poly(entry(v, c), names) for c in range(m)]


def apply_map(chart: Chart, v: dict, F: Sequence[dict]) -> dict:
    """v . F for a vector v in D^a and a map F given by ``a`` rows."""
    ring = algebra(chart)
    out: dict = {}
    for c in sorted({c for c, _ in v}):
        if F[c]:
            axpy(out, 1, elem_times_vec(ring, entry(v, c), F[c]))
    return out


def compose(chart: Chart, F: Sequence[dict], G: Sequence[dict]) -> list[dict]:
    """Rows of F . G (first F, then G)."""
    return [apply_map(chart, row, G) for row in F]


# -- orders ------------------------------------------------------------------

def module_order(chart: Chart, kind="pot"):
    """Named module orders: ``pot``, ``top`` or ``symbols``; objects pass through."""
    if not isinstance(kind, str):
        return kind
    nv = chart.nvars
    if kind == "pot":
        return ModuleOrder(nv, position="pot")
    if kind == "top":
        return ModuleOrder(nv, position="top")
    if kind == "symbols":
        w = [0] * nv
        for s in chart.fiber_slots():
            w[s] = 1
        return ModuleOrder(nv, weight=w, position="top")
    raise ValueError(f"unknown module order {kind!r}")


# -- presentations -----------------------------------------------------------

@dataclass(frozen=True)
class ModulePresentation:
    chart: Chart
    rank: int
    rows: tuple = ()
    side: str = "left"
    localized: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        ring = algebra(self.chart)
        clean = []
        for r in self.rows:
            v = {(c, tuple(e)): Fraction(a) for (c, e), a in r.items()
                 if a and not ring.is_zero_mono(tuple(e))}
            if any(not 0 <= c < self.rank for c, _ in v):
                raise ValueError("relation has a component outside the rank")
            if v:
                clean.append(v)
        object.__setattr__(self, "rows", tuple(clean))
        object.__setattr__(self, "localized", frozenset(self.localized))

    @classmethod
    def from_rows(cls, chart: Chart, rank: int, rows: Iterable[Sequence[OpElement]],
                  side: str = "left", localized: Iterable[int] = ()) -> "ModulePresentation":
        vecs = []
        for row in rows:
            if len(row) != rank:
                raise ValueError(f"relation row has length {len(row)}, expected {rank}")
            vecs.append(row_to_vec(row))
        return cls(chart, rank, tuple(vecs), side, frozenset(localized))

    def left_rows(self) -> list[dict]:
        """Relations of the equivalent left-module computation."""
        if self.side == "left":
            return [dict(r) for r in self.rows]
        return [vec_transpose(self.chart, r) for r in self.rows]

    def relation_rows(self) -> list[list[OpElement]]:
        return [vec_to_row(r, self.rank, self.chart) for r in self.rows]

    def formatted_rows(self) -> list[list[str]]:
        return [format_vec(r, self.rank, self.chart) for r in self.rows]

    def direct_sum(self, other: "ModulePresentation") -> "ModulePresentation":
        if other.chart != self.chart or other.side != self.side:
            raise ValueError("direct sum needs matching chart and side")
        rows = list(self.rows) + [shift_comps(r, self.rank) for r in other.rows]
        return ModulePresentation(self.chart, self.rank + other.rank, tuple(rows), self.side,
                                  self.localized | other.localized)

    def with_rows(self, extra: Iterable[dict]) -> "ModulePresentation":
        return ModulePresentation(self.chart, self.rank, tuple(self.rows) + tuple(extra),
                                  self.side, self.localized)

    def on_chart(self, chart: Chart) -> "ModulePresentation":
        return ModulePresentation(chart, self.rank, self.rows, self.side, self.localized)


def zero_module(chart: Chart, side: str = "left") -> ModulePresentation:
    return ModulePresentation(chart, 0, (), side)


# -- Gröbner bases and syzygies ------------------------------------------------

def left_gb(chart: Chart, vecs: Iterable[dict], order="pot") -> list[dict]:
    return buchberger(algebra(chart), [v for v in vecs if v], module_order(chart, order))


def left_gb_rows(chart: Chart, rows: Iterable[Sequence[OpElement]], order="pot") -> list[list[OpElement]]:
    rows = list(rows)
    m = len(rows[0]) if rows else 0
    return [vec_to_row(v, m, chart) for v in left_gb(chart, [row_to_vec(r) for r in rows], order)]


def syzygies(chart: Chart, gens: Sequence[dict], m: int, order="pot") -> list[dict]:
    """Generators of {a : sum a_i g_i = 0} as vectors in D^len(gens)."""
    if not gens:
        return []
    nonzero = [i for i, g in enumerate(gens) if g]
    out = [unit_vec(chart, i) for i, g in enumerate(gens) if not g]
    if nonzero:
        sub = [gens[i] for i in nonzero]
        _, syz = syzygy_module(algebra(chart), sub, m, module_order(chart, order),
                               (0,) * chart.nvars)
        for s in syz:
            out.append({(nonzero[c], e): a for (c, e), a in s.items()})
    return out


def prune_generators(chart: Chart, gens: Sequence[dict], m: int) -> list[dict]:
    """A subset of ``gens`` spanning the same submodule, smallest vectors first."""
    kept: list[dict] = []
    S = None
    for g in sorted((g for g in gens if g), key=lambda v: (len(v), sorted(v.items()))):
        if S is not None and S.contains(g):
            continue
        kept.append(g)
        S = SubmoduleGB(chart, kept, m)
    return kept


def syzygy_rows(chart: Chart, rows: Sequence[Sequence[OpElement]]) -> list[list[OpElement]]:
    m = len(rows[0]) if rows else 0
    syz = syzygies(chart, [row_to_vec(r) for r in rows], m)
    return [vec_to_row(s, len(rows), chart) for s in syz]


class SubmoduleGB:
    """Gröbner basis of a submodule of D^m, for membership tests."""

    def __init__(self, chart: Chart, gens: Iterable[dict], m: int, order="pot"):
        self.chart = chart
        self.m = m
        self.order = module_order(chart, order)
        self.gb = left_gb(chart, gens, self.order)
        self.basis = make_basis(algebra(chart), self.gb, self.order)

    def reduce(self, v: dict) -> dict:
        return reduce_vec(self.basis, v)

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def contains_all(self, vs: Iterable[dict]) -> bool:
        return all(self.contains(v) for v in vs)

    def is_everything(self) -> bool:
        one = (0,) * self.chart.nvars
        return all(self.contains({(c, one): Fraction(1)}) for c in range(self.m))


class Lifter:
    """Expresses members of span(gens) as left combinations of ``gens``."""

    def __init__(self, chart: Chart, gens: Sequence[dict], m: int, order="pot"):
        from .gbcore import BlockOrder
        self.chart = chart
        self.m = m
        self.p = len(gens)
        base = module_order(chart, order)
        ring = algebra(chart)
        one = (0,) * chart.nvars
        aug = []
        for i, g in enumerate(gens):
            v = dict(g)
            v[(m + i, one)] = Fraction(1)
            aug.append(v)
        self.order = BlockOrder(base, m)
        gb = buchberger(ring, aug, self.order)
        self.basis = make_basis(ring, gb, self.order)

    def lift(self, v: dict) -> dict | None:
        r = reduce_vec(self.basis, v)
        if any(c < self.m for c, _ in r):
            return None
        return {(c - self.m, e): -a for (c, e), a in r.items()}


def lift(chart: Chart, gens: Sequence[dict], m: int, targets: Sequence[dict]) -> list[dict] | None:
    """Coefficient vectors c with c . gens = target, or ``None`` if some target is outside."""
    L = Lifter(chart, gens, m)
    out = []
    for t in targets:
        c = L.lift(t)
        if c is None:
            return None
        out.append(c)
    return out


def is_zero_module(M: ModulePresentation) -> bool:
    if M.rank == 0:
        return True
    S = SubmoduleGB(M.chart, M.left_rows(), M.rank)
    return S.is_everything()


def same_submodule(chart: Chart, A: Sequence[dict], B: Sequence[dict], m: int) -> bool:
    return (SubmoduleGB(chart, A, m).contains_all(B)
            and SubmoduleGB(chart, B, m).contains_all(A))


def subquotient(chart: Chart, K: Sequence[dict], B: Sequence[dict], m: int,
                side: str = "left") -> ModulePresentation:
    """Presentation of (span K + span B) / span B on the generators K."""
    p = len(K)
    if p == 0:
        return zero_module(chart, side)
    B = [b for b in B if b]
    syz = syzygies(chart, list(K) + B, m)
    rels = []
    for s in syz:
        r = {(c, e): a for (c, e), a in s.items() if c < p}
        if r:
            rels.append(r)
    return ModulePresentation(chart, p, tuple(rels), "left")


def intersect_submodules(chart: Chart, A: Sequence[dict], B: Sequence[dict], m: int) -> list[dict]:
    """Generators of span A ∩ span B inside D^m."""
    A = [a for a in A if a]
    B = [b for b in B if b]
    if not A or not B:
        return []
    syz = syzygies(chart, A + B, m)
    out = []
    for s in syz:
        coeff = {(c, e): a for (c, e), a in s.items() if c < len(A)}
        if coeff:
            v = apply_map(chart, coeff, A)
            if v:
                out.append(v)
    return out


def _t_mono(chart: Chart, u: Sequence[int]) -> tuple:
    e = [0] * chart.nvars
    for j, k in enumerate(u, start=1):
        e[chart.t_slot(j)] = k
    return tuple(e)


def t_quotient(chart: Chart, N: Sequence[dict], m: int, u: Sequence[int]) -> list[dict]:
    """Generators of {v in D^m : t^u v in span N}.

    Since t^u v = s(v) t^u with s the shift th_j -> th_j - u_j, we solve
    w t^u in span N for w and undo the shift.
    """
    N = [n for n in N if n]
    tu = {_t_mono(chart, u): Fraction(1)}
    right = []
    for c in range(m):
        # e_c * t^u
        right.append({(c, e): a for e, a in tu.items()})
    if not N:
        return []
    syz = syzygies(chart, N + right, m)
    out = []
    for s in syz:
        w = {(c - len(N), e): a for (c, e), a in s.items() if c >= len(N)}
        if not w:
            continue
        # shift back: th_j -> th_j + u_j on each direction
        v = w
        for j, k in enumerate(u, start=1):
            if k:
                v = _twist_one(chart, v, j, k)
        out.append(v)
    return out


def _twist_one(chart: Chart, v: dict, j: int, shift) -> dict:
    from math import comb
    slot = chart.th_slot(j)
    out: dict = {}
    for (c, e), a in v.items():
        d = e[slot]
        for k in range(d + 1):
            g = list(e)
            g[slot] = k
            key = (c, tuple(g))
            s = out.get(key, 0) + a * comb(d, k) * Fraction(shift) ** (d - k)
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def saturate(chart: Chart, N: Sequence[dict], m: int, invert: Iterable[int]) -> list[dict]:
    """Contraction to D^m of the localized span of N (t_j inverted for j in ``invert``)."""
    inv = sorted(set(invert))
    if set(inv) & chart.idealized:
        raise ValueError("cannot invert idealized directions")
    cur = left_gb(chart, N)
    while True:
        nxt = list(cur)
        for j in inv:
            u = [0] * chart.n_log
            u[j - 1] = 1
            nxt += t_quotient(chart, cur, m, u)
        gb = left_gb(chart, nxt)
        if SubmoduleGB(chart, cur, m).contains_all(gb):
            return gb
        cur = gb


def localized_gb(M: ModulePresentation, invert: Iterable[int] | None = None) -> list[dict]:
    inv = M.localized if invert is None else frozenset(invert)
    return saturate(M.chart, M.left_rows(), M.rank, inv)


# -- complexes ---------------------------------------------------------------

@dataclass
class PresComplex:
    """Bounded complex of free modules F^k with maps d^k : F^k -> F^(k+1).

    ``ranks[k]`` is the rank of F^k; ``maps[k]`` lists ``ranks[k]`` vectors in
    F^(k+1).  Degrees absent from ``ranks`` hold the zero module.
    """

    chart: Chart
    ranks: dict
    maps: dict
    side: str = "left"

    def __post_init__(self):
        self.ranks = {k: v for k, v in self.ranks.items() if v > 0}
        for k in list(self.maps):
            if k not in self.ranks:
                del self.maps[k]
                continue
            rows = self.maps[k]
            if len(rows) != self.ranks[k]:
                raise ValueError(f"map in degree {k} has {len(rows)} rows, expected {self.ranks[k]}")
            if all(not r for r in rows):
                del self.maps[k]

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def d(self, k: int) -> list[dict]:
        return self.maps.get(k) or [{} for _ in range(self.rank(k))]

    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def amplitude(self) -> tuple[int, int] | None:
        ds = self.degrees()
        return (ds[0], ds[-1]) if ds else None

    def shift(self, s: int) -> "PresComplex":
        """C[s]: degree k of the result is degree k + s of C, differentials negated for odd s."""
        sign = -1 if s % 2 else 1
        ranks = {k - s: v for k, v in self.ranks.items()}
        maps = {k - s: [scale(r, sign) for r in rows] for k, rows in self.maps.items()}
        return PresComplex(self.chart, ranks, maps, self.side)

    def check(self) -> bool:
        """Consecutive differentials compose to zero."""
        for k in self.degrees():
            if k in self.maps and (k + 1) in self.maps:
                if any(compose(self.chart, self.maps[k], self.maps[k + 1])):
                    return False
        return True

    def cohomology(self, k: int) -> ModulePresentation:
        return cohomology(self, k)

    def cohomology_degrees(self) -> list[int]:
        return [k for k in self.degrees() if not cohomology_is_zero(self, k)]

    def formatted(self) -> dict:
        out = {}
        for k in self.degrees():
            rows = self.d(k)
            out[str(k)] = {"rank": self.rank(k),
                           "map": [format_vec(r, self.rank(k + 1), self.chart) for r in rows]
                           if k in self.maps else []}
        return out


def direct_sum_complex(A: PresComplex, B: PresComplex) -> PresComplex:
    ranks, maps = {}, {}
    for k in set(A.ranks) | set(B.ranks):
        ranks[k] = A.rank(k) + B.rank(k)
    for k in ranks:
        if k in A.maps or k in B.maps:
            rows = [dict(r) for r in A.d(k)] + [shift_comps(r, A.rank(k + 1)) for r in B.d(k)]
            maps[k] = rows
    return PresComplex(A.chart, ranks, maps, A.side)


def complex_from_module(M: ModulePresentation, degree: int = 0) -> PresComplex:
    """Free resolution of M placed so that its only cohomology sits in ``degree``."""
    return free_resolution(M).shift(-degree)


def kernel_gens(chart: Chart, C: PresComplex, k: int) -> list[dict]:
    r = C.rank(k)
    if k not in C.maps:
        return [unit_vec(chart, i) for i in range(r)]
    return syzygies(chart, C.maps[k], C.rank(k + 1))


def has_incoming(C: PresComplex, k: int) -> bool:
    return (k - 1) in C.maps and any(C.maps[k - 1])


def cohomology_is_zero(C: PresComplex, k: int) -> bool:
    """H^k(C) = 0, without presenting H^k when nothing maps into degree k."""
    if C.rank(k) == 0:
        return True
    if not has_incoming(C, k):
        return not any(kernel_gens(C.chart, C, k))
    return is_zero_module(cohomology(C, k))


def cohomology(C: PresComplex, k: int) -> ModulePresentation:
    """H^k(C) presented on generators of ker d^k."""
    chart = C.chart
    if C.rank(k) == 0:
        return zero_module(chart)
    B = [b for b in C.d(k - 1) if b] if (k - 1) in C.maps else []
    if k not in C.maps or not any(C.maps[k]):
        # ker d^k is the whole term: H^k is the cokernel of d^(k-1)
        return ModulePresentation(chart, C.rank(k), tuple(B), "left")
    K = prune_generators(chart, kernel_gens(chart, C, k), C.rank(k))
    return subquotient(chart, K, B, C.rank(k))


# -- Schreyer resolution -----------------------------------------------------

def _lead(order, v: dict):
    return max(v, key=order.key)


def _schreyer_syzygies(ring, gb: Sequence[dict], order) -> list[dict]:
    basis = make_basis(ring, gb, order)
    out = []
    for i in range(len(gb)):
        for j in range(i + 1, len(gb)):
            if basis.lts[i][0] != basis.lts[j][0]:
                continue
            L = exp_lcm(basis.lts[i][1], basis.lts[j][1])
            mi = exp_sub(L, basis.lts[i][1])
            mj = exp_sub(L, basis.lts[j][1])
            ci = Fraction(1) / basis.lcs[i]
            cj = Fraction(1) / basis.lcs[j]
            s = scale(mono_times_vec(ring, mi, gb[i]), ci)
            axpy(s, -cj, mono_times_vec(ring, mj, gb[j]))
            quots = [dict() for _ in gb]
            rem = reduce_vec(basis, s, quotients=quots)
            if rem:
                raise ArithmeticError("input to the Schreyer step is not a Gröbner basis")
            syz = {(i, mi): ci}
            axpy(syz, 1, {(j, mj): -cj})
            for k, q in enumerate(quots):
                for e, a in q.items():
                    axpy(syz, 1, {(k, e): -a})
            if syz:
                out.append(syz)
    return out


def _minimize(order, vecs: Sequence[dict]) -> list[dict]:
    leads = [_lead(order, v) for v in vecs]
    keep = []
    for i, (c, e) in enumerate(leads):
        dominated = False
        for j, (c2, e2) in enumerate(leads):
            if j == i or c2 != c or not divides(e2, e):
                continue
            if e2 != e or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(vecs[i])
    return keep


def free_resolution(M: ModulePresentation, order="pot") -> PresComplex:
    """Schreyer free resolution F^-k -> ... -> F^0 = D^m of the left module M.

    Before each syzygy step the Gröbner basis is sorted by decreasing
    exponent of one more variable, so that leading terms lose one variable
    per step and the construction stops after at most as many steps as
    there are live variables.
    """
    chart = M.chart
    ring = algebra(chart)
    cur_order = module_order(chart, order)
    gb = buchberger(ring, M.left_rows(), cur_order)
    live = [s for s in range(chart.nvars) if s not in chart.idealized_slots()]
    ranks = {0: M.rank}
    maps: dict = {}
    deg, step = 0, 0
    while gb:
        if step < len(live):
            v = live[step]
            gb = sorted(gb, key=lambda g: -_lead(cur_order, g)[1][v])
        ranks[deg - 1] = len(gb)
        maps[deg - 1] = gb
        leads = [_lead(cur_order, g) for g in gb]
        syz = _schreyer_syzygies(ring, gb, cur_order)
        cur_order = SchreyerOrder(cur_order, leads)
        gb = _minimize(cur_order, syz)
        deg -= 1
        step += 1
    return PresComplex(chart, ranks, maps, M.side)


# -- simplification ---------------------------------------------------------

def _constant_entry(v: dict, nvars: int):
    """First component whose entry in v is a nonzero constant."""
    one = (0,) * nvars
    comps = sorted({c for c, _ in v})
    for c in comps:
        ent = entry(v, c)
        if len(ent) == 1 and one in ent:
            return c, ent[one]
    return None


def simplify(M: ModulePresentation) -> tuple[ModulePresentation, list[dict]]:
    """Drop generators that a relation expresses through the others.

    Returns the smaller presentation and, for each old generator, its
    image as a vector in the new generators.
    """
    chart = M.chart
    ring = algebra(chart)
    rows = M.left_rows()
    m = M.rank
    images = [unit_vec(chart, i) for i in range(m)]
    alive = list(range(m))
    while True:
        progress = False
        for idx, r in enumerate(rows):
            hit = _constant_entry(r, chart.nvars)
            if hit is None:
                continue
            c, u = hit
            # e_c = -u^-1 (r - u e_c)
            rest = {k: a for k, a in r.items() if k[0] != c}
            sub = scale(rest, -Fraction(1) / u)
            new_rows = []
            for jdx, s in enumerate(rows):
                if jdx == idx:
                    continue
                sc = entry(s, c)
                s2 = {k: a for k, a in s.items() if k[0] != c}
                if sc:
                    axpy(s2, 1, elem_times_vec(ring, sc, sub))
                if s2:
                    new_rows.append(s2)
            rows = new_rows
            new_images = []
            for img in images:
                ic = entry(img, c)
                i2 = {k: a for k, a in img.items() if k[0] != c}
                if ic:
                    axpy(i2, 1, elem_times_vec(ring, ic, sub))
                new_images.append(i2)
            images = new_images
            alive.remove(c)
            progress = True
            break
        if progress:
            continue
        if not rows:
            break
        gb = left_gb(chart, rows)
        if any(_constant_entry(g, chart.nvars) for g in gb):
            rows = gb
            continue
        rows = gb
        break
    remap = {c: i for i, c in enumerate(alive)}
    rows = [{(remap[c], e): a for (c, e), a in r.items()} for r in rows]
    images = [{(remap[c], e): a for (c, e), a in v.items()} for v in images]
    return ModulePresentation(chart, len(alive), tuple(rows), "left"), images


def simplified(M: ModulePresentation) -> ModulePresentation:
    S, _ = simplify(M)
    if M.side == "right":
        return ModulePresentation(S.chart, S.rank,
                                  tuple(vec_transpose(S.chart, r) for r in S.rows), "right")
    return S


__all__ = [
    "ModulePresentation", "PresComplex", "SubmoduleGB", "Lifter", "Basis",
    "left_gb", "left_gb_rows", "syzygies", "syzygy_rows", "lift", "free_resolution",
    "cohomology", "cohomology_is_zero", "has_incoming", "simplify", "simplified", "is_zero_module", "subquotient",
    "intersect_submodules", "t_quotient", "saturate", "localized_gb", "module_order",
    "row_to_vec", "vec_to_row", "unit_vec", "apply_map", "compose", "zero_module",
    "direct_sum_complex", "complex_from_module", "same_submodule",
]
