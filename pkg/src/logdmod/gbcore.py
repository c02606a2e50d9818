"""Shared Buchberger machinery for left submodules of free modules.

A *ring* object supplies ``nvars`` and ``mono_mul(e1, e2)``, returning the
normal-ordered product of two PBW monomials as ``{exponent: coefficient}``.
The commutative polynomial ring and the log Weyl algebra both fit this
shape, so one Buchberger core serves both.

Vectors are dicts mapping ``(component, exponent)`` to a nonzero
``Fraction``.  Term orders are objects with a ``key(term)`` method whose
result compares larger for larger terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Exp = tuple
Term = tuple  # (component, exponent)
Vec = dict


# -- sparse arithmetic ------------------------------------------------------

def axpy(acc: dict, c, v: dict) -> None:
    """acc += c * v in place, dropping zeros."""
    if not c:
        return
    for k, a in v.items():
        s = acc.get(k, 0) + c * a
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * a for k, a in v.items()}


def vadd(*vs: dict) -> dict:
    out: dict = {}
    for v in vs:
        axpy(out, 1, v)
    return out


def exp_add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


# -- rings ------------------------------------------------------------------

class CommRing:
    """Commutative polynomial ring in ``nvars`` variables."""

    commutative = True

    def __init__(self, nvars: int):
        self.nvars = nvars

    def mono_mul(self, e1: Exp, e2: Exp) -> dict:
        return {exp_add(e1, e2): 1}

    def one(self) -> Exp:
        return (0,) * self.nvars


def mono_times_vec(ring, m: Exp, v: dict) -> dict:
    """Left multiplication of a module vector by the monomial ``m``."""
    out: dict = {}
    if ring.commutative:
        for (comp, e), c in v.items():
            out[(comp, exp_add(m, e))] = c
        return out
    for (comp, e), c in v.items():
        for e2, c2 in ring.mono_mul(m, e).items():
            k = (comp, e2)
            s = out.get(k, 0) + c * c2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def elem_times_vec(ring, p: dict, v: dict) -> dict:
    """Left multiplication of a vector by a ring element ``p``."""
    out: dict = {}
    for m, c in p.items():
        axpy(out, c, mono_times_vec(ring, m, v))
    return out


# -- term orders ------------------------------------------------------------

def degrevlex_key(e: Exp) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


class ModuleOrder:
    """Weighted degrevlex on monomials, combined with a position rule.

    ``position`` is ``"pot"`` (component compared first) or ``"top"``
    (monomial compared first).  Lower component indices rank higher by
    default; ``priority`` overrides the per-component rank.  ``weight``
    is compared ahead of everything when given.
    """

    def __init__(self, nvars: int, weight: Sequence[int] | None = None,
                 position: str = "pot", priority: dict | None = None):
        if position not in ("pot", "top"):
            raise ValueError(f"unknown position rule {position!r}")
        self.nvars = nvars
        self.weight = tuple(weight) if weight is not None else None
        self.position = position
        self.priority = dict(priority or {})
        self._cache: dict = {}

    def comp_rank(self, comp: int):
        return self.priority.get(comp, -comp)

    def mono_key(self, e: Exp) -> tuple:
        k = degrevlex_key(e)
        if self.weight is not None:
            return (sum(w * x for w, x in zip(self.weight, e)),) + k
        return k

    def key(self, term: Term):
        k = self._cache.get(term)
        if k is None:
            comp, e = term
            if self.position == "pot":
                k = (self.comp_rank(comp), self.mono_key(e))
            else:
                k = (self.mono_key(e), self.comp_rank(comp))
            self._cache[term] = k
        return k


class BlockOrder:
    """Components ``>= split`` are dominated by components ``< split``.

    Used for augmented vectors ``(g | e_i)``: any vector with a nonzero first
    block has its leading term there.
    """

    def __init__(self, base, split: int, tail=None):
        self.base = base
        self.tail = tail if tail is not None else base
        self.split = split
        self._cache: dict = {}

    def key(self, term: Term):
        k = self._cache.get(term)
        if k is None:
            comp, e = term
            if comp < self.split:
                k = (1, self.base.key(term))
            else:
                k = (0, self.tail.key((comp - self.split, e)))
            self._cache[term] = k
        return k


class VarBlockOrder:
    """Elimination order on a single component: degrevlex on the
    variables in ``elim`` first, then degrevlex on the rest."""

    def __init__(self, nvars: int, elim: Iterable[int]):
        self.nvars = nvars
        self.elim = tuple(sorted(set(elim)))
        self.rest = tuple(i for i in range(nvars) if i not in self.elim)
        self._cache: dict = {}

    def key(self, term: Term):
        k = self._cache.get(term)
        if k is None:
            comp, e = term
            a = tuple(e[i] for i in self.elim)
            b = tuple(e[i] for i in self.rest)
            k = (-comp, degrevlex_key(a), degrevlex_key(b))
            self._cache[term] = k
        return k


class SchreyerOrder:
    """Order induced on a free module with basis ``e_i`` mapped to vectors
    with leading terms ``leads[i]`` in a previously ordered module."""

    def __init__(self, prev, leads: Sequence[Term]):
        self.prev = prev
        self.leads = list(leads)
        self._cache: dict = {}

    def key(self, term: Term):
        k = self._cache.get(term)
        if k is None:
            comp, e = term
            lc, le = self.leads[comp]
            k = (self.prev.key((lc, exp_add(le, e))), -comp)
            self._cache[term] = k
        return k


# -- reduction and Buchberger ----------------------------------------------

class Basis:
    """Working Gröbner basis: vectors with cached leading data."""

    def __init__(self, ring, order):
        self.ring = ring
        self.order = order
        self.vecs: list[dict] = []
        self.lts: list[Term] = []
        self.lcs: list = []
        self.by_comp: dict[int, list[int]] = {}

    def lead(self, v: dict) -> Term:
        return max(v, key=self.order.key)

    def add(self, v: dict) -> int:
        lt = self.lead(v)
        idx = len(self.vecs)
        self.vecs.append(v)
        self.lts.append(lt)
        self.lcs.append(v[lt])
        self.by_comp.setdefault(lt[0], []).append(idx)
        return idx

    def find_reducer(self, lt: Term, skip=()) -> int | None:
        comp, e = lt
        for i in self.by_comp.get(comp, ()):
            if i in skip:
                continue
            if divides(self.lts[i][1], e):
                return i
        return None


def reduce_vec(basis: Basis, f: dict, full: bool = True, quotients: list | None = None,
               skip=(), stop_comp: int | None = None) -> dict:
    """Left normal form of ``f`` modulo ``basis``.

    When ``quotients`` is a list (one dict per basis element) the multipliers
    are accumulated so that ``f = sum q_i * g_i + remainder``.  Terms in
    components ``>= stop_comp`` are left alone; the order must rank them below
    all other components.
    """
    ring, key = basis.ring, basis.order.key
    f = dict(f)
    rem: dict = {}
    while f:
        lt = max(f, key=key)
        c = f[lt]
        if stop_comp is not None and lt[0] >= stop_comp:
            rem.update(f)
            return rem
        i = basis.find_reducer(lt, skip)
        if i is None:
            if not full:
                rem.update(f)
                return rem
            rem[lt] = c
            del f[lt]
            continue
        m = exp_sub(lt[1], basis.lts[i][1])
        q = c / basis.lcs[i]
        axpy(f, -q, mono_times_vec(ring, m, basis.vecs[i]))
        f.pop(lt, None)
        if quotients is not None:
            d = quotients[i]
            s = d.get(m, 0) + q
            if s:
                d[m] = s
            else:
                d.pop(m, None)
    return rem


def spoly(basis: Basis, i: int, j: int) -> dict:
    ring = basis.ring
    L = exp_lcm(basis.lts[i][1], basis.lts[j][1])
    mi = exp_sub(L, basis.lts[i][1])
    mj = exp_sub(L, basis.lts[j][1])
    out = scale(mono_times_vec(ring, mi, basis.vecs[i]), Fraction(1) / basis.lcs[i])
    axpy(out, -Fraction(1) / basis.lcs[j], mono_times_vec(ring, mj, basis.vecs[j]))
    return out


def _pair_key(basis: Basis, i: int, j: int):
    comp = basis.lts[i][0]
    L = exp_lcm(basis.lts[i][1], basis.lts[j][1])
    return (basis.order.key((comp, L)), i, j)


def buchberger(ring, gens: Iterable[dict], order, *, interreduce: bool = True,
               pair_limit: int | None = None) -> list[dict]:
    """Reduced left Gröbner basis of the submodule generated by ``gens``.

    Pairs are processed smallest-lcm first.  When a new element arrives,
    pending pairs whose lcm it divides strictly are dropped (Buchberger's
    chain criterion, valid over PBW algebras as well).  Elements whose
    leading component is ``>= pair_limit`` are kept but never paired, and
    terms in those components are never reduced.
    """
    basis = Basis(ring, order)
    pairs: dict[tuple[int, int], tuple] = {}

    def push(v: dict) -> None:
        idx = basis.add(_monic(v, basis))
        comp, ek = basis.lts[idx]
        if pair_limit is not None and comp >= pair_limit:
            return
        for (i, j) in list(pairs):
            if basis.lts[i][0] != comp:
                continue
            L = exp_lcm(basis.lts[i][1], basis.lts[j][1])
            if (divides(ek, L) and exp_lcm(basis.lts[i][1], ek) != L
                    and exp_lcm(basis.lts[j][1], ek) != L):
                del pairs[(i, j)]
        for j in basis.by_comp[comp]:
            if j != idx:
                pairs[(j, idx)] = _pair_key(basis, j, idx)

    for g in gens:
        if not g:
            continue
        r = reduce_vec(basis, g, stop_comp=pair_limit)
        if r:
            push(r)

    while pairs:
        (i, j) = min(pairs, key=pairs.get)
        del pairs[(i, j)]
        r = reduce_vec(basis, spoly(basis, i, j), stop_comp=pair_limit)
        if r:
            push(r)

    if not interreduce:
        return list(basis.vecs)
    return interreduce_basis(ring, basis.vecs, order)


def _monic(v: dict, basis: Basis) -> dict:
    lt = basis.lead(v)
    return scale(v, Fraction(1) / v[lt])


def interreduce_basis(ring, vecs: Sequence[dict], order) -> list[dict]:
    """Minimal, tail-reduced, monic basis sorted by decreasing leading term."""
    key = order.key
    items = [(max(v, key=key), v) for v in vecs if v]
    keep = []
    for idx, (lt, v) in enumerate(items):
        dominated = False
        for jdx, (lt2, _) in enumerate(items):
            if jdx == idx or lt2[0] != lt[0] or not divides(lt2[1], lt[1]):
                continue
            if lt2 != lt or jdx < idx:
                dominated = True
                break
        if not dominated:
            keep.append(v)
    out = []
    for idx, v in enumerate(keep):
        others = Basis(ring, order)
        for jdx, w in enumerate(keep):
            if jdx != idx:
                others.add(w)
        r = reduce_vec(others, v)
        lt = max(r, key=key)
        out.append(scale(r, Fraction(1) / r[lt]))
    out.sort(key=lambda v: key(max(v, key=key)), reverse=True)
    return out


def make_basis(ring, vecs: Iterable[dict], order) -> Basis:
    b = Basis(ring, order)
    for v in vecs:
        if v:
            b.add(v)
    return b


# -- augmented computations --------------------------------------------------

def syzygy_module(ring, gens: Sequence[dict], m: int, order, one: Exp) -> tuple[list[dict], list[dict]]:
    """Gröbner basis of the augmented module ``(g_i | e_i)``.

    Returns ``(gb_part, syz)`` where ``gb_part`` holds augmented vectors with a
    nonzero first block (a Gröbner basis of the span together with the
    coefficients expressing each element), and ``syz`` is a generating set
    of the syzygy module of ``gens``, as vectors in the tag components
    shifted back to start at 0.
    """
    aug = []
    for i, g in enumerate(gens):
        v = dict(g)
        v[(m + i, one)] = Fraction(1)
        aug.append(v)
    live, syz = _augmented_gb(ring, aug, BlockOrder(order, m), m)
    return live, [{(c - m, e): a for (c, e), a in v.items()} for v in syz]


def _augmented_gb(ring, aug: Sequence[dict], order, m: int) -> tuple[list[dict], list[dict]]:
    # Schreyer's construction with two economies.  Tag-only vectors are
    # collected and never paired or reduced further.  An element whose lead
    # becomes divisible by a newer lead is retired: its reduction by the
    # rest is fed back in, and its pairs are dropped.  The live elements stay
    # a Gröbner basis of the first block, so their S-pairs together with the
    # retired reductions generate every tag-only vector.
    basis = Basis(ring, order)
    dead: set[int] = set()
    pairs: dict[tuple[int, int], tuple] = {}
    syz: list[dict] = []
    todo = [v for v in aug if v]

    def reduce(v):
        return reduce_vec(basis, v, skip=dead, stop_comp=m)

    def push(v):
        lt = basis.lead(v)
        if lt[0] >= m:
            syz.append(v)
            return
        idx = basis.add(_monic(v, basis))
        comp, ek = basis.lts[idx]
        for j in basis.by_comp[comp]:
            if j != idx and j not in dead and divides(ek, basis.lts[j][1]):
                dead.add(j)
                for key in [k for k in pairs if j in k]:
                    del pairs[key]
                todo.append(basis.vecs[j])
        for j in basis.by_comp[comp]:
            if j != idx and j not in dead:
                pairs[(j, idx)] = _pair_key(basis, j, idx)

    def drain():
        while todo:
            r = reduce(todo.pop(0))
            if r:
                push(r)

    drain()
    while pairs:
        (i, j) = min(pairs, key=pairs.get)
        del pairs[(i, j)]
        todo.append(spoly(basis, i, j))
        drain()
    live = [v for i, v in enumerate(basis.vecs) if i not in dead]
    return live, syz


def split_block(v: dict, m: int) -> tuple[dict, dict]:
    a, b = {}, {}
    for (c, e), x in v.items():
        if c < m:
            a[(c, e)] = x
        else:
            b[(c - m, e)] = x
    return a, b

