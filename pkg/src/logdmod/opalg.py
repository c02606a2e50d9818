"""Exact arithmetic in the logarithmic Weyl algebra of a chart.

Elements are finite sums of PBW monomials x^a t^b d^c th^d with rational
coefficients, always kept in the ordered form x, t, d, th.  The defining
relations are [d_i, x_i] = 1 and [th_j, t_j] = t_j; all other pairs of
generators commute, and t_j = 0 for idealized j.

Products of monomials use closed forms instead of step-by-step rewriting:

    d^c x^a  = sum_k C(c, k) a!/(a-k)! x^(a-k) d^(c-k)
    th^d t^b = t^b (th + b)^d
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, perm
from typing import Iterable, Mapping

from .chart import Chart
from .gbcore import degrevlex_key


@lru_cache(maxsize=None)
def _leibniz(c: int, a: int) -> tuple:
    """d^c x^a as ((k, coeff), ...) meaning coeff * x^(a-k) d^(c-k)."""
    return tuple((k, comb(c, k) * perm(a, k)) for k in range(min(a, c) + 1))


@lru_cache(maxsize=None)
def _theta_shift(d: int, b: int) -> tuple:
    """th^d t^b as ((k, coeff), ...) meaning coeff * t^b th^k."""
    return tuple((k, comb(d, k) * b ** (d - k)) for k in range(d + 1))


class LogWeylAlgebra:
    """Ring object for one chart, usable by the Gröbner core."""

    commutative = False

    def __init__(self, chart: Chart):
        self.chart = chart
        self.nvars = chart.nvars
        self._n = chart.n_free
        self._r = chart.n_log
        self._ideal_slots = chart.idealized_slots()
        self._cache: dict = {}

    def one(self) -> tuple:
        return (0,) * self.nvars

    def is_zero_mono(self, e: tuple) -> bool:
        return any(e[s] for s in self._ideal_slots)

    def mono_mul(self, e1: tuple, e2: tuple) -> dict:
        key = (e1, e2)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._mono_mul(e1, e2)
        if len(self._cache) < 500_000:
            self._cache[key] = res
        return res

    def _mono_mul(self, e1: tuple, e2: tuple) -> dict:
        n, r = self._n, self._r
        for s in self._ideal_slots:
            if e1[s] or e2[s]:
                return {}
        choices = []
        for i in range(n):
            a1, c1 = e1[i], e1[n + r + i]
            a2, c2 = e2[i], e2[n + r + i]
            choices.append([(a1 + a2 - k, c1 - k + c2, co) for k, co in _leibniz(c1, a2)])
        for j in range(r):
            b1, d1 = e1[n + j], e1[2 * n + r + j]
            b2, d2 = e2[n + j], e2[2 * n + r + j]
            choices.append([(b1 + b2, k + d2, co) for k, co in _theta_shift(d1, b2)])
        out: dict = {}
        for pick in product(*choices):
            coeff = 1
            e = [0] * self.nvars
            for i in range(n):
                a, c, co = pick[i]
                e[i], e[n + r + i] = a, c
                coeff *= co
            for j in range(r):
                b, d, co = pick[n + j]
                e[n + j], e[2 * n + r + j] = b, d
                coeff *= co
            if coeff:
                t = tuple(e)
                out[t] = out.get(t, 0) + coeff
        return {k: v for k, v in out.items() if v}


_ALGEBRAS: dict = {}


def algebra(chart: Chart) -> LogWeylAlgebra:
    a = _ALGEBRAS.get(chart)
    if a is None:
        a = _ALGEBRAS[chart] = LogWeylAlgebra(chart)
    return a


def term_key(e: tuple) -> tuple:
    return degrevlex_key(e)


class OpElement:
    """Immutable element of the log Weyl algebra of ``chart``."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple, object] | None = None):
        ring = algebra(chart)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != chart.nvars:
                raise ValueError("exponent tuple has the wrong length")
            c = Fraction(c)
            if c and not ring.is_zero_mono(e):
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("OpElement is immutable")

    # constructors
    @classmethod
    def zero(cls, chart: Chart) -> "OpElement":
        return cls(chart, {})

    @classmethod
    def const(cls, chart: Chart, c) -> "OpElement":
        return cls(chart, {(0,) * chart.nvars: c})

    @classmethod
    def gen(cls, chart: Chart, kind: str, idx: int) -> "OpElement":
        slot = _slot(chart, kind, idx)
        e = [0] * chart.nvars
        e[slot] = 1
        return cls(chart, {tuple(e): 1})

    # arithmetic
    def _coerce(self, other) -> "OpElement":
        if isinstance(other, OpElement):
            if other.chart != self.chart:
                raise ValueError("operands live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return OpElement.const(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return OpElement(self.chart, t)

    __radd__ = __add__

    def __neg__(self):
        return OpElement(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return OpElement(self.chart, {e: c * other for e, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return multiply(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return OpElement(self.chart, {e: c * other for e, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = OpElement.const(self.chart, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = OpElement.const(self.chart, other)
        if not isinstance(other, OpElement):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.chart, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Degree in the order filtration (total degree in d and th); -1 for 0."""
        fs = self.chart.fiber_slots()
        return max((sum(e[s] for s in fs) for e in self.terms), default=-1)

    def symbol(self) -> dict:
        """Top-order part as a commutative cotangent polynomial."""
        k = self.order()
        fs = self.chart.fiber_slots()
        return {e: c for e, c in self.terms.items() if sum(e[s] for s in fs) == k}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda ec: term_key(ec[0]), reverse=True)

    def __str__(self):
        return format_poly(self.terms, self.chart.operator_names())

    def __repr__(self):
        return f"OpElement({self})"


def _slot(chart: Chart, kind: str, idx: int) -> int:
    if kind == "x":
        if not 1 <= idx <= chart.n_free:
            raise ValueError(f"unknown generator x{idx}")
        return chart.x_slot(idx)
    if kind == "t":
        if not 1 <= idx <= chart.n_log:
            raise ValueError(f"unknown generator t{idx}")
        return chart.t_slot(idx)
    if kind == "d":
        if not 1 <= idx <= chart.n_free:
            raise ValueError(f"unknown generator d{idx}")
        return chart.d_slot(idx)
    if kind == "th":
        if not 1 <= idx <= chart.n_log:
            raise ValueError(f"unknown generator th{idx}")
        return chart.th_slot(idx)
    raise ValueError(f"unknown generator kind {kind!r}")


def format_poly(terms: Mapping[tuple, object], names: list[str]) -> str:
    """Print a polynomial in the parseable ``2*x1^2*th1 - 1/3`` syntax."""
    if not terms:
        return "0"
    items = sorted(terms.items(), key=lambda ec: term_key(ec[0]), reverse=True)
    parts = []
    for e, c in items:
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not factors:
            body = str(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = f"{a}*" + "*".join(factors)
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def normal_form(tree, chart: Chart) -> OpElement:
    """Evaluate an expression tree into canonical form.

    Trees are nested tuples: ``("num", Fraction)``, ``("gen", kind, idx)``,
    ``("add", a, b)``, ``("sub", a, b)``, ``("mul", a, b)``, ``("neg", a)``,
    ``("pow", a, k)``.  An ``OpElement`` is returned unchanged.
    """
    if isinstance(tree, OpElement):
        return tree
    tag = tree[0]
    if tag == "num":
        return OpElement.const(chart, tree[1])
    if tag == "gen":
        return OpElement.gen(chart, tree[1], tree[2])
    if tag == "add":
        return normal_form(tree[1], chart) + normal_form(tree[2], chart)
    if tag == "sub":
        return normal_form(tree[1], chart) - normal_form(tree[2], chart)
    if tag == "mul":
        return normal_form(tree[1], chart) * normal_form(tree[2], chart)
    if tag == "neg":
        return -normal_form(tree[1], chart)
    if tag == "pow":
        return normal_form(tree[1], chart) ** tree[2]
    raise ValueError(f"unknown expression node {tag!r}")


def mul_terms(ring: LogWeylAlgebra, p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            for e, c in ring.mono_mul(e1, e2).items():
                s = out.get(e, 0) + c1 * c2 * c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
    return out


def multiply(a: OpElement, b: OpElement) -> OpElement:
    if a.chart != b.chart:
        raise ValueError("operands live on different charts")
    return OpElement(a.chart, mul_terms(algebra(a.chart), a.terms, b.terms))


def _gen_power(chart: Chart, slot: int, k: int) -> dict:
    e = [0] * chart.nvars
    e[slot] = k
    return {tuple(e): Fraction(1)}


def transpose_terms(chart: Chart, terms: Mapping) -> dict:
    """Anti-automorphism fixing x, t and negating d, th."""
    ring = algebra(chart)
    n, r = chart.n_free, chart.n_log
    out: dict = {}
    for e, c in terms.items():
        # (x^a t^b d^c th^d)^T = (-th)^d (-d)^c t^b x^a
        sgn = -1 if sum(e[n + r:]) % 2 else 1
        acc = {(0,) * chart.nvars: Fraction(sgn) * c}
        pieces = []
        pieces.append(tuple([0] * (2 * n + r) + list(e[2 * n + r:])))
        pieces.append(tuple([0] * (n + r) + list(e[n + r:2 * n + r]) + [0] * r))
        pieces.append(tuple([0] * n + list(e[n:n + r]) + [0] * (n + r)))
        pieces.append(tuple(list(e[:n]) + [0] * (n + 2 * r)))
        for m in pieces:
            acc = mul_terms(ring, acc, {m: 1})
        for k, v in acc.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def transpose(a: OpElement) -> OpElement:
    return OpElement(a.chart, transpose_terms(a.chart, a.terms))


def twist_terms(chart: Chart, terms: Mapping, direction) -> dict:
    """Automorphism th_j -> th_j + direction on non-idealized j."""
    out: dict = {}
    slots = [chart.th_slot(j) for j in chart.free_log]
    for e, c in terms.items():
        acc = {e: Fraction(c)}
        for s in slots:
            nxt: dict = {}
            for f, v in acc.items():
                d = f[s]
                for k in range(d + 1):
                    g = list(f)
                    g[s] = k
                    g = tuple(g)
                    w = v * comb(d, k) * Fraction(direction) ** (d - k)
                    nxt[g] = nxt.get(g, 0) + w
            acc = nxt
        for k, v in acc.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def twist(a: OpElement, direction) -> OpElement:
    return OpElement(a.chart, twist_terms(a.chart, a.terms, direction))


# -- Ore localization at log coordinates -------------------------------------

class LocalizedElement:
    """t^(-e) * numerator, with ``denom`` a tuple of exponents over log directions."""

    __slots__ = ("chart", "numerator", "denom", "inverted")

    def __init__(self, numerator: OpElement, denom: tuple, inverted: frozenset):
        object.__setattr__(self, "chart", numerator.chart)
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denom", tuple(denom))
        object.__setattr__(self, "inverted", frozenset(inverted))

    def __setattr__(self, name, value):
        raise AttributeError("LocalizedElement is immutable")

    def __eq__(self, other):
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        a, b = loc_normal_form(self), loc_normal_form(other)
        return (a.chart, a.numerator, a.denom) == (b.chart, b.numerator, b.denom)

    def __hash__(self):
        a = loc_normal_form(self)
        return hash((a.chart, a.numerator, a.denom))

    def __mul__(self, other):
        return loc_multiply(self, other)

    def __add__(self, other):
        return loc_add(self, other)

    def __str__(self):
        den = "*".join(f"t{j}^-{k}" if k > 1 else f"t{j}^-1"
                       for j, k in zip(range(1, self.chart.n_log + 1), self.denom) if k)
        num = str(self.numerator)
        return num if not den else f"{den}*({num})"


def _check_invert(chart: Chart, invert: Iterable[int]) -> frozenset:
    inv = frozenset(invert)
    bad = inv & chart.idealized
    if bad:
        raise ValueError(f"cannot invert idealized directions {sorted(bad)}")
    if not inv <= set(range(1, chart.n_log + 1)):
        raise ValueError("inverted directions out of range")
    return inv


def localize(a: OpElement, invert: Iterable[int]) -> LocalizedElement:
    inv = _check_invert(a.chart, invert)
    return LocalizedElement(a, (0,) * a.chart.n_log, inv)


def t_inverse(chart: Chart, j: int, invert: Iterable[int] | None = None) -> LocalizedElement:
    inv = _check_invert(chart, invert if invert is not None else {j})
    if j not in inv:
        raise ValueError(f"t{j} is not inverted")
    den = [0] * chart.n_log
    den[j - 1] = 1
    return LocalizedElement(OpElement.const(chart, 1), tuple(den), inv)


def _conjugate(chart: Chart, terms: Mapping, f: tuple) -> dict:
    """t^f A t^(-f): th_j -> th_j - f_j."""
    out = dict(terms)
    for j, k in enumerate(f, start=1):
        if k:
            slot = chart.th_slot(j)
            nxt: dict = {}
            for e, c in out.items():
                d = e[slot]
                for m in range(d + 1):
                    g = list(e)
                    g[slot] = m
                    g = tuple(g)
                    nxt[g] = nxt.get(g, 0) + c * comb(d, m) * Fraction(-k) ** (d - m)
            out = {e: c for e, c in nxt.items() if c}
    return out


def loc_normal_form(a: LocalizedElement) -> LocalizedElement:
    """Cancel common powers of t between denominator and numerator."""
    chart = a.chart
    den = list(a.denom)
    terms = dict(a.numerator.terms)
    if not terms:
        return LocalizedElement(a.numerator, (0,) * chart.n_log, a.inverted)
    for j in range(1, chart.n_log + 1):
        slot = chart.t_slot(j)
        while den[j - 1] > 0 and all(e[slot] > 0 for e in terms):
            # every monomial starts with t_j after the x's, so t_j^-1 cancels it
            new = {}
            for e, c in terms.items():
                g = list(e)
                g[slot] -= 1
                new[tuple(g)] = c
            terms = new
            den[j - 1] -= 1
    return LocalizedElement(OpElement(chart, terms), tuple(den), a.inverted)


def loc_multiply(a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
    if a.chart != b.chart:
        raise ValueError("operands live on different charts")
    # (t^-e A)(t^-f B) = t^-(e+f) (t^f A t^-f) B
    conj = _conjugate(a.chart, a.numerator.terms, b.denom)
    num = OpElement(a.chart, mul_terms(algebra(a.chart), conj, b.numerator.terms))
    den = tuple(x + y for x, y in zip(a.denom, b.denom))
    return loc_normal_form(LocalizedElement(num, den, a.inverted | b.inverted))


def loc_add(a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
    if a.chart != b.chart:
        raise ValueError("operands live on different charts")
    den = tuple(max(x, y) for x, y in zip(a.denom, b.denom))
    ra = _raise_denominator(a, den)
    rb = _raise_denominator(b, den)
    return loc_normal_form(LocalizedElement(ra + rb, den, a.inverted | b.inverted))


def _raise_denominator(a: LocalizedElement, den: tuple) -> OpElement:
    # t^-e A = t^-den (t^(den-e) A)
    diff = [0] * a.chart.nvars
    for j, (x, y) in enumerate(zip(den, a.denom), start=1):
        diff[a.chart.t_slot(j)] = x - y
    mono = OpElement(a.chart, {tuple(diff): 1})
    return mono * a.numerator
