"""Affine idealized log charts.

A chart is X = A^n x Spec k[N^r]/<t_j : j in S>: classical coordinates
x_1..x_n, log coordinates t_1..t_r, and a set S of idealized log
directions on which t_j vanishes while the log derivation theta_j
survives.

Exponent tuples throughout the package use one fixed variable layout of
length 2(n + r):

    x_1..x_n, t_1..t_r, d_1..d_n, th_1..th_r

For the commutative cotangent ring the same slots hold
x, t, xi, tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable


@dataclass(frozen=True)
class Chart:
    n_free: int
    n_log: int
    idealized: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_free < 0 or self.n_log < 0:
            raise ValueError("coordinate counts must be nonnegative")
        s = frozenset(int(j) for j in self.idealized)
        if not all(1 <= j <= self.n_log for j in s):
            raise ValueError(f"idealized directions {sorted(s)} not within 1..{self.n_log}")
        object.__setattr__(self, "idealized", s)

    # dimensions
    @property
    def dim(self) -> int:
        return self.n_free + self.n_log - len(self.idealized)

    @property
    def logdim(self) -> int:
        return self.n_free + self.n_log

    @property
    def generic_rank(self) -> int:
        """r_X: rank of the log structure at a generic point."""
        return len(self.idealized)

    @property
    def free_log(self) -> tuple[int, ...]:
        """Non-idealized log directions, 1-based."""
        return tuple(j for j in range(1, self.n_log + 1) if j not in self.idealized)

    @property
    def depth(self) -> int:
        """Number of nontrivial stratification levels below the open one."""
        return len(self.free_log)

    # variable layout
    @property
    def nvars(self) -> int:
        return 2 * (self.n_free + self.n_log)

    def x_slot(self, i: int) -> int:
        return i - 1

    def t_slot(self, j: int) -> int:
        return self.n_free + j - 1

    def d_slot(self, i: int) -> int:
        return self.n_free + self.n_log + i - 1

    def th_slot(self, j: int) -> int:
        return 2 * self.n_free + self.n_log + j - 1

    def base_slots(self) -> tuple[int, ...]:
        return tuple(range(self.n_free + self.n_log))

    def fiber_slots(self) -> tuple[int, ...]:
        return tuple(range(self.n_free + self.n_log, self.nvars))

    def idealized_slots(self) -> tuple[int, ...]:
        return tuple(self.t_slot(j) for j in sorted(self.idealized))

    def operator_names(self) -> list[str]:
        n, r = self.n_free, self.n_log
        return ([f"x{i}" for i in range(1, n + 1)] + [f"t{j}" for j in range(1, r + 1)]
                + [f"d{i}" for i in range(1, n + 1)] + [f"th{j}" for j in range(1, r + 1)])

    def cotangent_names(self) -> list[str]:
        n, r = self.n_free, self.n_log
        return ([f"x{i}" for i in range(1, n + 1)] + [f"t{j}" for j in range(1, r + 1)]
                + [f"xi{i}" for i in range(1, n + 1)] + [f"tau{j}" for j in range(1, r + 1)])

    def with_idealized(self, extra: Iterable[int]) -> "Chart":
        return Chart(self.n_free, self.n_log, self.idealized | frozenset(extra))

    def describe(self) -> str:
        s = ",".join(str(j) for j in sorted(self.idealized))
        return f"n={self.n_free} r={self.n_log} S={{{s}}}"


@dataclass(frozen=True)
class StratumComponent:
    """Component of X^k where the log coordinates in ``vanishing`` are zero."""

    chart: Chart
    vanishing: frozenset

    def __post_init__(self):
        v = frozenset(int(j) for j in self.vanishing)
        if v & self.chart.idealized or not v <= set(range(1, self.chart.n_log + 1)):
            raise ValueError(f"vanishing set {sorted(v)} must avoid idealized directions")
        object.__setattr__(self, "vanishing", v)

    @property
    def codim(self) -> int:
        return len(self.vanishing)

    def as_chart(self) -> Chart:
        return self.chart.with_idealized(self.vanishing)

    def label(self) -> str:
        return "{" + ",".join(f"t{j}" for j in sorted(self.vanishing)) + "}"


def logdim_chart(c: Chart) -> int:
    return c.logdim


def strata_components(c: Chart, k: int) -> list[StratumComponent]:
    """Components of X^k, listed in lexicographic order of vanishing sets.

    For k <= 0 this is the single component X itself.
    """
    if k < 0:
        k = 0
    return [StratumComponent(c, frozenset(T)) for T in combinations(c.free_log, k)]


def stratum_ideal_monomials(c: Chart, k: int) -> list[tuple]:
    """Squarefree monomials (cotangent exponents) generating the ideal of X^k.

    X^k is the locus where at least k of the free log coordinates vanish,
    cut out by all products of depth - k + 1 distinct free t's.  For k <= 0
    X^k is all of X (no generators); for k > depth it is empty (the unit ideal).
    """
    if k <= 0:
        return []
    free = c.free_log
    size = len(free) - k + 1
    if size <= 0:
        return [(0,) * c.nvars]
    out = []
    for U in combinations(free, size):
        e = [0] * c.nvars
        for j in U:
            e[c.t_slot(j)] = 1
        out.append(tuple(e))
    return out


def logdim_subvariety(c: Chart, J) -> int | None:
    """Log dimension of V(J) in the log cotangent space; ``None`` if empty.

    ``J`` is a list of cotangent polynomials or a ``CommIdeal``.  The value is
    max over k and components T of X^k of dim(V(J) restricted to T) + k,
    plus the generic rank r_X.
    """
    from .comalg import CommIdeal, krull_dim

    gens = J.gens if isinstance(J, CommIdeal) else list(J)
    for p in gens:
        if any(len(e) != c.nvars for e in p):
            raise ValueError("polynomial is not over this chart's cotangent coordinates")
    if isinstance(J, CommIdeal) and J.chart.nvars != c.nvars:
        raise ValueError("ideal belongs to a chart with a different variable set")
    best = None
    for k in range(c.depth + 1):
        for comp in strata_components(c, k):
            extra = []
            for j in comp.vanishing:
                e = [0] * c.nvars
                e[c.t_slot(j)] = 1
                extra.append({tuple(e): 1})
            d = krull_dim(CommIdeal(c, list(gens) + extra))
            if d is None:
                continue
            val = d + k
            if best is None or val > best:
                best = val
    return None if best is None else best + c.generic_rank
