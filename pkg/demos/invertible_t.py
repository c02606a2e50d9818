"""When the log coordinate acts invertibly.

On the log line take N = D/D(t*th - 1).  Since t*th acts as 1, t is
invertible on N and N = tN.  The derived restriction to the origin is
therefore zero, yet Ch(N) = V(t*tau) contains the whole fiber over t = 0.
So the characteristic variety of the restriction can be strictly smaller
than the restricted characteristic variety.

The same effect shows up in the t-structure.  For M = D/D(3t*th + 1) the
truncation produced by the tilt fails the membership tests, and the engine
reports it as undetermined rather than returning a wrong answer.
"""

from logdmod.chart import StratumComponent
from logdmod.charvar import char_ideal, restrict_to_stratum
from logdmod.frontend import parse_problem
from logdmod.ncgb import complex_from_module, is_zero_module
from logdmod.perverse import UNDETERMINED, gabber_filtration, is_log_perverse, perverse_truncate
from logdmod.selftest import check_restriction, check_restriction_inclusion

PROBLEM = """
chart LL
module N rank 1
  row t1*th1 - 1
module M rank 1
  row 3*t1*th1 + 1
"""


def main():
    mods = parse_problem(PROBLEM).modules
    N, M = mods["N"], mods["M"]
    origin = StratumComponent(N.chart, frozenset({1}))

    print(f"Ch(N) = V({', '.join(char_ideal(N).formatted())})")
    pieces = restrict_to_stratum(N, origin)
    nonzero = [k for k, H in pieces if not is_zero_module(H)]
    print(f"restriction of N to t = 0: nonzero in degrees {nonzero or 'none'}")
    print(f"inclusion Ch(H^j) in Ch(N)|t=0 holds: {check_restriction_inclusion(N, origin)}")
    print(f"equality in degree 0 holds: {check_restriction(N, origin)}")

    print(f"\nCh(M) = V({', '.join(char_ideal(M).formatted())})")
    for n in (-1, 0):
        tr = perverse_truncate(complex_from_module(M, 0), n)
        print(f"truncation of M[0] at level {n}: {'undetermined' if tr == UNDETERMINED else 'ok'}")
    print(f"M[0] perverse: {is_log_perverse(complex_from_module(M, 0)).perverse}")
    r = gabber_filtration(M)
    print(f"Gabber filtration of M: method {r.method}")
    for d in r.diagnostics:
        print(f"  note: {d}")


if __name__ == "__main__":
    main()
