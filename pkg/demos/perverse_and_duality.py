"""Perverse t-structure on log charts: membership, duality, truncation.

The fixture modules are placed in degrees 0 and 1 and tested against the
two halves of the t-structure.  Then:

* a holonomic module has a perverse dual, a non-holonomic one does not;
* perversity itself is not preserved by duality (C0[-1] against C0[0]);
* truncation splits the skyscraper off the structure sheaf, and the answer
  is checked against both membership tests.
"""

from logdmod.charvar import char_ideal, is_holonomic
from logdmod.duality import verdier_dual
from logdmod.frontend import parse_problem
from logdmod.ncgb import (cohomology, cohomology_is_zero, complex_from_module,
                          direct_sum_complex)
from logdmod.perverse import UNDETERMINED, check_ge0, check_le0, is_log_perverse, perverse_truncate

LOG_LINE = """
chart LL
module O rank 1
  row th1
module C0 rank 1
  row t1
  row th1
module DT rank 1
  row t1
"""

LOG_PLANE = """
chart LP
module F rank 1
  row t1 - t2
  row th1 + th2
"""


def mark(b):
    return "yes" if b else "no "


def membership(name, M):
    for deg in (0, 1):
        v = is_log_perverse(complex_from_module(M, deg))
        print(f"  {name + f'[{-deg}]':7} le0 {mark(v.le0)}  ge0 {mark(v.ge0)}  perverse {mark(v.perverse)}")


def main():
    line = parse_problem(LOG_LINE).modules
    plane = parse_problem(LOG_PLANE).modules

    print("membership (M[-d] means M placed in degree d)")
    for name, M in line.items():
        membership(name, M)
    membership("F", plane["F"])

    print("\nholonomic modules are exactly those with perverse dual")
    for name, M in list(line.items()) + [("F", plane["F"])]:
        dual = is_log_perverse(verdier_dual(M).complex)
        print(f"  {name:3} holonomic {mark(is_holonomic(M))}  dual perverse {mark(dual.perverse)}")

    C0 = line["C0"]
    shifted = is_log_perverse(complex_from_module(C0, 1)).perverse
    unshifted = is_log_perverse(complex_from_module(C0, 0)).perverse
    print(f"\nC0[-1] perverse: {shifted}; its dual C0[0] perverse: {unshifted}")

    # C0[0] satisfies le0 at level -1 but O[0] does not; truncation splits the sum
    print("\ntruncating O[0] + C0[0] at level -1")
    tr = perverse_truncate(direct_sum_complex(complex_from_module(line["O"], 0),
                                              complex_from_module(C0, 0)), -1)
    if tr == UNDETERMINED:
        print("  undetermined")
        return
    for label, part, ok in (("low ", tr[0], check_le0(tr[0], -1)),
                            ("high", tr[1], check_ge0(tr[1], 0))):
        chs = [f"Ch(H^{k}) = V({', '.join(sorted(char_ideal(cohomology(part, k)).formatted()))})"
               for k in part.degrees() if not cohomology_is_zero(part, k)]
        print(f"  {label} postcondition {mark(ok)}  {'; '.join(chs)}")

if __name__ == "__main__":
    main()
