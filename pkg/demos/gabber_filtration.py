"""The Gabber filtration by log dimension.

G_i(M) is the largest submodule whose characteristic variety has log
dimension at most logdim X + i.  G_0 is the largest holonomic submodule.

Three cases:

* O + D/Dt on the log line, where G_0 is the copy of O;
* F = D/(t1 - t2, th1 + th2) on the log plane, which has no holonomic
  submodule, so G_0 = 0 and G_1 = F;
* the same module through truncations of its dual, which is undetermined
  because the log plane has depth two.
"""

from logdmod.charvar import char_ideal
from logdmod.frontend import parse_problem
from logdmod.perverse import (gabber_filtration, same_filtration, sato_kashiwara,
                              submodule_presentation)

PROBLEM_LINE = """
chart LL
module O rank 1
  row th1
module DT rank 1
  row t1
"""

PROBLEM_PLANE = """
chart LP
module F rank 1
  row t1 - t2
  row th1 + th2
"""


def show(M, report):
    print(f"  method {report.method}")
    for lv in report.levels:
        if not lv.generators:
            print(f"  G_{lv.level} = 0")
            continue
        G = submodule_presentation(M, lv.generators)
        ch = ", ".join(sorted(char_ideal(G).formatted()))
        print(f"  G_{lv.level}: {len(lv.generators)} generator(s), Ch = V({ch}), logdim {lv.logdim}")
    for d in report.diagnostics:
        print(f"  note: {d}")


def main():
    line = parse_problem(PROBLEM_LINE).modules
    M = line["O"].direct_sum(line["DT"])
    print("O + D/Dt on the log line")
    show(M, gabber_filtration(M))

    F = parse_problem(PROBLEM_PLANE).modules["F"]
    print("\nF on the log plane")
    direct = gabber_filtration(F)
    show(F, direct)

    print("\nF through truncations of the dual")
    dual_route = sato_kashiwara(F)
    show(F, dual_route)
    if dual_route.method != "undetermined":
        print(f"  agrees with the direct answer: {same_filtration(F, direct, dual_route)}")


if __name__ == "__main__":
    main()
