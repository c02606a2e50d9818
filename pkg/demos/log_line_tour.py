"""A walk through three modules on the log line.

O   = D/D th       the structure sheaf
C0  = D/(t, th)    the skyscraper at the origin
DT  = D/D t        not holonomic: its characteristic variety is too big

Run with ``python demos/log_line_tour.py``.
"""

from logdmod.chart import StratumComponent
from logdmod.charvar import ch_report, restrict_to_stratum
from logdmod.duality import lowest_dual_degree, verdier_dual
from logdmod.frontend import parse_problem

PROBLEM = """
chart LL
module O rank 1
  row th1
module C0 rank 1
  row t1
  row th1
module DT rank 1
  row t1
"""


def rows_text(M):
    if not M.rows:
        return f"D^{M.rank} (free)"
    return f"D^{M.rank}/(" + "; ".join(", ".join(r) for r in M.formatted_rows()) + ")"


def main():
    pf = parse_problem(PROBLEM)
    chart = pf.chart
    print(f"chart {chart.describe()}: dim {chart.dim}, log dim {chart.logdim}\n")

    print("characteristic varieties")
    for name, M in pf.modules.items():
        r = ch_report(M)
        verdict = "holonomic" if r.holonomic else "not holonomic"
        print(f"  {name:3} Ch = V({', '.join(sorted(r.ideal.formatted()))})"
              f"  logdim {r.logdim}  {verdict}")

    # the dual of a holonomic module sits in a single degree
    print("\nVerdier duals")
    for name, M in pf.modules.items():
        D = verdier_dual(M)
        parts = []
        for k in D.nonzero_degrees():
            H = D.cohomology(k)
            parts.append(f"H^{k} = {rows_text(H)}")
        print(f"  {name:3} {', '.join(parts)}   lowest degree {lowest_dual_degree(M)}")

    # restriction to the origin t = 0
    origin = StratumComponent(chart, frozenset({1}))
    print(f"\nrestriction to the stratum {origin.label()}")
    for name, M in pf.modules.items():
        pieces = [f"H^{k} = {rows_text(H)}"
                  for k, H in restrict_to_stratum(M, origin)]
        print(f"  {name:3} {'; '.join(pieces) or 'zero'}")


if __name__ == "__main__":
    main()
