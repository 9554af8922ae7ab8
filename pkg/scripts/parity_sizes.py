"""Tabulate parity polytope facets against extension sizes."""

import argparse
import time

from pfkit.models import odd_set_hrep, parity_chain, parity_ef, parity_polytope
from pfkit.polytope import equal, project


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()
    print(f"{'n':>2} {'facets':>7} {'odd-set rows':>13} {'ext size':>9} {'chain size':>11} {'equal':>6} {'sec':>6}")
    for n in range(2, args.max_n + 1):
        start = time.perf_counter()
        p = parity_polytope(n)
        ef = parity_ef(n)
        ch = parity_chain(n, verify=False)
        same = equal(project(ef.polytope, ef.proj_coords), p)
        print(
            f"{n:>2} {p.n_facets:>7} {len(odd_set_hrep(n).inequalities):>13} {ef.size:>9}"
            f" {len(ch.polytope.system.inequalities):>11} {str(same):>6} {time.perf_counter() - start:>6.2f}"
        )


if __name__ == "__main__":
    main()
