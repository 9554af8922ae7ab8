"""Check the stable-set path condition against the PF check over small graphs."""

import argparse
import itertools
import time

import networkx as nx

from pfkit.models import Graph, is_clique, stab_pf_condition, stable_set_polytope
from pfkit.pfp import check_pf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=6, help="at most 7 (the atlas limit)")
    ap.add_argument("--max-subset", type=int, default=4)
    args = ap.parse_args()
    start = time.perf_counter()
    checked = holds = cliques = mismatches = 0
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if not 1 <= k <= args.max_vertices:
            continue
        g = Graph.from_edges(k, h.edges())
        p = stable_set_polytope(g)
        for r in range(1, min(args.max_subset, k) + 1):
            for vs in itertools.combinations(range(k), r):
                verdict = check_pf(p, vs).holds
                checked += 1
                holds += verdict
                cliques += is_clique(g, vs)
                if verdict != stab_pf_condition(g, vs):
                    mismatches += 1
                    print("mismatch:", sorted(h.edges()), vs)
    print(f"pairs: {checked}  PF holds: {holds}  cliques: {cliques}  mismatches: {mismatches}")
    print(f"seconds: {time.perf_counter() - start:.1f}")


if __name__ == "__main__":
    main()
