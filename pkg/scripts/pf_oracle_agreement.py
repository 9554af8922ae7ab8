"""Compare the combinatorial PF check with the subset-equation oracle on random polytopes."""

import argparse
import random
import time
from collections import Counter

from pfkit.pfp import check_pf, check_pf_oracle
from pfkit.polytope import from_points


def sample(rng, max_dim, max_vertices):
    n = rng.randint(2, max_dim)
    k = rng.randint(min(n + 2, max_vertices), max_vertices)
    pts = {tuple(rng.randint(-1, 1) for _ in range(n)) for _ in range(k)}
    p = from_points(sorted(pts), n)
    coords = sorted(rng.sample(range(n), rng.randint(1, max(1, n - 1))))
    return p, coords


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-dim", type=int, default=4)
    ap.add_argument("--max-vertices", type=int, default=10)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    start = time.perf_counter()
    for _ in range(args.count):
        p, coords = sample(rng, args.max_dim, args.max_vertices)
        fast, slow = check_pf(p, coords).holds, check_pf_oracle(p, coords)
        tally[(fast, slow)] += 1
    print(f"instances: {args.count}  seconds: {time.perf_counter() - start:.1f}")
    for (fast, slow), k in sorted(tally.items()):
        print(f"  check_pf={fast!s:<5} oracle={slow!s:<5} {k}")
    print("disagreements:", sum(k for (a, b), k in tally.items() if a != b))


if __name__ == "__main__":
    main()
