"""Seeded instance generators shared by the property and acceptance suites."""

from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction

from pfkit.compose import CompositionInput, Split
from pfkit.exactla import affine_rank
from pfkit.pfp import check_pf
from pfkit.polytope import Polytope, from_points


def random_polytope(rng: random.Random, max_dim: int = 4, max_vertices: int = 10) -> Polytope:
    n = rng.randint(1, max_dim) if rng.random() < 0.2 else rng.randint(2, max_dim)
    lo, hi = rng.choice([(0, 1), (0, 2), (-1, 1)])
    k = rng.randint(min(n + 2, max_vertices), max_vertices)
    pts = {tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(k)}
    return from_points(sorted(pts), n)


def random_coords(rng: random.Random, n: int) -> list[int]:
    k = rng.randint(1, max(1, n - 1))
    return sorted(rng.sample(range(n), k))


def simplex_alphas(rng: random.Random, n1: int) -> list[tuple[int, ...]]:
    """An affinely independent set of 0/1 points in R^n1, in random order."""
    cube = list(itertools.product((0, 1), repeat=n1))
    rng.shuffle(cube)
    chosen: list[tuple[int, ...]] = []
    want = rng.randint(1, n1 + 1)
    for p in cube:
        if len(chosen) == want:
            break
        if affine_rank(chosen + [p]) == len(chosen):
            chosen.append(p)
    return chosen


def random_simplex_projection_polytope(rng: random.Random, n1: int, d1: int) -> Polytope:
    """0/1 polytope whose projection onto the first n1 coordinates is a simplex.

    Such pairs always have the projected-faces property: every vertex maps to
    a vertex and every vertex subset of a simplex spans a face.
    """
    pts = set()
    for a in simplex_alphas(rng, n1):
        for _ in range(rng.randint(1, 3)):
            pts.add(a + tuple(rng.randint(0, 1) for _ in range(d1)))
    return from_points(sorted(pts), n1 + d1)


def random_composition(rng: random.Random) -> CompositionInput:
    n1, n2, n = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
    d1, d2 = rng.randint(0, 3), rng.randint(0, 3)
    p1 = random_simplex_projection_polytope(rng, n1, d1)
    p2 = random_simplex_projection_polytope(rng, n2, d2)
    va = sorted({v[:n1] for v in p1.vertices})
    vb = sorted({v[:n2] for v in p2.vertices})
    pairs = list(itertools.product(va, vb))
    keep = rng.sample(pairs, rng.randint(1, len(pairs)))
    f = {(a, b): tuple(Fraction(rng.randint(0, 2)) for _ in range(n)) for a, b in keep}
    return CompositionInput(p1, p2, Split(n1, d1, n2, d2, n), f)


@functools.lru_cache(maxsize=None)
def pf_oracle_instances(count: int = 520, seed: int = 20240601):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = random_polytope(rng)
        coords = random_coords(rng, p.ambient_dim)
        out.append((p, coords))
    return out


@functools.lru_cache(maxsize=None)
def pf_holding_instances(count: int = 220, seed: int = 7):
    """Pairs with the property: simplex-projection polytopes and filtered random ones."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if rng.random() < 0.5:
            n1, d1 = rng.randint(1, 2), rng.randint(0, 2)
            out.append((random_simplex_projection_polytope(rng, n1, d1), list(range(n1))))
            continue
        p = random_polytope(rng, max_dim=3, max_vertices=7)
        coords = random_coords(rng, p.ambient_dim)
        if check_pf(p, coords).holds:
            out.append((p, coords))
    return out
