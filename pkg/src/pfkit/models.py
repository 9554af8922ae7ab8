"""Concrete polytopes: parity, stable sets, tours, and small fixtures."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .compose import ChainResult, ChainState, CompositionInput, Split, Step, chain, move_to_front, q_blocks
from .config import CapExceeded, get_caps
from .exactla import affine_rank
from .polytope import HRep, Polytope, from_points, make_polytope, project, with_system


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {e} out of range")
            key = (min(u, v), max(u, v))
            if key in norm:
                raise ValueError(f"duplicate edge {key}")
            norm.add(key)
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(vertex_count, tuple(tuple(e) for e in edges))

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        """Edges in sorted order; this is the coordinate order of edge polytopes."""
        return sorted(self.edges)

    def neighbors(self) -> list[set[int]]:
        adj = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        adj = self.neighbors()
        seen = {0}
        todo = [0]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.vertex_count


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, itertools.combinations(range(k), 2))


def cycle_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def prism_graph() -> Graph:
    """Two triangles 0-1-2 and 3-4-5 joined by the matching i -- i+3."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


def parse_graph(text: str) -> Graph:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] != "vertices" or len(lines[0]) != 2:
        raise ValueError("graph file must start with 'vertices <k>'")
    k = int(lines[0][1])
    edges = []
    for ln in lines[1:]:
        if len(ln) != 2:
            raise ValueError(f"bad edge line {' '.join(ln)!r}")
        edges.append((int(ln[0]), int(ln[1])))
    return Graph.from_edges(k, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(g: Graph) -> str:
    return "\n".join([f"vertices {g.vertex_count}"] + [f"{u} {v}" for u, v in g.edge_list]) + "\n"


# ---------------------------------------------------------------------------
# parity


def even_points(n: int) -> list[tuple[int, ...]]:
    return [p for p in itertools.product((0, 1), repeat=n) if sum(p) % 2 == 0]


def _cap(value: int, limit: int, what: str):
    if value > limit:
        raise CapExceeded(f"{what} {value} exceeds cap {limit}")


def parity_polytope(n: int) -> Polytope:
    """Convex hull of the 0/1 points of R^n with an even number of ones."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _cap(n, get_caps().parity_n, "parity dimension")
    return from_points(even_points(n), n)


def odd_set_hrep(n: int) -> HRep:
    """Odd-set inequalities plus the unit bounds.

    For odd ``S``: ``sum_{i in S} x_i - sum_{i not in S} x_i <= |S| - 1``.
    """
    rows = []
    for r in range(1, n + 1, 2):
        for s in itertools.combinations(range(n), r):
            a = tuple(Fraction(1 if i in s else -1) for i in range(n))
            rows.append((a, Fraction(r - 1)))
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        rows.append((e, Fraction(1)))
        rows.append((tuple(-x for x in e), Fraction(0)))
    return HRep(tuple(rows), (), n)


def pstar() -> Polytope:
    """The relation x - y1 - y2 <= 0, x + y1 + y2 <= 2, y1 - y2 - x <= 0, y2 - y1 - x <= 0."""
    rows = [((1, -1, -1), 0), ((1, 1, 1), 2), ((-1, 1, -1), 0), ((-1, -1, 1), 0)]
    return make_polytope(HRep(tuple(rows), (), 3))


def simplex_t() -> Polytope:
    return from_points([(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)], 3)


@dataclass(frozen=True)
class ExtendedFormulation:
    polytope: Polytope
    proj_coords: list[int]

    @property
    def size(self) -> int:
        return len(self.polytope.system.inequalities)

    @property
    def system(self) -> HRep:
        return self.polytope.system


def parity_ef(n: int) -> ExtendedFormulation:
    """Extension of the n-dimensional parity polytope with 4(n-1) inequalities.

    Start from the point ``{0}`` in R^1.  Each step takes one output
    coordinate ``x``, adds two fresh coordinates ``(a, b)`` related to ``x``
    by the four ``pstar`` inequalities, and replaces ``x`` by ``a, b`` among
    the outputs.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    _cap(n, get_caps().parity_ef_n, "parity extension dimension")
    total = 1 + 2 * (n - 1)
    zero = [Fraction(0)] * total
    eqs = [(tuple(Fraction(int(j == 0)) for j in range(total)), Fraction(0))]
    ineqs = []
    outputs = [0]
    nxt = 1
    star = pstar().system.inequalities
    for _ in range(n - 1):
        x, a, b = outputs[0], nxt, nxt + 1
        nxt += 2
        for coef, rhs in star:
            row = list(zero)
            row[x], row[a], row[b] = coef
            ineqs.append((tuple(row), rhs))
        outputs = [a, b] + outputs[1:]
    p = make_polytope(HRep(tuple(ineqs), tuple(eqs), total))
    return ExtendedFormulation(p, sorted(outputs))


def parity_step(prev: ChainState | None) -> Step:
    """Glue one copy of ``simplex_t`` onto an output coordinate of ``prev``."""
    if prev is None:
        prev = ChainState(parity_polytope(1), [0])
    head, rest = prev.outputs[0], prev.outputs[1:]
    p1, moved = move_to_front(prev.polytope, [head], rest)
    t = simplex_t()
    alphas = project(p1, [0]).vertices
    f = {(a, a): a for a in alphas}
    split = Split(n1=1, d1=p1.ambient_dim - 1, n2=1, d2=2, n=1)
    blocks = q_blocks(split)
    # x-block coordinate i of Q holds coordinate i + 1 of p1
    outputs = [blocks.x[c - 1] for c in moved] + blocks.y
    return Step(CompositionInput(p1, t, split, f), outputs)


def parity_chain(n: int, verify: bool = True) -> ChainResult:
    """Extension of the parity polytope by repeated gluing of ``simplex_t``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    _cap(n, get_caps().parity_ef_n, "parity extension dimension")
    return chain([parity_step] * (n - 1), verify=verify)


# ---------------------------------------------------------------------------
# stable sets


def stable_sets(g: Graph) -> list[tuple[int, ...]]:
    """Incidence vectors of all independent sets, by backtracking."""
    adj = g.neighbors()
    out = []
    chosen = [0] * g.vertex_count

    def extend(i: int):
        if i == g.vertex_count:
            out.append(tuple(chosen))
            return
        extend(i + 1)
        if not any(chosen[j] for j in adj[i] if j < i):
            chosen[i] = 1
            extend(i + 1)
            chosen[i] = 0

    extend(0)
    return out


def stable_set_polytope(g: Graph) -> Polytope:
    if g.vertex_count < 1:
        raise ValueError("graph has no vertices")
    _cap(g.vertex_count, get_caps().stab_vertices, "graph size")
    return from_points(stable_sets(g), g.vertex_count)


def stab_pf_condition(g: Graph, vprime: Iterable[int]) -> bool:
    """Whether every two vertices of ``vprime`` joined by a path through the rest are adjacent."""
    vprime = sorted(set(vprime))
    if not vprime:
        raise ValueError("vprime must be nonempty")
    inside = set(vprime)
    adj = g.neighbors()
    for s in vprime:
        # vertices of vprime reachable from s with every inner vertex outside vprime
        reached = set()
        seen = {s}
        todo = deque([s])
        while todo:
            u = todo.popleft()
            for w in adj[u]:
                if w in inside:
                    reached.add(w)
                elif w not in seen:
                    seen.add(w)
                    todo.append(w)
        if any(t != s and not g.adjacent(s, t) for t in reached):
            return False
    return True


def is_clique(g: Graph, vs: Iterable[int]) -> bool:
    return all(g.adjacent(u, v) for u, v in itertools.combinations(sorted(vs), 2))


def induced(g: Graph, vs: Sequence[int]) -> Graph:
    """Subgraph induced on ``vs``, relabelled to 0..len(vs)-1 in the given order."""
    where = {v: i for i, v in enumerate(vs)}
    return Graph.from_edges(len(vs), [(where[u], where[v]) for u, v in g.edges if u in where and v in where])


@dataclass(frozen=True)
class GluedInstance:
    """A composition input plus the coordinates of the original object in the target."""

    input: CompositionInput
    target_order: list[int]


def stable_set_cutset_input(g: Graph, cutset: Sequence[int], side: Sequence[int]) -> GluedInstance:
    """Split ``g`` along a vertex cutset ``U``; ``side`` is the vertex set on one side.

    The first factor is the stable set polytope of ``G[U + side]`` and the
    second that of ``G[U + other]``, each with the ``U`` coordinates first.
    ``target_order[i]`` is the graph vertex held by target coordinate ``i``.
    """
    u = list(cutset)
    s1 = list(side)
    s2 = [v for v in range(g.vertex_count) if v not in set(u) | set(s1)]
    if any(g.adjacent(a, b) for a in s1 for b in s2):
        raise ValueError("U does not separate the two sides")
    p1 = stable_set_polytope(induced(g, u + s1))
    p2 = stable_set_polytope(induced(g, u + s2))
    k = len(u)
    va = project(p1, range(k)).vertices
    vb = set(project(p2, range(k)).vertices)
    f = {(a, a): a for a in va if a in vb}
    split = Split(n1=k, d1=len(s1), n2=k, d2=len(s2), n=k)
    return GluedInstance(CompositionInput(p1, p2, split, f), u + s1 + s2)


# ---------------------------------------------------------------------------
# tours


def _tours(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Edge-incidence vectors of Hamiltonian cycles of a multigraph.

    With two vertices a tour is a pair of distinct parallel edges.
    """
    m = len(edges)
    if n < 2:
        return []
    if n == 2:
        par = [i for i, (u, v) in enumerate(edges) if {u, v} == {0, 1}]
        return sorted(tuple(int(i in pair) for i in range(m)) for pair in itertools.combinations(par, 2))
    incident: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(edges):
        if u != v:
            incident.setdefault((min(u, v), max(u, v)), []).append(i)
    adj = [set() for _ in range(n)]
    for u, v in incident:
        adj[u].add(v)
        adj[v].add(u)
    out = set()
    path = [0]
    used = [False] * n
    used[0] = True

    def emit():
        hops = list(zip(path, path[1:] + [0]))
        for pick in itertools.product(*(incident[(min(u, v), max(u, v))] for u, v in hops)):
            vec = [0] * m
            for i in pick:
                vec[i] = 1
            out.add(tuple(vec))

    def extend():
        last = path[-1]
        if len(path) == n:
            if 0 in adj[last]:
                # each cycle is found in both directions; keep the one with path[1] < path[-1]
                if path[1] < path[-1]:
                    emit()
            return
        for w in sorted(adj[last]):
            if not used[w]:
                used[w] = True
                path.append(w)
                extend()
                path.pop()
                used[w] = False

    extend()
    return sorted(out)


def tsp_polytope(g: Graph) -> Polytope:
    """Convex hull of tour incidence vectors; coordinates follow ``g.edge_list``."""
    _cap(g.vertex_count, get_caps().tsp_vertices, "graph size")
    if not g.is_connected():
        raise ValueError("graph is not connected")
    pts = _tours(g.vertex_count, g.edge_list)
    if not pts:
        raise ValueError("empty TSP polytope")
    return from_points(pts, len(g.edges))


def cut_side(g: Graph, cut_edges: Iterable[Sequence[int]]) -> list[int]:
    """A vertex set ``S`` containing vertex 0 whose edge boundary is exactly ``cut_edges``."""
    cut = {(min(u, v), max(u, v)) for u, v in cut_edges}
    if not cut or not cut <= g.edges:
        raise ValueError("cut edges must be a nonempty subset of the edges")
    rest = Graph(g.vertex_count, g.edges - cut)
    adj = rest.neighbors()
    comp = [-1] * g.vertex_count
    k = 0
    for s in range(g.vertex_count):
        if comp[s] >= 0:
            continue
        comp[s] = k
        todo = [s]
        while todo:
            for w in adj[todo.pop()]:
                if comp[w] < 0:
                    comp[w] = k
                    todo.append(w)
        k += 1
    for r in range(0, k - 1):
        for others in itertools.combinations(range(1, k), r):
            side = {0, *others}
            s = [v for v in range(g.vertex_count) if comp[v] in side]
            boundary = {e for e in g.edges if (e[0] in s) != (e[1] in s)}
            if boundary == cut:
                return s
    raise ValueError("not an edge cutset")


def edge_cutsets(g: Graph, max_size: int = 3) -> list[list[tuple[int, int]]]:
    out = []
    for r in range(1, max_size + 1):
        for cut in itertools.combinations(g.edge_list, r):
            try:
                cut_side(g, cut)
            except ValueError:
                continue
            out.append(list(cut))
    return out


def tsp_cutset_projection_is_simplex(g: Graph, cut_edges: Iterable[Sequence[int]]) -> bool:
    cut = sorted((min(u, v), max(u, v)) for u, v in cut_edges)
    if len(cut) > 3:
        raise ValueError("at most three cut edges are supported")
    cut_side(g, cut)
    edges = g.edge_list
    proj = project(tsp_polytope(g), [edges.index(e) for e in cut])
    return affine_rank(proj.vertices) == proj.n_vertices - 1


def _contract(g: Graph, keep: Sequence[int], cut: Sequence[tuple[int, int]]):
    """Contract everything outside ``keep`` to one vertex; cut edges come first."""
    where = {v: i for i, v in enumerate(keep)}
    w = len(keep)
    edges = [(where[u], w) if u in where else (where[v], w) for u, v in cut]
    inner = [e for e in g.edge_list if e[0] in where and e[1] in where]
    edges += [(where[u], where[v]) for u, v in inner]
    return w + 1, edges, inner


def tsp_cutset_input(g: Graph, cut_edges: Iterable[Sequence[int]]) -> GluedInstance:
    """Split the tour polytope of ``g`` along an edge cutset of at most three edges.

    Each side keeps its own vertices and sees the other side as a single
    vertex; the cut edge coordinates come first in both factors.
    ``target_order[i]`` is the index in ``g.edge_list`` of target coordinate ``i``.
    """
    cut = sorted((min(u, v), max(u, v)) for u, v in cut_edges)
    if len(cut) > 3:
        raise ValueError("at most three cut edges are supported")
    _cap(g.vertex_count, get_caps().tsp_vertices, "graph size")
    s1 = cut_side(g, cut)
    s2 = [v for v in range(g.vertex_count) if v not in s1]
    factors = []
    for side in (s1, s2):
        n, edges, inner = _contract(g, side, cut)
        pts = _tours(n, edges)
        if not pts:
            raise ValueError("empty TSP polytope")
        factors.append((from_points(pts, len(edges)), inner))
    (p1, inner1), (p2, inner2) = factors
    k = len(cut)
    va = project(p1, range(k)).vertices
    vb = set(project(p2, range(k)).vertices)
    f = {(a, a): a for a in va if a in vb}
    split = Split(n1=k, d1=len(inner1), n2=k, d2=len(inner2), n=k)
    order = g.edge_list
    target = [order.index(e) for e in cut + inner1 + inner2]
    return GluedInstance(CompositionInput(p1, p2, split, f), target)


def reorder_target(p: Polytope, target_order: Sequence[int]) -> Polytope:
    """Move target coordinates back to the original object's coordinate order."""
    where = {orig: i for i, orig in enumerate(target_order)}
    return from_points([tuple(v[where[j]] for j in range(len(target_order))) for v in p.vertices], p.ambient_dim)


# ---------------------------------------------------------------------------
# fixtures


def hypercube(n: int) -> Polytope:
    return from_points(itertools.product((0, 1), repeat=n), n)


def standard_simplex(n: int) -> Polytope:
    """conv{0, e_1, ..., e_n}."""
    pts = [tuple(0 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return from_points(pts, n)


def square_pyramid() -> Polytope:
    return from_points([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1)], 3)


def prism(base: Polytope | None = None) -> Polytope:
    """``base`` times the unit segment; the default base is a triangle."""
    if base is None:
        base = standard_simplex(2)
    return from_points([v + (Fraction(h),) for v in base.vertices for h in (0, 1)], base.ambient_dim + 1)


def parity_system_polytope(n: int) -> Polytope:
    """The parity polytope recorded as built from the odd-set system."""
    return with_system(parity_polytope(n), odd_set_hrep(n))

