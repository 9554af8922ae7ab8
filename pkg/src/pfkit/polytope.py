"""Bounded polytopes in paired H/V form over the rationals.

Vertex enumeration and facet enumeration both run the double description
method on a homogenized cone with integer arithmetic.  Every public
constructor returns canonical representations, so two polytopes are equal
exactly when their sorted vertex lists are.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import CapExceeded, get_caps
from .exactla import (
    AffineSubspace,
    QVector,
    affine_hull,
    affine_rank,
    dot,
    integer_row,
    primitive,
    vector,
)

Row = tuple[QVector, Fraction]


class UnboundedError(ValueError):
    pass


class EmptyPolytopeError(ValueError):
    pass


def _rows(rows: Iterable, n: int) -> tuple[Row, ...]:
    out = []
    for a, b in rows:
        a = vector(a)
        if len(a) != n:
            raise ValueError(f"row has length {len(a)}, expected {n}")
        out.append((a, Fraction(b)))
    return tuple(out)


@dataclass(frozen=True)
class HRep:
    """``{z : a.z <= b for (a, b) in inequalities, a.z == b for (a, b) in equations}``."""

    inequalities: tuple[Row, ...]
    equations: tuple[Row, ...]
    ambient_dim: int

    def __post_init__(self):
        object.__setattr__(self, "inequalities", _rows(self.inequalities, self.ambient_dim))
        object.__setattr__(self, "equations", _rows(self.equations, self.ambient_dim))

    def extend(self, inequalities=(), equations=()) -> "HRep":
        return HRep(self.inequalities + tuple(inequalities), self.equations + tuple(equations), self.ambient_dim)

    def contains(self, z: Sequence) -> bool:
        return all(dot(a, z) == b for a, b in self.equations) and all(
            dot(a, z) <= b for a, b in self.inequalities
        )


@dataclass(frozen=True)
class VRep:
    points: tuple[QVector, ...]
    ambient_dim: int

    def __post_init__(self):
        pts = tuple(vector(p) for p in self.points)
        if any(len(p) != self.ambient_dim for p in pts):
            raise ValueError("point has the wrong dimension")
        object.__setattr__(self, "points", pts)


def canonical_row(a: Sequence[Fraction], b: Fraction, equation: bool = False) -> Row | None:
    """Scale a row so its first nonzero coefficient is +-1 (+1 for equations).

    Returns None for an all-zero normal.
    """
    lead = next((x for x in a if x != 0), None)
    if lead is None:
        return None
    s = 1 / abs(lead)
    if equation and lead < 0:
        s = -s
    return tuple(x * s for x in a), b * s


def _reduce_row(a: Sequence[Fraction], b: Fraction, aff: AffineSubspace) -> Row:
    """Representative of ``a.z <= b`` with zeros on the pivot columns of ``aff``."""
    a = list(a)
    for (e, e0), c in zip(aff.equations, aff.pivot_cols):
        f = a[c]
        if f:
            a = [x - f * y for x, y in zip(a, e)]
            b = b - f * e0
    return tuple(a), b


# ---------------------------------------------------------------------------
# double description on a cone {r : c . r >= 0 for every constraint c}


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _dd_cone(constraints: Sequence[tuple[int, ...]], dim: int, cap: int):
    """Extreme rays and lineality basis of an integer cone.

    Returns ``(rays, lineality)`` where ``rays`` is a list of
    ``(vector, tight_mask)`` pairs; bit ``i`` of ``tight_mask`` is set when
    the ray satisfies constraint ``i`` with equality.
    """
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[tuple[int, ...], int]] = []
    seen_mask = 0
    for idx, c in enumerate(constraints):
        bit = 1 << idx
        lvals = [_idot(c, l) for l in lin]
        piv = next((j for j, v in enumerate(lvals) if v), None)
        if piv is not None:
            l0, v0 = lin[piv], lvals[piv]
            if v0 < 0:
                l0, v0 = tuple(-x for x in l0), -v0
            new_lin = []
            for j, l in enumerate(lin):
                if j == piv:
                    continue
                if lvals[j]:
                    l = primitive([v0 * x - lvals[j] * y for x, y in zip(l, l0)])
                new_lin.append(l)
            new_rays = []
            for r, z in rays:
                vr = _idot(c, r)
                if vr:
                    r = primitive([v0 * x - vr * y for x, y in zip(r, l0)])
                new_rays.append((r, z | bit))
            new_rays.append((l0, seen_mask))
            lin, rays = new_lin, new_rays
            seen_mask |= bit
            continue

        vals = [_idot(c, r) for r, _ in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new_rays = [rays[i] for i in pos]
        new_rays += [(rays[i][0], rays[i][1] | bit) for i, v in enumerate(vals) if v == 0]
        if neg:
            need = dim - len(lin) - 2
            masks = [z for _, z in rays]
            for i in pos:
                ri, zi = rays[i]
                vi = vals[i]
                for j in neg:
                    zz = zi & masks[j]
                    if zz.bit_count() < need:
                        continue
                    hits = 0
                    for zk in masks:
                        if zk & zz == zz:
                            hits += 1
                            if hits > 2:
                                break
                    if hits > 2:
                        continue
                    rj = rays[j][0]
                    vj = vals[j]
                    r = primitive([vi * x - vj * y for x, y in zip(rj, ri)])
                    new_rays.append((r, zz | bit))
                    if len(new_rays) > cap:
                        raise CapExceeded(f"double description exceeded {cap} rays")
        rays = new_rays
        seen_mask |= bit
        if len(rays) > cap:
            raise CapExceeded(f"double description exceeded {cap} rays")
    return rays, lin


# ---------------------------------------------------------------------------
# conversions


def dd(h: HRep, cap: int | None = None) -> VRep:
    """Vertices of the polytope described by ``h`` (double description)."""
    cap = get_caps().rays if cap is None else cap
    n = h.ambient_dim
    try:
        aff = AffineSubspace.from_equations(h.equations, n)
    except ValueError:
        return VRep((), n)
    free = aff.free_cols
    piv = aff.pivot_cols
    # z = z0 + N t with t = z[free]
    constraints = set()
    for a, b in h.inequalities:
        a, b = _reduce_row(a, b, aff)
        coef = [a[f] for f in free]
        row = integer_row([b] + [-x for x in coef])
        if any(row[1:]):
            constraints.add(row)
        elif row[0] < 0:
            return VRep((), n)
    k = len(free)
    cons = [(1,) + (0,) * k] + sorted(constraints)
    rays, lin = _dd_cone(cons, k + 1, cap)
    finite = [r for r, _ in rays if r[0] > 0]
    if not finite:
        return VRep((), n)
    if lin or len(finite) < len(rays):
        raise UnboundedError("unbounded")
    points = set()
    for r in finite:
        t = [Fraction(x, r[0]) for x in r[1:]]
        z = [Fraction(0)] * n
        for f, tf in zip(free, t):
            z[f] = tf
        for (e, e0), c in zip(aff.equations, piv):
            z[c] = e0 - sum(e[f] * tf for f, tf in zip(free, t))
        points.add(tuple(z))
    return VRep(tuple(sorted(points)), n)


def _hull(points: Sequence[QVector], n: int, cap: int):
    """Facets of conv(points) plus the indices of the extreme points.

    ``points`` must be sorted and duplicate free.
    """
    aff = affine_hull(points)
    free = aff.free_cols
    k = len(free)
    if k == 0:
        return HRep((), aff.equations, n), [0]
    cons = [integer_row([1] + [-p[f] for f in free]) for p in points]
    rays, lin = _dd_cone(cons, k + 1, cap)
    if lin:
        raise AssertionError("valid-inequality cone of a full-dimensional polytope has lineality")
    ineqs = []
    masks = []
    for r, z in rays:
        a = [Fraction(0)] * n
        for f, x in zip(free, r[1:]):
            a[f] = Fraction(x)
        row = canonical_row(a, Fraction(r[0]))
        if row is None:
            continue
        ineqs.append(row)
        masks.append(z)
    full = (1 << len(points)) - 1
    extreme = []
    for i in range(len(points)):
        bit = 1 << i
        m = full
        for z in masks:
            if z & bit:
                m &= z
        if m == bit:
            extreme.append(i)
    order = sorted(range(len(ineqs)), key=lambda j: ineqs[j])
    return HRep(tuple(ineqs[j] for j in order), aff.equations, n), extreme


def hull(v: VRep, cap: int | None = None) -> HRep:
    """Canonical irredundant H-representation of conv(v.points)."""
    if not v.points:
        raise ValueError("empty point set")
    cap = get_caps().rays if cap is None else cap
    pts = sorted(set(v.points))
    return _hull(pts, v.ambient_dim, cap)[0]


def canonicalize_h(h: HRep) -> HRep:
    """Canonical form of ``h`` obtained through the vertex round trip."""
    return make_polytope(h).hrep


def canonicalize_v(v: VRep) -> VRep:
    return make_polytope(v).vrep


# ---------------------------------------------------------------------------
# polytopes and faces


@dataclass(frozen=True, eq=False)
class Polytope:
    """A nonempty bounded polytope with both representations.

    ``incidence[i][j]`` is True when vertex ``i`` lies on facet ``j``.
    ``system`` is the linear system the polytope was built from; it is the
    canonical H-representation unless the polytope came from an explicit
    (possibly redundant) system, and is what formulation sizes count.
    """

    hrep: HRep
    vrep: VRep
    incidence: tuple[tuple[bool, ...], ...]
    dim: int
    system: HRep = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.hrep.ambient_dim

    @property
    def vertices(self) -> tuple[QVector, ...]:
        return self.vrep.points

    @property
    def facets(self) -> tuple[Row, ...]:
        return self.hrep.inequalities

    @property
    def n_vertices(self) -> int:
        return len(self.vrep.points)

    @property
    def n_facets(self) -> int:
        return len(self.hrep.inequalities)

    @cached_property
    def facet_masks(self) -> tuple[int, ...]:
        out = [0] * self.n_facets
        for i, row in enumerate(self.incidence):
            for j, on in enumerate(row):
                if on:
                    out[j] |= 1 << i
        return tuple(out)

    @cached_property
    def vertex_index(self) -> dict[QVector, int]:
        return {v: i for i, v in enumerate(self.vrep.points)}

    @cached_property
    def face_lattice(self) -> dict[int, int]:
        """Map from vertex bitmask to dimension for every nonempty face."""
        return _face_lattice(self)

    @cached_property
    def face_order(self) -> tuple[tuple[int, int], ...]:
        """``(vertex_mask, dim)`` for every face in canonical face order."""
        lattice = self.face_lattice
        return tuple((m, lattice[m]) for m in sorted(lattice, key=lambda m: face_order_key(lattice[m], m)))

    @cached_property
    def face_matrix(self) -> np.ndarray:
        """0/1 matrix with one row per face (in face order) and one column per vertex."""
        out = np.zeros((len(self.face_order), self.n_vertices))
        for r, (m, _) in enumerate(self.face_order):
            out[r, list(mask_indices(m))] = 1
        return out

    @cached_property
    def _slack_memo(self) -> dict:
        return {}

    def slack_pattern(self, z: QVector) -> tuple[bool, ...]:
        """For each facet, whether ``z`` is strictly inside it (memoized per point)."""
        out = self._slack_memo.get(z)
        if out is None:
            out = tuple(dot(a, z) != b for a, b in self.hrep.inequalities)
            self._slack_memo[z] = out
        return out

    def contains(self, z: Sequence) -> bool:
        return self.hrep.contains(z)

    def __repr__(self):
        return (
            f"Polytope(ambient_dim={self.ambient_dim}, dim={self.dim}, "
            f"vertices={self.n_vertices}, facets={self.n_facets})"
        )


@dataclass(frozen=True)
class Face:
    facet_indices: tuple[int, ...]
    vertex_indices: tuple[int, ...]
    polytope: Polytope = field(repr=False, compare=False)
    dim: int = field(compare=False)

    @property
    def vertices(self) -> tuple[QVector, ...]:
        pts = self.polytope.vrep.points
        return tuple(pts[i] for i in self.vertex_indices)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.vertex_indices)


def _check_vertex_cap(count: int):
    cap = get_caps().vertices
    if count > cap:
        raise CapExceeded(f"polytope has more than {cap} vertices")


def _assemble(hrep: HRep, vrep: VRep, system: HRep | None = None, dim: int | None = None) -> Polytope:
    _check_vertex_cap(len(vrep.points))
    incidence = tuple(tuple(dot(a, v) == b for a, b in hrep.inequalities) for v in vrep.points)
    if dim is None:
        dim = hrep.ambient_dim - len(hrep.equations)
    return Polytope(hrep, vrep, incidence, dim, hrep if system is None else system)


@functools.lru_cache(maxsize=8192)
def _from_points(points: tuple[QVector, ...], n: int, cap: int) -> Polytope:
    hrep, extreme = _hull(points, n, cap)
    return _assemble(hrep, VRep(tuple(points[i] for i in extreme), n))


@functools.lru_cache(maxsize=2048)
def _from_hrep(h: HRep, cap: int) -> Polytope:
    v = dd(h, cap)
    if not v.points:
        raise EmptyPolytopeError("empty polytope")
    hrep, _ = _hull(v.points, h.ambient_dim, cap)
    return _assemble(hrep, v, system=h)


def make_polytope(rep: HRep | VRep) -> Polytope:
    """Build a polytope from either representation, computing the other."""
    caps = get_caps()
    if isinstance(rep, HRep):
        p = _from_hrep(rep, caps.rays)
    elif isinstance(rep, VRep):
        if not rep.points:
            raise EmptyPolytopeError("empty polytope")
        p = _from_points(tuple(sorted(set(rep.points))), rep.ambient_dim, caps.rays)
    else:
        raise TypeError(f"expected HRep or VRep, got {type(rep).__name__}")
    # results are cached, so the vertex cap is checked on every call
    _check_vertex_cap(p.n_vertices)
    return p


def from_points(points: Iterable[Sequence], n: int | None = None) -> Polytope:
    pts = [vector(p) for p in points]
    if n is None:
        if not pts:
            raise EmptyPolytopeError("empty polytope")
        n = len(pts[0])
    return make_polytope(VRep(tuple(pts), n))


def from_inequalities(inequalities: Iterable, n: int, equations: Iterable = ()) -> Polytope:
    return make_polytope(HRep(tuple(inequalities), tuple(equations), n))


def with_system(p: Polytope, system: HRep) -> Polytope:
    """Same polytope, recorded as built from ``system`` (checked)."""
    if not equal(make_polytope(system), p):
        raise ValueError("system does not describe the polytope")
    return Polytope(p.hrep, p.vrep, p.incidence, p.dim, system)


def _face_lattice(p: Polytope) -> dict[int, int]:
    full = (1 << p.n_vertices) - 1
    fmasks = [m for m in set(p.facet_masks) if m]
    found = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for m in frontier:
            for f in fmasks:
                x = m & f
                if x and x not in found:
                    found.add(x)
                    nxt.append(x)
        frontier = nxt
    dims: dict[int, int] = {}
    for m in sorted(found, key=int.bit_count):
        if m.bit_count() == 1:
            dims[m] = 0
            continue
        best = 0
        for f in fmasks:
            x = m & f
            if x != m and x.bit_count() > best.bit_count():
                best = x
        dims[m] = dims[best] + 1
    return dims


def mask_indices(m: int) -> tuple[int, ...]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return tuple(out)


def face_from_mask(p: Polytope, mask: int, dim: int | None = None) -> Face:
    verts = mask_indices(mask)
    facets = tuple(j for j, fm in enumerate(p.facet_masks) if fm & mask == mask)
    if dim is None:
        dim = p.face_lattice.get(mask)
        if dim is None:
            dim = affine_rank([p.vrep.points[i] for i in verts])
    return Face(facets, verts, p, dim)


def face_order_key(dim: int, mask: int):
    return (-dim, mask_indices(mask))


def faces(p: Polytope) -> list[Face]:
    """All nonempty faces, largest dimension first, then by vertex indices."""
    return [face_from_mask(p, m, d) for m, d in p.face_order]


def smallest_face(p: Polytope, pts: Sequence[Sequence]) -> Face:
    """Inclusion-minimal face containing every point of ``pts``."""
    pts = [vector(z) for z in pts]
    for z in pts:
        if not p.contains(z):
            raise ValueError("point not in polytope")
    mask = (1 << p.n_vertices) - 1
    for (a, b), fm in zip(p.facets, p.facet_masks):
        if all(dot(a, z) == b for z in pts):
            mask &= fm
    return face_from_mask(p, mask)


# ---------------------------------------------------------------------------
# operations


def _check_coords(coords: Sequence[int], n: int) -> list[int]:
    coords = list(coords)
    if not coords:
        raise ValueError("empty coordinate list")
    if len(set(coords)) != len(coords):
        raise ValueError("duplicate coordinate")
    if any(not 0 <= c < n for c in coords):
        raise ValueError("coordinate out of range")
    return coords


def _lift(a: Sequence[Fraction], coords: Sequence[int], n: int) -> QVector:
    out = [Fraction(0)] * n
    for c, x in zip(coords, a):
        out[c] = x
    return tuple(out)


def project_points(points: Iterable[Sequence], coords: Sequence[int]) -> list[QVector]:
    return [tuple(v[c] for c in coords) for v in points]


def project(p: Polytope, coords: Sequence[int]) -> Polytope:
    coords = _check_coords(coords, p.ambient_dim)
    return make_polytope(VRep(tuple(project_points(p.vertices, coords)), len(coords)))


def fiber(p: Polytope, coords: Sequence[int], x: Sequence) -> Polytope:
    """``P`` intersected with the affine subspace ``z[coords] == x``."""
    coords = _check_coords(coords, p.ambient_dim)
    x = vector(x)
    if len(x) != len(coords):
        raise ValueError("point has the wrong dimension")
    n = p.ambient_dim
    eqs = [(_lift([Fraction(int(i == j)) for j in range(len(coords))], coords, n), xi) for i, xi in enumerate(x)]
    try:
        return make_polytope(p.hrep.extend(equations=eqs))
    except EmptyPolytopeError:
        raise ValueError("empty fiber") from None


def product(p1: Polytope, p2: Polytope) -> Polytope:
    """Cartesian product with coordinates of ``p1`` first."""
    n1, n2 = p1.ambient_dim, p2.ambient_dim
    z1, z2 = (Fraction(0),) * n1, (Fraction(0),) * n2

    def glue(h1: HRep, h2: HRep) -> tuple[list[Row], list[Row]]:
        ineqs = [(a + z2, b) for a, b in h1.inequalities] + [(z1 + a, b) for a, b in h2.inequalities]
        eqs = [(a + z2, b) for a, b in h1.equations] + [(z1 + a, b) for a, b in h2.equations]
        return ineqs, eqs

    ineqs, eqs = glue(p1.hrep, p2.hrep)
    hrep = HRep(tuple(sorted(ineqs)), tuple(eqs), n1 + n2)
    vrep = VRep(tuple(u + v for u in p1.vertices for v in p2.vertices), n1 + n2)
    s_ineqs, s_eqs = glue(p1.system, p2.system)
    system = HRep(tuple(s_ineqs), tuple(s_eqs), n1 + n2)
    return _assemble(hrep, vrep, system, dim=p1.dim + p2.dim)


def intersect_preimage(p: Polytope, coords: Sequence[int], s: Sequence[Sequence]) -> Polytope:
    """``P`` intersected with the preimage of conv(s) under the coordinate projection."""
    coords = _check_coords(coords, p.ambient_dim)
    s = [vector(x) for x in s]
    proj = project(p, coords)
    verts = proj.vertex_index
    if not s or any(x not in verts for x in s):
        raise ValueError("S must be a subset of projection vertices")
    h = hull(VRep(tuple(s), len(coords)))
    n = p.ambient_dim
    ineqs = [(_lift(a, coords, n), b) for a, b in h.inequalities]
    eqs = [(_lift(a, coords, n), b) for a, b in h.equations]
    return make_polytope(p.hrep.extend(ineqs, eqs))


def equal(p1: Polytope, p2: Polytope) -> bool:
    if p1.ambient_dim != p2.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return p1.vrep.points == p2.vrep.points


def permute(p: Polytope, order: Sequence[int]) -> Polytope:
    """Reorder coordinates: new coordinate ``i`` is old coordinate ``order[i]``."""
    order = list(order)
    if sorted(order) != list(range(p.ambient_dim)):
        raise ValueError("not a permutation of the coordinates")
    q = make_polytope(VRep(tuple(project_points(p.vertices, order)), p.ambient_dim))

    def perm(rows):
        return tuple((tuple(a[c] for c in order), b) for a, b in rows)

    system = HRep(perm(p.system.inequalities), perm(p.system.equations), p.ambient_dim)
    return Polytope(q.hrep, q.vrep, q.incidence, q.dim, system)


def embed_rows(rows: Iterable[Row], coords: Sequence[int], n: int) -> list[Row]:
    """Rows over ``len(coords)`` variables rewritten over R^n at ``coords``."""
    return [(_lift(a, coords, n), b) for a, b in rows]
