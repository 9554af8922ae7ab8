"""Projected-faces property: decision, certificates and affine generators.

A pair ``(P, coords)`` has the property when every face of ``P`` projects
onto a face of the projection of ``P`` to the coordinates ``coords``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import CapExceeded, get_caps
from .exactla import (
    AffineSubspace,
    QMatrix,
    QVector,
    affine_dependence,
    affine_rank,
    affinely_independent_subset,
    dot,
    rref,
    vector,
)
from .polytope import (
    EmptyPolytopeError,
    Face,
    Polytope,
    _check_coords,
    equal,
    face_from_mask,
    faces,
    fiber,
    from_points,
    intersect_preimage,
    mask_indices,
    project,
    project_points,
    smallest_face,
)


class PFHolds(ValueError):
    """Raised when a counterexample is requested for a pair that has the property."""


class PFFailure(ValueError):
    """Raised by operations that require the property; carries the report."""

    def __init__(self, report: "PFReport"):
        super().__init__(f"PF property fails (witness face {report.witness_face.vertex_indices})")
        self.report = report


@dataclass(frozen=True)
class PFReport:
    holds: bool
    witness_face: Face | None
    checked_faces: int

    def __bool__(self):
        return self.holds


class _Tables:
    """Projection data for testing every face of ``p`` at once.

    Rows of the face matrix follow ``p.face_order``.  A face fails when the
    smallest face of the projection containing its image has a vertex that
    is not the image of a vertex of the face.
    """

    def __init__(self, p: Polytope, coords: Sequence[int]):
        self.p = p
        self.coords = _check_coords(coords, p.ambient_dim)
        self.proj = proj = project(p, self.coords)
        self.images = project_points(p.vertices, self.coords)
        pidx = proj.vertex_index
        k, j = proj.n_vertices, proj.n_facets
        image_of = np.zeros((p.n_vertices, k))
        loose = np.zeros((p.n_vertices, j))
        seen: dict[QVector, int] = {}
        for v, x in enumerate(self.images):
            first = seen.setdefault(x, v)
            if first != v:
                image_of[v], loose[v] = image_of[first], loose[first]
                continue
            if x in pidx:
                image_of[v, pidx[x]] = 1
            loose[v] = proj.slack_pattern(x)
        off_facet = np.array([[0.0 if on else 1.0 for on in row] for row in proj.incidence]).reshape(k, j).T
        faces_m = p.face_matrix
        # counts are exact small integers in float arithmetic
        self.hit = faces_m @ image_of > 0
        tight = faces_m @ loose == 0
        closure = tight.astype(float) @ off_facet == 0
        self.fail = (closure & ~self.hit).any(axis=1)
        self.covers = self.hit.all(axis=1)

    def first_failure(self) -> int | None:
        if not self.fail.any():
            return None
        return int(np.argmax(self.fail))


def check_pf(p: Polytope, coords: Sequence[int]) -> PFReport:
    """Decide the property; the witness is the first failing face in face order.

    Faces come in order of decreasing dimension, so a witness is always an
    inclusion-maximal failing face.
    """
    k = _Tables(p, coords).first_failure()
    if k is not None:
        mask, dim = p.face_order[k]
        return PFReport(False, face_from_mask(p, mask, dim), k + 1)
    return PFReport(True, None, len(p.face_order))


def failing_faces(p: Polytope, coords: Sequence[int]) -> list[Face]:
    tables = _Tables(p, coords)
    return [face_from_mask(p, m, d) for (m, d), bad in zip(p.face_order, tables.fail) if bad]


def face_projection_is_face(p: Polytope, coords: Sequence[int], face: Face) -> bool:
    """Geometric test of a single face: conv(p(vert F)) against the smallest face."""
    proj = project(p, coords)
    pts = project_points(face.vertices, coords)
    image = from_points(pts, len(coords))
    target = smallest_face(proj, pts)
    return image.vertices == target.vertices


def vertices_project_to_vertices(p: Polytope, coords: Sequence[int]) -> bool:
    proj = project(p, coords)
    return all(x in proj.vertex_index for x in project_points(p.vertices, coords))


# ---------------------------------------------------------------------------
# subset characterization


def preimage_vertices(p: Polytope, coords: Sequence[int], s: Sequence[Sequence]) -> list[QVector]:
    s = {vector(x) for x in s}
    return [v for v in p.vertices if tuple(v[c] for c in coords) in s]


def eq2_holds(p: Polytope, coords: Sequence[int], s: Sequence[Sequence]) -> bool:
    """conv of the vertices over ``s`` equals the part of P over conv(s)."""
    right = intersect_preimage(p, coords, s)
    # every vertex of P is extreme in the hull of any subset of vertices, so the
    # sorted list is already the canonical V-representation of the left side
    left = tuple(sorted(preimage_vertices(p, coords, s)))
    return left == right.vertices


def check_pf_oracle(p: Polytope, coords: Sequence[int], cap: int | None = None) -> bool:
    """Decide the property by testing the subset equation for every vertex subset."""
    cap = get_caps().oracle_vertices if cap is None else cap
    coords = _check_coords(coords, p.ambient_dim)
    proj = project(p, coords)
    if proj.n_vertices > cap:
        raise CapExceeded("oracle cap exceeded")
    verts = proj.vertices
    for r in range(1, len(verts) + 1):
        for s in itertools.combinations(verts, r):
            if not eq2_holds(p, coords, s):
                return False
    return True


# ---------------------------------------------------------------------------
# Radon certificates


@dataclass(frozen=True)
class RadonCertificate:
    """Counterexample to the subset equation.

    ``u`` lies in conv(s) and in conv(w1); over ``u`` the face ``face`` has a
    point, but the hull of the vertices of ``face`` lying over ``s`` does not
    reach ``u``.
    """

    s: tuple[QVector, ...]
    u: QVector
    w1: tuple[QVector, ...]
    face: Face


def _maximal_failing(p: Polytope, coords: Sequence[int], face: Face) -> Face:
    tables = _Tables(p, coords)
    target = face.mask
    for (m, d), bad in zip(p.face_order, tables.fail):
        if bad and m & target == target:
            return face_from_mask(p, m, d)
    raise ValueError("witness face does not fail")


def radon_certificate(p: Polytope, coords: Sequence[int], witness: Face | None = None) -> RadonCertificate:
    report = check_pf(p, coords)
    if report.holds:
        raise PFHolds("PF holds")
    face = _maximal_failing(p, coords, witness or report.witness_face)
    proj = project(p, coords)
    image = from_points(project_points(face.vertices, coords), len(coords))
    if image.dim != proj.dim:
        raise ValueError("maximal failing face does not project full-dimensionally")

    pts = image.vertices
    basis = [pts[i] for i in affinely_independent_subset(pts)]
    w = next(x for x in proj.vertices if not image.contains(x))
    lam = affine_dependence(basis + [w])
    if lam[-1] > 0:
        lam = tuple(-x for x in lam)
    group = basis + [w]
    w2 = [x for x, c in zip(group, lam) if c < 0]
    w1 = [x for x, c in zip(group, lam) if c >= 0]
    weight = sum(-c for c in lam if c < 0)
    u = tuple(
        sum((-c * x[i] for x, c in zip(group, lam) if c < 0), Fraction(0)) / weight for i in range(len(coords))
    )
    if all(x in proj.vertex_index for x in w2):
        return RadonCertificate(tuple(sorted(w2)), u, tuple(sorted(w1)), face)

    # some vertex of P lands inside the projection; S = all projection vertices
    for i, x in enumerate(project_points(p.vertices, coords)):
        if x not in proj.vertex_index:
            vface = face_from_mask(p, 1 << i, 0)
            return RadonCertificate(proj.vertices, x, (x,), vface)
    raise AssertionError("Radon part is not a set of projection vertices")


def verify_certificate(p: Polytope, coords: Sequence[int], cert: RadonCertificate) -> bool:
    """Independent check of every property a certificate promises."""
    proj = project(p, coords)
    if not cert.s or any(x not in proj.vertex_index for x in cert.s):
        return False
    if set(cert.s) & set(cert.w1):
        return False
    if not from_points(cert.s, len(coords)).contains(cert.u):
        return False
    if not from_points(cert.w1, len(coords)).contains(cert.u):
        return False
    face_poly = from_points(cert.face.vertices, p.ambient_dim)
    try:
        fiber(face_poly, coords, cert.u)
    except ValueError:
        return False
    over_s = preimage_vertices(face_poly, coords, cert.s)
    if over_s and from_points(project_points(over_s, coords), len(coords)).contains(cert.u):
        return False
    return not eq2_holds(p, coords, cert.s)


# ---------------------------------------------------------------------------
# affine generators


@dataclass(frozen=True)
class AffineMap:
    """``x -> linear @ x + offset`` from R^n to R^d."""

    linear: QMatrix
    offset: QVector

    def __call__(self, x: Sequence) -> QVector:
        return tuple(dot(row, x) + c for row, c in zip(self.linear, self.offset))


@dataclass(frozen=True)
class AffineGeneratorSet:
    maps: tuple[AffineMap, ...]
    n: int
    d: int

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def _other_coords(coords: Sequence[int], n: int) -> list[int]:
    chosen = set(coords)
    return [c for c in range(n) if c not in chosen]


def lift_point(x: Sequence, y: Sequence, coords: Sequence[int], n: int) -> QVector:
    """Point of R^n with ``z[coords] = x`` and the remaining coordinates ``y``."""
    z = [Fraction(0)] * n
    for c, v in zip(coords, x):
        z[c] = Fraction(v)
    for c, v in zip(_other_coords(coords, n), y):
        z[c] = Fraction(v)
    return tuple(z)


def _fit_map(xs: Sequence[QVector], ys: Sequence[QVector], free: Sequence[int], n: int, d: int) -> AffineMap:
    """Affine map depending only on the ``free`` coordinates with ``map(xs[i]) == ys[i]``."""
    k = len(free)
    aug = [[x[f] for f in free] + [Fraction(1)] + list(y) for x, y in zip(xs, ys)]
    rk, red, piv = rref(aug)
    if rk != k + 1 or piv != list(range(k + 1)):
        raise ValueError("interpolation points are not affinely independent")
    linear = []
    offset = []
    for j in range(d):
        col = [red[i][k + 1 + j] for i in range(k + 1)]
        row = [Fraction(0)] * n
        for f, w in zip(free, col[:k]):
            row[f] = w
        linear.append(tuple(row))
        offset.append(col[k])
    return AffineMap(tuple(linear), tuple(offset))


def affine_generators(p: Polytope, coords: Sequence[int]) -> AffineGeneratorSet:
    """Generating maps read off the faces that map isomorphically onto the projection."""
    report = check_pf(p, coords)
    if not report.holds:
        raise PFFailure(report)
    tables = _Tables(p, coords)
    proj = tables.proj
    n_amb = p.ambient_dim
    coords = tables.coords
    other = _other_coords(coords, n_amb)
    free = AffineSubspace(proj.hrep.equations, len(coords)).free_cols
    k = proj.dim
    maps = set()
    for (mask, dim), covers in zip(p.face_order, tables.covers):
        if dim != k or not covers:
            continue
        idx = mask_indices(mask)
        xs = [tables.images[i] for i in idx]
        chosen = affinely_independent_subset(xs)
        ys = [tuple(p.vertices[idx[i]][c] for c in other) for i in chosen]
        maps.add(_fit_map([xs[i] for i in chosen], ys, free, len(coords), len(other)))
    ordered = tuple(sorted(maps, key=lambda m: (m.linear, m.offset)))
    return AffineGeneratorSet(ordered, len(coords), len(other))


@dataclass(frozen=True)
class RelationVerdict:
    ok: bool
    location: str | None = None

    def __bool__(self):
        return self.ok


def _fmt(x: Sequence) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


def verify_relation(p: Polytope, coords: Sequence[int], gens: AffineGeneratorSet) -> RelationVerdict:
    """Check that ``gens`` generates every fiber of ``P`` over its projection."""
    coords = _check_coords(coords, p.ambient_dim)
    n_amb = p.ambient_dim
    if gens.n != len(coords) or gens.d != n_amb - len(coords) or not gens.maps:
        return RelationVerdict(False, "generator dimensions do not match")
    proj = project(p, coords)

    def fiber_matches(x) -> bool:
        try:
            actual = fiber(p, coords, x)
        except ValueError:
            return False
        try:
            generated = from_points([lift_point(x, rho(x), coords, n_amb) for rho in gens.maps], n_amb)
        except EmptyPolytopeError:
            return False
        return equal(actual, generated)

    for x in proj.vertices:
        if not fiber_matches(x):
            return RelationVerdict(False, f"fiber at x={_fmt(x)}")
    for j, rho in enumerate(gens.maps):
        for x in proj.vertices:
            if not p.contains(lift_point(x, rho(x), coords, n_amb)):
                return RelationVerdict(False, f"map {j} leaves P at x={_fmt(x)}")
    report = check_pf(p, coords)
    if not report.holds:
        return RelationVerdict(False, f"PF fails at face {report.witness_face.vertex_indices}")
    anchors = [proj.vertices[i] for i in affinely_independent_subset(proj.vertices)]
    given = {tuple(rho(x) for x in anchors) for rho in gens.maps}
    for rho in affine_generators(p, coords).maps:
        if tuple(rho(x) for x in anchors) not in given:
            return RelationVerdict(False, "an isomorphic face has no generator")
    for g in faces(proj):
        pts = g.vertices
        bary = tuple(sum(col, Fraction(0)) / len(pts) for col in zip(*pts))
        if not fiber_matches(bary):
            return RelationVerdict(False, f"fiber at barycenter x={_fmt(bary)}")
    return RelationVerdict(True)


def facet_count_observation(p: Polytope, coords: Sequence[int]) -> tuple[int, int]:
    """Facet counts of ``P`` and of its projection, for a pair with the property."""
    report = check_pf(p, coords)
    if not report.holds:
        raise PFFailure(report)
    return p.n_facets, project(p, coords).n_facets
