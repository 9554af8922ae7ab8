import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_coords, random_polytope
from pfkit.config import CapExceeded
from pfkit.exactla import affine_rank
from pfkit.models import hypercube, path_graph, prism, pstar, simplex_t, square_pyramid, stable_set_polytope
from pfkit.pfp import (
    AffineGeneratorSet,
    AffineMap,
    PFFailure,
    PFHolds,
    affine_generators,
    check_pf,
    check_pf_oracle,
    face_projection_is_face,
    facet_count_observation,
    failing_faces,
    radon_certificate,
    verify_certificate,
    verify_relation,
    vertices_project_to_vertices,
)
from pfkit.polytope import faces, from_points, project, project_points, smallest_face

half = Fraction(1, 2)
seeds = st.integers(0, 10**6)


def segment():
    return from_points([(0,), (1,)])


def evaluations(gens, points):
    return sorted(tuple(m(x) for x in points) for m in gens.maps)


def test_relation_has_the_property():
    report = check_pf(pstar(), [0])
    assert report.holds and report.witness_face is None
    assert report.checked_faces == len(faces(pstar()))


def test_pyramid_fails_with_a_maximal_witness():
    p = square_pyramid()
    report = check_pf(p, [0, 1])
    assert not report.holds
    apex = p.vertex_index[(0, 0, 1)]
    # faces are scanned largest first, so the witness is a triangle through the apex
    assert report.witness_face.dim == 2
    assert apex in report.witness_face.vertex_indices
    assert (apex,) in [f.vertex_indices for f in failing_faces(p, [0, 1])]


def test_prism_over_triangle_has_the_property():
    assert check_pf(prism(), [0, 1]).holds


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_simplices_with_independent_images_have_the_property(k, data):
    n = data.draw(st.integers(k, 4))
    pts = data.draw(
        st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n).map(tuple), min_size=k + 1, max_size=k + 1)
    )
    if affine_rank(pts) != k:
        return
    coords = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
    images = project_points(pts, coords)
    if len(set(images)) == len(images) and affine_rank(images) == k:
        assert check_pf(from_points(pts), coords).holds


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_report_invariants_and_geometric_route(seed):
    rng = random.Random(seed)
    p = random_polytope(rng, max_dim=3, max_vertices=8)
    coords = random_coords(rng, p.ambient_dim)
    report = check_pf(p, coords)
    geometric = [f for f in faces(p) if not face_projection_is_face(p, coords, f)]
    assert report.holds == (not geometric)
    assert [f.vertex_indices for f in geometric] == [f.vertex_indices for f in failing_faces(p, coords)]
    if not report.holds:
        w = report.witness_face
        assert w == geometric[0]
        images = project_points(w.vertices, coords)
        target = smallest_face(project(p, coords), images)
        image_hull = from_points(images)
        target_poly = from_points(target.vertices)
        assert all(target_poly.contains(x) for x in image_hull.vertices)
        assert image_hull.vertices != target_poly.vertices


def test_oracle_examples():
    assert check_pf_oracle(pstar(), [0])
    assert not check_pf_oracle(square_pyramid(), [0, 1])
    assert check_pf_oracle(from_points([(0, 0), (0, 1), (1, 0), (1, 1)]), [0])


def test_oracle_cap():
    with pytest.raises(CapExceeded, match="oracle cap exceeded"):
        check_pf_oracle(hypercube(3), [0, 1, 2], cap=4)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_oracle_agrees(seed):
    rng = random.Random(seed)
    p = random_polytope(rng, max_dim=3, max_vertices=8)
    coords = random_coords(rng, p.ambient_dim)
    assert check_pf(p, coords).holds == check_pf_oracle(p, coords)


def test_radon_certificate_pyramid():
    cert = radon_certificate(square_pyramid(), [0, 1])
    assert cert.s == ((-1, 1), (1, -1))
    assert cert.u == (0, 0)
    assert verify_certificate(square_pyramid(), [0, 1], cert)


def test_radon_certificate_path_graph():
    p = stable_set_polytope(path_graph(3))
    cert = radon_certificate(p, [0, 2])
    assert cert.s == ((0, 1), (1, 0))
    assert cert.u == (half, half)
    assert verify_certificate(p, [0, 2], cert)


def test_radon_certificate_requires_a_failure():
    with pytest.raises(PFHolds, match="PF holds"):
        radon_certificate(pstar(), [0])


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certificates_are_valid(seed):
    rng = random.Random(seed)
    p = random_polytope(rng, max_dim=3, max_vertices=8)
    coords = random_coords(rng, p.ambient_dim)
    report = check_pf(p, coords)
    if report.holds:
        return
    for witness in [report.witness_face] + failing_faces(p, coords)[-1:]:
        cert = radon_certificate(p, coords, witness)
        assert verify_certificate(p, coords, cert)


def test_relation_generators():
    gens = affine_generators(pstar(), [0])
    assert (gens.n, gens.d, len(gens)) == (1, 2, 4)
    expected = [
        AffineMap(((1,), (0,)), (0, 0)),
        AffineMap(((0,), (1,)), (0, 0)),
        AffineMap(((-1,), (0,)), (1, 1)),
        AffineMap(((0,), (-1,)), (1, 1)),
    ]
    assert sorted(gens.maps, key=lambda m: (m.linear, m.offset)) == sorted(expected, key=lambda m: (m.linear, m.offset))
    assert verify_relation(pstar(), [0], gens)


def test_simplex_t_generators_are_the_spanning_edges():
    t = simplex_t()
    gens = affine_generators(t, [0])
    spanning = [f for f in faces(t) if f.dim == 1 and {v[0] for v in f.vertices} == {0, 1}]
    assert len(gens) == len(spanning) == 4
    assert verify_relation(t, [0], gens)


def test_segment_has_one_empty_codomain_map():
    gens = affine_generators(segment(), [0])
    assert (len(gens), gens.d) == (1, 0)
    assert gens.maps[0]((half,)) == ()
    assert verify_relation(segment(), [0], gens)


def test_generators_require_the_property():
    with pytest.raises(PFFailure) as info:
        affine_generators(square_pyramid(), [0, 1])
    assert not info.value.report.holds


def test_verify_relation_rejects_partial_generators():
    full = affine_generators(pstar(), [0])
    identity_like = [m for m in full.maps if m.offset == (0, 0)]
    verdict = verify_relation(pstar(), [0], AffineGeneratorSet(tuple(identity_like), 1, 2))
    assert not verdict
    assert "x=(0)" in verdict.location


def test_verify_relation_rejects_pyramid():
    gens = AffineGeneratorSet((AffineMap(((0, 0),), (0,)),), 2, 1)
    assert not verify_relation(square_pyramid(), [0, 1], gens)


@pytest.mark.parametrize("poly, coords, counts", [(pstar, [0], (4, 2)), (simplex_t, [0], (4, 2)), (segment, [0], (2, 2))])
def test_facet_count_observation(poly, coords, counts):
    assert facet_count_observation(poly(), coords) == counts


def test_facet_count_observation_requires_the_property():
    with pytest.raises(PFFailure):
        facet_count_observation(square_pyramid(), [0, 1])


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_generators_exist_exactly_when_the_property_holds(seed):
    rng = random.Random(seed)
    p = random_polytope(rng, max_dim=3, max_vertices=7)
    coords = random_coords(rng, p.ambient_dim)
    holds = check_pf(p, coords).holds
    if holds:
        gens = affine_generators(p, coords)
        assert verify_relation(p, coords, gens)
        assert vertices_project_to_vertices(p, coords)
        anchors = project(p, coords).vertices
        assert len(set(evaluations(gens, anchors))) == len(gens)
        nf, nf_proj = facet_count_observation(p, coords)
        assert nf_proj <= nf
    else:
        with pytest.raises(PFFailure):
            affine_generators(p, coords)
