from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfkit.exactla import (
    AffineSubspace,
    affine_dependence,
    affine_hull,
    affinely_independent_subset,
    dot,
    format_rational,
    integer_row,
    nullspace,
    parse_rational,
    rank,
    rref,
    solve,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def point_sets(max_points=6, max_dim=3):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-3, 3).map(Fraction), min_size=n, max_size=n).map(tuple),
            min_size=1,
            max_size=max_points,
        )
    )


def test_rref_identity():
    assert rref([[1, 0], [0, 1]]) == (2, ((1, 0), (0, 1)), [0, 1])


def test_rref_dependent_rows():
    rk, red, piv = rref([[1, 2], [2, 4]])
    assert (rk, red, piv) == (1, ((1, 2), (0, 0)), [0])


def test_rref_full_rank_3x3():
    # hand elimination: the determinant is 2
    rk, red, piv = rref([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert rk == 3
    assert red == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert piv == [0, 1, 2]


def test_rref_keeps_fractions_exact():
    rk, red, _ = rref([[3, 1], [1, 3]])
    assert rk == 2
    assert all(isinstance(x, Fraction) for row in red for x in row)


@given(matrices())
def test_rref_idempotent(m):
    rk, red, piv = rref(m)
    assert rref(red) == (rk, red, piv)


@given(matrices())
def test_nullspace_vectors_are_annihilated(m):
    for z in nullspace(m):
        assert all(dot(row, z) == 0 for row in m)
    assert len(nullspace(m)) == len(m[0]) - rank(m)


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_returns_a_solution_when_one_exists(m, z):
    z = z[: len(m[0])]
    b = [dot(row, z) for row in m]
    sol = solve(m, b)
    assert sol is not None
    assert [dot(row, sol) for row in m] == b


def test_solve_detects_inconsistency():
    assert solve([[1, 1], [1, 1]], [0, 1]) is None


def test_affine_hull_of_segment_on_axis():
    h = affine_hull([(0, 0), (1, 0)])
    assert h.dim == 1
    assert h.equations == (((0, 1), 0),)


def test_affine_hull_of_tetrahedron_is_full_space():
    h = affine_hull([(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)])
    assert h.dim == 3
    assert h.equations == ()


def test_affine_hull_of_diagonal():
    h = affine_hull([(0, 0, 0), (1, 1, 1)])
    assert h.dim == 1
    assert len(h.equations) == 2
    assert h.contains((Fraction(1, 3),) * 3)
    assert not h.contains((0, 0, 1))


def test_affine_hull_rejects_empty_input():
    with pytest.raises(ValueError, match="empty point set"):
        affine_hull([])


@given(point_sets())
def test_points_satisfy_their_affine_hull(points):
    h = affine_hull(points)
    assert all(h.contains(p) for p in points)
    assert h.dim == len(affinely_independent_subset(points)) - 1


def test_from_equations_is_canonical():
    a = AffineSubspace.from_equations([((1, 1, 0), 1), ((0, 1, 1), 1)], 3)
    b = AffineSubspace.from_equations([((1, 2, 1), 2), ((2, 2, 0), 2)], 3)
    assert a == b


def test_from_equations_rejects_inconsistent_system():
    with pytest.raises(ValueError, match="inconsistent"):
        AffineSubspace.from_equations([((1, 0), 0), ((2, 0), 1)], 2)


def test_affine_dependence_unit_square():
    lam = affine_dependence([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert lam == (1, -1, -1, 1)


def test_affine_dependence_collinear_points():
    assert affine_dependence([(0,), (1,), (2,)]) == (1, -2, 1)


def test_affine_dependence_midpoint():
    # (1,1) is the midpoint of (2,0) and (0,2), so the origin gets weight zero
    lam = affine_dependence([(0, 0), (2, 0), (0, 2), (1, 1)])
    assert lam == (0, 1, 1, -2)


def test_affine_dependence_rejects_independent_points():
    with pytest.raises(ValueError, match="no dependence exists"):
        affine_dependence([(0, 0), (1, 0), (0, 1)])


@settings(max_examples=60)
@given(point_sets(max_points=7))
def test_affine_dependence_is_a_dependence(points):
    if len(points) < len(affinely_independent_subset(points)) + 1:
        with pytest.raises(ValueError):
            affine_dependence(points)
        return
    lam = affine_dependence(points)
    assert any(lam)
    assert sum(lam) == 0
    for i in range(len(points[0])):
        assert sum(c * p[i] for c, p in zip(lam, points)) == 0


@pytest.mark.parametrize("token, value", [("3", Fraction(3)), ("-2/4", Fraction(-1, 2)), ("+7/1", Fraction(7))])
def test_parse_rational(token, value):
    assert parse_rational(token) == value


@pytest.mark.parametrize("token", ["1.5", "1/0", "1 /2", "", "a"])
def test_parse_rational_rejects(token):
    with pytest.raises(ValueError):
        parse_rational(token)


@given(small)
def test_format_parse_round_trip(q):
    text = format_rational(q)
    assert " " not in text
    assert parse_rational(text) == q


def test_integer_row_is_primitive_positive_multiple():
    assert integer_row([Fraction(1, 2), Fraction(-1, 3), 0]) == (3, -2, 0)
