import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmgame.errors import DegenerateInputError, RejectedInputError
from bmgame.linalg import Matrix
from bmgame.polytope import (
    hrep_to_vrep,
    project_polytope,
    prune_to_extreme,
    vrep_to_hrep,
)
from bmgame.ratio import Q

from oracles import brute_force_facets

CROSS_2D = [(1, 0), (0, 1), (-1, 0), (0, -1)]
SQUARE_2D = [(1, 1), (1, -1), (-1, -1), (-1, 1)]
HEXAGON = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]


def as_q(points):
    return [tuple(Q(v) for v in p) for p in points]


def test_cross_polytope_facets():
    facets = vrep_to_hrep(as_q(CROSS_2D), 2)
    assert set(facets) == {(Q(1), Q(1)), (Q(1), Q(-1)), (Q(-1), Q(1)), (Q(-1), Q(-1))}


def test_square_facets():
    facets = vrep_to_hrep(as_q(SQUARE_2D), 2)
    assert set(facets) == {(Q(1), Q(0)), (Q(-1), Q(0)), (Q(0), Q(1)), (Q(0), Q(-1))}


def test_hexagon_facets_match_brute_force_oracle():
    facets = vrep_to_hrep(as_q(HEXAGON), 2)
    oracle = brute_force_facets(HEXAGON, 2)
    assert sorted(facets) == oracle
    assert len(facets) == 6
    expected = {
        (Q(1), Q(0)), (Q(-1), Q(0)),
        (Q(0), Q(1)), (Q(0), Q(-1)),
        (Q(1), Q(-1)), (Q(-1), Q(1)),
    }
    assert set(facets) == expected


def test_three_dimensional_cross_polytope():
    gens = [tuple(Q(1 if i == j else 0) * s for j in range(3)) for i in range(3) for s in (1, -1)]
    facets = vrep_to_hrep(gens, 3)
    assert len(facets) == 8
    assert sorted(facets) == brute_force_facets(gens, 3)


def test_round_trip_hexagon():
    facets = vrep_to_hrep(as_q(HEXAGON), 2)
    vertices = hrep_to_vrep(facets, 2)
    assert sorted(vertices) == sorted(as_q(HEXAGON))


def test_non_symmetric_rejected():
    with pytest.raises(RejectedInputError):
        vrep_to_hrep(as_q([(1, 0), (0, 1), (-1, 0)]), 2)


def test_non_spanning_degenerate():
    with pytest.raises(DegenerateInputError):
        vrep_to_hrep(as_q([(1, 0), (-1, 0)]), 2)


def test_prune_removes_interior_and_edge_points():
    pts = as_q(CROSS_2D + [(0, 0), (Q(1, 2), Q(1, 2))])
    assert sorted(prune_to_extreme(pts, 2)) == sorted(as_q(CROSS_2D))


def test_project_identity():
    m = Matrix.identity(2)
    assert sorted(project_polytope(as_q(CROSS_2D), m)) == sorted(as_q(CROSS_2D))


def test_project_sum_to_segment():
    m = Matrix.from_rows([(1, 1)], cols=2)
    image = project_polytope(as_q(CROSS_2D), m)
    assert sorted(image) == [(Q(-1),), (Q(1),)]


def test_project_square_to_axis():
    m = Matrix.from_rows([(1, 0), (0, 0)], cols=2)
    image = project_polytope(as_q(SQUARE_2D), m)
    assert sorted(image) == [(Q(-1), Q(0)), (Q(1), Q(0))]


coordinate = st.fractions(min_value=-3, max_value=3, max_denominator=3).map(
    lambda f: Q(f.numerator, f.denominator)
)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_round_trip_random_symmetric_sets(data):
    dim = data.draw(st.integers(2, 3))
    count = data.draw(st.integers(dim, 5))
    base = [tuple(data.draw(coordinate) for _ in range(dim)) for _ in range(count)]
    gens = base + [tuple(-v for v in p) for p in base]
    try:
        facets = vrep_to_hrep(gens, dim)
    except DegenerateInputError:
        return  # random set did not span; nothing to check
    vertices = hrep_to_vrep(facets, dim)
    assert sorted(vertices) == sorted(prune_to_extreme(gens, dim))
    # every facet supports the hull: max over generators is exactly 1
    for f in facets:
        values = [sum(a * b for a, b in zip(f, g)) for g in gens]
        assert max(values) == 1


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_facets_match_oracle_random_2d(data):
    count = data.draw(st.integers(2, 4))
    base = [tuple(data.draw(coordinate) for _ in range(2)) for _ in range(count)]
    gens = base + [tuple(-v for v in p) for p in base]
    try:
        facets = vrep_to_hrep(gens, 2)
    except DegenerateInputError:
        return
    assert sorted(facets) == brute_force_facets(gens, 2)
