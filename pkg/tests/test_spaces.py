import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmgame.errors import DegenerateInputError, RejectedInputError
from bmgame.linalg import Matrix
from bmgame.ratio import Q
from bmgame.spaces import (
    l1_space,
    l1_sum,
    linf_space,
    make_space,
    norm,
    norm_lp,
    quotient,
    quotient_norm_lp,
    space_from_json,
    subspace,
    zero_space,
)

HEXAGON = make_space([(1, 0), (0, 1), (1, 1)])

coordinate = st.fractions(min_value=-3, max_value=3, max_denominator=3).map(
    lambda f: Q(f.numerator, f.denominator)
)


def random_space(data, dim):
    count = data.draw(st.integers(dim, dim + 2))
    gens = [tuple(data.draw(coordinate) for _ in range(dim)) for _ in range(count)]
    try:
        return make_space(gens)
    except DegenerateInputError:
        return None


def test_make_space_l1():
    space = make_space([(1, 0), (0, 1)])
    assert sorted(space.vertices) == sorted(l1_space(2).vertices)
    assert len(space.facets) == 4


def test_make_space_linf():
    space = make_space([(1, 1), (1, -1)])
    assert sorted(space.vertices) == sorted([(Q(1), Q(1)), (Q(1), Q(-1)), (Q(-1), Q(-1)), (Q(-1), Q(1))])
    assert set(space.facets) == {(Q(1), Q(0)), (Q(-1), Q(0)), (Q(0), Q(1)), (Q(0), Q(-1))}


def test_make_space_rejects_non_spanning():
    with pytest.raises(DegenerateInputError):
        make_space([(1, 0)])


def test_norm_examples():
    assert norm(l1_space(2), (1, 1), check=True) == 2
    assert norm(linf_space(2), (1, 1), check=True) == 1
    assert norm(HEXAGON, (1, -1), check=True) == 2


def test_norm_zero_space():
    assert norm(zero_space(), ()) == 0


def test_l1_sum_examples():
    assert sorted(l1_sum(l1_space(1), l1_space(1)).vertices) == sorted(l1_space(2).vertices)
    x = HEXAGON
    assert l1_sum(x, zero_space()).vertices == x.vertices
    assert l1_sum(zero_space(), x).facets == x.facets
    s = l1_sum(linf_space(2), l1_space(1))
    assert norm(s, (1, 1, 1), check=True) == 2


def test_quotient_l1_by_antidiagonal():
    space = l1_space(2)
    w, qmap = quotient(space, Matrix.from_cols([(1, -1)]))
    assert w.dim == 1
    assert sorted(w.vertices) == [(Q(-1),), (Q(1),)]
    assert qmap.mul_vec((Q(1), Q(0))) == (Q(1),)
    assert qmap.mul_vec((Q(0), Q(1))) == (Q(1),)  # the map is (x, y) -> x + y


def test_quotient_by_zero_is_copy():
    space = HEXAGON
    w, qmap = quotient(space, Matrix(2, 0, ((), ())))
    assert w.vertices == space.vertices and w.facets == space.facets
    assert qmap.entries == Matrix.identity(2).entries


def test_quotient_linf_by_axis():
    w, qmap = quotient(linf_space(2), Matrix.from_cols([(1, 0)]))
    assert w.dim == 1
    assert sorted(w.vertices) == [(Q(-1),), (Q(1),)]
    assert qmap.mul_vec((Q(0), Q(1))) == (Q(1),)


def test_quotient_rejects_improper_kernel():
    with pytest.raises(RejectedInputError):
        quotient(l1_space(2), Matrix.identity(2))


def test_subspace_examples():
    sub, basis = subspace(l1_space(2), Matrix.from_cols([(1, 0)]))
    assert sorted(sub.vertices) == [(Q(-1),), (Q(1),)]

    sub2, _ = subspace(linf_space(2), Matrix.from_cols([(1, 1)]))
    assert sorted(sub2.vertices) == [(Q(-1),), (Q(1),)]

    sub3, _ = subspace(l1_space(2), Matrix.from_cols([(1, 1)]))
    assert sorted(sub3.vertices) == [(Q(-1, 2),), (Q(1, 2),)]
    assert norm(sub3, (1,), check=True) == 2


def test_subspace_rejects_dependent_basis():
    with pytest.raises(RejectedInputError):
        subspace(l1_space(2), Matrix.from_cols([(1, 0), (2, 0)]))


def test_json_round_trip():
    data = HEXAGON.to_json()
    again = space_from_json(data)
    assert again.vertices == HEXAGON.vertices
    assert again.facets == HEXAGON.facets


def test_json_rejects_wrong_facets():
    data = HEXAGON.to_json()
    data["facets"][0] = ["7", "0"]
    with pytest.raises(RejectedInputError):
        space_from_json(data)


def test_json_recomputes_missing_facets():
    data = HEXAGON.to_json()
    del data["facets"]
    assert space_from_json(data).facets == HEXAGON.facets


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_norm_axioms_exact(data):
    dim = data.draw(st.integers(1, 3))
    space = random_space(data, dim)
    if space is None:
        return
    x = tuple(data.draw(coordinate) for _ in range(dim))
    y = tuple(data.draw(coordinate) for _ in range(dim))
    c = data.draw(coordinate)
    assert norm(space, tuple(c * v for v in x)) == abs(c) * norm(space, x)
    assert norm(space, tuple(a + b for a, b in zip(x, y))) <= norm(space, x) + norm(space, y)
    assert (norm(space, x) == 0) == all(v == 0 for v in x)
    # gauge/dual agreement is exact, not approximate
    assert norm(space, x) == norm_lp(space, x)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_l1_sum_is_exact_coproduct(data):
    a = random_space(data, data.draw(st.integers(1, 2)))
    b = random_space(data, data.draw(st.integers(1, 2)))
    if a is None or b is None:
        return
    s = l1_sum(a, b)
    x = tuple(data.draw(coordinate) for _ in range(a.dim))
    y = tuple(data.draw(coordinate) for _ in range(b.dim))
    assert norm(s, x + y, check=True) == norm(a, x) + norm(b, y)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_quotient_norm_matches_coset_lp(data):
    space = random_space(data, 2)
    if space is None:
        return
    kernel = Matrix.from_cols([(1, data.draw(coordinate))])
    w, qmap = quotient(space, kernel)
    x = tuple(data.draw(coordinate) for _ in range(2))
    assert norm(w, qmap.mul_vec(x), check=True) == quotient_norm_lp(space, kernel, x)
