"""Finite-dimensional normed spaces with rational polyhedral unit balls.

A space stores both descriptions of its unit ball: the vertex list (V-rep)
and the irredundant facet functionals (H-rep).  The two are cross-validated
at construction, after which the Minkowski gauge can be evaluated two
independent ways: as the max over facet functionals, or as a decomposition
LP over the vertices.  All constructions the game needs are here: l1-sums,
quotients, and subspaces with the inherited norm.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import product

from .errors import (
    DegenerateInputError,
    DimensionGuardError,
    DimensionMismatchError,
    RejectedInputError,
)
from .linalg import Matrix, null_space, rank, rref, vec_dot, vec_neg
from .lp import OPTIMAL, LpProblem, lp_solve
from .ratio import ONE, ZERO, Q, qof, qstr, vec_parse, vec_str
from .polytope import hrep_to_vrep, prune_to_extreme, vrep_to_hrep

LINF_DIM_CAP = 12  # 2^n ball vertices; beyond this the V-rep is not desk scale


@dataclass(frozen=True)
class PolyNormedSpace:
    dim: int
    vertices: tuple[tuple, ...]
    facets: tuple[tuple, ...]
    space_id: str

    def __repr__(self):
        return f"PolyNormedSpace(dim={self.dim}, |V|={len(self.vertices)}, |F|={len(self.facets)}, id={self.space_id})"

    def to_json(self) -> dict:
        return {
            "id": self.space_id,
            "dim": self.dim,
            "vertices": [vec_str(v) for v in self.vertices],
            "facets": [vec_str(f) for f in self.facets],
        }


def _content_id(dim: int, vertices) -> str:
    payload = json.dumps([dim, [vec_str(v) for v in vertices]], separators=(",", ":"))
    return "s" + hashlib.sha256(payload.encode()).hexdigest()[:12]


def _finish(dim: int, vertices, facets, space_id: str | None) -> PolyNormedSpace:
    vertices = tuple(sorted(tuple(qof(x) for x in v) for v in vertices))
    facets = tuple(sorted(tuple(qof(x) for x in f) for f in facets))
    return PolyNormedSpace(dim, vertices, facets, space_id or _content_id(dim, vertices))


def _validate_reps(dim: int, vertices, facets):
    """Consistency checks tying a claimed V-rep/H-rep pair together.

    Used for closed-form constructions (l1-sums, sup-norm cubes) whose two
    representations are produced together by a duality identity; arbitrary
    rep pairs must instead go through the full hull round trip.
    """
    vset = set(vertices)
    fset = set(facets)
    for v in vertices:
        if vec_neg(v) not in vset:
            raise DegenerateInputError("vertex set not symmetric")
        values = [vec_dot(f, v) for f in facets]
        if max(values) != 1:
            raise DegenerateInputError(f"vertex {vec_str(v)} does not have gauge 1")
        tight = [f for f, val in zip(facets, values) if val == 1]
        if rank(Matrix.from_rows(tight, cols=dim)) != dim:
            raise DegenerateInputError("listed point is not a vertex of the H-polytope")
    for f in facets:
        if vec_neg(f) not in fset:
            raise DegenerateInputError("facet set not symmetric")
        touching = [v for v in vertices if vec_dot(f, v) == 1]
        base = touching[0] if touching else None
        if base is None:
            raise DegenerateInputError("facet supports no vertex")
        diffs = [tuple(a - b for a, b in zip(v, base)) for v in touching[1:]]
        if rank(Matrix.from_rows(diffs, cols=dim)) != dim - 1:
            raise DegenerateInputError("claimed facet is not (dim-1)-dimensional")


def make_space(generators, space_id: str | None = None) -> PolyNormedSpace:
    """Build a space from ball generators: symmetrize, prune, convert, validate.

    The generators must span; otherwise the gauge is not a norm and the
    input is rejected as degenerate.
    """
    gens = [tuple(qof(x) for x in g) for g in generators]
    if not gens:
        raise RejectedInputError("empty generator list (use zero_space() for the 0-dimensional space)")
    dim = len(gens[0])
    for g in gens:
        if len(g) != dim:
            raise DimensionMismatchError("generators of mixed dimension")
    if dim == 0:
        return zero_space()
    symmetric = gens + [vec_neg(g) for g in gens]
    vertices = prune_to_extreme(symmetric, dim)
    if rank(Matrix.from_rows(vertices, cols=dim)) < dim:
        raise DegenerateInputError("ball is not full-dimensional: generators do not span")
    facets = vrep_to_hrep(vertices, dim)
    round_trip = hrep_to_vrep(facets, dim)
    if sorted(round_trip) != sorted(vertices):
        raise DegenerateInputError("V-rep/H-rep cross-validation failed")
    space = _finish(dim, vertices, facets, space_id)
    for v in space.vertices:
        if norm(space, v) != 1:
            raise DegenerateInputError("vertex does not lie on the unit sphere")
    return space


def space_from_reps(dim: int, vertices, facets, space_id: str | None = None) -> PolyNormedSpace:
    """Construct from a closed-form (V-rep, H-rep) pair, with consistency checks."""
    space = _finish(dim, vertices, facets, space_id)
    if dim:
        _validate_reps(dim, space.vertices, space.facets)
    return space


def zero_space() -> PolyNormedSpace:
    return PolyNormedSpace(0, (), (), "s0")


def linf_space(n: int) -> PolyNormedSpace:
    """The cube-ball space of dimension n (sup norm on n coordinates)."""
    if n == 0:
        return zero_space()
    if n > LINF_DIM_CAP:
        raise DimensionGuardError(f"sup-norm cube of dimension {n} exceeds the cap {LINF_DIM_CAP}")
    vertices = [tuple(Q(s) for s in signs) for signs in product((-1, 1), repeat=n)]
    facets = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        facets.append(tuple(e))
        facets.append(tuple(vec_neg(e)))
    return space_from_reps(n, vertices, facets)


def l1_space(n: int) -> PolyNormedSpace:
    """The cross-polytope-ball space of dimension n (sum norm)."""
    if n == 0:
        return zero_space()
    vertices = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        vertices.append(tuple(e))
        vertices.append(tuple(vec_neg(e)))
    facets = [tuple(Q(s) for s in signs) for signs in product((-1, 1), repeat=n)]
    return space_from_reps(n, vertices, facets)


def norm(space: PolyNormedSpace, x, check: bool = False):
    """Minkowski gauge of the unit ball at x.

    Evaluated as the max over facet functionals; with ``check=True`` the
    independent vertex-decomposition LP is run as well and exact agreement
    is asserted.
    """
    if len(x) != space.dim:
        raise DimensionMismatchError(f"vector of length {len(x)} in a {space.dim}-dimensional space")
    if space.dim == 0:
        return ZERO
    value = max(vec_dot(f, x) for f in space.facets)
    if check:
        lp_value = norm_lp(space, x)
        if lp_value != value:
            raise DegenerateInputError(
                f"gauge disagreement at {vec_str(tuple(qof(v) for v in x))}: facets {qstr(value)}, LP {qstr(lp_value)}"
            )
    return value


def norm_lp(space: PolyNormedSpace, x):
    """The gauge by the independent route: min sum of vertex coefficients."""
    if space.dim == 0:
        return ZERO
    eq = [([v[i] for v in space.vertices], qof(x[i])) for i in range(space.dim)]
    outcome = lp_solve(LpProblem.build([1] * len(space.vertices), eq=eq, nonneg=True))
    if outcome.status != OPTIMAL:
        raise DegenerateInputError("gauge LP infeasible: ball does not span")
    return outcome.value


def l1_sum(x: PolyNormedSpace, y: PolyNormedSpace) -> PolyNormedSpace:
    """Coproduct norm: ball conv(B_X x {0} u {0} x B_Y); norms add.

    Both representations follow from duality: the dual ball of the sum is
    the product of the dual balls, so the facets are all pairs (f, g).
    """
    if x.dim == 0:
        return _finish(y.dim, y.vertices, y.facets, None)
    if y.dim == 0:
        return _finish(x.dim, x.vertices, x.facets, None)
    zero_x, zero_y = (ZERO,) * x.dim, (ZERO,) * y.dim
    vertices = [v + zero_y for v in x.vertices] + [zero_x + w for w in y.vertices]
    facets = [f + g for f in x.facets for g in y.facets]
    return space_from_reps(x.dim + y.dim, vertices, facets)


def quotient(space: PolyNormedSpace, kernel_basis: Matrix):
    """Quotient by the span of the kernel columns.

    Coordinates for the quotient are fixed deterministically: Gaussian
    elimination of the kernel basis with leftmost pivoting selects the
    pivot coordinates, and the quotient keeps the complementary ones.
    Returns (quotient space, quotient matrix).
    """
    if kernel_basis.rows != space.dim:
        raise DimensionMismatchError("kernel basis lives in the wrong space")
    k = kernel_basis.cols
    if k == 0:
        return _finish(space.dim, space.vertices, space.facets, None), Matrix.identity(space.dim)
    reduced, pivots = rref(kernel_basis.transpose())
    if len(pivots) != k:
        raise RejectedInputError("kernel basis columns are dependent")
    if k >= space.dim:
        raise RejectedInputError("kernel is not a proper subspace")
    keep = [c for c in range(space.dim) if c not in pivots]
    rows = []
    for c in keep:
        row = [ZERO] * space.dim
        row[c] = ONE
        for r, p in enumerate(pivots):
            row[p] = -reduced.entries[r][c]
        rows.append(tuple(row))
    qmatrix = Matrix.from_rows(rows, cols=space.dim)
    image = [qmatrix.mul_vec(v) for v in space.vertices]
    return make_space(image), qmatrix


def quotient_norm_lp(space: PolyNormedSpace, kernel_basis: Matrix, x):
    """Independent oracle: min over the coset x + span(kernel) of the norm."""
    nvert = len(space.vertices)
    k = kernel_basis.cols
    # variables: vertex coefficients (>= 0 via split below), kernel coefficients (free)
    # min sum(lambda) s.t. sum(lambda_i v_i) - K t = x
    objective = [ONE] * nvert + [ZERO] * (2 * k)
    eq = []
    for i in range(space.dim):
        row = [v[i] for v in space.vertices]
        for j in range(k):
            col = kernel_basis.entries[i][j]
            row.extend([-col, col])
        eq.append((row, qof(x[i])))
    outcome = lp_solve(LpProblem.build(objective, eq=eq, nonneg=True))
    if outcome.status != OPTIMAL:
        raise DegenerateInputError("coset gauge LP infeasible")
    return outcome.value


def subspace(space: PolyNormedSpace, basis: Matrix):
    """The span of the basis columns with the inherited norm.

    The ball is the intersection of the ambient ball with the span,
    re-expressed in basis coordinates: the ambient H-rep restricts to the
    candidate H-rep, and vertex enumeration plus one more conversion gives
    the irredundant pair.  Returns (subspace, inclusion matrix).
    """
    if basis.rows != space.dim:
        raise DimensionMismatchError("basis lives in the wrong space")
    k = basis.cols
    if k == 0:
        return zero_space(), Matrix(space.dim, 0, tuple(() for _ in range(space.dim)))
    if rank(basis) != k:
        raise RejectedInputError("basis columns are dependent")
    restricted = []
    seen = set()
    for f in space.facets:
        g = tuple(vec_dot(f, basis.column(j)) for j in range(k))
        if any(v != 0 for v in g) and g not in seen:
            seen.add(g)
            restricted.append(g)
    vertices = hrep_to_vrep(restricted, k)
    facets = vrep_to_hrep(vertices, k)
    sub = _finish(k, vertices, facets, None)
    _validate_reps(k, sub.vertices, sub.facets)
    return sub, basis


def space_to_json(space: PolyNormedSpace) -> dict:
    return space.to_json()


def space_from_json(data: dict) -> PolyNormedSpace:
    """Rebuild a space from its JSON object, re-deriving and cross-checking the H-rep."""
    dim = int(data["dim"])
    vertices = [vec_parse(v) for v in data.get("vertices", [])]
    if dim == 0:
        return zero_space()
    rebuilt = make_space(vertices, space_id=data.get("id"))
    if "facets" in data and data["facets"] is not None:
        claimed = sorted(vec_parse(f) for f in data["facets"])
        if claimed != sorted(rebuilt.facets):
            raise RejectedInputError("serialized facets disagree with the vertex hull")
    return rebuilt
