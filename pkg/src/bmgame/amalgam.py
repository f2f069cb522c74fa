"""The three construction engines the strategies are built from.

* correction_amalgam: given an almost-isometric map f: X -> Y, a norm on
  X (+) Y making both canonical embeddings exactly isometric while pulling
  j(f(x)) within eps of i(x) in operator distance.  The ball is the convex
  hull of B_X x {0}, {0} x B_Y, and the scaled graph vectors
  (1/eps)(v, -f(v)); its gauge is the infimal convolution

      min{ ||x0||_X + ||y0||_Y + eps ||x1||_X : x = x0 + x1, y = y0 - f(x1) }

  which is kept around as an independent LP oracle.

* pushout: glue X and Y along a common isometrically embedded Z, as the
  l1-sum modulo the antidiagonal of Z.  Both legs are exactly isometric and
  the square commutes entrywise.

* linf_dominate: re-embed any polyhedral space isometrically into a
  sup-norm cube, one coordinate per facet pair.  Exactness here is what
  makes the restricted game's certificates transport unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DimensionGuardError, RejectedInputError
from .linalg import Matrix, rank, vec_dot
from .lp import OPTIMAL, LpProblem, lp_solve
from .maps import LinearMap, compose, is_isometric_embedding, isometry_constants, op_distance
from .ratio import ONE, ZERO, Q, qof
from .spaces import LINF_DIM_CAP, PolyNormedSpace, l1_sum, linf_space, make_space, quotient


@dataclass(frozen=True)
class CorrectionAmalgam:
    space: PolyNormedSpace
    i: LinearMap
    j: LinearMap
    epsilon: Q


@dataclass(frozen=True)
class Pushout:
    space: PolyNormedSpace
    f_prime: LinearMap
    g_prime: LinearMap


def _injections(x: PolyNormedSpace, y: PolyNormedSpace, total: PolyNormedSpace):
    ix = Matrix.from_rows(
        [tuple(ONE if j == r else ZERO for j in range(x.dim)) for r in range(x.dim)]
        + [tuple(ZERO for _ in range(x.dim)) for _ in range(y.dim)],
        cols=x.dim,
    )
    iy = Matrix.from_rows(
        [tuple(ZERO for _ in range(y.dim)) for _ in range(x.dim)]
        + [tuple(ONE if j == r else ZERO for j in range(y.dim)) for r in range(y.dim)],
        cols=y.dim,
    )
    return LinearMap(x, total, ix), LinearMap(y, total, iy)


def correction_amalgam(f: LinearMap, epsilon) -> CorrectionAmalgam:
    """Norm on X (+) Y with i, j isometric and ||j o f - i|| <= epsilon."""
    epsilon = qof(epsilon)
    if not 0 < epsilon < 1:
        raise RejectedInputError(f"epsilon must lie in (0, 1), got {epsilon}")
    constants = isometry_constants(f)
    if not constants.is_eps_isometry(epsilon):
        witness = constants.upper_witness if constants.upper > 1 + epsilon else constants.lower_witness
        raise RejectedInputError(
            f"map is not a {epsilon}-isometric embedding "
            f"(constants {constants.lower}, {constants.upper})",
            witness=witness,
        )
    x, y = f.source, f.target
    zero_x, zero_y = (ZERO,) * x.dim, (ZERO,) * y.dim
    generators = [v + zero_y for v in x.vertices]
    generators += [zero_x + w for w in y.vertices]
    inv = 1 / epsilon
    for v in x.vertices:
        fv = f.apply(v)
        generators.append(tuple(inv * c for c in v) + tuple(-inv * c for c in fv))
    space = make_space(generators)
    i, j = _injections(x, y, space)
    if not is_isometric_embedding(i).ok or not is_isometric_embedding(j).ok:
        raise AssertionError("amalgam invariant violated: canonical embeddings not isometric")
    if op_distance(compose(j, f), i) > epsilon:
        raise AssertionError("amalgam invariant violated: correction bound exceeded")
    return CorrectionAmalgam(space, i, j, epsilon)


def amalgam_norm_lp(f: LinearMap, epsilon, point) -> Q:
    """The decomposition-LP oracle for the correction-amalgam gauge.

    min ||x0||_X + ||y0||_Y + eps ||x1||_X over x = x0 + x1, y = y0 - f(x1),
    with each norm expanded as a vertex-decomposition gauge.
    """
    epsilon = qof(epsilon)
    x, y = f.source, f.target
    point = tuple(qof(v) for v in point)
    vx, vy = list(x.vertices), list(y.vertices)
    n0, n1, ny = len(vx), len(vx), len(vy)
    objective = [ONE] * n0 + [epsilon] * n1 + [ONE] * ny
    eq = []
    for r in range(x.dim):
        row = [v[r] for v in vx] + [v[r] for v in vx] + [ZERO] * ny
        eq.append((row, point[r]))
    for r in range(y.dim):
        fv = [f.apply(v)[r] for v in vx]
        row = [ZERO] * n0 + [-c for c in fv] + [w[r] for w in vy]
        eq.append((row, point[x.dim + r]))
    outcome = lp_solve(LpProblem.build(objective, eq=eq, nonneg=True))
    if outcome.status != OPTIMAL:
        raise RejectedInputError("amalgam decomposition LP infeasible")
    return outcome.value


def pushout(f: LinearMap, g: LinearMap) -> Pushout:
    """Amalgamate X and Y over Z along isometric embeddings f: Z->X, g: Z->Y."""
    if f.source.space_id != g.source.space_id:
        raise RejectedInputError("pushout requires a common source")
    for name, leg in (("f", f), ("g", g)):
        verdict = is_isometric_embedding(leg)
        if not verdict.ok:
            raise RejectedInputError(f"pushout leg {name} is not isometric", witness=verdict.witness)
    x, y, z = f.target, g.target, f.source
    total = l1_sum(x, y)
    inc_x, inc_y = _injections(x, y, total)
    kernel_cols = []
    for b in range(z.dim):
        basis_vec = tuple(ONE if r == b else ZERO for r in range(z.dim))
        kernel_cols.append(tuple(f.apply(basis_vec)) + tuple(-c for c in g.apply(basis_vec)))
    kernel = Matrix.from_cols(kernel_cols, rows=total.dim) if kernel_cols else Matrix(
        total.dim, 0, tuple(() for _ in range(total.dim))
    )
    w, qmatrix = quotient(total, kernel)
    qmap = LinearMap(total, w, qmatrix)
    f_prime = compose(qmap, inc_x)
    g_prime = compose(qmap, inc_y)
    if compose(f_prime, f).matrix.entries != compose(g_prime, g).matrix.entries:
        raise AssertionError("pushout square does not commute")
    for leg in (f_prime, g_prime):
        if not is_isometric_embedding(leg).ok:
            raise AssertionError("pushout leg is not isometric")
    return Pushout(w, f_prime, g_prime)


def linf_dominate(x: PolyNormedSpace, anchored: LinearMap) -> tuple[PolyNormedSpace, LinearMap]:
    """Isometric re-embedding of x into a sup-norm cube, respecting an anchor.

    The cube has one coordinate per +/- facet pair of x, evaluated by the
    lexicographically positive representative.  The embedding s is exactly
    isometric, hence s o anchored is isometric as well (strictly stronger
    than domination requires).
    """
    if anchored.target.space_id != x.space_id:
        raise RejectedInputError("anchored map must land in the space being dominated")
    verdict = is_isometric_embedding(anchored)
    if not verdict.ok:
        raise RejectedInputError("anchored embedding is not isometric", witness=verdict.witness)
    reps = sorted(f for f in x.facets if f > tuple(-c for c in f))
    n = len(reps)
    if n > LINF_DIM_CAP:
        raise DimensionGuardError(f"domination target would have dimension {n} > {LINF_DIM_CAP}")
    cube = linf_space(n)
    s = LinearMap(x, cube, Matrix.from_rows(reps, cols=x.dim))
    if not is_isometric_embedding(s).ok:
        raise AssertionError("facet-functional embedding failed to be isometric")
    if not is_isometric_embedding(compose(s, anchored)).ok:
        raise AssertionError("anchored composite failed to be isometric")
    return cube, s


@dataclass(frozen=True)
class SpaceClass:
    """A class of spaces a restricted game may be confined to."""

    name: str
    contains: Callable[[PolyNormedSpace], bool]
    dominate: Callable[[PolyNormedSpace, LinearMap], tuple[PolyNormedSpace, LinearMap]]


def _is_linf_like(space: PolyNormedSpace) -> bool:
    """Membership test: the H-rep is exactly dim independent +/- facet pairs."""
    if space.dim == 0:
        return True
    if len(space.facets) != 2 * space.dim:
        return False
    facet_set = set(space.facets)
    reps = [f for f in space.facets if f > tuple(-c for c in f)]
    if len(reps) != space.dim or any(tuple(-c for c in f) not in facet_set for f in reps):
        return False
    return rank(Matrix.from_rows(reps, cols=space.dim)) == space.dim


LINF_CLASS = SpaceClass("linf", _is_linf_like, linf_dominate)

SPACE_CLASSES = {"linf": LINF_CLASS}
