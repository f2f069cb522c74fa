"""Linear maps between polyhedral spaces and their exact isometry constants.

For a map T between polyhedral spaces, both operator bounds are exact
rationals with explicit witnesses:

  upper  = max over source ball vertices v of ||T v||          (attained at a vertex)
  lower  = min over the source unit sphere of ||T x||

The sphere minimum is computed facet by facet.  On the hyperplane f.x = 1
the minimum of the target gauge equals 1 / max{f.y : ||T y|| <= 1}, and that
support value is a small decomposition LP over the pulled-back target
facets, so the whole computation stays exact and returns a witness point
that a single norm evaluation re-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError, DimensionMismatchError, RejectedInputError
from .linalg import Matrix, null_space, vec_dot
from .lp import OPTIMAL, LpProblem, lp_solve
from .ratio import ONE, ZERO, Q, qof
from .spaces import PolyNormedSpace, norm


@dataclass(frozen=True)
class LinearMap:
    source: PolyNormedSpace
    target: PolyNormedSpace
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise DimensionMismatchError(
                f"matrix {self.matrix.rows}x{self.matrix.cols} cannot map "
                f"dim {self.source.dim} into dim {self.target.dim}"
            )

    def apply(self, x):
        return self.matrix.mul_vec(x)

    def to_json(self) -> dict:
        return {
            "source": self.source.space_id,
            "target": self.target.space_id,
            "matrix": self.matrix.to_json(),
        }


@dataclass(frozen=True)
class IsometryConstants:
    lower: Q
    upper: Q
    lower_witness: tuple | None = None
    upper_witness: tuple | None = None

    def is_isometry(self) -> bool:
        return self.lower == 1 and self.upper == 1

    def is_eps_isometry(self, eps) -> bool:
        eps = qof(eps)
        return self.lower >= 1 - eps and self.upper <= 1 + eps

    def distortion(self) -> Q:
        return max(self.upper - 1, 1 - self.lower)


def identity_map(space: PolyNormedSpace) -> LinearMap:
    return LinearMap(space, space, Matrix.identity(space.dim))


_CONSTANTS_CACHE: dict = {}


def isometry_constants(t: LinearMap) -> IsometryConstants:
    """Exact lower/upper isometry constants with witnesses. Pure, cached."""
    key = (t.source.space_id, t.target.space_id, t.matrix.entries)
    hit = _CONSTANTS_CACHE.get(key)
    if hit is not None:
        return hit
    result = _isometry_constants(t)
    _CONSTANTS_CACHE[key] = result
    return result


def _isometry_constants(t: LinearMap) -> IsometryConstants:
    if t.source.dim == 0:
        return IsometryConstants(ONE, ONE)
    if t.target.dim == 0:
        witness = t.source.vertices[0]
        return IsometryConstants(ZERO, ZERO, lower_witness=witness, upper_witness=witness)

    upper = None
    upper_witness = None
    for v in t.source.vertices:
        value = norm(t.target, t.apply(v))
        if upper is None or value > upper:
            upper, upper_witness = value, v

    kernel = null_space(t.matrix)
    if kernel:
        return IsometryConstants(ZERO, upper, lower_witness=kernel[0], upper_witness=upper_witness)

    # Pull every target facet back through T; their convex hull Q satisfies
    # gauge_Q(f) = max{f.y : ||Ty|| <= 1}, computed by a decomposition LP.
    pulled = [tuple(vec_dot(psi, t.matrix.column(j)) for j in range(t.source.dim)) for psi in t.target.facets]
    best = None  # (gauge value g, witness y) maximizing g
    for f in t.source.facets:
        if f > tuple(-c for c in f):
            continue  # one representative per +/- facet pair
        eq = [([p[i] for p in pulled], f[i]) for i in range(t.source.dim)]
        outcome = lp_solve(LpProblem.build([1] * len(pulled), eq=eq, nonneg=True))
        if outcome.status != OPTIMAL:
            raise DegenerateInputError("facet support LP failed on an injective map")
        if best is None or outcome.value > best[0]:
            best = (outcome.value, outcome.dual_eq, f)
    g, y, f_star = best
    lower = 1 / g
    witness = tuple(v / g for v in y)
    if norm(t.source, witness) != 1 or norm(t.target, t.apply(witness)) != lower:
        raise DegenerateInputError("lower-constant witness failed exact re-check")
    return IsometryConstants(lower, upper, lower_witness=witness, upper_witness=upper_witness)


@dataclass(frozen=True)
class EmbeddingVerdict:
    ok: bool
    constants: IsometryConstants
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def is_isometric_embedding(t: LinearMap) -> EmbeddingVerdict:
    """True iff the constants are exactly (1, 1); otherwise carries a witness
    vector whose norm the map does not preserve."""
    constants = isometry_constants(t)
    if constants.is_isometry():
        return EmbeddingVerdict(True, constants)
    if constants.upper != 1:
        return EmbeddingVerdict(False, constants, witness=constants.upper_witness)
    return EmbeddingVerdict(False, constants, witness=constants.lower_witness)


def op_distance(f: LinearMap, g: LinearMap) -> Q:
    """Exact operator norm of f - g (max over source ball vertices)."""
    if f.source.space_id != g.source.space_id or f.target.space_id != g.target.space_id:
        raise RejectedInputError("operator distance requires a common source and target")
    if f.source.dim == 0:
        return ZERO
    diff = f.matrix.sub(g.matrix)
    return max(norm(f.target, diff.mul_vec(v)) for v in f.source.vertices)


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """The composition f o g."""
    if g.target.space_id != f.source.space_id:
        raise RejectedInputError("compose requires target of g to equal source of f")
    return LinearMap(g.source, f.target, f.matrix.matmul(g.matrix))
