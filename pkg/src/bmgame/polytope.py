"""Exact polytope representation conversion by the double description method.

The workhorse is extreme-ray enumeration for a pointed polyhedral cone
{z : R z <= 0} with integer ray arithmetic (rays are scale-invariant, so
each ray is kept as a primitive integer vector).  Conversion between vertex
and facet descriptions of a polytope with 0 in its interior is polar
duality: the facets of conv(V) are exactly the vertices of
{y : v . y <= 1 for all v in V}, and the same function applied to a facet
list recovers the vertices.  Intended for small dimensions (<= ~8), where
exact conversion is cheap.
"""

from __future__ import annotations

from math import gcd, lcm

from .errors import DegenerateInputError, DimensionMismatchError, RejectedInputError
from .linalg import Matrix, invert, vec_dot
from .lp import OPTIMAL, LpProblem, lp_solve
from .ratio import ONE, Q, qof

IntVec = tuple[int, ...]


def _primitive(vector: tuple[int, ...]) -> IntVec:
    g = 0
    for v in vector:
        g = gcd(g, abs(v))
    if g in (0, 1):
        return tuple(vector)
    return tuple(v // g for v in vector)


def scale_to_int(vector) -> IntVec:
    """Clear denominators and reduce to a primitive integer vector."""
    qs = [qof(v) for v in vector]
    mult = 1
    for v in qs:
        mult = lcm(mult, int(v.denominator))
    return _primitive(tuple(int(v.numerator) * (mult // int(v.denominator)) for v in qs))


def _idot(a: IntVec, b: IntVec) -> int:
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(rows: list[IntVec], dim: int) -> list[IntVec]:
    """Extreme rays of the pointed cone {z in R^dim : r . z <= 0 for all r}.

    Incremental double description with exact tight-set bookkeeping and the
    combinatorial adjacency test.  Raises when the cone is not pointed
    (i.e. the rows do not have full rank).
    """
    if dim == 0:
        return []
    # Greedy selection of dim independent rows for the initial simplicial cone.
    selected: list[int] = []
    probe: list[tuple] = []
    for idx, row in enumerate(rows):
        candidate = Matrix.from_rows(probe + [tuple(qof(v) for v in row)], cols=dim)
        from .linalg import rank as _rank

        if _rank(candidate) > len(probe):
            probe.append(tuple(qof(v) for v in row))
            selected.append(idx)
            if len(selected) == dim:
                break
    if len(selected) < dim:
        raise DegenerateInputError("cone has lineality: constraint rows do not span")

    order = selected + [i for i in range(len(rows)) if i not in set(selected)]
    m = invert(Matrix.from_rows([tuple(qof(v) for v in rows[i]) for i in selected], cols=dim))
    assert m is not None
    rays: list[IntVec] = [scale_to_int(tuple(-x for x in m.column(j))) for j in range(dim)]

    def tight_mask(ray: IntVec, upto: int) -> int:
        mask = 0
        for k in range(upto):
            if _idot(rows[order[k]], ray) == 0:
                mask |= 1 << k
        return mask

    tights: list[int] = [tight_mask(r, dim) for r in rays]

    for step in range(dim, len(order)):
        a = rows[order[step]]
        vals = [_idot(a, r) for r in rays]
        if all(v <= 0 for v in vals):
            bit = 1 << step
            tights = [t | bit if v == 0 else t for t, v in zip(tights, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        min_common = dim - 2
        new_rays: dict[IntVec, int] = {}
        for p in pos:
            tp = tights[p]
            for q in neg:
                common = tp & tights[q]
                if common.bit_count() < min_common:
                    continue
                adjacent = True
                for w, tw in enumerate(tights):
                    if w != p and w != q and (common & tw) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(vals[p] * rn - vals[q] * rp for rp, rn in zip(rays[p], rays[q]))
                ray = _primitive(combo)
                if ray not in new_rays:
                    new_rays[ray] = tight_mask(ray, step + 1)
        bit = 1 << step
        kept_rays = [rays[i] for i in neg + zero]
        kept_tights = [tights[i] | (bit if vals[i] == 0 else 0) for i in neg + zero]
        kept_set = set(kept_rays)
        for ray, mask in new_rays.items():
            if ray not in kept_set:
                kept_rays.append(ray)
                kept_tights.append(mask)
        rays, tights = kept_rays, kept_tights
    return rays


def polar_dual_vertices(points: list[tuple], dim: int) -> list[tuple]:
    """Vertices of {y : p . y <= 1 for every p}, exact and irredundant.

    Requires the polar to be bounded, i.e. 0 must be an interior point of
    conv(points); otherwise the input is degenerate.
    """
    for p in points:
        if len(p) != dim:
            raise DimensionMismatchError("point dimension mismatch")
    if dim == 0:
        return [()]
    rows = [scale_to_int(tuple(qof(v) for v in p) + (-ONE,)) for p in points]
    rows.append(tuple([0] * dim + [-1]))
    rays = extreme_rays(rows, dim + 1)
    vertices = []
    for ray in rays:
        t = ray[dim]
        if t == 0:
            raise DegenerateInputError("polar is unbounded: hull does not contain 0 in its interior")
        vertices.append(tuple(Q(c, t) for c in ray[:dim]))
    vertices.sort()
    return vertices


def vrep_to_hrep(generators: list[tuple], dim: int) -> list[tuple]:
    """Irredundant facet functionals {f : f . x <= 1 on the hull} of conv(generators).

    The generator set must be symmetric (closed under negation) and span.
    """
    gens = [tuple(qof(v) for v in g) for g in generators]
    gen_set = set(gens)
    for g in gens:
        if tuple(-v for v in g) not in gen_set:
            raise RejectedInputError("generator set is not symmetric", witness=g)
    from .linalg import rank as _rank

    if dim and _rank(Matrix.from_rows(gens, cols=dim)) < dim:
        raise DegenerateInputError("generators do not span: hull is not full-dimensional")
    return polar_dual_vertices(gens, dim)


def hrep_to_vrep(facets: list[tuple], dim: int) -> list[tuple]:
    """Vertex enumeration of {x : f . x <= 1 for all f}; polar to vrep_to_hrep."""
    return polar_dual_vertices([tuple(qof(v) for v in f) for f in facets], dim)


def prune_to_extreme(points: list[tuple], dim: int) -> list[tuple]:
    """Remove duplicates and points lying in the hull of the others."""
    seen = set()
    unique: list[tuple] = []
    for p in points:
        key = tuple(qof(v) for v in p)
        if key not in seen:
            seen.add(key)
            unique.append(key)
    kept = list(unique)
    for p in list(unique):
        others = [q for q in kept if q != p]
        if not others:
            continue
        if _in_hull(p, others, dim):
            kept.remove(p)
    return kept


def _in_hull(point: tuple, generators: list[tuple], dim: int) -> bool:
    eq = []
    for i in range(dim):
        eq.append(([g[i] for g in generators], point[i]))
    eq.append(([ONE] * len(generators), ONE))
    problem = LpProblem.build([0] * len(generators), eq=eq, nonneg=True)
    return lp_solve(problem).status == OPTIMAL


def project_polytope(generators: list[tuple], matrix: Matrix) -> list[tuple]:
    """V-representation of the image of conv(generators) under a linear map."""
    images = [matrix.mul_vec(g) for g in generators]
    return prune_to_extreme(images, matrix.rows)
