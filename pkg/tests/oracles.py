"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately naive (subset enumeration, local Gaussian
elimination) and shares no code path with the double-description kernel it
cross-checks.
"""

from __future__ import annotations

from itertools import combinations

from bmgame.ratio import ONE, Q, qof


def _solve_gauss(rows, rhs):
    """Solve a square system by plain Gaussian elimination; None if singular."""
    n = len(rows)
    a = [[qof(v) for v in row] + [qof(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = ONE / a[col][col]
        a[col] = [inv * v for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


def brute_force_facets(points, dim):
    """All facet functionals f with f.p <= 1 on the hull, by subset enumeration.

    Tries every dim-subset of points as a candidate supporting hyperplane
    f.x = 1; keeps f when it is supporting and its touching set spans a
    (dim-1)-dimensional face (i.e. it is a genuine facet).
    """
    pts = [tuple(qof(v) for v in p) for p in points]
    facets = set()
    for subset in combinations(range(len(pts)), dim):
        f = _solve_gauss([pts[i] for i in subset], [ONE] * dim)
        if f is None:
            continue
        values = [sum(fi * xi for fi, xi in zip(f, p)) for p in pts]
        if any(v > 1 for v in values):
            continue
        touching = [pts[i] for i, v in enumerate(values) if v == 1]
        if _affine_rank(touching) == dim - 1:
            facets.add(tuple(f))
    return sorted(facets)


def _affine_rank(points):
    if not points:
        return -1
    base = points[0]
    diffs = [tuple(x - b for x, b in zip(p, base)) for p in points[1:]]
    return _matrix_rank(diffs)


def _matrix_rank(rows):
    grid = [list(r) for r in rows]
    rank = 0
    cols = len(grid[0]) if grid else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(grid)) if grid[r][col] != 0), None)
        if pivot is None:
            continue
        grid[rank], grid[pivot] = grid[pivot], grid[rank]
        inv = ONE / grid[rank][col]
        grid[rank] = [inv * v for v in grid[rank]]
        for r in range(len(grid)):
            if r != rank and grid[r][col] != 0:
                f = grid[r][col]
                grid[r] = [x - f * y for x, y in zip(grid[r], grid[rank])]
        rank += 1
    return rank


def brute_force_vertices(points, dim):
    """Extreme points of the hull: p is a vertex iff it is not a convex
    combination of the others (checked by exhaustive small-support search)."""
    facets = brute_force_facets(points, dim)
    pts = [tuple(qof(v) for v in p) for p in points]
    vertices = []
    for p in pts:
        tight = [f for f in facets if sum(a * b for a, b in zip(f, p)) == 1]
        if _matrix_rank(tight) == dim:
            vertices.append(p)
    return sorted(set(vertices))


def sphere_net(dim, denominator):
    """A fine rational net of directions (not normalized): all nonzero vectors
    with coordinates k/denominator, |k| <= denominator."""
    from itertools import product

    net = []
    for coords in product(range(-denominator, denominator + 1), repeat=dim):
        if any(coords):
            net.append(tuple(Q(c, denominator) for c in coords))
    return net
