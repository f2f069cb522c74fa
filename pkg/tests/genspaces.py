"""Seeded random generators shared by the property tests and the acceptance suite."""

from __future__ import annotations

import random

from bmgame.errors import DegenerateInputError
from bmgame.linalg import Matrix
from bmgame.maps import LinearMap, isometry_constants
from bmgame.ratio import ONE, Q
from bmgame.spaces import PolyNormedSpace, l1_sum, make_space


def random_rational(rng: random.Random, max_num=3, max_den=3) -> Q:
    return Q(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_space(rng: random.Random, dim: int, max_num=2, max_den=3) -> PolyNormedSpace:
    """A random polyhedral space of exactly the requested dimension."""
    if dim == 0:
        from bmgame.spaces import zero_space

        return zero_space()
    while True:
        count = dim + rng.randint(0, 2)
        gens = [tuple(random_rational(rng, max_num, max_den) for _ in range(dim)) for _ in range(count)]
        # guarantee spanning by seeding the coordinate directions
        for i in range(dim):
            gens.append(tuple(ONE if j == i else 0 for j in range(dim)))
        try:
            return make_space(gens)
        except DegenerateInputError:  # pragma: no cover - spanning is forced above
            continue


def random_eps_isometric_map(rng: random.Random, x: PolyNormedSpace, dim_extra: int, eps) -> LinearMap:
    """A validated eps-isometric map from x into a strictly larger random space.

    Starts from the exact coproduct inclusion x -> x (+)_1 w and perturbs
    matrix entries, halving the perturbation until the exact constants fit
    within [1-eps, 1+eps].  Candidates that fail validation are discarded,
    never repaired.
    """
    w = random_space(rng, dim_extra)
    target = l1_sum(x, w)
    base = [[ONE if (r == c) else Q(0) for c in range(x.dim)] for r in range(target.dim)]
    noise = [[random_rational(rng) for _ in range(x.dim)] for _ in range(target.dim)]
    scale = Q(eps) / 2
    while True:
        entries = [
            [base[r][c] + scale * noise[r][c] for c in range(x.dim)] for r in range(target.dim)
        ]
        candidate = LinearMap(x, target, Matrix.from_rows(entries, cols=x.dim))
        if isometry_constants(candidate).is_eps_isometry(eps):
            return candidate
        scale = scale / 2


def random_isometric_embedding(rng: random.Random, z: PolyNormedSpace, dim_extra: int) -> LinearMap:
    """An exactly isometric embedding of z into a random larger space."""
    w = random_space(rng, dim_extra)
    target = l1_sum(z, w)
    entries = [[ONE if (r == c) else Q(0) for c in range(z.dim)] for r in range(target.dim)]
    return LinearMap(z, target, Matrix.from_rows(entries, cols=z.dim))
