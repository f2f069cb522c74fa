"""Finite rational metric spaces and the one-point-extension game.

The metric variant of the alternating-extension game: moves are finite
metric spaces with rational distances, links are isometric embeddings, and
the second player's strategy realizes admissible one-point distance
profiles (Katetov functions) exactly.  Unlike the normed game there are no
tolerances anywhere: metric amalgamation is exact.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import count

from .errors import DimensionMismatchError, RejectedInputError
from .ratio import ONE, ZERO, Q, qof, qstr, vec_parse, vec_str


@dataclass(frozen=True)
class FinMetricSpace:
    points: tuple[str, ...]
    dist: tuple[tuple[Q, ...], ...]
    space_id: str

    @property
    def size(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Q:
        return self.dist[i][j]

    def diameter(self) -> Q:
        if self.size < 2:
            return ZERO
        return max(self.dist[i][j] for i in range(self.size) for j in range(i + 1, self.size))

    def to_json(self) -> dict:
        return {
            "id": self.space_id,
            "points": list(self.points),
            "dist": [vec_str(row) for row in self.dist],
        }


@dataclass(frozen=True)
class MetricVerdict:
    ok: bool
    reason: str = ""
    witness: tuple | None = None  # offending triple/pair of point labels

    def __bool__(self):
        return self.ok


def _metric_id(points, dist) -> str:
    payload = json.dumps([list(points), [vec_str(r) for r in dist]], separators=(",", ":"))
    return "m" + hashlib.sha256(payload.encode()).hexdigest()[:12]


def validate_metric_data(points, dist) -> MetricVerdict:
    """Exact scan: symmetry, zero diagonal, positivity, all triangle triples.

    Rejection names the first violation in label order.
    """
    n = len(points)
    if len(set(points)) != n:
        return MetricVerdict(False, "duplicate point labels")
    if len(dist) != n or any(len(row) != n for row in dist):
        return MetricVerdict(False, "distance matrix shape mismatch")
    for i in range(n):
        if dist[i][i] != 0:
            return MetricVerdict(False, "nonzero diagonal", (points[i],))
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                return MetricVerdict(False, "asymmetric distances", (points[i], points[j]))
            if dist[i][j] <= 0:
                return MetricVerdict(False, "non-positive distance between distinct points", (points[i], points[j]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i != j and j != k and i != k and dist[i][k] > dist[i][j] + dist[j][k]:
                    return MetricVerdict(
                        False,
                        "triangle inequality violated",
                        (points[i], points[j], points[k]),
                    )
    return MetricVerdict(True)


def make_metric(points, dist, space_id: str | None = None) -> FinMetricSpace:
    pts = tuple(str(p) for p in points)
    grid = tuple(tuple(qof(v) for v in row) for row in dist)
    verdict = validate_metric_data(pts, grid)
    if not verdict.ok:
        raise RejectedInputError(f"not a metric space: {verdict.reason}", witness=verdict.witness)
    return FinMetricSpace(pts, grid, space_id or _metric_id(pts, grid))


def validate_metric(space: FinMetricSpace) -> MetricVerdict:
    return validate_metric_data(space.points, space.dist)


def empty_metric() -> FinMetricSpace:
    return FinMetricSpace((), (), "m0")


def metric_from_json(data: dict) -> FinMetricSpace:
    return make_metric(
        data["points"],
        [vec_parse(row) for row in data["dist"]],
        space_id=data.get("id"),
    )


@dataclass(frozen=True)
class MetricEmbedding:
    source: FinMetricSpace
    target: FinMetricSpace
    assignment: tuple[int, ...]  # source point i sits at target point assignment[i]

    def __post_init__(self):
        if len(self.assignment) != self.source.size:
            raise DimensionMismatchError("assignment does not cover the source")
        if any(not 0 <= a < self.target.size for a in self.assignment):
            raise DimensionMismatchError("assignment index out of range")

    def apply(self, i: int) -> int:
        return self.assignment[i]

    def to_json(self) -> dict:
        return {
            "source": self.source.space_id,
            "target": self.target.space_id,
            "assignment": list(self.assignment),
        }


def embedding_verdict(e: MetricEmbedding) -> MetricVerdict:
    """Exact distance-preservation check with the first offending pair."""
    n = e.source.size
    if len(set(e.assignment)) != n:
        return MetricVerdict(False, "assignment is not injective")
    for i in range(n):
        for j in range(i + 1, n):
            if e.source.d(i, j) != e.target.d(e.assignment[i], e.assignment[j]):
                return MetricVerdict(
                    False,
                    "distance not preserved",
                    (e.source.points[i], e.source.points[j]),
                )
    return MetricVerdict(True)


def identity_embedding(space: FinMetricSpace) -> MetricEmbedding:
    return MetricEmbedding(space, space, tuple(range(space.size)))


def compose_embeddings(f: MetricEmbedding, g: MetricEmbedding) -> MetricEmbedding:
    """f o g (apply g, then f)."""
    if g.target.space_id != f.source.space_id:
        raise RejectedInputError("compose requires target of g to equal source of f")
    return MetricEmbedding(g.source, f.target, tuple(f.assignment[a] for a in g.assignment))


@dataclass(frozen=True)
class KatetovFunction:
    """An admissible one-point distance profile over a base space."""

    values: tuple[Q, ...]

    def to_json(self) -> list[str]:
        return vec_str(self.values)


def katetov_verdict(space: FinMetricSpace, values) -> MetricVerdict:
    vals = tuple(qof(v) for v in values)
    if len(vals) != space.size:
        return MetricVerdict(False, "profile length mismatch")
    for i, v in enumerate(vals):
        if v <= 0:
            return MetricVerdict(False, "non-positive extension distance duplicates a point", (space.points[i],))
    for i in range(space.size):
        for j in range(i + 1, space.size):
            d = space.d(i, j)
            if abs(vals[i] - vals[j]) > d or d > vals[i] + vals[j]:
                return MetricVerdict(
                    False,
                    "Katetov inequalities violated",
                    (space.points[i], space.points[j]),
                )
    return MetricVerdict(True)


def one_point_extension(space: FinMetricSpace, kappa: KatetovFunction, label: str | None = None) -> FinMetricSpace:
    """Adjoin one point at the distances given by an admissible profile."""
    verdict = katetov_verdict(space, kappa.values)
    if not verdict.ok:
        raise RejectedInputError(f"inadmissible profile: {verdict.reason}", witness=verdict.witness)
    label = label or f"p{space.size}"
    if label in space.points:
        raise RejectedInputError(f"label {label!r} already present")
    n = space.size
    rows = [tuple(space.dist[i]) + (kappa.values[i],) for i in range(n)]
    rows.append(tuple(kappa.values) + (ZERO,))
    return make_metric(space.points + (label,), rows)


def katetov_transport(base: FinMetricSpace, kappa: KatetovFunction, embedding_indices, target: FinMetricSpace) -> KatetovFunction:
    """Extend a profile over an isometric image to the whole target space.

    The shortest-path extension k'(y) = min_x (k(x) + d(y, image(x))) is
    again admissible and restricts to k on the image, so realizing k' at a
    new point realizes the original profile exactly.
    """
    values = []
    for y in range(target.size):
        values.append(min(kappa.values[i] + target.d(y, embedding_indices[i]) for i in range(base.size)))
    return KatetovFunction(tuple(values))


def free_amalgam(f: MetricEmbedding, g: MetricEmbedding):
    """The largest metric gluing X and Y over a common Z.

    Cross distances run through the common part: d(x, y) =
    min_z (d_X(x, f(z)) + d_Y(g(z), y)); with Z empty the canonical value
    max(diam X, diam Y, 1) is used.  Returns (W, leg_X, leg_Y).
    """
    for name, leg in (("f", f), ("g", g)):
        verdict = embedding_verdict(leg)
        if not verdict.ok:
            raise RejectedInputError(f"free amalgam leg {name}: {verdict.reason}", witness=verdict.witness)
    x, y, z = f.target, g.target, f.source
    if g.source.space_id != z.space_id:
        raise RejectedInputError("free amalgam requires a common source")
    g_image = set(g.assignment)
    y_extra = [j for j in range(y.size) if j not in g_image]
    labels = [f"x{i}" for i in range(x.size)] + [f"y{j}" for j in y_extra]
    n = len(labels)
    empty_cross = max(x.diameter(), y.diameter(), ONE)
    z_in_x = list(f.assignment)
    z_in_y = list(g.assignment)

    def cross(xi: int, yj: int) -> Q:
        if not z_in_x:
            return empty_cross
        return min(x.d(xi, z_in_x[k]) + y.d(z_in_y[k], yj) for k in range(z.size))

    dist = [[ZERO] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if a < x.size and b < x.size:
                value = x.d(a, b)
            elif a >= x.size and b >= x.size:
                value = y.d(y_extra[a - x.size], y_extra[b - x.size])
            else:
                value = cross(a, y_extra[b - x.size])
            dist[a][b] = dist[b][a] = value
    w = make_metric(labels, dist)
    leg_x = MetricEmbedding(x, w, tuple(range(x.size)))
    y_assignment = []
    for j in range(y.size):
        if j in g_image:
            k = z_in_y.index(j)
            y_assignment.append(z_in_x[k])
        else:
            y_assignment.append(x.size + y_extra.index(j))
    leg_y = MetricEmbedding(y, w, tuple(y_assignment))
    for leg in (leg_x, leg_y):
        if not embedding_verdict(leg).ok:
            raise AssertionError("free amalgam leg failed to be isometric")
    for k in range(z.size):
        if leg_x.apply(f.apply(k)) != leg_y.apply(g.apply(k)):
            raise AssertionError("free amalgam legs disagree on the common part")
    return w, leg_x, leg_y


def positive_rationals(q: int):
    """All positive rationals with denominator <= q, ascending by value."""
    for level in count(1):
        shell = set()
        for den in range(1, q + 1):
            for num in range(1, level * den + 1):
                value = Q(num, den)
                if value > level:
                    continue
                if value > level - 1:
                    shell.add(value)
        yield from sorted(shell)


def katetov_profiles(space: FinMetricSpace, q: int):
    """Deterministic stream of all admissible profiles with denominators <= q.

    Ordered by shells of the maximum entry (so small profiles come first);
    inadmissible tuples are filtered out exactly.
    """
    n = space.size
    if n == 0:
        return
    base: list[Q] = []
    gen = positive_rationals(q)
    from itertools import product

    emitted = set()
    while True:
        base.append(next(gen))
        for combo in product(range(len(base)), repeat=n):
            if len(base) - 1 not in combo:
                continue  # only new combinations in this shell
            values = tuple(base[c] for c in combo)
            if values in emitted:
                continue
            if katetov_verdict(space, values).ok:
                emitted.add(values)
                yield KatetovFunction(values)
