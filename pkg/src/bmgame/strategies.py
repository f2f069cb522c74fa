"""Strategies, the challenge catalog, and certificate checking.

The second player's strategies are Markov-with-queue: each turn they drain
one challenge from a FIFO queue fed by a deterministic catalog, answer it
by amalgamation into the chain, and record an exactly-verified certificate
in the move annotations.  Admission to the queue is guarded by the game's
dimension budget so that every enqueued challenge is guaranteed to be
answerable within its FIFO slot; when the budget is exhausted the strategy
plays identity extensions and says so in the annotations.

Challenge tolerances follow the halving schedule: the k-th approximate
correction enqueued (equivalently, processed: the queue is FIFO) carries
tolerance 2^-k, so the tolerances of any play sum below 2.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import count
from math import gcd
from typing import Optional

from .amalgam import SPACE_CLASSES, correction_amalgam, pushout
from .errors import DegenerateInputError, DimensionGuardError, RejectedInputError
from .game import (
    EVE,
    KIND_METRIC,
    ODD,
    GameConfig,
    GameState,
    GameTranscript,
    Move,
    initial_link,
    pregame_space,
)
from .linalg import Matrix, rank
from .maps import LinearMap, compose, identity_map, is_isometric_embedding, isometry_constants, op_distance
from .metric import (
    KatetovFunction,
    MetricEmbedding,
    identity_embedding,
    katetov_profiles,
    katetov_transport,
    katetov_verdict,
    make_metric,
    metric_from_json,
    one_point_extension,
)
from .ratio import ONE, ZERO, Q, qof, qparse, qstr, vec_parse, vec_str
from .spaces import (
    PolyNormedSpace,
    l1_space,
    linf_space,
    make_space,
    space_from_json,
    subspace,
    zero_space,
)

EXACT = "exact-extension"
APPROX = "approx-correction"


# ---------------------------------------------------------------------------
# deterministic small-first enumeration streams


def _rationals_of_weight(weight: int, qcap: int) -> list:
    """Nonzero rationals a/b with |a| + b - 1 == weight, b <= qcap, reduced."""
    values = []
    for den in range(1, qcap + 1):
        num = weight + 1 - den
        if num >= 1 and gcd(num, den) == 1:
            values.append(Q(num, den))
    values.sort()
    out = []
    for v in values:
        out.extend((v, -v))
    return out


_VEC_CACHE: dict = {}


def _vectors_of_weight(dim: int, weight: int, qcap: int) -> list[tuple]:
    if dim == 0:
        return [()] if weight == 0 else []
    key = (dim, weight, qcap)
    hit = _VEC_CACHE.get(key)
    if hit is not None:
        return hit
    out = [(ZERO,) + rest for rest in _vectors_of_weight(dim - 1, weight, qcap)]
    for w in range(1, weight + 1):
        for val in _rationals_of_weight(w, qcap):
            out.extend((val,) + rest for rest in _vectors_of_weight(dim - 1, weight - w, qcap))
    _VEC_CACHE[key] = out
    return out


def catalog_vectors(dim: int, qcap: int):
    """All nonzero rational vectors, by increasing total weight, lex within."""
    for c in count(1):
        yield from _vectors_of_weight(dim, c, qcap)


class _Prefix:
    """Lazily materialized prefix of an infinite generator."""

    def __init__(self, gen):
        self._gen = gen
        self._items: list = []

    def __getitem__(self, i: int):
        while len(self._items) <= i:
            self._items.append(next(self._gen))
        return self._items[i]


def _ascending_tuples(k: int):
    """Strictly ascending k-tuples of indices, ordered by sum then lex."""

    def with_sum(length, total, minimum):
        if length == 1:
            if total >= minimum:
                yield (total,)
            return
        for first in range(minimum, total // length + 1):
            for rest in with_sum(length - 1, total - first, first + 1):
                yield (first,) + rest

    start = k * (k - 1) // 2
    for total in count(start):
        yield from with_sum(k, total, 0)


def _pair_indices():
    for total in count(0):
        for i in range(total + 1):
            yield (i, total - i)


# ---------------------------------------------------------------------------
# the challenge catalog (normed game)


@dataclass
class Challenge:
    cid: int
    kind: str
    stage: int  # true index of the stage u maps into
    a: PolyNormedSpace
    b: Optional[PolyNormedSpace]
    u: Matrix
    tolerance: Optional[Q]

    @property
    def growth(self) -> int:
        return (self.b.dim - self.a.dim) if self.kind == EXACT else self.a.dim

    def to_json(self) -> dict:
        return {
            "cid": self.cid,
            "kind": self.kind,
            "stage": self.stage,
            "a": self.a.to_json(),
            "b": self.b.to_json() if self.b is not None else None,
            "u": self.u.to_json(),
            "tolerance": qstr(self.tolerance) if self.tolerance is not None else None,
        }


def _inclusion_into_extension(a: PolyNormedSpace, b: PolyNormedSpace) -> LinearMap:
    rows = [tuple(ONE if c == r else ZERO for c in range(a.dim)) for r in range(a.dim)]
    rows += [tuple(ZERO for _ in range(a.dim)) for _ in range(b.dim - a.dim)]
    return LinearMap(a, b, Matrix.from_rows(rows, cols=a.dim))


def extension_space(a: PolyNormedSpace, w) -> PolyNormedSpace:
    """One-dimension extension of a: ball conv(B_a x {0} u {-w, w})."""
    gens = [v + (ZERO,) for v in a.vertices]
    gens.append(tuple(w))
    return make_space(gens)


class ChallengeCatalog:
    """Deterministic dovetailed enumeration of finite extension problems.

    Per-stage payload streams (interleaving kinds and subspace dimensions,
    small vectors first) are consumed round-robin across the existing
    stages, so that within the caps every challenge is eventually emitted.
    """

    def __init__(self, dim_cap: int, qcap: int):
        self.dim_cap = dim_cap
        self.qcap = qcap
        self._streams: dict[int, object] = {}
        self._rr = 0
        self._next_cid = 0
        self._approx_enqueued = 0
        self._seen: set = set()

    def _stage_stream(self, space: PolyNormedSpace):
        subs = []
        top = min(self.dim_cap, space.dim)
        for dim_a in range(1, top + 1):
            subs.append(self._exact_payloads(space, dim_a))
            subs.append(self._approx_payloads(space, dim_a))
        if not subs:
            return
        i = 0
        while True:
            yield next(subs[i % len(subs)])
            i += 1

    def _basis_stream(self, space: PolyNormedSpace, dim_a: int):
        vectors = _Prefix(catalog_vectors(space.dim, self.qcap))
        for idxs in _ascending_tuples(dim_a):
            cols = [vectors[i] for i in idxs]
            m = Matrix.from_cols(cols, rows=space.dim)
            if rank(m) == dim_a:
                yield m

    def _exact_payloads(self, space: PolyNormedSpace, dim_a: int):
        bases = _Prefix(self._basis_stream(space, dim_a))
        extensions = _Prefix(
            v for v in catalog_vectors(dim_a + 1, self.qcap) if v[dim_a] != 0
        )
        for i, j in _pair_indices():
            yield {"kind": EXACT, "basis": bases[i], "w": extensions[j]}

    def _approx_payloads(self, space: PolyNormedSpace, dim_a: int):
        bases = _Prefix(self._basis_stream(space, dim_a))
        for i, j in _pair_indices():
            yield {"kind": APPROX, "basis": bases[i], "perturb": j}

    def next_challenge(self, state, attempts: int = 60) -> Optional[Challenge]:
        if state.stage_count == 0:
            return None
        for _ in range(attempts):
            view_idx = self._rr % state.stage_count
            self._rr += 1
            true_idx = view_idx + state.offset
            space = state.stage_space(view_idx)
            stream = self._streams.get(true_idx)
            if stream is None:
                stream = self._stage_stream(space)
                self._streams[true_idx] = stream
            try:
                payload = next(stream)
            except (StopIteration, TypeError):
                continue
            challenge = self._materialize(payload, true_idx, space)
            if challenge is None:
                continue
            key = (
                challenge.stage,
                challenge.kind,
                challenge.a.space_id,
                challenge.b.space_id if challenge.b else None,
                challenge.u.entries,
                challenge.tolerance,
            )
            if key in self._seen:
                continue
            self._seen.add(key)
            return challenge
        return None

    def _materialize(self, payload: dict, true_idx: int, space: PolyNormedSpace) -> Optional[Challenge]:
        basis: Matrix = payload["basis"]
        try:
            a, _ = subspace(space, basis)
        except (DegenerateInputError, RejectedInputError):
            return None
        if payload["kind"] == EXACT:
            b = extension_space(a, payload["w"])
            challenge = Challenge(self._next_cid, EXACT, true_idx, a, b, basis, None)
            self._next_cid += 1
            return challenge
        tolerance = Q(1, 2 ** (self._approx_enqueued + 1))
        entries = space.dim * a.dim
        slot = payload["perturb"]
        r, c = divmod(slot % entries, a.dim)
        sign = ONE if (slot // entries) % 2 == 0 else -ONE
        delta = tolerance / 2
        for _ in range(3):
            grid = [list(row) for row in basis.entries]
            grid[r][c] = grid[r][c] + sign * delta
            u = Matrix.from_rows([tuple(row) for row in grid], cols=a.dim)
            candidate = LinearMap(a, space, u)
            if isometry_constants(candidate).is_eps_isometry(tolerance):
                challenge = Challenge(self._next_cid, APPROX, true_idx, a, None, u, tolerance)
                self._next_cid += 1
                self._approx_enqueued += 1
                return challenge
            delta = delta / 2
        return None


def challenge_from_json(data: dict) -> Challenge:
    a = space_from_json(data["a"])
    b = space_from_json(data["b"]) if data.get("b") else None
    u = Matrix.from_json(data["u"])
    tolerance = qparse(data["tolerance"]) if data.get("tolerance") else None
    return Challenge(int(data["cid"]), data["kind"], int(data["stage"]), a, b, u, tolerance)


# ---------------------------------------------------------------------------
# second-player strategies (normed game)


def _player_for_round(rnd: int) -> str:
    return EVE if rnd % 2 == 0 else ODD


def _identity_move(state, rnd: int, note: str) -> Move:
    space = state.last_space()
    if state.kind == KIND_METRIC:
        link = identity_embedding(space)
    else:
        link = identity_map(space)
    return Move(_player_for_round(rnd), rnd, space, link, {"action": note})


class OddGurarii:
    """Answer queued extension problems by amalgamating them into the chain.

    Exact extensions are answered by the pushout of (A -> B, A -> E_last);
    approximate corrections by the correction amalgam at the scheduled
    tolerance, whose canonical embeddings provide both the new link and the
    certified map.
    """

    kind = "markov-with-queue"

    def __init__(self, config: GameConfig, rng: random.Random, partner_growth: int = 1):
        self.config = config
        self.catalog = ChallengeCatalog(config.catalog_dim_cap, config.catalog_denominator_cap)
        self.queue: deque[Challenge] = deque()
        self.partner_growth = partner_growth

    def _may_emit(self, state, growth_hint: int) -> bool:
        dim_now = state.last_space().dim
        pending = sum(c.growth for c in self.queue)
        allowance = (len(self.queue) + 1) * self.partner_growth
        return dim_now + pending + growth_hint + allowance <= self.config.max_dim

    def propose(self, state, rnd: int) -> Move:
        events = {"emitted": [], "dequeued": None, "depth_after": 0}
        while len(self.queue) < self.config.max_queue and self._may_emit(state, self.config.catalog_dim_cap):
            challenge = self.catalog.next_challenge(state)
            if challenge is None:
                break
            self.queue.append(challenge)
            events["emitted"].append(challenge.to_json())
        if self.queue:
            challenge = self.queue.popleft()
            events["dequeued"] = challenge.cid
            move, certificate = self._answer(state, rnd, challenge)
            move.annotations["certificates"] = [certificate]
        else:
            move = _identity_move(state, rnd, "idle")
        events["depth_after"] = len(self.queue)
        move.annotations["queue"] = events
        return move

    def _answer(self, state, rnd: int, challenge: Challenge):
        last = state.stage_count - 1
        view_m = challenge.stage - state.offset
        u_map = LinearMap(challenge.a, state.stage_space(view_m), challenge.u)
        into_last = compose(state.composite(view_m, last), u_map)
        if challenge.kind == EXACT:
            incl = _inclusion_into_extension(challenge.a, challenge.b)
            result = pushout(incl, into_last)
            space, link, v = result.space, result.g_prime, result.f_prime
        else:
            result = correction_amalgam(into_last, challenge.tolerance)
            space, link, v = result.space, result.j, result.i
        move = Move(_player_for_round(rnd), rnd, space, link, {"action": challenge.kind})
        certificate = {
            "cid": challenge.cid,
            "kind": challenge.kind,
            "challenge": challenge.to_json(),
            "answered_at": rnd + state.offset,
            "v": v.matrix.to_json(),
            "tolerance": qstr(challenge.tolerance) if challenge.tolerance is not None else None,
        }
        return move, certificate


class OddRestricted(OddGurarii):
    """The dominated variant: every answer is pushed into the space class.

    Growth here is data-dependent (the class target's dimension is the
    facet-pair count of the raw answer), so challenges are admitted at
    construction time: the full answer is built before the challenge is
    enqueued, and both happen in the same turn or not at all.
    """

    def __init__(self, config: GameConfig, rng: random.Random, partner_growth: int = 1):
        super().__init__(config, rng, partner_growth)
        self.space_class = SPACE_CLASSES[config.rule_class or "linf"]

    def propose(self, state, rnd: int) -> Move:
        events = {"emitted": [], "dequeued": None, "depth_after": 0}
        for _ in range(8):
            challenge = self.catalog.next_challenge(state)
            if challenge is None:
                break
            try:
                move, certificate = self._answer_in_class(state, rnd, challenge)
            except DimensionGuardError:
                continue  # discarded before ever being enqueued
            events["emitted"].append(challenge.to_json())
            events["dequeued"] = challenge.cid
            move.annotations["certificates"] = [certificate]
            move.annotations["queue"] = events
            return move
        move = _identity_move(state, rnd, "idle")
        move.annotations["queue"] = events
        return move

    def _answer_in_class(self, state, rnd: int, challenge: Challenge):
        move, certificate = self._answer(state, rnd, challenge)
        raw_space, raw_link = move.space, move.link
        if len(raw_space.facets) // 2 > self.config.max_dim:
            raise DimensionGuardError("dominated stage would exceed the dimension budget")
        cube, s = self.space_class.dominate(raw_space, raw_link)
        v = Matrix.from_json(certificate["v"])
        transported = s.matrix.matmul(v)
        move = Move(move.by, move.round, cube, compose(s, raw_link), {"action": move.annotations["action"]})
        certificate = dict(certificate)
        certificate["v"] = transported.to_json()
        return move, certificate


class TrivialOdd:
    """Repeats the last stage with the identity link; never certifies anything."""

    kind = "markov"

    def __init__(self, config: GameConfig, rng: random.Random, partner_growth: int = 1):
        pass

    def propose(self, state, rnd: int) -> Move:
        return _identity_move(state, rnd, "trivial")


# ---------------------------------------------------------------------------
# first-player strategies (normed game)


class RandomEve:
    """Extends the last stage by one dimension with random rational vertices."""

    kind = "markov"

    def __init__(self, config: GameConfig, rng: random.Random, spike: bool = False):
        self.config = config
        self.rng = rng
        self.spike = spike

    def _coordinate(self) -> Q:
        if self.spike:
            num = self.rng.choice([-9, -7, -5, -3, 3, 5, 7, 9])
            den = self.rng.choice([7, 11, 13])
        else:
            num = self.rng.randint(-2, 2)
            den = self.rng.randint(1, 3)
        return Q(num, den)

    def _fresh_axis(self) -> Q:
        if self.spike:
            return Q(self.rng.choice([1, 5, 9, 13]), self.rng.choice([7, 11]))
        return Q(self.rng.randint(1, 3), self.rng.randint(1, 2))

    def propose(self, state, rnd: int) -> Move:
        last = state.last_space()
        if last.dim >= self.config.eve_max_dim:
            return _identity_move(state, rnd, "idle")
        w = tuple(self._coordinate() for _ in range(last.dim)) + (self._fresh_axis(),)
        space = make_space([v + (ZERO,) for v in last.vertices] + [w]) if last.dim else make_space([w])
        if last.dim:
            rows = [tuple(ONE if c == r else ZERO for c in range(last.dim)) for r in range(last.dim)]
            rows.append(tuple(ZERO for _ in range(last.dim)))
            link = LinearMap(last, space, Matrix.from_rows(rows, cols=last.dim))
        else:
            link = initial_link(state.kind, space)
        return Move(_player_for_round(rnd), rnd, space, link, {"action": "extend"})


class ScriptEve:
    """Plays a fixed list of one-dimension extension templates, then idles.

    Each template is a vector pattern for the new vertex; it is fitted to
    the current stage dimension (truncated or zero-padded, with the fresh
    last coordinate forced nonzero), so a fixed script stays legal no
    matter what the opponent builds.
    """

    kind = "markov"

    DEFAULT = [["1"], ["1", "1/2"], ["2", "0", "1"]]

    def __init__(self, config: GameConfig, rng: random.Random, script: list | None = None):
        self.config = config
        raw = script if script is not None else self.DEFAULT
        self.templates = [vec_parse(entry) for entry in raw]

    def propose(self, state, rnd: int) -> Move:
        k = rnd // 2
        if k >= len(self.templates):
            return _identity_move(state, rnd, "idle")
        last = state.last_space()
        template = self.templates[k]
        w = [ZERO] * (last.dim + 1)
        for i, v in enumerate(template[: last.dim + 1]):
            w[i] = v
        if w[last.dim] == 0:
            w[last.dim] = ONE
        w = tuple(w)
        space = make_space([v + (ZERO,) for v in last.vertices] + [w]) if last.dim else make_space([w])
        if last.dim:
            rows = [tuple(ONE if c == r else ZERO for c in range(last.dim)) for r in range(last.dim)]
            rows.append(tuple(ZERO for _ in range(last.dim)))
            link = LinearMap(last, space, Matrix.from_rows(rows, cols=last.dim))
        else:
            link = initial_link(state.kind, space)
        return Move(_player_for_round(rnd), rnd, space, link, {"action": "script"})


class ClassRandomEve:
    """Random first player confined to the sup-norm cube class."""

    kind = "markov"

    def __init__(self, config: GameConfig, rng: random.Random):
        self.config = config
        self.rng = rng

    def propose(self, state, rnd: int) -> Move:
        last = state.last_space()
        if last.dim == 0:
            space = linf_space(1)
            return Move(_player_for_round(rnd), rnd, space, initial_link(state.kind, space), {"action": "extend"})
        if last.dim >= self.config.eve_max_dim or self.rng.random() < Q(1, 3):
            return _identity_move(state, rnd, "idle")
        space = linf_space(last.dim + 1)
        rows = [tuple(ONE if c == r else ZERO for c in range(last.dim)) for r in range(last.dim)]
        rows.append(tuple(ZERO for _ in range(last.dim)))
        link = LinearMap(last, space, Matrix.from_rows(rows, cols=last.dim))
        return Move(_player_for_round(rnd), rnd, space, link, {"action": "extend"})


def l1_chain_json(depth: int) -> list:
    """Target chain l1^1 c l1^2 c ... c l1^depth with coordinate inclusions."""
    chain = []
    for k in range(1, depth + 1):
        entry: dict = {"space": l1_space(k).to_json()}
        if k > 1:
            rows = [[qstr(1 if c == r else 0) for c in range(k - 1)] for r in range(k - 1)]
            rows.append([qstr(0)] * (k - 1))
            entry["link"] = rows
        else:
            entry["link"] = None
        chain.append(entry)
    return chain


class EveUniversality:
    """Embed a prescribed chain into the play, one stage per own move.

    After the opponent's move at round 2k+1, the pushout of
    (X_k -> X_{k+1}, X_k -> E_{2k+1}) is played, and the fresh leg is
    recorded as the embedding of X_{k+1}; consecutive records extend each
    other exactly through the chain links.
    """

    kind = "general"

    def __init__(self, config: GameConfig, rng: random.Random, chain: list | None = None):
        data = chain if chain is not None else (config.target_chain or l1_chain_json(3))
        self.spaces = [space_from_json(entry["space"]) for entry in data]
        self.links: list[LinearMap | None] = [None]
        for k in range(1, len(self.spaces)):
            matrix = Matrix.from_json(data[k]["link"], rows=self.spaces[k].dim, cols=self.spaces[k - 1].dim)
            link = LinearMap(self.spaces[k - 1], self.spaces[k], matrix)
            if not is_isometric_embedding(link).ok:
                raise RejectedInputError("target chain link is not isometric")
            self.links.append(link)
        self.embeddings: list[LinearMap] = []

    def propose(self, state, rnd: int) -> Move:
        if rnd == 0:
            space = self.spaces[0]
            self.embeddings = [identity_map(space)]
            move = Move(EVE, 0, space, initial_link(state.kind, space), {"action": "universality"})
            move.annotations["universality"] = {"k": 0, "embedding": self.embeddings[0].matrix.to_json()}
            return move
        k = rnd // 2
        if k >= len(self.spaces):
            return _identity_move(state, rnd, "idle")
        previous = self.embeddings[k - 1]  # X_{k-1} -> E_{2(k-1)}
        into_last = compose(state.composite(2 * (k - 1), rnd - 1), previous)
        result = pushout(self.links[k], into_last)
        move = Move(EVE, rnd, result.space, result.g_prime, {"action": "universality"})
        self.embeddings.append(result.f_prime)
        move.annotations["universality"] = {"k": k, "embedding": result.f_prime.matrix.to_json()}
        return move


class MirrorEve:
    """Plays a fixed seed space, then replays a second-player strategy
    shifted by one stage (the uniqueness argument's harness)."""

    kind = "general"

    def __init__(self, inner, config: GameConfig):
        self.inner = inner
        self.config = config
        self.seed_space = config.seed_space or l1_space(1).to_json()

    def propose(self, state, rnd: int) -> Move:
        if rnd == 0:
            if state.kind == KIND_METRIC:
                space = metric_from_json(self.seed_space)
            else:
                space = space_from_json(self.seed_space)
            return Move(EVE, 0, space, initial_link(state.kind, space), {"action": "seed"})
        inner_move = self.inner.propose(state.shifted(1), rnd - 1)
        return Move(EVE, rnd, inner_move.space, inner_move.link, inner_move.annotations)


# ---------------------------------------------------------------------------
# metric-game strategies


@dataclass
class MetricChallenge:
    cid: int
    stage: int
    values: tuple

    def to_json(self) -> dict:
        return {"cid": self.cid, "kind": "katetov", "stage": self.stage, "values": vec_str(self.values)}


class KatetovCatalog:
    """Round-robin dovetailing of admissible profiles over the small stages."""

    def __init__(self, qcap: int, stage_size_cap: int):
        self.qcap = qcap
        self.stage_size_cap = stage_size_cap
        self._streams: dict[int, object] = {}
        self._rr = 0
        self._next_cid = 0
        self._seen: set = set()

    def next_challenge(self, state, attempts: int = 40) -> Optional[MetricChallenge]:
        if state.stage_count == 0:
            return None
        for _ in range(attempts):
            view_idx = self._rr % state.stage_count
            self._rr += 1
            space = state.stage_space(view_idx)
            if space.size == 0 or space.size > self.stage_size_cap:
                continue
            true_idx = view_idx + state.offset
            stream = self._streams.get(true_idx)
            if stream is None:
                stream = katetov_profiles(space, self.qcap)
                self._streams[true_idx] = stream
            profile = next(stream)
            key = (true_idx, profile.values)
            if key in self._seen:
                continue
            self._seen.add(key)
            challenge = MetricChallenge(self._next_cid, true_idx, profile.values)
            self._next_cid += 1
            return challenge
        return None


class OddUrysohn:
    """Realize queued one-point distance profiles exactly, oldest first."""

    kind = "markov-with-queue"

    def __init__(self, config: GameConfig, rng: random.Random, partner_growth: int = 1):
        self.config = config
        self.catalog = KatetovCatalog(config.catalog_denominator_cap, config.catalog_stage_size_cap)
        self.queue: deque[MetricChallenge] = deque()
        self.partner_growth = partner_growth

    def _may_emit(self, state) -> bool:
        size_now = state.last_space().size
        pending = len(self.queue)
        allowance = (len(self.queue) + 1) * self.partner_growth
        return size_now + pending + 1 + allowance <= self.config.max_points

    def propose(self, state, rnd: int) -> Move:
        events = {"emitted": [], "dequeued": None, "depth_after": 0}
        while len(self.queue) < self.config.max_queue and self._may_emit(state):
            challenge = self.catalog.next_challenge(state)
            if challenge is None:
                break
            self.queue.append(challenge)
            events["emitted"].append(challenge.to_json())
        if self.queue:
            challenge = self.queue.popleft()
            events["dequeued"] = challenge.cid
            move, certificate = self._answer(state, rnd, challenge)
            move.annotations["certificates"] = [certificate]
        else:
            move = _identity_move(state, rnd, "idle")
        events["depth_after"] = len(self.queue)
        move.annotations["queue"] = events
        return move

    def _answer(self, state, rnd: int, challenge: MetricChallenge):
        last = state.stage_count - 1
        view_m = challenge.stage - state.offset
        base = state.stage_space(view_m)
        into_last = state.composite(view_m, last)
        target = state.last_space()
        transported = katetov_transport(base, KatetovFunction(challenge.values), into_last.assignment, target)
        space = one_point_extension(target, transported)
        link = MetricEmbedding(target, space, tuple(range(target.size)))
        move = Move(_player_for_round(rnd), rnd, space, link, {"action": "katetov"})
        certificate = {
            "cid": challenge.cid,
            "kind": "katetov",
            "challenge": challenge.to_json(),
            "answered_at": rnd + state.offset,
            "point": space.points[-1],
        }
        return move, certificate


class RandomMetricEve:
    """Adds one point at random admissible rational distances each turn."""

    kind = "markov"

    def __init__(self, config: GameConfig, rng: random.Random):
        self.config = config
        self.rng = rng

    def propose(self, state, rnd: int) -> Move:
        last = state.last_space()
        if last.size == 0:
            space = make_metric(("p0",), ((ZERO,),))
            return Move(EVE, rnd, space, initial_link(state.kind, space), {"action": "extend"})
        if last.size >= self.config.eve_max_points:
            return _identity_move(state, rnd, "idle")
        values: list[Q] = []
        for i in range(last.size):
            lo = max((abs(values[j] - last.d(i, j)) for j in range(i)), default=ZERO)
            hi = min((values[j] + last.d(i, j) for j in range(i)), default=None)
            if hi is None:
                pick = Q(self.rng.randint(1, 4), self.rng.choice([1, 2]))
            else:
                t = Q(self.rng.choice([1, 2, 3]), 4)
                pick = lo + (hi - lo) * t
                if pick == 0:
                    pick = hi / 2
            values.append(pick)
        kappa = KatetovFunction(tuple(values))
        if not katetov_verdict(last, kappa.values).ok:
            raise AssertionError("interval construction produced an inadmissible profile")
        space = one_point_extension(last, kappa, label=f"e{rnd}")
        link = MetricEmbedding(last, space, tuple(range(last.size)))
        return Move(EVE, rnd, space, link, {"action": "extend"})


# ---------------------------------------------------------------------------
# strategy registry


def build_eve_strategy(spec: dict, config: GameConfig, role: str = "eve"):
    rng = random.Random(f"{config.seed}:{role}")
    kind = spec.get("kind", "random")
    if config.kind == KIND_METRIC:
        if kind == "random":
            return RandomMetricEve(config, rng)
        raise RejectedInputError(f"unknown metric eve strategy {kind!r}")
    if kind == "random":
        return RandomEve(config, rng)
    if kind == "adversarial-spike":
        return RandomEve(config, rng, spike=True)
    if kind == "script":
        return ScriptEve(config, rng, script=spec.get("script"))
    if kind == "class-random":
        return ClassRandomEve(config, rng)
    if kind == "universality":
        return EveUniversality(config, rng, chain=spec.get("chain"))
    raise RejectedInputError(f"unknown eve strategy {kind!r}")


def build_odd_strategy(spec: dict, config: GameConfig, role: str = "odd", partner_growth: int = 1):
    rng = random.Random(f"{config.seed}:{role}")
    kind = spec.get("kind", "gurarii")
    if config.kind == KIND_METRIC:
        if kind in ("urysohn", "gurarii"):
            return OddUrysohn(config, rng, partner_growth)
        if kind == "trivial":
            return TrivialOdd(config, rng)
        raise RejectedInputError(f"unknown metric odd strategy {kind!r}")
    if kind == "gurarii":
        return OddGurarii(config, rng, partner_growth)
    if kind == "restricted":
        return OddRestricted(config, rng, partner_growth)
    if kind == "trivial":
        return TrivialOdd(config, rng)
    raise RejectedInputError(f"unknown odd strategy {kind!r}")


def run_game(config: GameConfig) -> GameTranscript:
    """Build both strategies from the configuration and play it out."""
    from .game import play

    eve = build_eve_strategy(config.eve, config)
    odd = build_odd_strategy(config.odd, config)
    return play(eve, odd, config.rounds, config)


# ---------------------------------------------------------------------------
# certificate checking


@dataclass
class CertReport:
    passed: bool
    reasons: list
    emitted: int
    dequeued: int
    certified: int
    never_processed: list
    latencies: dict
    tolerance_sum: Q
    coverage: Optional[dict] = None

    def to_json(self) -> dict:
        body = {
            "passed": self.passed,
            "reasons": self.reasons,
            "emitted": self.emitted,
            "dequeued": self.dequeued,
            "certified": self.certified,
            "never_processed": self.never_processed,
            "latencies": self.latencies,
            "tolerance_sum": qstr(self.tolerance_sum),
        }
        if self.coverage is not None:
            body["coverage"] = self.coverage
        return body


def _queue_replay(transcript: GameTranscript, owner: str):
    """Re-run the FIFO bookkeeping from the move annotations."""
    reasons = []
    fifo: list[int] = []
    enqueue_turn: dict[int, int] = {}
    bound: dict[int, int] = {}
    challenges: dict[int, dict] = {}
    dequeues: list[tuple[int, int]] = []  # (cid, turn ordinal)
    latencies: dict[int, int] = {}
    turn = -1
    strategy_moves = 0
    for move in transcript.moves:
        if move.by != owner:
            continue
        strategy_moves += 1
        events = move.annotations.get("queue")
        if events is None:
            continue
        turn += 1
        for data in events.get("emitted", []):
            cid = int(data["cid"])
            fifo.append(cid)
            enqueue_turn[cid] = turn
            bound[cid] = len(fifo)
            challenges[cid] = data
        dequeued = events.get("dequeued")
        if dequeued is not None:
            cid = int(dequeued)
            if not fifo or fifo[0] != cid:
                reasons.append(f"FIFO discipline violated at cid {cid}")
            else:
                fifo.pop(0)
            latency = turn - enqueue_turn.get(cid, turn)
            latencies[cid] = latency
            if latency > bound.get(cid, 0):
                reasons.append(f"latency bound violated for cid {cid}: {latency} > {bound.get(cid)}")
            dequeues.append((cid, turn))
    total_turns = turn + 1
    for cid in fifo:
        if total_turns - 1 - enqueue_turn[cid] >= bound[cid]:
            reasons.append(f"challenge {cid} became overdue without being processed")
    if not dequeues and strategy_moves >= 2:
        reasons.append("no challenges processed over the whole play")
    return reasons, challenges, dequeues, fifo, latencies


def check_certificates(transcript: GameTranscript, owner: str = ODD) -> CertReport:
    """Re-verify every certificate exactly and audit the queue discipline."""
    if transcript.kind() == KIND_METRIC:
        return _check_metric_certificates(transcript, owner)
    return _check_normed_certificates(transcript, owner)


def _stage_links(transcript: GameTranscript):
    state = GameState(transcript.config)
    for move in transcript.moves:
        state.append(move)
    return state


def _check_normed_certificates(transcript: GameTranscript, owner: str) -> CertReport:
    reasons, challenges, dequeues, pending, latencies = _queue_replay(transcript, owner)
    state = _stage_links(transcript)
    certs = {c["cid"]: c for c in transcript.certificates() if c["owner"] == owner}
    tolerance_sum = ZERO
    approx_ordinal = 0
    certified = 0
    for cid, _ in dequeues:
        cert = certs.get(cid)
        if cert is None:
            reasons.append(f"challenge {cid} was dequeued but never certified")
            continue
        try:
            challenge = challenge_from_json(cert["challenge"])
            stage_m = state.stage_space(challenge.stage)
            n = int(cert["answered_at"])
            stage_n = state.stage_space(n)
            u_map = LinearMap(challenge.a, stage_m, challenge.u)
            if not isometry_constants(u_map).is_eps_isometry(challenge.tolerance or ZERO):
                reasons.append(f"certificate {cid}: stored u is not within its tolerance")
                continue
            link = state.composite(challenge.stage, n)
            target = compose(link, u_map)
            if challenge.kind == EXACT:
                incl = _inclusion_into_extension(challenge.a, challenge.b)
                if not is_isometric_embedding(incl).ok:
                    reasons.append(f"certificate {cid}: A is not isometrically included in B")
                    continue
                v = LinearMap(challenge.b, stage_n, Matrix.from_json(cert["v"], rows=stage_n.dim, cols=challenge.b.dim))
                if not is_isometric_embedding(v).ok:
                    reasons.append(f"certificate {cid}: answer map is not isometric")
                    continue
                if compose(v, incl).matrix.entries != target.matrix.entries:
                    reasons.append(f"certificate {cid}: extension square does not commute exactly")
                    continue
            else:
                tolerance = challenge.tolerance
                approx_ordinal += 1
                if tolerance != Q(1, 2**approx_ordinal):
                    reasons.append(
                        f"certificate {cid}: tolerance {tolerance} is not 2^-{approx_ordinal} per the schedule"
                    )
                tolerance_sum += tolerance
                v = LinearMap(challenge.a, stage_n, Matrix.from_json(cert["v"], rows=stage_n.dim, cols=challenge.a.dim))
                if not is_isometric_embedding(v).ok:
                    reasons.append(f"certificate {cid}: corrected map is not isometric")
                    continue
                if op_distance(v, target) > tolerance:
                    reasons.append(f"certificate {cid}: correction misses its tolerance")
                    continue
            certified += 1
        except Exception as exc:  # defensive: malformed certificate payloads
            reasons.append(f"certificate {cid}: verification error: {exc}")
    if tolerance_sum >= 2:
        reasons.append("tolerances do not sum below 2")
    passed = not reasons
    return CertReport(
        passed=passed,
        reasons=reasons,
        emitted=len(challenges),
        dequeued=len(dequeues),
        certified=certified,
        never_processed=pending,
        latencies=latencies,
        tolerance_sum=tolerance_sum,
    )


def _check_metric_certificates(transcript: GameTranscript, owner: str) -> CertReport:
    reasons, challenges, dequeues, pending, latencies = _queue_replay(transcript, owner)
    state = _stage_links(transcript)
    certs = {c["cid"]: c for c in transcript.certificates() if c["owner"] == owner}
    certified = 0
    for cid, _ in dequeues:
        cert = certs.get(cid)
        if cert is None:
            reasons.append(f"challenge {cid} was dequeued but never certified")
            continue
        try:
            data = cert["challenge"]
            m = int(data["stage"])
            values = vec_parse(data["values"])
            base = state.stage_space(m)
            if not katetov_verdict(base, values).ok:
                reasons.append(f"certificate {cid}: stored profile is not admissible")
                continue
            n = int(cert["answered_at"])
            stage_n = state.stage_space(n)
            point = cert["point"]
            if point not in stage_n.points:
                reasons.append(f"certificate {cid}: realized point missing from the stage")
                continue
            p = stage_n.points.index(point)
            into_n = state.composite(m, n)
            exact = all(
                stage_n.d(p, into_n.apply(i)) == values[i] for i in range(base.size)
            )
            if not exact:
                reasons.append(f"certificate {cid}: realized distances do not match the profile")
                continue
            certified += 1
        except Exception as exc:
            reasons.append(f"certificate {cid}: verification error: {exc}")
    coverage = {
        "emitted": len(challenges),
        "realized": certified,
        "fraction": qstr(Q(certified, len(challenges))) if challenges else "0",
    }
    passed = not reasons
    return CertReport(
        passed=passed,
        reasons=reasons,
        emitted=len(challenges),
        dequeued=len(dequeues),
        certified=certified,
        never_processed=pending,
        latencies=latencies,
        tolerance_sum=ZERO,
        coverage=coverage,
    )


def check_universality(transcript: GameTranscript) -> dict:
    """Verify the first player's recorded chain embeddings: isometric and
    commuting with the target-chain links, exactly."""
    chain = transcript.config.target_chain or l1_chain_json(3)
    spaces = [space_from_json(entry["space"]) for entry in chain]
    links: list[Optional[Matrix]] = [None]
    for k in range(1, len(spaces)):
        links.append(Matrix.from_json(chain[k]["link"], rows=spaces[k].dim, cols=spaces[k - 1].dim))
    state = _stage_links(transcript)
    records: dict[int, Matrix] = {}
    reasons = []
    for move in transcript.moves:
        note = move.annotations.get("universality")
        if note is None:
            continue
        k = int(note["k"])
        records[k] = Matrix.from_json(note["embedding"], rows=move.space.dim, cols=spaces[k].dim)
    expected = min(len(spaces), (len(transcript.moves) + 1) // 2)
    for k in range(expected):
        if k not in records:
            reasons.append(f"no embedding of chain stage {k} was recorded by round {2 * k}")
            continue
        e_k = LinearMap(spaces[k], state.stage_space(2 * k), records[k])
        if not is_isometric_embedding(e_k).ok:
            reasons.append(f"recorded embedding of chain stage {k} is not isometric")
        if k > 0:
            prev = LinearMap(spaces[k - 1], state.stage_space(2 * (k - 1)), records[k - 1])
            lhs = compose(e_k, LinearMap(spaces[k - 1], spaces[k], links[k]))
            rhs = compose(state.composite(2 * (k - 1), 2 * k), prev)
            if lhs.matrix.entries != rhs.matrix.entries:
                reasons.append(f"embeddings of chain stages {k - 1} and {k} do not commute")
    return {"passed": not reasons, "reasons": reasons, "recorded": sorted(records)}
