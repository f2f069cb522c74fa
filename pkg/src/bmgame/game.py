"""The alternating-extension game: moves, validation, transcripts, replay.

Two players extend a chain of spaces; the first player ("eve") owns the
even rounds, the second ("odd") the odd rounds.  A move supplies the next
space together with a link embedding the previous stage into it, and the
only rule is that the link is exactly isometric (plus, in restricted games,
that the space passes the class membership test).  Chains are represented
as direct systems — space plus isometric link — rather than literal
set inclusions, which is the faithful computable form.

Transcripts are fully self-contained JSON documents; serialization is
canonical (sorted keys, "p/q" rationals), so replaying a configuration
byte-for-byte reproduces the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import GameAbort, RejectedInputError
from .linalg import Matrix
from .maps import LinearMap, compose, identity_map, is_isometric_embedding
from .metric import (
    FinMetricSpace,
    MetricEmbedding,
    compose_embeddings,
    embedding_verdict,
    empty_metric,
    identity_embedding,
    metric_from_json,
    validate_metric,
)
from .ratio import vec_str
from .spaces import PolyNormedSpace, space_from_json, zero_space

EVE = "eve"
ODD = "odd"

KIND_NORMED = "normed"
KIND_METRIC = "metric"
KIND_RESTRICTED = "normed-restricted"


@dataclass
class GameConfig:
    kind: str = KIND_NORMED
    rounds: int = 8
    seed: int = 0
    eve: dict = field(default_factory=lambda: {"kind": "random"})
    odd: dict = field(default_factory=lambda: {"kind": "gurarii"})
    catalog_dim_cap: int = 2
    catalog_denominator_cap: int = 4
    catalog_stage_size_cap: int = 4
    max_dim: int = 8
    eve_max_dim: int = 4
    max_queue: int = 3
    max_points: int = 30
    eve_max_points: int = 6
    rule_class: Optional[str] = None
    seed_space: Optional[dict] = None
    target_chain: Optional[list] = None

    def to_json(self) -> dict:
        data = {
            "kind": self.kind,
            "rounds": self.rounds,
            "seed": self.seed,
            "eve": self.eve,
            "odd": self.odd,
            "catalog": {
                "d": self.catalog_dim_cap,
                "q": self.catalog_denominator_cap,
                "stage_size": self.catalog_stage_size_cap,
            },
            "max_dim": self.max_dim,
            "eve_max_dim": self.eve_max_dim,
            "max_queue": self.max_queue,
            "max_points": self.max_points,
            "eve_max_points": self.eve_max_points,
        }
        if self.rule_class:
            data["rule_class"] = self.rule_class
        if self.seed_space is not None:
            data["seed_space"] = self.seed_space
        if self.target_chain is not None:
            data["target_chain"] = self.target_chain
        return data

    @staticmethod
    def from_json(data: dict) -> "GameConfig":
        catalog = data.get("catalog", {})
        return GameConfig(
            kind=data.get("kind", KIND_NORMED),
            rounds=int(data["rounds"]),
            seed=int(data.get("seed", 0)),
            eve=data.get("eve", {"kind": "random"}),
            odd=data.get("odd", {"kind": "gurarii"}),
            catalog_dim_cap=int(catalog.get("d", 2)),
            catalog_denominator_cap=int(catalog.get("q", 4)),
            catalog_stage_size_cap=int(catalog.get("stage_size", 4)),
            max_dim=int(data.get("max_dim", 8)),
            eve_max_dim=int(data.get("eve_max_dim", 4)),
            max_queue=int(data.get("max_queue", 3)),
            max_points=int(data.get("max_points", 30)),
            eve_max_points=int(data.get("eve_max_points", 6)),
            rule_class=data.get("rule_class"),
            seed_space=data.get("seed_space"),
            target_chain=data.get("target_chain"),
        )


@dataclass
class Move:
    by: str
    round: int
    space: object  # PolyNormedSpace | FinMetricSpace
    link: object   # LinearMap | MetricEmbedding
    annotations: dict = field(default_factory=dict)

    def to_json(self, kind: str) -> dict:
        body = {
            "by": self.by,
            "round": self.round,
            "link": self.link.to_json(),
            "annotations": self.annotations,
        }
        if kind == KIND_METRIC:
            body["metric"] = self.space.to_json()
        else:
            body["space"] = self.space.to_json()
        return body


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


def pregame_space(kind: str):
    return empty_metric() if kind == KIND_METRIC else zero_space()


def _initial_link(kind: str, target):
    if kind == KIND_METRIC:
        return MetricEmbedding(empty_metric(), target, ())
    z = zero_space()
    return LinearMap(z, target, Matrix(target.dim, 0, tuple(() for _ in range(target.dim))))


def initial_link(kind: str, target):
    return _initial_link(kind, target)


class GameState:
    """A growing chain of validated moves plus cached composite links."""

    def __init__(self, config: GameConfig, rule_class=None):
        self.config = config
        self.kind = KIND_METRIC if config.kind == KIND_METRIC else KIND_NORMED
        self.rule_class = rule_class
        self.moves: list[Move] = []
        self._composites: dict[tuple[int, int], object] = {}
        self.offset = 0

    @property
    def stage_count(self) -> int:
        return len(self.moves)

    def stage_space(self, i: int):
        return self.moves[i].space

    def last_space(self):
        if not self.moves:
            return pregame_space(self.kind)
        return self.moves[-1].space

    def composite(self, m: int, n: int):
        """The chain link from stage m into stage n (m <= n)."""
        if m == n:
            space = self.stage_space(m)
            return identity_embedding(space) if self.kind == KIND_METRIC else identity_map(space)
        key = (m, n)
        hit = self._composites.get(key)
        if hit is None:
            step = self.moves[n].link
            rest = self.composite(m, n - 1)
            if self.kind == KIND_METRIC:
                hit = compose_embeddings(step, rest)
            else:
                hit = compose(step, rest)
            self._composites[key] = hit
        return hit

    def append(self, move: Move):
        self.moves.append(move)

    def shifted(self, k: int = 1) -> "_ShiftedState":
        return _ShiftedState(self, k)


class _ShiftedState:
    """A view of the game with the first k moves hidden and rounds renumbered.

    Lets one player's strategy drive the other seat: the strategy sees a
    game starting at true stage k.  Stage indices it reports are translated
    back to true indices through ``offset``.
    """

    def __init__(self, parent: GameState, k: int):
        self.parent = parent
        self.k = k
        self.config = parent.config
        self.kind = parent.kind
        self.rule_class = parent.rule_class
        self.offset = parent.offset + k

    @property
    def stage_count(self) -> int:
        return max(0, self.parent.stage_count - self.k)

    def stage_space(self, i: int):
        return self.parent.stage_space(i + self.k)

    def last_space(self):
        if self.stage_count == 0:
            return pregame_space(self.kind)
        return self.parent.last_space()

    def composite(self, m: int, n: int):
        return self.parent.composite(m + self.k, n + self.k)


def validate_move(state, move: Move) -> Verdict:
    """The chain rule, exactly: the link embeds the previous stage isometrically."""
    expected_round = state.stage_count
    if move.round != expected_round:
        return Verdict(False, f"round {move.round} out of order (expected {expected_round})")
    expected_by = EVE if move.round % 2 == 0 else ODD
    if move.by != expected_by:
        return Verdict(False, f"round {move.round} belongs to {expected_by}")
    previous = state.last_space()
    kind = state.kind
    if kind == KIND_METRIC:
        link: MetricEmbedding = move.link
        if link.source.space_id != previous.space_id:
            return Verdict(False, "link source is not the previous stage")
        if link.target.space_id != move.space.space_id:
            return Verdict(False, "link target is not the played space")
        metric_check = validate_metric(move.space)
        if not metric_check.ok:
            return Verdict(False, f"played space is not a metric space: {metric_check.reason}", metric_check.witness)
        emb = embedding_verdict(link)
        if not emb.ok:
            return Verdict(False, f"link is not an isometric embedding: {emb.reason}", emb.witness)
        return Verdict(True)
    link: LinearMap = move.link
    if link.source.space_id != previous.space_id:
        return Verdict(False, "link source is not the previous stage")
    if link.target.space_id != move.space.space_id:
        return Verdict(False, "link target is not the played space")
    verdict = is_isometric_embedding(link)
    if not verdict.ok:
        witness = vec_str(verdict.witness) if verdict.witness is not None else None
        return Verdict(False, "link is not an isometric embedding", witness)
    if state.rule_class is not None and not state.rule_class.contains(move.space):
        return Verdict(False, f"space fails the {state.rule_class.name} class membership test")
    return Verdict(True)


@dataclass
class GameTranscript:
    config: GameConfig
    moves: list[Move]
    diagnostic: Optional[dict] = None

    def certificates(self) -> list[dict]:
        certs = []
        for move in self.moves:
            for cert in move.annotations.get("certificates", []):
                entry = dict(cert)
                entry["owner"] = move.by
                certs.append(entry)
        return certs

    def kind(self) -> str:
        return KIND_METRIC if self.config.kind == KIND_METRIC else KIND_NORMED

    def to_json(self) -> dict:
        body = {
            "config": self.config.to_json(),
            "moves": [m.to_json(self.kind()) for m in self.moves],
            "certificates": self.certificates(),
        }
        if self.diagnostic is not None:
            body["diagnostic"] = self.diagnostic
        return body

    def serialize(self) -> bytes:
        return (json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n").encode()

    @staticmethod
    def from_json(data: dict) -> "GameTranscript":
        config = GameConfig.from_json(data["config"])
        kind = KIND_METRIC if config.kind == KIND_METRIC else KIND_NORMED
        moves: list[Move] = []
        previous = pregame_space(kind)
        for body in data["moves"]:
            if kind == KIND_METRIC:
                space = metric_from_json(body["metric"])
                link = MetricEmbedding(previous, space, tuple(body["link"]["assignment"]))
            else:
                space = space_from_json(body["space"])
                link = LinearMap(
                    previous,
                    space,
                    Matrix.from_json(body["link"]["matrix"], rows=space.dim, cols=previous.dim),
                )
            moves.append(Move(body["by"], int(body["round"]), space, link, body.get("annotations", {})))
            previous = space
        return GameTranscript(config, moves, diagnostic=data.get("diagnostic"))


def resolve_rule_class(config: GameConfig):
    if config.kind != KIND_RESTRICTED and not config.rule_class:
        return None
    from .amalgam import SPACE_CLASSES

    name = config.rule_class or "linf"
    if name not in SPACE_CLASSES:
        raise RejectedInputError(f"unknown space class {name!r}")
    return SPACE_CLASSES[name]


def play(eve, odd, rounds: int, config: GameConfig) -> GameTranscript:
    """Run a complete game; any invalid move aborts with a diagnostic transcript."""
    if rounds < 1:
        raise RejectedInputError("rounds must be at least 1")
    state = GameState(config, rule_class=resolve_rule_class(config))
    for n in range(rounds):
        actor = eve if n % 2 == 0 else odd
        move = actor.propose(state, n)
        verdict = validate_move(state, move)
        if not verdict.ok:
            diagnostic = {
                "round": n,
                "by": move.by,
                "reason": verdict.reason,
                "witness": verdict.witness,
            }
            raise GameAbort(
                f"strategy emitted an invalid move at round {n}: {verdict.reason}",
                transcript=GameTranscript(config, state.moves, diagnostic=diagnostic),
            )
        state.append(move)
    return GameTranscript(config, state.moves)


def mirror_play(sigma_spec: dict, rounds: int, config: GameConfig):
    """Uniqueness harness: the second player's strategy drives both seats.

    The first seat plays a fixed seed space and thereafter replays the same
    strategy shifted by one stage.  Returns the transcript and a two-sided
    certificate report.
    """
    from .strategies import MirrorEve, build_odd_strategy, check_certificates

    odd = build_odd_strategy(sigma_spec, config, role=ODD)
    eve = MirrorEve(build_odd_strategy(sigma_spec, config, role="eve-mirror"), config)
    transcript = play(eve, odd, rounds, config)
    report = {
        ODD: check_certificates(transcript, owner=ODD),
        EVE: check_certificates(transcript, owner=EVE),
    }
    return transcript, report


def verify_transcript(transcript: GameTranscript) -> Verdict:
    """Structural replay: re-validate every move against the reconstructed chain."""
    state = GameState(transcript.config, rule_class=resolve_rule_class(transcript.config))
    for move in transcript.moves:
        verdict = validate_move(state, move)
        if not verdict.ok:
            return Verdict(False, f"round {move.round}: {verdict.reason}", verdict.witness)
        state.append(move)
    return Verdict(True)
