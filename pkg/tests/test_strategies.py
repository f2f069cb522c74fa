import json

from bmgame.amalgam import LINF_CLASS
from bmgame.game import EVE, ODD, GameConfig, GameState, GameTranscript, Move, initial_link, mirror_play
from bmgame.linalg import Matrix
from bmgame.ratio import Q
from bmgame.spaces import l1_space, norm
from bmgame.strategies import (
    APPROX,
    EXACT,
    ChallengeCatalog,
    build_eve_strategy,
    build_odd_strategy,
    check_certificates,
    check_universality,
    l1_chain_json,
    run_game,
)


def state_with_stage(space):
    state = GameState(GameConfig())
    move = Move(EVE, 0, space, initial_link("normed", space))
    state.append(move)
    return state


def test_catalog_first_exact_challenge_is_the_l1_pair():
    state = state_with_stage(l1_space(1))
    catalog = ChallengeCatalog(2, 2)
    first = catalog.next_challenge(state)
    assert first.kind == EXACT
    assert first.stage == 0
    assert first.a.dim == 1 and sorted(first.a.vertices) == [(Q(-1),), (Q(1),)]
    assert first.b.dim == 2
    assert sorted(first.b.vertices) == sorted(l1_space(2).vertices)
    assert first.u.entries == ((1,),)


def test_catalog_caps_restrict_dimensions():
    state = state_with_stage(l1_space(2))
    catalog = ChallengeCatalog(1, 1)
    for _ in range(6):
        ch = catalog.next_challenge(state)
        assert ch.a.dim == 1


def test_catalog_stream_is_deterministic():
    def stream(n):
        state = state_with_stage(l1_space(2))
        catalog = ChallengeCatalog(2, 4)
        return [json.dumps(catalog.next_challenge(state).to_json(), sort_keys=True) for _ in range(n)]

    assert stream(8) == stream(8)


def test_catalog_alternates_kinds_with_schedule():
    state = state_with_stage(l1_space(1))
    catalog = ChallengeCatalog(2, 2)
    kinds = []
    tolerances = []
    for _ in range(6):
        ch = catalog.next_challenge(state)
        kinds.append(ch.kind)
        if ch.kind == APPROX:
            tolerances.append(ch.tolerance)
    assert EXACT in kinds and APPROX in kinds
    assert tolerances == [Q(1, 2 ** (k + 1)) for k in range(len(tolerances))]


def test_gurarii_first_move_realizes_the_extension():
    config = GameConfig(rounds=2, seed=0, eve={"kind": "script", "script": [["1"]]})
    transcript = run_game(config)
    odd_move = transcript.moves[1]
    certs = odd_move.annotations.get("certificates")
    assert certs and certs[0]["kind"] == EXACT
    report = check_certificates(transcript, owner=ODD)
    assert report.passed
    assert report.certified >= 1


def test_gurarii_vs_random_eve_full_audit():
    config = GameConfig(rounds=10, seed=7)
    transcript = run_game(config)
    report = check_certificates(transcript, owner=ODD)
    assert report.passed, report.reasons
    assert report.certified >= 2
    assert all(lat <= 3 for lat in report.latencies.values())


def test_gurarii_respects_dimension_budget():
    config = GameConfig(rounds=14, seed=9, max_dim=6)
    transcript = run_game(config)
    assert max(m.space.dim for m in transcript.moves) <= 6
    assert check_certificates(transcript, owner=ODD).passed


def test_trivial_odd_fails_certification():
    config = GameConfig(rounds=6, seed=1, odd={"kind": "trivial"})
    transcript = run_game(config)
    report = check_certificates(transcript, owner=ODD)
    assert not report.passed


def test_corrupted_certificate_detected():
    config = GameConfig(rounds=6, seed=4)
    transcript = run_game(config)
    data = transcript.to_json()
    for move in data["moves"]:
        certs = move["annotations"].get("certificates", [])
        if certs:
            matrix = certs[0]["v"]
            matrix[0][0] = "9/8"
            break
    corrupted = GameTranscript.from_json(data)
    report = check_certificates(corrupted, owner=ODD)
    assert not report.passed


def test_restricted_strategy_stays_in_class():
    config = GameConfig(
        kind="normed-restricted",
        rounds=8,
        seed=3,
        eve={"kind": "class-random"},
        odd={"kind": "restricted"},
        rule_class="linf",
        max_dim=10,
        eve_max_dim=2,
    )
    transcript = run_game(config)
    for move in transcript.moves:
        assert LINF_CLASS.contains(move.space), f"round {move.round} left the class"
    report = check_certificates(transcript, owner=ODD)
    assert report.passed, report.reasons
    assert report.certified >= 1


def test_universality_records_commute():
    config = GameConfig(
        rounds=6,
        seed=5,
        eve={"kind": "universality"},
        target_chain=l1_chain_json(3),
    )
    transcript = run_game(config)
    result = check_universality(transcript)
    assert result["passed"], result["reasons"]
    assert result["recorded"] == [0, 1, 2]


def test_universality_embedding_is_exact_copy():
    config = GameConfig(rounds=4, seed=6, eve={"kind": "universality"}, target_chain=l1_chain_json(2))
    transcript = run_game(config)
    ann = transcript.moves[2].annotations["universality"]
    assert ann["k"] == 1
    e1 = Matrix.from_json(ann["embedding"])
    x1 = l1_space(2)
    stage = transcript.moves[2].space
    for v in x1.vertices:
        assert norm(stage, e1.mul_vec(v)) == 1


def test_mirror_play_gurarii_both_sides_pass():
    config = GameConfig(rounds=8, seed=12)
    transcript, report = mirror_play({"kind": "gurarii"}, 8, config)
    assert report[ODD].passed, report[ODD].reasons
    assert report[EVE].passed, report[EVE].reasons
    assert report[ODD].certified >= 1
    assert report[EVE].certified >= 1


def test_adversarial_spike_eve_plays_valid_moves():
    config = GameConfig(rounds=8, seed=2, eve={"kind": "adversarial-spike"})
    transcript = run_game(config)
    assert len(transcript.moves) == 8
    assert check_certificates(transcript, owner=ODD).passed
