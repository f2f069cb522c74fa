import json

import pytest

from bmgame.cli import main
from bmgame.game import GameTranscript


def test_play_then_verify_roundtrip(tmp_path):
    out = tmp_path / "t.json"
    code = main(["play", "--kind", "normed", "--eve", "random", "--odd", "gurarii",
                 "--rounds", "6", "--seed", "7", "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert main(["verify", str(out)]) == 0


def test_play_zero_rounds_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["play", "--rounds", "0", "--out", str(tmp_path / "t.json")])
    assert exc.value.code == 2


def test_play_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    flags = ["play", "--rounds", "8", "--seed", "42", "--kind", "normed"]
    assert main(flags + ["--out", str(a)]) == 0
    assert main(flags + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_restricted_play_stays_in_class(tmp_path):
    out = tmp_path / "r.json"
    code = main(["play", "--kind", "normed", "--class", "linf", "--eve", "class-random",
                 "--odd", "restricted", "--rounds", "6", "--seed", "3",
                 "--max-dim", "10", "--eve-max-dim", "2", "--out", str(out)])
    assert code == 0
    from bmgame.amalgam import LINF_CLASS

    transcript = GameTranscript.from_json(json.loads(out.read_text()))
    assert all(LINF_CLASS.contains(m.space) for m in transcript.moves)
    assert main(["verify", str(out)]) == 0


def test_metric_play_and_verify(tmp_path):
    out = tmp_path / "m.json"
    assert main(["play", "--kind", "metric", "--rounds", "8", "--seed", "5", "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0


def test_verify_rejects_edited_matrix_entry(tmp_path):
    out = tmp_path / "t.json"
    assert main(["play", "--rounds", "6", "--seed", "11", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    for move in data["moves"]:
        certs = move["annotations"].get("certificates", [])
        if certs:
            certs[0]["v"][0][0] = "5/3"
            break
    out.write_text(json.dumps(data))
    assert main(["verify", str(out)]) == 4


def test_verify_empty_file_is_parse_error(tmp_path):
    bad = tmp_path / "empty.json"
    bad.write_text("")
    assert main(["verify", str(bad)]) == 5


def test_mirror_flag(tmp_path):
    out = tmp_path / "mirror.json"
    code = main(["play", "--rounds", "6", "--seed", "2", "--mirror", "--out", str(out)])
    assert code == 0
    assert main(["verify", str(out)]) == 0
