"""Batch command line: play complete games, verify transcript files, serve HTTP.

Exit codes: 0 success/PASS, 2 usage error, 3 strategy abort (a diagnostic
transcript is still written), 4 failed verification, 5 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import BmgameError, GameAbort
from .game import EVE, ODD, GameConfig, GameTranscript, mirror_play, verify_transcript
from .strategies import check_certificates, check_universality, run_game

DEFAULT_PORT = 8787


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play a complete game and write the transcript")
    p.add_argument("--kind", choices=["normed", "metric"], default="normed")
    p.add_argument("--eve", default="random",
                   choices=["random", "adversarial-spike", "script", "class-random", "universality"])
    p.add_argument("--odd", default=None, choices=["gurarii", "restricted", "urysohn", "trivial"])
    p.add_argument("--class", dest="rule_class", default=None, choices=["linf"],
                   help="restrict the game to a space class")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--cap-dim", type=int, default=2, help="catalog subspace dimension cap")
    p.add_argument("--cap-denom", type=int, default=4, help="catalog denominator cap")
    p.add_argument("--max-dim", type=int, default=8)
    p.add_argument("--eve-max-dim", type=int, default=4)
    p.add_argument("--mirror", action="store_true",
                   help="ignore --eve: the second player's strategy drives both seats")

    v = sub.add_parser("verify", help="replay-validate a transcript and check its certificates")
    v.add_argument("transcript")

    s = sub.add_parser("serve", help="run the HTTP session service")
    s.add_argument("--port", type=int, default=None)
    s.add_argument("--host", default="127.0.0.1")
    return parser


def _config_from_args(args) -> GameConfig:
    kind = args.kind
    if args.rule_class and kind == "normed":
        kind = "normed-restricted"
    odd = args.odd
    if odd is None:
        odd = "urysohn" if args.kind == "metric" else ("restricted" if args.rule_class else "gurarii")
    return GameConfig(
        kind=kind,
        rounds=args.rounds,
        seed=args.seed,
        eve={"kind": args.eve},
        odd={"kind": odd},
        catalog_dim_cap=args.cap_dim,
        catalog_denominator_cap=args.cap_denom,
        max_dim=args.max_dim,
        eve_max_dim=args.eve_max_dim,
        rule_class=args.rule_class,
    )


def cmd_play(args, parser) -> int:
    if args.rounds < 1:
        parser.error("--rounds must be at least 1")
    config = _config_from_args(args)
    out = Path(args.out)
    try:
        if args.mirror:
            transcript, report = mirror_play(config.odd, config.rounds, config)
            out.write_bytes(transcript.serialize())
            both = report[ODD].passed and report[EVE].passed
            print(f"mirror certificate suites: odd={report[ODD].passed} eve={report[EVE].passed}")
            return 0 if both else 4
        transcript = run_game(config)
    except GameAbort as abort:
        if abort.transcript is not None:
            out.write_bytes(abort.transcript.serialize())
        print(f"game aborted: {abort}", file=sys.stderr)
        return 3
    out.write_bytes(transcript.serialize())
    print(f"wrote {out} ({len(transcript.moves)} moves)")
    return 0


def cmd_verify(args) -> int:
    path = Path(args.transcript)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 5
    try:
        transcript = GameTranscript.from_json(data)
    except (BmgameError, KeyError, ValueError) as exc:
        witness = getattr(exc, "witness", None)
        print(f"FAIL rebuild: {exc}" + (f" witness={witness}" if witness is not None else ""), file=sys.stderr)
        return 4
    failures = []
    structural = verify_transcript(transcript)
    print(f"replay validation: {'PASS' if structural.ok else 'FAIL'}"
          + ("" if structural.ok else f" ({structural.reason}; witness={structural.witness})"))
    if not structural.ok:
        failures.append("replay")
    owners = [ODD]
    if any(m.by == EVE and "queue" in m.annotations for m in transcript.moves):
        owners.append(EVE)
    for owner in owners:
        report = check_certificates(transcript, owner=owner)
        print(f"certificates[{owner}]: {'PASS' if report.passed else 'FAIL'} "
              f"(emitted={report.emitted} dequeued={report.dequeued} certified={report.certified})")
        for reason in report.reasons:
            print(f"  - {reason}")
        if not report.passed:
            failures.append(f"certificates[{owner}]")
    if transcript.config.target_chain:
        result = check_universality(transcript)
        print(f"universality records: {'PASS' if result['passed'] else 'FAIL'}")
        for reason in result["reasons"]:
            print(f"  - {reason}")
        if not result["passed"]:
            failures.append("universality")
    return 0 if not failures else 4


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port or int(os.environ.get("BMGAME_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(), host=args.host, port=port)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "play":
        return cmd_play(args, parser)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
