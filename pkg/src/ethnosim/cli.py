"""`simctl`: create, run, export, replay, and serve simulation sessions.

Environment:
    ETHNOSIM_SESSIONS  default sessions directory (else ./sessions)
    MODEL_BASE_URL     chat-completions endpoint for --backend remote
    MODEL_API_KEY      bearer token for --backend remote
"""

from __future__ import annotations

import argparse
import os
import sys

from .runlog import RunLog
from .session import BACKENDS, SessionError, SessionStore, replay_records
from .server import serve


def _default_sessions_dir() -> str:
    return os.environ.get("ETHNOSIM_SESSIONS", "sessions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simctl", description="Simulation session control."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_new = sub.add_parser("new", help="create a session from a scenario file")
    p_new.add_argument("scenario", help="path to a scenario JSON file")
    p_new.add_argument("--backend", choices=list(BACKENDS), default="mock")
    p_new.add_argument("--seed", type=int, default=0)
    p_new.add_argument("--replies", default=None, help="canned replies file")
    p_new.add_argument("--sessions", default=None, help="sessions directory")

    p_run = sub.add_parser("run", help="advance a session")
    p_run.add_argument("id", help="session id")
    p_run.add_argument("--until", type=int, required=True, help="target round index")
    p_run.add_argument("--sessions", default=None)

    p_export = sub.add_parser("export", help="write the CSV tables for a session")
    p_export.add_argument("id", help="session id")
    p_export.add_argument("out_dir", help="output directory")
    p_export.add_argument("--sessions", default=None)

    p_replay = sub.add_parser(
        "replay", help="re-execute a recorded run and compare digests"
    )
    p_replay.add_argument("scenario", help="path to the scenario JSON file")
    p_replay.add_argument("runlog", help="path to the recorded runlog.jsonl")

    p_serve = sub.add_parser("serve", help="start the researcher console endpoint")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=7465)
    p_serve.add_argument("--sessions", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "new":
            store = SessionStore(args.sessions or _default_sessions_dir())
            session = store.create(
                args.scenario,
                backend=args.backend,
                seed=args.seed,
                replies_path=args.replies,
            )
            print(session.id)
            return 0

        if args.command == "run":
            store = SessionStore(args.sessions or _default_sessions_dir())
            session = store.open(args.id)
            executed = session.run_until(args.until)
            store.save(session)
            print(
                f"{session.id}: +{executed} rounds -> round {session.sim.round_index}, "
                f"digest {session.sim.runlog.final_digest[:16]}"
            )
            return 0

        if args.command == "export":
            store = SessionStore(args.sessions or _default_sessions_dir())
            session = store.open(args.id)
            manifest = session.export(args.out_dir)
            print(
                f"wrote {len(manifest['files'])} tables to {args.out_dir} "
                f"(digest {manifest['final_digest'][:16]})"
            )
            return 0

        if args.command == "replay":
            recorded = RunLog.load(args.runlog)
            _, report = replay_records(args.scenario, recorded)
            if report.chain_corrupt_round is not None:
                print(f"chain corrupt at round {report.chain_corrupt_round}")
                return 1
            if report.divergence_round is not None:
                print(f"divergence at round {report.divergence_round}")
                return 1
            print(
                f"replay ok: {report.rounds_replayed} rounds, "
                f"digest {recorded.final_digest[:16]}"
            )
            return 0

        if args.command == "serve":
            serve(
                args.sessions or _default_sessions_dir(),
                host=args.host,
                port=args.port,
            )
            return 0
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
