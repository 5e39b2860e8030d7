"""Command-line entry points: run sessions, export MIDI, check configs."""

from __future__ import annotations

import argparse
import sys
from typing import IO

from bowline.config import ConfigError, SessionConfig, load_config
from bowline.midi import export_midi
from bowline.protocol import ParseError
from bowline.session import Session, run_replay


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bowline",
        description="Deterministic interactive-music engine: one augmented "
                    "bow drives robotic drums, synth voices, and visuals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser(
        "run", help="drive a session from a socket, a replay file, or stdin"
    )
    run_p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    run_p.add_argument("--config", metavar="PATH", help="config file")
    run_p.add_argument("--listen", metavar="HOST:PORT",
                       help="serve the operator console on a WebSocket")
    run_p.add_argument("--record", metavar="PATH",
                       help="write the output log to a file")
    run_p.add_argument("--replay", metavar="PATH",
                       help="replay a recorded or synthesized log")
    run_p.add_argument("--headless", action="store_true",
                       help="no console: read frames from stdin unless "
                            "--replay is given")

    midi_p = sub.add_parser("export-midi",
                            help="convert a session log's NOTE lines to MIDI")
    midi_p.add_argument("--in", dest="in_path", metavar="LOG", required=True)
    midi_p.add_argument("--out", dest="out_path", metavar="FILE",
                        required=True)

    val_p = sub.add_parser("validate-config", help="check a config file")
    val_p.add_argument("path", metavar="PATH")
    return parser


def _parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    return (host or "0.0.0.0", int(port))


def _run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config) if args.config else SessionConfig()
    except ConfigError as exc:
        for error in exc.errors:
            print(f"config: {error}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config.seed = args.seed
    if args.listen:
        try:
            config.listen_address = _parse_listen(args.listen)
        except ValueError:
            print(f"bad --listen address: {args.listen}", file=sys.stderr)
            return 2
    config.record_path = args.record or config.record_path
    config.replay_path = args.replay or config.replay_path
    config.headless = args.headless or config.headless
    try:
        config.validate_sources()
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2

    record: IO[str] | None = None
    if config.record_path:
        record = open(config.record_path, "w", encoding="utf-8", newline="\n")
    try:
        sinks = []
        if record is not None:
            sinks.append(lambda line: record.write(line + "\n"))
        mode = config.input_mode()
        if mode == "replay":
            if record is None:
                sinks.append(lambda line: sys.stdout.write(line + "\n"))
            try:
                run_replay(config, sinks)
            except ParseError as exc:
                print(f"replay failed: {exc}", file=sys.stderr)
                return 1
            return 0
        if mode == "headless":
            if record is None:
                sinks.append(lambda line: sys.stdout.write(line + "\n"))
            session = Session(config, sinks)
            for line in sys.stdin:
                session.feed_line(line)
            session.finish()
            if session.lines_dropped:
                n = session.lines_dropped
                print(f"dropped {n} bad input line{'s' if n != 1 else ''}",
                      file=sys.stderr)
            return 0
        # live: the socket is both input and output
        import uvicorn

        from bowline.server import create_app

        session = Session(config, sinks)
        app = create_app(session)
        host, port = config.listen_address
        uvicorn.run(app, host=host, port=port, log_level="warning")
        return 0
    finally:
        if record is not None:
            record.close()


def _export_midi(args: argparse.Namespace) -> int:
    try:
        count = export_midi(args.in_path, args.out_path)
    except (OSError, ParseError) as exc:
        print(f"export failed: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {count} notes to {args.out_path}")
    return 0


def _validate_config(args: argparse.Namespace) -> int:
    try:
        load_config(args.path)
    except ConfigError as exc:
        for error in exc.errors:
            print(error, file=sys.stderr)
        return 1
    print("ok")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    if args.command == "export-midi":
        return _export_midi(args)
    return _validate_config(args)


if __name__ == "__main__":
    sys.exit(main())
