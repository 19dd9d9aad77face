"""povs-wb: command-line client for the workbench.

Runs in-process by default; with --server URL it forwards the request to a
running service instance and prints the report it returns.

    povs-wb check --file corpus/lex_plane.wb
    povs-wb types --file corpus/open_half_plane.wb --format text
    povs-wb factor --file corpus/lex_plane.wb --map f
    povs-wb search --dim 2 --cases 200 --seed 42 --out report.json
    povs-wb serve --port 8787

Exit codes: 0 ok, 1 usage/parse error, 2 property violation, 3 capacity or
iteration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .dsl import ParseError
from .povs import DEFAULT_ITERATION_CAP, IterationCapError
from .semilin import CapacityError
from .workbench import COMMANDS, InputError, exit_code, render, run, run_search


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="povs-wb",
        description="Exact-arithmetic workbench for pre-ordered vector spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_file: bool = True):
        if needs_file:
            p.add_argument("--file", required=True, help="workbench document path")
        p.add_argument("--cap", type=int, default=DEFAULT_ITERATION_CAP,
                       help="iteration cap for closures and towers")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--server", help="base URL of a running service to do the work")

    for cmd in COMMANDS:
        p = sub.add_parser(cmd, help=f"run the {cmd} analysis")
        common(p)
        if cmd == "factor":
            p.add_argument("--map", required=True, help="name of the map to factor")

    p = sub.add_parser("search", help="randomized survey of wedge types")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    common(p, needs_file=False)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    return parser


def _remote(server: str, command: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + "/" + command
    resp = httpx.post(url, json=payload, timeout=600.0)
    if resp.status_code != 200:
        raise InputError(f"server returned {resp.status_code}: {resp.text}")
    return resp.json()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        if args.command == "search":
            if args.server:
                payload = {"dim": args.dim, "cases": args.cases, "seed": args.seed, "cap": args.cap}
                envelope = _remote(args.server, "search", payload)
                report, code = envelope["report"], envelope["exit_code"]
            else:
                report = run_search(args.dim, args.cases, args.seed, cap=args.cap)
                code = exit_code(report)
        else:
            source = Path(args.file).read_text(encoding="utf-8")
            if args.server:
                payload = {"source": source, "cap": args.cap}
                if getattr(args, "map", None):
                    payload["map"] = args.map
                envelope = _remote(args.server, args.command, payload)
                report, code = envelope["report"], envelope["exit_code"]
            else:
                report = run(args.command, source, cap=args.cap,
                             map_name=getattr(args, "map", None))
                code = exit_code(report)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (CapacityError, IterationCapError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3

    _emit(render(report, args.format), args.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
