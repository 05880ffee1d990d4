"""Command-line interface: thin client over the service handlers.

Exit codes: 0 success/pass, 1 counterexample or violation found,
2 usage error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .errors import BudgetError, ToolkitError
from .harness import THEOREM_IDS
from .io import dumps
from .service import UsageError, run_operation

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):           # argparse default exits with 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser, *, space: bool = True) -> None:
    if space:
        p.add_argument("--space", metavar="FILE",
                       help="space JSON file (format 1)")
        p.add_argument("--named", help="named space label")
        p.add_argument("--field", type=int, help="field size q (named spaces)")
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
    p.add_argument("--out", metavar="FILE", help="write the report here")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--jobs", type=int)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="rangecompat",
                  description="Exact toolkit for range-compatible maps on "
                              "finite matrix spaces")
    sub = top.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("space", help="build or inspect a space")
    _add_common(p)

    p = sub.add_parser("rc", help="range-compatible map spaces and map queries")
    _add_common(p)
    p.add_argument("--flavor", default="linear",
                   help="linear | additive | semilinear:i")
    p.add_argument("--action", choices=("space", "is-local", "decompose"),
                   default="space")
    p.add_argument("--map", metavar="FILE", help="map JSON file")

    p = sub.add_parser("classify", help="type detection and adapted vectors")
    _add_common(p)

    p = sub.add_parser("reflex", help="reflexive closure and bound check")
    _add_common(p)

    p = sub.add_parser("preserve", help="classify range preservers")
    _add_common(p)
    p.add_argument("--q", type=int, help="target column count (default p)")
    p.add_argument("--flavor", default="linear")

    p = sub.add_parser("enum", help="count or list subspaces")
    _add_common(p, space=False)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--dim", type=int)
    p.add_argument("--codim", type=int)
    p.add_argument("--codim-max", dest="max_codim", type=int)
    p.add_argument("--list", action="store_true",
                   help="include the spaces themselves")

    p = sub.add_parser("verify", help="run a theorem verification suite")
    p.add_argument("theorem", choices=THEOREM_IDS)
    _add_common(p, space=False)
    p.add_argument("--field", type=int)
    p.add_argument("--n", dest="rows", type=int)
    p.add_argument("--p", dest="cols", type=int)
    p.add_argument("--codim-max", dest="codim_max", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"))
    p.add_argument("--count", type=int)
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return top


def _request_from_args(args: argparse.Namespace) -> dict:
    req: dict[str, Any] = {}
    for key, val in vars(args).items():
        if key in ("command", "out", "format", "timing") or val is None:
            continue
        req[key] = val
    if getattr(args, "timing", False):
        req["timing"] = True
    if req.get("space"):
        try:
            with open(req["space"]) as fh:
                req["space"] = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read space file: {e}") from e
    if req.get("map"):
        try:
            with open(req["map"]) as fh:
                req["map"] = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read map file: {e}") from e
    return req


def render_text(data: Any, indent: int = 0) -> str:
    """Human-readable mirror of the JSON content (same keys, same order)."""
    pad = "  " * indent
    if isinstance(data, dict):
        lines = []
        for key in sorted(data):
            val = data[key]
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
        return "\n".join(lines)
    if isinstance(data, list):
        if all(not isinstance(v, (dict, list)) for v in data):
            return f"{pad}{data}"
        return "\n".join(render_text(v, indent) for v in data)
    return f"{pad}{data}"


def _emit(payload: dict, args: argparse.Namespace) -> None:
    if args.format == "text":
        text = render_text(payload) + "\n"
    else:
        text = dumps(payload)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cli_run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if args.command == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK
    try:
        req = _request_from_args(args)
        payload, violation = run_operation(args.command, req)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as e:
        print(f"budget refusal: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    _emit(payload, args)
    return EXIT_VIOLATION if violation else EXIT_OK


def main() -> None:
    raise SystemExit(cli_run())


if __name__ == "__main__":
    main()
