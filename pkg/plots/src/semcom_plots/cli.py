"""Command-line entry point: ``semcom-plots render --spec specs.json``.

Exit codes mirror the producer tool: 2 for anything wrong with the inputs
(spec file, figure kind, CSV contents), 3 for environment failures while
writing output.
"""

from __future__ import annotations

import argparse
import sys

from .errors import HeaderMismatchError, SpecError
from .figures import load_specs, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="semcom-plots",
        description="Render experiment CSVs to PNG+SVG figure pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render_cmd = sub.add_parser("render", help="render every figure in a spec file")
    render_cmd.add_argument(
        "--spec", required=True,
        help="JSON list of {csv, kind, out[, x_scale, y_scale]} objects",
    )
    args = parser.parse_args(argv)

    try:
        specs = load_specs(args.spec)
    except (SpecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for spec in specs:
        try:
            png, svg = render(spec)
        except (SpecError, HeaderMismatchError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except FileNotFoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"wrote {png} {svg}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
