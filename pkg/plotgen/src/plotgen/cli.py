"""Command line for the figure renderer.

plotgen <aggregate.csv> -o <figure.svg> [--linear-y] [--no-mp-overlay]
        [--title STR]
"""

import argparse
import sys

from . import PlotSpec, SchemaError, __version__, render_double_descent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render a double-descent condition-number figure "
                    "from a sweep's aggregate.csv.")
    parser.add_argument("input", help="aggregate.csv produced by a sweep")
    parser.add_argument("-o", "--output", required=True,
                        help="output image (.svg or .png)")
    parser.add_argument("--linear-y", action="store_true",
                        help="linear instead of log y-axis")
    parser.add_argument("--no-mp-overlay", action="store_true",
                        help="omit the theoretical prediction curve")
    parser.add_argument("--title", default=None)
    parser.add_argument("--version", action="version", version=__version__)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(input_path=args.input, output_path=args.output,
                    y_scale="linear" if args.linear_y else "log",
                    show_mp_overlay=not args.no_mp_overlay, title=args.title)
    try:
        render_double_descent(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
