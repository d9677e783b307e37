"""Command line entry point: render figures from sweep CSVs."""

import argparse
import json
import sys

from altplots.figspec import FigureSpec, PlotError
from altplots.render import PRESETS, preset_spec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="altchain-plots",
        description="Render concurrence sweep CSVs into multi-panel figures")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="draw one figure")
    r.add_argument("--spec", help="path to a FigureSpec JSON file")
    r.add_argument("--preset", choices=PRESETS,
                   help="built-in layout over the standard CSV families")
    r.add_argument("--in", dest="in_dir",
                   help="directory holding the preset's CSVs")
    r.add_argument("--out", help="output image path (.png or .svg)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.spec:
            if args.preset:
                raise PlotError("give either --spec or --preset, not both")
            spec = FigureSpec.from_json(args.spec)
        elif args.preset:
            if not args.in_dir or not args.out:
                raise PlotError("--preset needs --in and --out")
            spec = preset_spec(args.preset, args.in_dir, args.out)
        else:
            raise PlotError("give --spec or --preset")
        report = render(spec)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    json.dump(report, sys.stdout, indent=2)
    print()
    return 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
