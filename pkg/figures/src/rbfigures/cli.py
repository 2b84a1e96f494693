"""figures <kind> <inputs...> --out FILE [--coef NAME] [--label L ...]"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, SchemaError, render


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="figures", description=__doc__)
    p.add_argument("kind", choices=sorted(KINDS))
    p.add_argument("inputs", nargs="+", help="input CSV paths")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--coef", default="beta_10",
                   help="draws column for trace_acf")
    p.add_argument("--label", action="append", default=None,
                   help="series label per input (coef_intervals)")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    opts = {}
    if args.kind == "trace_acf":
        opts["coef"] = args.coef
    if args.kind == "coef_intervals" and args.label:
        opts["labels"] = args.label
    try:
        render(args.kind, args.inputs, args.out, **opts)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
