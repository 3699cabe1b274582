"""Command-line interface: convert and class-distribution subcommands."""
import argparse
import json
import sys

from jbgnn import InputError

from .convert import class_distribution, convert
from .specs import DATASETS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    parser = _Parser(prog="jbgnn-datasets", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="fetch a citation dataset and emit the canonical format")
    p.add_argument("--name", required=True, choices=sorted(DATASETS))
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--cache", default=None, help="raw-file cache directory")

    p = sub.add_parser("class-distribution", help="per-class node counts of a converted dataset")
    p.add_argument("--data", required=True, help="converted dataset directory")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "convert":
            payload = convert(args.name, args.out, args.cache)
        else:
            payload = class_distribution(args.data)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    json.dump(payload, sys.stdout)
    sys.stdout.write("\n")
    return 0


def entry():
    raise SystemExit(main())
