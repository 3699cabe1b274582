"""Command-line entry point: train, eval, bench, and sbm subcommands.

Every invocation prints exactly one JSON object to stdout; diagnostics go
to stderr. Exit codes: 0 success, 1 input error, 2 numeric error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import data as data_mod
from . import metrics as metrics_mod
from . import model as model_mod
from .errors import InputError, NumericError
from .graph import sbm_generate
from .losses import LOSS_NAMES
from .metrics import NMI_NORMS

__all__ = ["main", "entry"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; the contract reserves 2 for
    # numeric errors, so re-route parse failures to InputError instead.
    def error(self, message):
        raise InputError(message)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--loss", default="jb", choices=LOSS_NAMES)
    p.add_argument("--delta", type=float, default=0.85)
    p.add_argument("--mp-layers", type=int, default=10)
    p.add_argument("--mp-channels", type=int, default=64)
    p.add_argument("--mlp-channels", type=int, default=16)
    p.add_argument("--mlp-hidden", type=int, default=1)
    p.add_argument("--lr", type=float, default=5e-5)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--row-normalize-features", action="store_true")
    p.add_argument("--dmon-literal", action="store_true",
                   help="use the degree product without the 1/(2E) normalization")


def _config_from_args(args) -> model_mod.ModelConfig:
    return model_mod.ModelConfig(
        k=args.k,
        delta=args.delta,
        mp_layers=args.mp_layers,
        mp_channels=args.mp_channels,
        mlp_hidden_layers=args.mlp_hidden,
        mlp_channels=args.mlp_channels,
        lr=args.lr,
        epochs=args.epochs,
        loss=args.loss,
        seed=args.seed,
        dmon_normalize=not args.dmon_literal,
        row_normalize_features=args.row_normalize_features,
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="jbgnn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a clustering model on a dataset")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--k", type=int, required=True)
    _add_model_flags(p_train)
    p_train.add_argument("--out-assignments")
    p_train.add_argument("--out-report")

    p_eval = sub.add_parser("eval", help="score predicted labels against true labels")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--labels", required=True)
    p_eval.add_argument("--nmi-norm", default="arithmetic", choices=NMI_NORMS)

    p_bench = sub.add_parser("bench", help="measure seconds per optimization step")
    p_bench.add_argument("--data", required=True)
    p_bench.add_argument("--k", type=int, required=True)
    p_bench.add_argument("--steps", type=int, default=100)
    _add_model_flags(p_bench)

    p_sbm = sub.add_parser("sbm", help="generate a synthetic block-model dataset")
    p_sbm.add_argument("--blocks", type=int, required=True)
    p_sbm.add_argument("--size", type=int, required=True)
    p_sbm.add_argument("--p-in", type=float, required=True)
    p_sbm.add_argument("--p-out", type=float, required=True)
    p_sbm.add_argument("--feature-dim", type=int, default=16)
    p_sbm.add_argument("--noise", type=float, default=1.0)
    p_sbm.add_argument("--seed", type=int, default=0)
    p_sbm.add_argument("--out", required=True)
    return parser


def _cmd_train(args) -> dict:
    bundle = data_mod.read_dataset(args.data)
    config = _config_from_args(args)
    s, report = model_mod.train(bundle.graph, bundle.features, config, bundle.labels)
    if args.out_assignments:
        data_mod.write_assignments(report.assignments, args.out_assignments)
    if args.out_report:
        data_mod.write_report(report, args.out_report)
    out = {
        "final_loss": report.losses[-1] if report.losses else None,
        "epochs": config.epochs,
        "seconds_per_step": report.seconds_per_step,
    }
    if bundle.labels is not None:
        out["acc"] = metrics_mod.acc(bundle.labels, report.assignments)
        out["nmi"] = metrics_mod.nmi(bundle.labels, report.assignments)
    return out


def _cmd_eval(args) -> dict:
    pred = data_mod.read_labels_file(args.pred)
    labels = data_mod.read_labels_file(args.labels)
    if pred.size != labels.size:
        raise InputError(
            f"line count mismatch: {args.pred} has {pred.size}, "
            f"{args.labels} has {labels.size}"
        )
    return {
        "acc": metrics_mod.acc(labels, pred),
        "nmi": metrics_mod.nmi(labels, pred, norm=args.nmi_norm),
        "n": int(labels.size),
    }


def _cmd_bench(args) -> dict:
    bundle = data_mod.read_dataset(args.data)
    config = _config_from_args(args)
    mean, std = model_mod.bench(bundle.graph, bundle.features, config, args.steps)
    return {
        "loss": config.loss,
        "steps": args.steps,
        "mean_seconds_per_step": mean,
        "std_seconds_per_step": std,
    }


def _cmd_sbm(args) -> dict:
    if args.p_in < args.p_out:
        raise InputError("--p-in must be >= --p-out (assortative instances only)")
    sizes = [args.size] * args.blocks
    g, features, labels = sbm_generate(
        sizes, args.p_in, args.p_out, args.feature_dim, args.noise, args.seed
    )
    meta = data_mod.DatasetMeta(
        name="sbm",
        num_nodes=g.num_nodes,
        num_edges=g.num_stored_entries,
        num_features=features.shape[1],
        num_classes=args.blocks,
    )
    bundle = data_mod.DatasetBundle(graph=g, features=features, labels=labels, meta=meta)
    data_mod.write_dataset(bundle, args.out)
    return {
        "out": args.out,
        "num_nodes": meta.num_nodes,
        "num_edges": meta.num_edges,
        "num_features": meta.num_features,
        "num_classes": meta.num_classes,
    }


_COMMANDS = {"train": _cmd_train, "eval": _cmd_eval, "bench": _cmd_bench, "sbm": _cmd_sbm}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        result = _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    json.dump(result, sys.stdout)
    sys.stdout.write("\n")
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
