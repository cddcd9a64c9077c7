"""Command-line interface: ``quack {train,eval,predict,baseline,count}``.

Reports are ``key=value`` lines on stdout; ``--table`` prints an aligned table
instead. Any error exits with status 2 and a message on stderr. The number of
worker threads used for state simulation is capped by ``QUACK_MAX_WORKERS``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys

from .baseline import default_gamma, rbf_centroid_classify
from .data import DataError, apply_normalizer, fit_normalizer, load_csv
from .encoding import CircuitSpec
from .metrics import evaluate, roc_auc
from .serialization import ConfigError, load_config, load_model, make_splits, save_model
from .training import predict, train


def circuit_counts(n_train: int, n_epochs: int, n_kao: int, n_co: int) -> dict:
    """Circuit evaluations during training: centroid kernels versus full kernels."""
    for name, v in (("n_train", n_train), ("n_epochs", n_epochs), ("n_kao", n_kao), ("n_co", n_co)):
        if v < 0:
            raise ValueError(f"{name} must be >= 0")
    return {
        "n_quack": n_epochs * (n_kao + n_co) * n_train,
        "n_standard": n_epochs * n_train**2,
        "crossover_n_train": n_kao + n_co,
    }


def _report(pairs: dict, table: bool) -> None:
    if table:
        width = max(len(k) for k in pairs)
        for k, v in pairs.items():
            shown = f"{v:,}" if isinstance(v, int) else (f"{v:.4f}" if isinstance(v, float) else v)
            print(f"{k:<{width}}  {shown}")
    else:
        for k, v in pairs.items():
            print(f"{k}={v}")


def _positive_labels(text: str | None):
    if text is None:
        return None
    return {float(t) for t in text.split(",") if t.strip()}


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    training = cfg.training
    if args.seed is not None:
        training = dataclasses.replace(training, seed=args.seed)
    splits = make_splits(cfg)
    norm = fit_normalizer(splits.train)
    tr, va = apply_normalizer(norm, splits.train), apply_normalizer(norm, splits.val)
    spec = CircuitSpec(cfg.circuit["n_qubits"], cfg.circuit["n_layers"], tr.n_features)
    model, history = train(tr, spec, training, norm)
    save_model(model, args.out, cfg.text, history.summary())
    _, s_tr = predict(model, tr.X)
    _, s_va = predict(model, va.X)
    _report(
        {
            "model": str(args.out),
            "seed": training.seed,
            "train_auc": roc_auc(s_tr, tr.y),
            "val_auc": roc_auc(s_va, va.y),
            "kernel_rows": history.kernel_rows,
        },
        args.table,
    )
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    ds = load_csv(args.data, positive_labels=_positive_labels(args.positive_labels))
    labels, scores = predict(model, ds.X, normalize=True)
    report = evaluate(scores, labels, ds.y)
    _report(dataclasses.asdict(report), args.table)
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    ds = load_csv(args.data, positive_labels=_positive_labels(args.positive_labels))
    labels, scores = predict(model, ds.X, normalize=True)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["label", "score"])
        for lab, s in zip(labels, scores):
            writer.writerow([int(lab), format(s, ".17g")])
    finally:
        if args.out:
            out.close()
    return 0


def cmd_baseline(args) -> int:
    cfg = load_config(args.config)
    splits = make_splits(cfg)
    norm = fit_normalizer(splits.train)
    tr, va, te = (apply_normalizer(norm, s) for s in (splits.train, splits.val, splits.test))
    gamma = default_gamma(tr) if args.gamma is None else args.gamma
    _, s_va = rbf_centroid_classify(tr, va.X, gamma)
    labels, s_te = rbf_centroid_classify(tr, te.X, gamma)
    pairs = {"gamma": gamma, "val_auc": roc_auc(s_va, va.y)}
    pairs.update({f"test_{k}": v for k, v in dataclasses.asdict(evaluate(s_te, labels, te.y)).items()})
    _report(pairs, args.table)
    return 0


def cmd_count(args) -> int:
    _report(circuit_counts(args.n_train, args.n_epochs, args.n_kao, args.n_co), args.table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quack", description="Quantum aligned centroid kernel classifier")
    parser.add_argument("-v", "--verbose", action="store_true", help="log training progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--table", action="store_true", help="human-readable table output")
        p.set_defaults(func=func)
        return p

    p = add("train", cmd_train, "train a model from a run config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--seed", type=int, help="override the config seed")

    for name, func, help in (("eval", cmd_eval, "AUC and accuracy of a model on a CSV"),
                             ("predict", cmd_predict, "labels and scores for a CSV")):
        p = add(name, func, help)
        p.add_argument("--model", required=True)
        p.add_argument("--data", required=True, help="CSV with raw (unnormalized) features")
        p.add_argument("--positive-labels", help="comma-separated raw labels mapped to +1")
        if name == "predict":
            p.add_argument("--out", help="output CSV (default: stdout)")

    p = add("baseline", cmd_baseline, "RBF centroid classifier on the config's split")
    p.add_argument("--config", required=True)
    p.add_argument("--gamma", type=float, help="RBF width (default 1 / (d * var))")
    p.add_argument("--seed", type=int, help="accepted for symmetry; the baseline is deterministic")

    p = add("count", cmd_count, "circuit evaluations: centroid kernel vs full kernel")
    for name in ("n_train", "n_epochs", "n_kao", "n_co"):
        p.add_argument(name, type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, DataError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"quack {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
