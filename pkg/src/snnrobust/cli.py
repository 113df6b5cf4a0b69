"""Command-line entry points.

Exit codes: 0 success, 2 configuration error, 3 missing dataset file,
4 runtime failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .config import TABLES, emit_config, parse_config, table_config, with_epochs
from .errors import ConfigError, MissingDataset, SnnError
from .harness import (
    average_active_inputs,
    build_encoder,
    classification_rate,
    dump_perturbation_scatter,
    encode_dataset,
    format_text_report,
    make_decoder,
    perturbed_samples,
    prepare_data,
    reproduce,
    write_reports,
)
from .network import build_network
from .perturbation import PerturbationSpec
from .spikeprop import train as train_network


def _add_common(p):
    p.add_argument("--data", default="data", help="directory with dataset files")
    p.add_argument("--out", default="out", help="directory for outputs")
    p.add_argument("--seed", type=int, default=None, help="base RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snnrobust",
        description="Spiking-network training and input-perturbation robustness experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one network from a config file")
    p.add_argument("--config", required=True)
    _add_common(p)

    p = sub.add_parser("evaluate", help="evaluate a checkpoint on a config's test data")
    p.add_argument("--config", required=True)
    p.add_argument("--checkpoint", required=True)
    _add_common(p)

    p = sub.add_parser("perturb-dump", help="dump perturbed points for plotting")
    p.add_argument("--kind", choices=["sinusoidal", "gaussian", "none"], required=True)
    p.add_argument("--param", type=float, default=0.0, help="A or r*")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x0", default="1,1", help="comma-separated base point")
    p.add_argument("--out", required=True, help="output file")

    p = sub.add_parser("reproduce", help="run a published result table's grid")
    p.add_argument("table", choices=sorted(TABLES))
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--subsample", action="store_true",
                   help="landsat desk-scale mode: 500-case training subset, scaled epochs")
    _add_common(p)

    p = sub.add_parser("print-default-config", help="emit a table's configuration")
    p.add_argument("table", choices=sorted(TABLES))
    return parser


def _cmd_train(args) -> int:
    cfg = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        cfg.seed = args.seed
    train_ds, test_ds = prepare_data(cfg, args.data)
    encoder = build_encoder(cfg, train_ds)
    samples = encode_dataset(train_ds, encoder, cfg)
    inhibitory = [(1, cfg.topology.hidden - 1 - i) for i in range(cfg.topology.inhibitory_hidden)]
    net = build_network(
        (encoder.n_inputs, cfg.topology.hidden, cfg.topology.outputs),
        m=cfg.topology.m, tau=cfg.topology.tau, threshold=cfg.topology.threshold,
        inhibitory=inhibitory, dt=cfg.topology.dt, t_max=cfg.topology.t_max,
        seed=[cfg.seed, 11], input_fan_in=average_active_inputs(samples),
    )
    _, trace = train_network(net, samples, with_epochs(cfg.train, cfg.epochs_grid[0]),
                             rng_seed=[cfg.seed, 23])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    decoder = make_decoder(cfg, train_ds.n_classes)
    deco = ("wta",) if cfg.topology.outputs == train_ds.n_classes else (
        "nearest",
        np.stack([
            [cfg.late if c == 0 else cfg.early] for c in range(train_ds.n_classes)
        ]),
    )
    save_checkpoint(out / "model.snn", net, encoder, deco,
                    meta={"dataset": cfg.dataset, "seed": cfg.seed})
    trace.export(out / "trace.tsv")
    rate = classification_rate(net, encode_dataset(test_ds, encoder, cfg), decoder)
    print(f"trained {cfg.dataset}: {len(trace.epoch_error)} epochs, "
          f"final E={trace.epoch_error[-1]:.3f}, test rate {rate:.2f}%")
    print(f"checkpoint: {out / 'model.snn'}; trace: {out / 'trace.tsv'}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = parse_config(Path(args.config).read_text())
    net, encoder, deco, meta = load_checkpoint(args.checkpoint)
    if meta.get("dataset") and meta["dataset"] != cfg.dataset:
        raise ConfigError(f"checkpoint is for {meta['dataset']!r}, config for {cfg.dataset!r}")
    _, test_ds = prepare_data(cfg, args.data)
    decoder = make_decoder(cfg, test_ds.n_classes)
    clean = classification_rate(net, encode_dataset(test_ds, encoder, cfg), decoder)
    print(f"clean rate: {clean:.2f}%  ({len(test_ds)} samples)")
    for spec in cfg.perturbations:
        psamples = perturbed_samples(cfg, spec, test_ds, encoder, cfg.seed, cfg.epochs_grid[0])
        rate = classification_rate(net, psamples, decoder)
        print(f"{spec.kind} {spec.param:g}: {rate:.2f}%  ({len(psamples)} samples)")
    return 0


def _cmd_perturb_dump(args) -> int:
    if args.kind == "sinusoidal":
        spec = PerturbationSpec(args.kind, amplitude=args.param, seed=args.seed)
    elif args.kind == "gaussian":
        spec = PerturbationSpec(args.kind, r_star=args.param, seed=args.seed)
    else:
        spec = PerturbationSpec("none", seed=args.seed)
    x0 = [float(v) for v in args.x0.split(",")]
    dump_perturbation_scatter(spec, x0, args.n, args.out)
    print(f"wrote {args.n} points to {args.out}")
    return 0


def _cmd_reproduce(args) -> int:
    seed = 0 if args.seed is None else args.seed
    report = reproduce(args.table, data_dir=args.data, seed=seed, reps=args.reps,
                       subsample=args.subsample)
    stem = f"report_{args.table}"
    txt, jsonl = write_reports(report, args.out, stem)
    sys.stdout.write(format_text_report(report, title=f"{args.table} (seed {seed}, reps {args.reps})"))
    print(f"reports: {txt}, {jsonl}")
    return 0


def _cmd_print_default_config(args) -> int:
    sys.stdout.write(emit_config(table_config(args.table)))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "train": _cmd_train,
        "evaluate": _cmd_evaluate,
        "perturb-dump": _cmd_perturb_dump,
        "reproduce": _cmd_reproduce,
        "print-default-config": _cmd_print_default_config,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MissingDataset as exc:
        print(f"missing dataset: {exc}", file=sys.stderr)
        return 3
    except (SnnError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
