"""End-to-end experiments: train, evaluate clean and perturbed, report.

A run covers a grid of (epoch count, perturbation) cells. Within one epoch
group every repetition trains a fresh network on clean data, measures the
clean classification rate, then measures the rate on perturbed copies of the
test inputs for each perturbation spec. Reported rates are means over
repetitions; reports are written both human-readable and as JSON lines.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, published_rates, table_config, with_epochs
from .datasets import (
    CsvSchema,
    load_csv,
    load_landsat,
    load_xor,
    split,
    stratified_subset,
)
from .encoding import (
    EncodedSample,
    LinearFeatureEncoder,
    PopulationFeatureEncoder,
    decode_nearest_target,
    decode_wta,
    encode_label_wta,
)
from .errors import ConfigError, MissingDataset, RuntimeFailure, SnnError
from .network import build_network, simulate_forward
from .perturbation import NONE as PERTURB_NONE
from .perturbation import generate_perturbed_set, perturb
from .spikeprop import train

XOR_TARGET_POINT = (1.0, 1.0)


def prepare_data(cfg: ExperimentConfig, data_dir):
    """(train, test) datasets for the configured task."""
    if cfg.dataset == "xor":
        ds = load_xor()
        return ds, ds
    data_dir = Path(data_dir)
    if cfg.dataset in ("iris", "wbc"):
        path = data_dir / f"{cfg.dataset}.csv"
        if not path.exists():
            raise MissingDataset(f"{path} not found; see data/MANIFEST.md")
        ds = load_csv(path, CsvSchema(label_col=-1), name=cfg.dataset)
        return split(ds, cfg.split_ratio, cfg.split_seed)
    if cfg.dataset == "landsat":
        trn, tst = data_dir / "sat.trn", data_dir / "sat.tst"
        if not (trn.exists() and tst.exists()):
            raise MissingDataset(f"{trn} / {tst} not found; see data/MANIFEST.md")
        train_ds, test_ds = load_landsat(trn, tst)
        if cfg.subsample:
            train_ds = stratified_subset(train_ds, cfg.subsample, cfg.split_seed)
        return train_ds, test_ds
    raise ConfigError(f"unknown dataset {cfg.dataset!r}")


def build_encoder(cfg: ExperimentConfig, train_ds):
    """Feature encoder frozen on the training split's min/max statistics."""
    mins, maxs = train_ds.column_stats()
    if cfg.encoder.kind == "linear":
        return LinearFeatureEncoder(mins, maxs, cfg.encoder.L)
    if cfg.encoder.kind == "population":
        return PopulationFeatureEncoder(
            mins, maxs, cfg.encoder.neurons_per_feature, cfg.encoder.beta,
            horizon=cfg.encoder.L, firing_cutoff=cfg.encoder.cutoff,
        )
    raise ConfigError(f"unknown encoder kind {cfg.encoder.kind!r}")


def desired_times(label: int, n_classes: int, n_outputs: int, early: float, late: float):
    if n_outputs == n_classes:
        return encode_label_wta(label, n_classes, early, late)
    if n_outputs == 1 and n_classes == 2:
        # single output codes both classes by firing time; class 0 is 'late'
        return np.array([late if label == 0 else early])
    raise ConfigError(f"{n_outputs} outputs cannot code {n_classes} classes")


def make_decoder(cfg: ExperimentConfig, n_classes: int):
    if cfg.topology.outputs == n_classes:
        return decode_wta
    class_times = np.stack(
        [desired_times(c, n_classes, cfg.topology.outputs, cfg.early, cfg.late)
         for c in range(n_classes)]
    )
    return lambda outputs: decode_nearest_target(outputs, class_times)


def encode_dataset(ds, encoder, cfg: ExperimentConfig):
    return [
        EncodedSample(
            encoder.encode(x),
            desired_times(int(label), ds.n_classes, cfg.topology.outputs, cfg.early, cfg.late),
            int(label),
        )
        for x, label in zip(ds.features, ds.labels)
    ]


def average_active_inputs(samples) -> float:
    """Mean count of firing input neurons; population codes silence most inputs."""
    return float(np.mean([np.isfinite(s.input_times).sum() for s in samples]))


def classification_rate(net, samples, decoder=decode_wta) -> float:
    """Percent of samples whose decoded prediction matches the label."""
    if not samples:
        raise ValueError("need at least one sample")
    correct = sum(
        1 for s in samples if decoder(simulate_forward(net, s.input_times)[-1]) == s.label
    )
    return 100.0 * correct / len(samples)


def perturbed_samples(cfg, spec, test_ds, encoder, rep_seed, epochs):
    """Encoded perturbed test inputs for one (spec, repetition, epoch-group) cell.

    XOR perturbs only the target point (1,1); benchmarks perturb each test
    sample once. Streams are seeded so reruns reproduce the same draws. A
    'none' spec always evaluates the unperturbed test samples themselves.
    """
    rng = np.random.default_rng([spec.seed, rep_seed, epochs])
    n_out = cfg.topology.outputs
    if spec.kind == PERTURB_NONE:
        return encode_dataset(test_ds, encoder, cfg)
    if cfg.dataset == "xor":
        x0 = np.asarray(XOR_TARGET_POINT)
        label = 0  # (1,1) has equal bits
        desired = desired_times(label, 2, n_out, cfg.early, cfg.late)
        return [
            EncodedSample(encoder.encode(perturb(x0, spec, rng)), desired, label)
            for _ in range(cfg.xor_perturbed_draws)
        ]
    return [
        EncodedSample(
            encoder.encode(perturb(x, spec, rng)),
            desired_times(int(label), test_ds.n_classes, n_out, cfg.early, cfg.late),
            int(label),
        )
        for x, label in zip(test_ds.features, test_ds.labels)
    ]


@dataclass
class ReportRow:
    dataset: str
    table: str
    epochs: int
    kind: str
    param: float
    clean_mean: float
    perturbed_mean: float
    train_mean: float
    clean_rates: list
    perturbed_rates: list
    seeds: list
    n_eval: int
    n_perturbed: int
    published_clean: float = None
    published_perturbed: float = None
    wall_clock_s: float = 0.0

    def record(self) -> dict:
        """Machine-readable form; excludes wall-clock so reruns are byte-identical."""
        return {
            "dataset": self.dataset,
            "table": self.table,
            "epochs": self.epochs,
            "kind": self.kind,
            "param": self.param,
            "clean_mean": self.clean_mean,
            "perturbed_mean": self.perturbed_mean,
            "train_mean": self.train_mean,
            "clean_rates": self.clean_rates,
            "perturbed_rates": self.perturbed_rates,
            "seeds": self.seeds,
            "n_eval": self.n_eval,
            "n_perturbed": self.n_perturbed,
            "published_clean": self.published_clean,
            "published_perturbed": self.published_perturbed,
        }


@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (epochs, rep seed, error) triples
    wall_clock_s: float = 0.0


def run_experiment(cfg: ExperimentConfig, data_dir="data") -> ExperimentReport:
    """Train/evaluate the full (epochs x perturbation) grid of a config."""
    t_start = time.perf_counter()
    train_ds, test_ds = prepare_data(cfg, data_dir)
    encoder = build_encoder(cfg, train_ds)
    layer_sizes = (encoder.n_inputs, cfg.topology.hidden, cfg.topology.outputs)
    if cfg.topology.outputs not in (test_ds.n_classes, 1):
        raise ConfigError("output layer size must match the class count (or 1 for XOR)")
    inhibitory = [(1, cfg.topology.hidden - 1 - i) for i in range(cfg.topology.inhibitory_hidden)]
    train_samples = encode_dataset(train_ds, encoder, cfg)
    test_samples = encode_dataset(test_ds, encoder, cfg)
    decoder = make_decoder(cfg, test_ds.n_classes)
    fan_in = average_active_inputs(train_samples)
    report = ExperimentReport()
    for epochs in cfg.epochs_grid:
        group_t0 = time.perf_counter()
        train_cfg = with_epochs(cfg.train, epochs)
        seeds = [cfg.seed + rep for rep in range(cfg.repetitions)]
        clean_rates = []
        train_rates = []
        perturbed_rates = [[] for _ in cfg.perturbations]
        n_perturbed = 0
        completed = []
        for rep_seed in seeds:
            try:
                net = build_network(
                    layer_sizes,
                    m=cfg.topology.m,
                    tau=cfg.topology.tau,
                    threshold=cfg.topology.threshold,
                    inhibitory=inhibitory,
                    dt=cfg.topology.dt,
                    t_max=cfg.topology.t_max,
                    seed=[rep_seed, 11],
                    input_fan_in=fan_in,
                )
                train(net, train_samples, train_cfg, rng_seed=[rep_seed, 23])
                clean = classification_rate(net, test_samples, decoder)
                train_rate = classification_rate(net, train_samples, decoder)
                rep_perturbed = []
                for spec in cfg.perturbations:
                    psamples = perturbed_samples(cfg, spec, test_ds, encoder, rep_seed, epochs)
                    n_perturbed = len(psamples)
                    rep_perturbed.append(classification_rate(net, psamples, decoder))
            except SnnError as exc:
                # flush what completed; the failed repetition is recorded
                report.failures.append((epochs, rep_seed, f"{type(exc).__name__}: {exc}"))
                continue
            completed.append(rep_seed)
            clean_rates.append(clean)
            train_rates.append(train_rate)
            for si, rate in enumerate(rep_perturbed):
                perturbed_rates[si].append(rate)
        if not completed:
            raise RuntimeFailure(
                f"every repetition failed at {epochs} epochs: {report.failures[-1][2]}"
            )
        seeds = completed
        group_elapsed = time.perf_counter() - group_t0
        for si, spec in enumerate(cfg.perturbations):
            pub = published_rates(cfg.table, epochs, spec.param) if cfg.table else None
            report.rows.append(
                ReportRow(
                    dataset=cfg.dataset,
                    table=cfg.table,
                    epochs=epochs,
                    kind=spec.kind,
                    param=spec.param,
                    clean_mean=float(np.mean(clean_rates)),
                    perturbed_mean=float(np.mean(perturbed_rates[si])),
                    train_mean=float(np.mean(train_rates)),
                    clean_rates=list(clean_rates),
                    perturbed_rates=list(perturbed_rates[si]),
                    seeds=list(seeds),
                    n_eval=len(test_samples),
                    n_perturbed=n_perturbed,
                    published_clean=pub[0] if pub else None,
                    published_perturbed=pub[1] if pub else None,
                    wall_clock_s=group_elapsed,
                )
            )
    report.wall_clock_s = time.perf_counter() - t_start
    return report


def reproduce(table_id: str, data_dir="data", seed: int = 0, reps: int = 10,
              subsample: bool = False) -> ExperimentReport:
    """Run the named result table's grid and attach published reference rates."""
    cfg = table_config(table_id, seed=seed, reps=reps, subsample=subsample)
    return run_experiment(cfg, data_dir)


def dump_perturbation_scatter(spec, x0, n: int, path) -> None:
    """n perturbed points, one per row, for external scatter plotting."""
    pset = generate_perturbed_set(x0, n, spec)
    with open(path, "w") as fh:
        fh.write(f"# kind={spec.kind} param={spec.param:g} seed={spec.seed}\n")
        fh.write("# base=" + " ".join(f"{v:.9g}" for v in pset.base) + "\n")
        for row in pset.vectors:
            fh.write(" ".join(f"{v:.9g}" for v in row) + "\n")


def format_text_report(report: ExperimentReport, title: str = "") -> str:
    """Aligned table with published reference columns where known."""
    have_pub = any(r.published_clean is not None for r in report.rows)
    header = f"{'epochs':>6}  {'perturbation':<12} {'param':>7}  {'clean':>7}  {'perturbed':>9}"
    if have_pub:
        header += f"  {'pub-clean':>9}  {'pub-pert':>9}"
    lines = []
    if title:
        lines.append(title)
    lines.append(header)
    lines.append("-" * len(header))
    for r in report.rows:
        line = f"{r.epochs:>6}  {r.kind:<12} {r.param:>7g}  {r.clean_mean:>7.2f}  {r.perturbed_mean:>9.2f}"
        if have_pub:
            pc = f"{r.published_clean:.2f}" if r.published_clean is not None else "-"
            pp = f"{r.published_perturbed:.2f}" if r.published_perturbed is not None else "-"
            line += f"  {pc:>9}  {pp:>9}"
        lines.append(line)
    for epochs, rep_seed, err in report.failures:
        lines.append(f"failed repetition: epochs={epochs} seed={rep_seed} ({err})")
    lines.append(f"wall-clock: {report.wall_clock_s:.1f} s")
    return "\n".join(lines) + "\n"


def write_reports(report: ExperimentReport, out_dir, stem: str) -> tuple:
    """Write <stem>.txt and <stem>.jsonl under out_dir; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    txt = out_dir / f"{stem}.txt"
    jsonl = out_dir / f"{stem}.jsonl"
    txt.write_text(format_text_report(report, title=stem))
    with open(jsonl, "w") as fh:
        for row in report.rows:
            fh.write(json.dumps(row.record(), sort_keys=True) + "\n")
    return txt, jsonl
