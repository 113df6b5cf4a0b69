"""Versioned flat-file checkpoints: network, encoder and decoder together.

Line-oriented `key=value` text. Weight tables are written row-major
(presynaptic i, then postsynaptic j, then terminal k) at 9 significant
digits, one presynaptic row per line. See README for the full key list.
"""

import numpy as np

from .encoding import LinearFeatureEncoder, PopulationFeatureEncoder
from .errors import ConfigError
from .kernel import KernelParams
from .network import NetworkTopology, SynapseArray

FORMAT = "snn-checkpoint"
VERSION = 1


def _fmt(values) -> str:
    return ",".join(f"{v:.9g}" for v in np.asarray(values, dtype=float).ravel())


def _floats(text) -> np.ndarray:
    return np.array([float(v) for v in text.split(",")], dtype=float)


def save_checkpoint(path, net: NetworkTopology, encoder=None, decoder=None, meta=None) -> None:
    """`decoder` is ('wta',) or ('nearest', class_times); `meta` is a flat str dict."""
    lines = [
        f"format={FORMAT}",
        f"version={VERSION}",
        "layers=" + ",".join(str(n) for n in net.layer_sizes),
        f"m={net.synapses.m}",
        "delays=" + _fmt(net.synapses.delays),
        f"tau={net.kernel.tau:.9g}",
        f"dt={net.dt:.9g}",
        f"t_max={net.t_max:.9g}",
    ]
    for layer, (thr, inh) in enumerate(zip(net.thresholds, net.inhibitory)):
        lines.append(f"thresholds.{layer}=" + _fmt(thr))
        lines.append(f"inhibitory.{layer}=" + ",".join(str(int(v)) for v in inh))
    for p, w in enumerate(net.synapses.weights):
        for i in range(w.shape[0]):
            lines.append(f"weights.{p}.{i}=" + _fmt(w[i]))
    if encoder is not None:
        lines.extend(_encoder_lines(encoder))
    if decoder is not None:
        lines.append(f"decoder.kind={decoder[0]}")
        if decoder[0] == "nearest":
            for c, row in enumerate(np.asarray(decoder[1], dtype=float)):
                lines.append(f"decoder.class_times.{c}=" + _fmt(row))
    for key, value in (meta or {}).items():
        lines.append(f"meta.{key}={value}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _encoder_lines(encoder):
    if isinstance(encoder, LinearFeatureEncoder):
        return [
            "encoder.kind=linear",
            f"encoder.L={encoder.coders[0].L:.9g}",
            "encoder.min=" + _fmt([c.min for c in encoder.coders]),
            "encoder.max=" + _fmt([c.max for c in encoder.coders]),
        ]
    if isinstance(encoder, PopulationFeatureEncoder):
        return [
            "encoder.kind=population",
            f"encoder.n_per_feature={encoder.banks[0].n}",
            f"encoder.beta={encoder.banks[0].beta:.9g}",
            f"encoder.horizon={encoder.horizon:.9g}",
            f"encoder.cutoff={encoder.firing_cutoff:.9g}",
            "encoder.min=" + _fmt([b.i_min for b in encoder.banks]),
            "encoder.max=" + _fmt([b.i_max for b in encoder.banks]),
        ]
    raise ConfigError(f"cannot serialize encoder {type(encoder).__name__}")


def load_checkpoint(path):
    """Returns (net, encoder or None, decoder or None, meta dict)."""
    kv = {}
    with open(path) as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            if "=" not in raw:
                raise ConfigError(f"{path}: malformed line {raw!r}")
            key, value = raw.split("=", 1)
            kv[key.strip()] = value.strip()
    if kv.get("format") != FORMAT:
        raise ConfigError(f"{path}: not a {FORMAT} file")
    if int(kv.get("version", "0")) != VERSION:
        raise ConfigError(f"{path}: unsupported version {kv.get('version')}")
    layers = tuple(int(n) for n in kv["layers"].split(","))
    delays = _floats(kv["delays"])
    thresholds = [_floats(kv[f"thresholds.{l}"]) for l in range(len(layers))]
    inhibitory = [
        np.array([bool(int(v)) for v in kv[f"inhibitory.{l}"].split(",")])
        for l in range(len(layers))
    ]
    weights = []
    for p in range(len(layers) - 1):
        n_pre, n_post = layers[p], layers[p + 1]
        w = np.stack([_floats(kv[f"weights.{p}.{i}"]) for i in range(n_pre)])
        weights.append(w.reshape(n_pre, n_post, delays.size))
    net = NetworkTopology(
        layers,
        SynapseArray(weights, delays),
        KernelParams(float(kv["tau"])),
        thresholds,
        inhibitory,
        float(kv["dt"]),
        float(kv["t_max"]),
    )
    encoder = _encoder_from(kv)
    decoder = None
    if "decoder.kind" in kv:
        if kv["decoder.kind"] == "nearest":
            rows = []
            while f"decoder.class_times.{len(rows)}" in kv:
                rows.append(_floats(kv[f"decoder.class_times.{len(rows)}"]))
            decoder = ("nearest", np.stack(rows))
        else:
            decoder = (kv["decoder.kind"],)
    meta = {k[len("meta."):]: v for k, v in kv.items() if k.startswith("meta.")}
    return net, encoder, decoder, meta


def _encoder_from(kv):
    kind = kv.get("encoder.kind")
    if kind is None:
        return None
    mins, maxs = _floats(kv["encoder.min"]), _floats(kv["encoder.max"])
    if kind == "linear":
        return LinearFeatureEncoder(mins, maxs, float(kv["encoder.L"]))
    if kind == "population":
        return PopulationFeatureEncoder(
            mins,
            maxs,
            int(kv["encoder.n_per_feature"]),
            float(kv["encoder.beta"]),
            float(kv["encoder.horizon"]),
            float(kv["encoder.cutoff"]),
        )
    raise ConfigError(f"unknown encoder kind {kind!r}")
