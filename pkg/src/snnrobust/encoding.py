"""Feature-to-spike-time encoders, label coding and output decoding.

Two input codes: a linear map of one feature to one spike time, and
population coding where each feature drives a bank of neurons with
overlapping Gaussian receptive fields (stronger activation = earlier
spike). Labels are coded winner-take-all: the target class's output neuron
is asked to fire early, all others late.
"""

from dataclasses import dataclass

import numpy as np

from .network import NON_FIRING

INVALID = -1


@dataclass(frozen=True)
class LinearCoder:
    min: float
    max: float
    L: float = 6.0  # coding interval, milliseconds

    def __post_init__(self):
        if not self.max > self.min:
            raise ValueError("max must exceed min")
        if not self.L > 0:
            raise ValueError("coding interval must be positive")


def encode_linear(x: float, coder: LinearCoder) -> float:
    """(x - min) / (max - min) * L, with x clamped into [min, max]."""
    x = min(max(x, coder.min), coder.max)
    return (x - coder.min) / (coder.max - coder.min) * coder.L


@dataclass(frozen=True)
class ReceptiveFieldBank:
    """N Gaussian receptive fields spanning one feature's range.

    Center i (1-based) sits at i_min + (2i-3)/2 * (i_max-i_min)/(N-2); all
    fields share width (1/beta) * (i_max-i_min)/(N-2). The outermost centers
    fall half a spacing outside the range so edges stay covered.
    """

    n: int
    i_min: float
    i_max: float
    beta: float = 1.5

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 neurons per feature")
        if not self.i_max > self.i_min:
            raise ValueError("i_max must exceed i_min")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def centers(self) -> np.ndarray:
        i = np.arange(1, self.n + 1)
        return self.i_min + (2 * i - 3) / 2 * (self.i_max - self.i_min) / (self.n - 2)

    @property
    def width(self) -> float:
        return (1.0 / self.beta) * (self.i_max - self.i_min) / (self.n - 2)


def encode_population(
    x: float, bank: ReceptiveFieldBank, horizon: float = 6.0, firing_cutoff: float = 0.1
) -> np.ndarray:
    """Spike times for the bank's N neurons.

    Activation a_i = exp(-(x - c_i)^2 / (2 sigma^2)) maps to t_i =
    (1 - a_i) * horizon; neurons below the activation cutoff stay silent.
    """
    a = np.exp(-((x - bank.centers) ** 2) / (2.0 * bank.width**2))
    return np.where(a >= firing_cutoff, (1.0 - a) * horizon, NON_FIRING)


@dataclass
class EncodedSample:
    input_times: np.ndarray
    desired: np.ndarray
    label: int


def encode_xor(pattern, L: float = 6.0, early: float = 10.0, late: float = 16.0) -> EncodedSample:
    """Temporally coded XOR: bit b spikes at b*L, plus a bias input at 0.

    Equal bits are the 'late' class (desired output at 16 ms), unequal bits
    the 'early' class (10 ms).
    """
    b0, b1 = pattern
    if b0 not in (0, 1) or b1 not in (0, 1):
        raise ValueError("XOR pattern must be a pair of bits")
    same = b0 == b1
    return EncodedSample(
        input_times=np.array([b0 * L, b1 * L, 0.0]),
        desired=np.array([late if same else early]),
        label=0 if same else 1,
    )


def encode_label_wta(class_idx: int, n_classes: int, early: float = 10.0, late: float = 16.0):
    """Desired output times: `early` for the target class's neuron, `late` elsewhere."""
    if not 0 <= class_idx < n_classes:
        raise ValueError("class index out of range")
    if not early < late:
        raise ValueError("early must precede late")
    desired = np.full(n_classes, late)
    desired[class_idx] = early
    return desired


def decode_wta(output_times) -> int:
    """Index of the earliest-firing output neuron (ties to the lowest index).

    Returns INVALID when no output fired.
    """
    output_times = np.asarray(output_times, dtype=float)
    if not np.isfinite(output_times).any():
        return INVALID
    return int(np.argmin(output_times))


def decode_nearest_target(output_times, class_times) -> int:
    """Class whose prototype spike times are L1-closest to the outputs.

    Used when one output neuron codes several classes by firing time (the
    XOR setup). Any silent output makes the presentation INVALID.
    """
    output_times = np.asarray(output_times, dtype=float)
    if not np.isfinite(output_times).all():
        return INVALID
    dist = np.abs(np.asarray(class_times, dtype=float) - output_times[None, :]).sum(axis=1)
    return int(np.argmin(dist))


class LinearFeatureEncoder:
    """One spike time per feature plus a trailing bias input fixed at 0 ms."""

    def __init__(self, mins, maxs, L: float = 6.0):
        self.coders = [LinearCoder(lo, hi, L) for lo, hi in zip(mins, maxs)]

    @property
    def n_inputs(self) -> int:
        return len(self.coders) + 1

    def encode(self, x) -> np.ndarray:
        times = [encode_linear(v, c) for v, c in zip(x, self.coders)]
        times.append(0.0)
        return np.asarray(times)


class PopulationFeatureEncoder:
    """N receptive-field neurons per feature plus a trailing bias input at 0 ms."""

    def __init__(self, mins, maxs, n_per_feature: int, beta: float = 1.5,
                 horizon: float = 6.0, firing_cutoff: float = 0.1):
        self.banks = [ReceptiveFieldBank(n_per_feature, lo, hi, beta) for lo, hi in zip(mins, maxs)]
        self.horizon = horizon
        self.firing_cutoff = firing_cutoff

    @property
    def n_inputs(self) -> int:
        return sum(b.n for b in self.banks) + 1

    def encode(self, x) -> np.ndarray:
        # perturbed values can leave the training range; clamp like the linear code
        parts = [
            encode_population(min(max(v, b.i_min), b.i_max), b, self.horizon, self.firing_cutoff)
            for v, b in zip(x, self.banks)
        ]
        parts.append(np.zeros(1))
        return np.concatenate(parts)
