"""Feed-forward spiking network under the spike-response model.

Connections between adjacent layers carry m parallel terminals, each with its
own weight and a fixed delay. Every neuron emits at most one spike per
presentation: the first grid time at which its membrane potential reaches
threshold. A neuron that never crosses threshold is marked NON_FIRING.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedInput
from .kernel import E1, KernelParams, spike_response

NON_FIRING = math.inf


def default_delays(m: int) -> np.ndarray:
    """Terminal delays 1..m milliseconds."""
    return np.arange(1, m + 1, dtype=float)


@dataclass
class NeuronParams:
    threshold: float = 1.0
    is_inhibitory: bool = False

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be > 0")


@dataclass
class SynapseArray:
    """Per layer pair, weights[p][i, j, k]: presyn i, postsyn j, terminal k."""

    weights: list  # list of (n_pre, n_post, m) float arrays
    delays: np.ndarray  # (m,) milliseconds, shared across pairs

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=float)
        if self.delays.size < 1:
            raise ValueError("need at least one synaptic terminal")
        if np.any(np.diff(self.delays) <= 0):
            raise ValueError("delays must be strictly increasing")
        for w in self.weights:
            if w.ndim != 3 or w.shape[2] != self.delays.size:
                raise ValueError("weight table shape must be (n_pre, n_post, m)")

    @property
    def m(self) -> int:
        return self.delays.size


@dataclass
class NetworkTopology:
    layer_sizes: tuple
    synapses: SynapseArray
    kernel: KernelParams = field(default_factory=KernelParams)
    thresholds: list = None  # per layer, (n,) arrays; input-layer entry unused
    inhibitory: list = None  # per layer, (n,) bool arrays
    dt: float = 0.01
    t_max: float = 30.0

    def __post_init__(self):
        self.layer_sizes = tuple(int(n) for n in self.layer_sizes)
        if len(self.layer_sizes) < 3:
            raise ValueError("need input, at least one hidden, and output layer")
        if any(n < 1 for n in self.layer_sizes):
            raise ValueError("every layer needs at least one neuron")
        if not 0 < self.dt <= 0.1:
            raise ValueError("dt must be in (0, 0.1] ms")
        if self.t_max <= self.synapses.delays[-1]:
            raise ValueError("t_max must exceed the largest synaptic delay")
        if len(self.synapses.weights) != len(self.layer_sizes) - 1:
            raise ValueError("one weight table per adjacent layer pair required")
        for p, w in enumerate(self.synapses.weights):
            if w.shape[:2] != (self.layer_sizes[p], self.layer_sizes[p + 1]):
                raise ValueError(f"weight table {p} does not match layer sizes")
        if self.thresholds is None:
            self.thresholds = [np.ones(n) for n in self.layer_sizes]
        if self.inhibitory is None:
            self.inhibitory = [np.zeros(n, dtype=bool) for n in self.layer_sizes]
        self.thresholds = [np.asarray(t, dtype=float) for t in self.thresholds]
        self.inhibitory = [np.asarray(f, dtype=bool) for f in self.inhibitory]
        if any((t <= 0).any() for t in self.thresholds):
            raise ValueError("thresholds must be > 0")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes)

    def neuron(self, layer: int, idx: int) -> NeuronParams:
        return NeuronParams(
            threshold=float(self.thresholds[layer][idx]),
            is_inhibitory=bool(self.inhibitory[layer][idx]),
        )

    def copy(self):
        syn = SynapseArray([w.copy() for w in self.synapses.weights], self.synapses.delays.copy())
        return NetworkTopology(
            self.layer_sizes,
            syn,
            self.kernel,
            [t.copy() for t in self.thresholds],
            [f.copy() for f in self.inhibitory],
            self.dt,
            self.t_max,
        )


def build_network(
    layer_sizes,
    *,
    m: int = 16,
    tau: float = 7.0,
    threshold: float = 1.0,
    inhibitory=(),
    dt: float = 0.01,
    t_max: float = 30.0,
    delays=None,
    seed=None,
    input_fan_in: float = None,
) -> NetworkTopology:
    """Construct a network with freshly initialized weights.

    Weights start uniform in [1, 10] / (m * fan_in) so that initial peak
    potentials straddle the unit threshold; outgoing weights of inhibitory
    neurons are negated. `inhibitory` is an iterable of (layer, index) pairs.
    With population-coded inputs most input neurons stay silent, so
    `input_fan_in` can override the first layer pair's fan-in with the
    expected number of active inputs to keep the straddle property.
    """
    rng = np.random.default_rng(seed)
    delays = default_delays(m) if delays is None else np.asarray(delays, dtype=float)
    layer_sizes = tuple(layer_sizes)
    inhib = [np.zeros(n, dtype=bool) for n in layer_sizes]
    for layer, idx in inhibitory:
        inhib[layer][idx] = True
    weights = []
    for p in range(len(layer_sizes) - 1):
        n_pre, n_post = layer_sizes[p], layer_sizes[p + 1]
        fan_in = input_fan_in if p == 0 and input_fan_in else n_pre
        w = rng.uniform(1.0, 10.0, size=(n_pre, n_post, delays.size)) / (delays.size * fan_in)
        w[inhib[p]] *= -1.0
        weights.append(w)
    thresholds = [np.full(n, float(threshold)) for n in layer_sizes]
    syn = SynapseArray(weights, delays)
    return NetworkTopology(layer_sizes, syn, KernelParams(tau), thresholds, inhib, dt, t_max)


def clamp_inhibitory(net: NetworkTopology) -> None:
    """Force outgoing weights of inhibitory neurons to be <= 0."""
    for p, w in enumerate(net.synapses.weights):
        rows = net.inhibitory[p]
        if rows.any():
            w[rows] = np.minimum(w[rows], 0.0)


def membrane_potential(t: float, pre_times, weights, delays, tau: float = 7.0) -> float:
    """State variable of one neuron: sum_i sum_k w[i,k] * eps(t - t_i - d_k).

    `weights` is the (n_pre, m) slab for the neuron; presynaptic neurons with
    NON_FIRING times contribute nothing.
    """
    pre_times = np.asarray(pre_times, dtype=float)
    weights = np.asarray(weights, dtype=float)
    delays = np.asarray(delays, dtype=float)
    fired = np.isfinite(pre_times)
    if not fired.any():
        return 0.0
    rel = t - pre_times[fired, None] - delays[None, :]
    return float(np.sum(weights[fired] * spike_response(rel, tau)))


_GRID_CACHE = {}


def _grid(n_steps: int, dt: float, tau: float):
    """Cached time grid and exp(-t/tau) column factors for a network geometry."""
    key = (n_steps, dt, tau)
    hit = _GRID_CACHE.get(key)
    if hit is None:
        if len(_GRID_CACHE) > 16:
            _GRID_CACHE.clear()
        t = np.arange(n_steps + 1) * dt
        hit = _GRID_CACHE[key] = (t, np.exp(-t / tau))
    return hit


def _first_crossings(pre_times, w, delays, thresholds, tau, dt, n_steps, block=384):
    """First grid crossing time per postsynaptic neuron, NON_FIRING if none.

    eps(t - s) is evaluated as (t - s) * (e/tau) * exp(s/tau) * exp(-t/tau);
    the column factor exp(-t/tau) is shared by all terminals, which keeps the
    grid sweep cheap.
    """
    n_post = w.shape[1]
    out = np.full(n_post, NON_FIRING)
    fired = np.isfinite(pre_times)
    if not fired.any():
        return out
    onsets = (pre_times[fired, None] + delays[None, :]).ravel()
    wf = np.ascontiguousarray(np.swapaxes(w[fired], 1, 2).reshape(-1, n_post)).T
    coef = (E1 / tau) * np.exp(onsets / tau)
    t_all, decay_all = _grid(n_steps, dt, tau)
    pending = np.ones(n_post, dtype=bool)
    lo = max(0, int(onsets.min() / dt))  # potential is identically zero before the first onset
    while lo <= n_steps:
        hi = min(lo + block, n_steps + 1)
        t = t_all[lo:hi]
        rel = t[None, :] - onsets[:, None]
        np.maximum(rel, 0.0, out=rel)
        rel *= coef[:, None]
        rel *= decay_all[lo:hi][None, :]
        pot = wf @ rel
        crossed = pot >= thresholds[:, None]
        crossed[~pending, :] = False
        hit = crossed.any(axis=1)
        if hit.any():
            out[hit] = t[crossed[hit].argmax(axis=1)]
            pending &= ~hit
            if not pending.any():
                break
        lo = hi
    return out


def simulate_forward(net: NetworkTopology, input_times) -> list:
    """Evaluate layers in order; returns firing times for every layer.

    Result is a list of (n,) arrays, one per layer, NON_FIRING (inf) marking
    silent neurons. Input times must lie in [0, t_max].
    """
    input_times = np.asarray(input_times, dtype=float)
    if input_times.shape != (net.layer_sizes[0],):
        raise MalformedInput(
            f"input schedule length {input_times.shape} != input layer size {net.layer_sizes[0]}"
        )
    schedule = [input_times.copy()]
    for p, w in enumerate(net.synapses.weights):
        schedule.append(
            _first_crossings(
                schedule[-1],
                w,
                net.synapses.delays,
                net.thresholds[p + 1],
                net.kernel.tau,
                net.dt,
                net.n_steps,
            )
        )
    return schedule
