"""Gradient descent on spike times.

The learning rule linearizes the threshold-crossing time of each neuron
around the current weights: the error in an output spike time propagates
backwards through per-terminal PSP derivatives, giving one delta per fired
neuron and the update dw = -eta * y * delta for every terminal.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiringOutput, TopologyMismatch
from .kernel import kernel_pair
from .network import NetworkTopology, clamp_inhibitory, simulate_forward


@dataclass
class TrainConfig:
    eta: float = 0.01
    max_epochs: int = 500
    shuffle_each_epoch: bool = True
    target_error: float = 0.0  # squared ms; 0 stops only at an exact-zero epoch
    denominator_floor: float = 0.1

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be > 0")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not self.denominator_floor > 0:
            raise ValueError("denominator_floor must be > 0")


@dataclass
class TrainTrace:
    epoch_error: list = field(default_factory=list)  # sum-squared error per epoch
    epoch_nonfiring: list = field(default_factory=list)  # samples with silent outputs

    def export(self, path) -> None:
        """Two-column text table (epoch, E) for plotting."""
        with open(path, "w") as fh:
            fh.write("# epoch\tsum_squared_error\n")
            for epoch, err in enumerate(self.epoch_error):
                fh.write(f"{epoch}\t{err:.9g}\n")


def sse_error(actual, desired) -> float:
    """0.5 * sum over outputs of (t - t_desired)^2, in squared milliseconds."""
    actual = np.asarray(actual, dtype=float)
    desired = np.asarray(desired, dtype=float)
    if not np.isfinite(actual).all():
        raise NonFiringOutput("output neuron(s) produced no spike")
    diff = actual - desired
    return float(0.5 * np.dot(diff, diff))


def psp_tables(pre_times, post_times, delays, tau):
    """PSP values and their time derivatives at the postsynaptic firing times.

    Returns (y, dy), each shaped (n_pre, n_post, m); entries involving a
    non-firing neuron on either side are zero.
    """
    pre_times = np.asarray(pre_times, dtype=float)
    post_times = np.asarray(post_times, dtype=float)
    with np.errstate(invalid="ignore"):
        rel = post_times[None, :, None] - pre_times[:, None, None] - delays[None, None, :]
    rel = np.where(np.isfinite(rel), rel, -1.0)
    return kernel_pair(rel, tau)


def clamp_denominator(denom, floor: float):
    """Floor |denom| at `floor`, preserving sign; sign of an exact 0 is +."""
    denom = np.asarray(denom, dtype=float)
    sign = np.where(denom >= 0, 1.0, -1.0)
    return np.where(np.abs(denom) < floor, sign * floor, denom)


def step_tables(net: NetworkTopology, schedule):
    """(y, dy) PSP tables for every layer pair at the schedule's firing times."""
    delays, tau = net.synapses.delays, net.kernel.tau
    return [
        psp_tables(schedule[p], schedule[p + 1], delays, tau)
        for p in range(net.n_layers - 1)
    ]


def _deltas_from_dy(out_times, desired, w, dy, floor):
    denom = clamp_denominator(np.einsum("ijk,ijk->j", w, dy), floor)
    with np.errstate(invalid="ignore"):
        d = (np.asarray(desired, dtype=float) - out_times) / denom
    return np.where(np.isfinite(out_times), d, 0.0)


def output_deltas(pre_times, out_times, desired, w, delays, tau, floor):
    """delta_j = (t_j_desired - t_j) / sum_il w[i,j,l] * d/dt psp; 0 if j silent."""
    _, dy = psp_tables(pre_times, out_times, delays, tau)
    return _deltas_from_dy(out_times, desired, w, dy, floor)


def _hidden_from_dy(times, down_deltas, w_up, w_down, dy_up, dy_down, floor):
    num = np.einsum("ijk,ijk,j->i", w_down, dy_down, down_deltas)
    denom = clamp_denominator(np.einsum("ijk,ijk->j", w_up, dy_up), floor)
    return np.where(np.isfinite(times), num / denom, 0.0)


def hidden_deltas(up_times, times, down_times, down_deltas, w_up, w_down, delays, tau, floor):
    """Backpropagated delta for a hidden layer.

    Numerator gathers downstream deltas weighted by each connection's PSP
    derivative at the downstream firing time; the denominator mirrors the
    output rule at this layer's own firing times. Silent neurons get 0.
    """
    _, dy_down = psp_tables(times, down_times, delays, tau)
    _, dy_up = psp_tables(up_times, times, delays, tau)
    return _hidden_from_dy(times, down_deltas, w_up, w_down, dy_up, dy_down, floor)


def compute_deltas(net: NetworkTopology, schedule, desired, floor: float, tables=None):
    """Deltas for every non-input layer, output layer first computed."""
    tables = tables or step_tables(net, schedule)
    n = net.n_layers
    deltas = [None] * n
    deltas[n - 1] = _deltas_from_dy(
        schedule[n - 1], desired, net.synapses.weights[-1], tables[-1][1], floor
    )
    for layer in range(n - 2, 0, -1):
        deltas[layer] = _hidden_from_dy(
            schedule[layer],
            deltas[layer + 1],
            net.synapses.weights[layer - 1],
            net.synapses.weights[layer],
            tables[layer - 1][1],
            tables[layer][1],
            floor,
        )
    return deltas


def apply_updates(net: NetworkTopology, deltas, schedule, eta: float, tables=None) -> NetworkTopology:
    """w <- w - eta * y_i^k(t_j) * delta_j, then re-clamp inhibitory rows."""
    tables = tables or step_tables(net, schedule)
    for p, w in enumerate(net.synapses.weights):
        w -= eta * tables[p][0] * deltas[p + 1][None, :, None]
    clamp_inhibitory(net)
    return net


def forward_with_recovery(net: NetworkTopology, input_times, boost: float = 1.05):
    """Simulate; on silent outputs, boost silent neurons' fan-in once and retry.

    The 5% multiplicative boost scales a silent neuron's whole potential
    curve (potential is linear in the incoming weights), so repeated failures
    compound across samples until the neuron fires again. Returns
    (schedule, outputs_ok).
    """
    schedule = simulate_forward(net, input_times)
    if np.isfinite(schedule[-1]).all():
        return schedule, True
    for layer in range(1, net.n_layers):
        silent = ~np.isfinite(schedule[layer])
        if silent.any():
            net.synapses.weights[layer - 1][:, silent, :] *= boost
    schedule = simulate_forward(net, input_times)
    return schedule, bool(np.isfinite(schedule[-1]).all())


def train(net: NetworkTopology, dataset, cfg: TrainConfig, rng_seed=None):
    """Online SpikeProp over `dataset` (a list of EncodedSample).

    Mutates `net` in place and returns (net, trace). Stops at max_epochs or
    when an epoch's summed error reaches target_error with every output
    firing. Samples whose outputs stay silent after one recovery boost are
    skipped and counted in the trace.
    """
    if len(dataset) == 0:
        raise TopologyMismatch("dataset is empty")
    n_in, n_out = net.layer_sizes[0], net.layer_sizes[-1]
    for s in dataset:
        if len(s.input_times) != n_in or len(s.desired) != n_out:
            raise TopologyMismatch(
                f"sample is {len(s.input_times)}->{len(s.desired)}, network {n_in}->{n_out}"
            )
    rng = np.random.default_rng(rng_seed)
    trace = TrainTrace()
    for _ in range(cfg.max_epochs):
        if cfg.shuffle_each_epoch:
            order = rng.permutation(len(dataset))
        else:
            order = np.arange(len(dataset))
        err = 0.0
        nonfiring = 0
        for s_idx in order:
            sample = dataset[s_idx]
            schedule, ok = forward_with_recovery(net, sample.input_times)
            if not ok:
                nonfiring += 1
                continue
            err += sse_error(schedule[-1], sample.desired)
            tables = step_tables(net, schedule)
            deltas = compute_deltas(net, schedule, sample.desired, cfg.denominator_floor, tables)
            apply_updates(net, deltas, schedule, cfg.eta, tables)
        trace.epoch_error.append(err)
        trace.epoch_nonfiring.append(nonfiring)
        if err <= cfg.target_error and nonfiring == 0:
            break
    return net, trace
