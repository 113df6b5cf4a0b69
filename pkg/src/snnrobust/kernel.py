"""Spike-response kernel: the post-synaptic potential shape and its time derivative."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KernelParams:
    """Membrane decay time constant, in milliseconds."""

    tau: float = 7.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be > 0")


def spike_response(t, tau: float = 7.0):
    """PSP kernel (t/tau)*exp(1 - t/tau) for t > 0, else 0.

    Nonnegative, unimodal, peaks at exactly 1.0 when t == tau.
    Accepts scalars or arrays.
    """
    t = np.asarray(t, dtype=float)
    u = t / tau
    out = np.where(t > 0, u * np.exp(1.0 - u), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def spike_response_derivative(t, tau: float = 7.0):
    """d/dt of spike_response: (1/tau)*exp(1 - t/tau)*(1 - t/tau) for t > 0, else 0."""
    t = np.asarray(t, dtype=float)
    u = t / tau
    out = np.where(t > 0, (1.0 - u) * np.exp(1.0 - u) / tau, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def kernel_pair(t, tau: float):
    """(spike_response, spike_response_derivative) sharing one exp evaluation."""
    t = np.asarray(t, dtype=float)
    u = t / tau
    e = np.exp(1.0 - u)
    pos = t > 0
    return np.where(pos, u * e, 0.0), np.where(pos, (1.0 - u) * e / tau, 0.0)


# exp(1)/tau factors show up in the vectorized forward pass
E1 = math.e
