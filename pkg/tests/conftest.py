import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes oracles importable

REPO = Path(__file__).resolve().parent.parent
DATA_DIR = REPO / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_chain_net(w_scale=1.0, dt=0.01, tau=7.0):
    """1-1-1 network with a single unit-delay terminal per pair.

    With w_scale=1 the hidden potential is exactly the kernel, peaking at 1.0
    (the threshold) at t = input + delay + tau.
    """
    from snnrobust.kernel import KernelParams
    from snnrobust.network import NetworkTopology, SynapseArray

    weights = [np.full((1, 1, 1), w_scale), np.full((1, 1, 1), w_scale)]
    syn = SynapseArray(weights, np.array([1.0]))
    return NetworkTopology((1, 1, 1), syn, KernelParams(tau), dt=dt, t_max=30.0)


def make_random_net(seed, layer_sizes=(3, 5, 1), dt=0.01, t_max=30.0, inhibitory=()):
    from snnrobust.network import build_network

    return build_network(layer_sizes, inhibitory=inhibitory, dt=dt, t_max=t_max, seed=seed)


def xor_samples():
    from snnrobust.encoding import encode_xor

    return [encode_xor((a, b)) for a in (0, 1) for b in (0, 1)]
