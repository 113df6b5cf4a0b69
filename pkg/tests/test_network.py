import math

import numpy as np
import pytest

from conftest import make_chain_net, make_random_net
from oracles import grid_sim, naive_membrane_potential
from snnrobust.errors import MalformedInput
from snnrobust.kernel import KernelParams
from snnrobust.network import (
    NON_FIRING,
    NetworkTopology,
    NeuronParams,
    SynapseArray,
    build_network,
    clamp_inhibitory,
    default_delays,
    membrane_potential,
    simulate_forward,
)


def test_single_psp_at_kernel_peak():
    # one spike at 0 through a 1 ms delay: potential at t=8 is the kernel peak
    assert membrane_potential(8.0, [0.0], [[1.0]], np.array([1.0]), 7.0) == pytest.approx(1.0)


def test_zero_weights_zero_potential():
    w = np.zeros((4, 16))
    for t in np.linspace(0, 25, 50):
        assert membrane_potential(t, [0.0, 1.0, 2.0, 3.0], w, default_delays(16), 7.0) == 0.0


def test_nonfiring_presyn_contribute_nothing():
    delays = default_delays(4)
    w = np.ones((2, 4))
    both = membrane_potential(10.0, [0.0, 1.0], w, delays, 7.0)
    second_silent = membrane_potential(10.0, [0.0, NON_FIRING], w, delays, 7.0)
    only_first = membrane_potential(10.0, [0.0], w[:1], delays, 7.0)
    assert second_silent == pytest.approx(only_first)
    assert second_silent < both


def test_membrane_potential_matches_naive_sum(rng):
    delays = default_delays(16)
    w = rng.normal(0.0, 0.1, size=(2, 16))
    pre = np.array([0.7, 3.1])
    for t in np.linspace(0.0, 28.0, 57):
        expected = naive_membrane_potential(t, pre, w, delays, 7.0)
        assert membrane_potential(t, pre, w, delays, 7.0) == pytest.approx(expected, abs=1e-12)


def test_linearity_in_weights(rng):
    delays = default_delays(16)
    w = rng.uniform(0.0, 0.2, size=(3, 16))
    pre = np.array([0.0, 2.0, 5.0])
    for alpha in (0.0, 0.25, 2.0, 7.5):
        for t in (4.0, 9.0, 17.0):
            assert membrane_potential(t, pre, alpha * w, delays, 7.0) == pytest.approx(
                alpha * membrane_potential(t, pre, w, delays, 7.0), rel=1e-12, abs=0.0
            )


def test_chain_fires_exactly_at_peak():
    # unit weight makes the hidden peak touch threshold exactly at t=0+1+7
    net = make_chain_net(w_scale=1.0)
    sched = simulate_forward(net, np.array([0.0]))
    assert sched[1][0] == pytest.approx(8.0, abs=1e-9)
    # hidden spike at 8 drives the output to its own peak at 8+1+7
    assert sched[2][0] == pytest.approx(16.0, abs=1e-9)


def test_chain_below_threshold_never_fires():
    net = make_chain_net(w_scale=0.5)
    sched = simulate_forward(net, np.array([0.0]))
    assert sched[1][0] == NON_FIRING
    assert sched[2][0] == NON_FIRING


def test_malformed_input_rejected():
    net = make_chain_net()
    with pytest.raises(MalformedInput):
        simulate_forward(net, np.array([0.0, 1.0]))


def test_simulation_deterministic():
    net = make_random_net(seed=5)
    inp = np.array([0.0, 6.0, 0.0])
    a = simulate_forward(net, inp)
    b = simulate_forward(net, inp)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_matches_fine_grid_oracle_on_xor_net():
    # briefly trained XOR network; oracle re-simulates at dt/10
    from conftest import xor_samples
    from oracles import grid_layer
    from snnrobust.spikeprop import TrainConfig, train

    net = make_random_net(seed=3, dt=0.05, inhibitory=[(1, 4)])
    train(net, xor_samples(), TrainConfig(eta=0.01, max_epochs=30), rng_seed=9)
    for s in xor_samples():
        ours = simulate_forward(net, s.input_times)
        # per-layer: conditioned on the same presynaptic times, the coarse
        # first crossing may trail the fine one by at most dt
        for p in range(len(net.synapses.weights)):
            want = grid_layer(net, p, ours[p], dt=net.dt / 10)
            for g, w in zip(ours[p + 1], want):
                if math.isinf(w):
                    assert math.isinf(g)
                else:
                    assert abs(g - w) <= net.dt + 1e-12
        # end to end, upstream quantization compounds layer by layer
        ref = grid_sim(net, s.input_times, dt=net.dt / 10)
        for depth, (got, want) in enumerate(zip(ours[1:], ref[1:]), start=1):
            for g, w in zip(got, want):
                if math.isinf(w):
                    assert math.isinf(g)
                else:
                    assert abs(g - w) <= depth * net.dt + 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_grid_refinement_monotonicity(seed):
    # halving dt never delays a firing time by more than the coarse dt
    coarse = make_random_net(seed=seed, dt=0.02)
    fine = coarse.copy()
    fine.dt = 0.01
    inp = np.array([0.0, 4.0, 1.5])
    tc = simulate_forward(coarse, inp)
    tf = simulate_forward(fine, inp)
    for layer_c, layer_f in zip(tc[1:], tf[1:]):
        for c, f in zip(layer_c, layer_f):
            if math.isfinite(c) or math.isfinite(f):
                assert f <= c + coarse.dt + 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_time_translation_invariance(seed):
    net = make_random_net(seed=seed, dt=0.01, t_max=25.0)
    shifted = net.copy()
    delta = 137 * net.dt  # grid-aligned shift
    shifted.t_max = net.t_max + delta
    inp = np.array([0.0, 3.0, 1.0])
    base = simulate_forward(net, inp)
    moved = simulate_forward(shifted, inp + delta)
    for b, m in zip(base[1:], moved[1:]):
        for x, y in zip(b, m):
            if math.isinf(x):
                assert math.isinf(y)
            else:
                assert y == pytest.approx(x + delta, abs=1e-9)


def test_own_potential_not_reevaluated_after_firing():
    # the first crossing is reported even if the potential stays above threshold
    net = make_chain_net(w_scale=3.0)
    sched = simulate_forward(net, np.array([0.0]))
    t_fire = sched[1][0]
    assert t_fire < 8.0  # crosses on the rising flank, well before the peak
    assert membrane_potential(8.0, [0.0], [[3.0]], np.array([1.0]), 7.0) > 1.0


def test_inhibitory_clamp():
    net = build_network((3, 5, 1), inhibitory=[(1, 4)], seed=0)
    w = net.synapses.weights[1]
    assert (w[4] <= 0).all()
    w[4] += 1.0  # drift positive, clamp must restore the invariant
    clamp_inhibitory(net)
    assert (net.synapses.weights[1][4] <= 0).all()


def test_topology_validation():
    delays = default_delays(4)
    good = [np.zeros((2, 3, 4)), np.zeros((3, 1, 4))]
    NetworkTopology((2, 3, 1), SynapseArray([w.copy() for w in good], delays))
    with pytest.raises(ValueError):  # two layers only
        NetworkTopology((2, 3), SynapseArray([np.zeros((2, 3, 4))], delays))
    with pytest.raises(ValueError):  # dt out of range
        NetworkTopology((2, 3, 1), SynapseArray([w.copy() for w in good], delays), dt=0.5)
    with pytest.raises(ValueError):  # t_max below the largest delay
        NetworkTopology((2, 3, 1), SynapseArray([w.copy() for w in good], delays), t_max=3.0)
    with pytest.raises(ValueError):  # decreasing delays
        SynapseArray([np.zeros((2, 3, 2))], np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        NeuronParams(threshold=0.0)
    # paper configuration: delays are 1..m milliseconds
    np.testing.assert_array_equal(default_delays(16), np.arange(1.0, 17.0))
