#!/usr/bin/env python3
"""Train the 3-5-1 XOR network once and show the learning curve numbers.

Usage: python scripts/run_xor.py [seed]
"""

import sys

import numpy as np

from snnrobust.encoding import encode_xor
from snnrobust.network import build_network, simulate_forward
from snnrobust.spikeprop import TrainConfig, train


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    samples = [encode_xor((a, b)) for a in (0, 1) for b in (0, 1)]
    net = build_network((3, 5, 1), inhibitory=[(1, 4)], dt=0.01, t_max=30.0, seed=[seed, 11])
    cfg = TrainConfig(eta=0.01, max_epochs=500, target_error=0.5)
    net, trace = train(net, samples, cfg, rng_seed=[seed, 23])
    print(f"seed {seed}: stopped after {len(trace.epoch_error)} epochs, "
          f"E = {trace.epoch_error[-1]:.3f} ms^2")
    marks = np.unique(np.geomspace(1, len(trace.epoch_error), 12).astype(int)) - 1
    for e in marks:
        print(f"  epoch {e + 1:4d}: E = {trace.epoch_error[e]:8.3f}  "
              f"silent-output samples = {trace.epoch_nonfiring[e]}")
    print("pattern -> output spike time (desired)")
    for s in samples:
        out = simulate_forward(net, s.input_times)[-1][0]
        print(f"  {s.input_times[:2]} -> {out:6.2f} ms  ({s.desired[0]:.0f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
