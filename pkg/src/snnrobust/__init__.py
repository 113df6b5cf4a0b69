"""Feed-forward spiking networks, spike-time gradient training, and
input-perturbation robustness experiments."""

from .encoding import (
    INVALID,
    EncodedSample,
    LinearCoder,
    ReceptiveFieldBank,
    decode_nearest_target,
    decode_wta,
    encode_label_wta,
    encode_linear,
    encode_population,
    encode_xor,
)
from .kernel import KernelParams, spike_response, spike_response_derivative
from .network import (
    NON_FIRING,
    NetworkTopology,
    NeuronParams,
    SynapseArray,
    build_network,
    membrane_potential,
    simulate_forward,
)
from .perturbation import (
    PerturbationSpec,
    generate_perturbed_set,
    perturb_gaussian,
    perturb_sinusoidal,
)
from .spikeprop import TrainConfig, TrainTrace, sse_error, train

__all__ = [
    "INVALID",
    "NON_FIRING",
    "EncodedSample",
    "KernelParams",
    "LinearCoder",
    "NetworkTopology",
    "NeuronParams",
    "PerturbationSpec",
    "ReceptiveFieldBank",
    "SynapseArray",
    "TrainConfig",
    "TrainTrace",
    "build_network",
    "decode_nearest_target",
    "decode_wta",
    "encode_label_wta",
    "encode_linear",
    "encode_population",
    "encode_xor",
    "generate_perturbed_set",
    "membrane_potential",
    "perturb_gaussian",
    "perturb_sinusoidal",
    "simulate_forward",
    "spike_response",
    "spike_response_derivative",
    "sse_error",
    "train",
]

__version__ = "0.1.0"
