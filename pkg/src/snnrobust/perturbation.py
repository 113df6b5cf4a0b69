"""Random perturbations of input feature vectors.

Two families: additive sinusoidal noise with amplitude A, and a
multiplicative 'Gaussian' style where each component is scaled by
1 - exp(-r^2/2) with a random sign. Component draws are independent and the
perturbation magnitude vanishes as A or r* go to 0.
"""

from dataclasses import dataclass, field

import numpy as np

SINUSOIDAL = "sinusoidal"
GAUSSIAN = "gaussian"
NONE = "none"


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    amplitude: float = 0.0  # A, sinusoidal
    r_star: float = 0.0  # least upper bound of the r components, gaussian
    seed: int = 0
    literal_sign: bool = False  # alternative reading: sign inside the scale factor

    def __post_init__(self):
        if self.kind not in (SINUSOIDAL, GAUSSIAN, NONE):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == SINUSOIDAL and not 0 < self.amplitude <= 1:
            raise ValueError("sinusoidal amplitude A must be in (0, 1]")
        if self.kind == GAUSSIAN and not 0 < self.r_star <= 1:
            raise ValueError("r_star must be in (0, 1]")

    @property
    def param(self) -> float:
        """The table parameter: A for sinusoidal, r* for gaussian, 0 for none."""
        if self.kind == SINUSOIDAL:
            return self.amplitude
        if self.kind == GAUSSIAN:
            return self.r_star
        return 0.0


def perturb_sinusoidal(x0, amplitude: float, rng) -> np.ndarray:
    """x0 + A*sin(2*pi*y) with y drawn uniform on [0,1], componentwise."""
    x0 = np.asarray(x0, dtype=float)
    y = rng.uniform(0.0, 1.0, size=x0.shape)
    return x0 + amplitude * np.sin(2.0 * np.pi * y)


def perturb_gaussian(x0, r_star: float, rng, literal_sign: bool = False) -> np.ndarray:
    """Scale each component by 1 +/- (1 - exp(-r^2/2)), r uniform on [0, r*].

    The random sign (sgn of l, uniform on [-1,1], with sgn(0) = +1) flips the
    perturbation term, so draws cluster around x0 and spread as r* grows.
    With literal_sign=True the sign multiplies exp(-r^2/2) inside the factor
    instead, giving deviations near +2*x0 for negative signs.
    """
    x0 = np.asarray(x0, dtype=float)
    r = rng.uniform(0.0, r_star, size=x0.shape)
    l = rng.uniform(-1.0, 1.0, size=x0.shape)
    sign = np.where(l >= 0, 1.0, -1.0)
    if literal_sign:
        return x0 + x0 * (1.0 - np.exp(-(r**2) / 2.0) * sign)
    return x0 + sign * x0 * (1.0 - np.exp(-(r**2) / 2.0))


def perturb(x0, spec: PerturbationSpec, rng) -> np.ndarray:
    if spec.kind == SINUSOIDAL:
        return perturb_sinusoidal(x0, spec.amplitude, rng)
    if spec.kind == GAUSSIAN:
        return perturb_gaussian(x0, spec.r_star, rng, spec.literal_sign)
    return np.array(x0, dtype=float, copy=True)


@dataclass
class PerturbedSet:
    vectors: np.ndarray  # (n, dim)
    base: np.ndarray
    spec: PerturbationSpec = field(repr=False)


def generate_perturbed_set(x0, n: int, spec: PerturbationSpec) -> PerturbedSet:
    """n seeded independent draws around x0; same spec (and seed) = same set."""
    if n < 1:
        raise ValueError("need at least one draw")
    x0 = np.asarray(x0, dtype=float)
    rng = np.random.default_rng(spec.seed)
    vectors = np.stack([perturb(x0, spec, rng) for _ in range(n)])
    return PerturbedSet(vectors=vectors, base=x0.copy(), spec=spec)
