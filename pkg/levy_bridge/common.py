"""
Module that provides common classes for the Levy Bridge library
"""

from enum import Enum


class NoiseFamily(Enum):
    """Noise Family Enum"""

    GAUSSIAN = "gaussian"
    CAUCHY = "cauchy"
    RELATIVISTIC = "relativistic"


class JumpSide(Enum):
    """Jump Side Enum"""

    BOTH = "both"
    POSITIVE = "positive"
    NEGATIVE = "negative"


class JumpRateMode(Enum):
    """Jump Rate Mode Enum"""

    GROUND = "ground"
    QUANTUM = "quantum"
    QUANTUM_RAW = "quantum_raw"


class GaussianSelector(Enum):
    """Gaussian Reference Selector Enum"""

    FREE_PACKET = "free_packet"
    FREE_DENSITY = "free_density"
    NELSON_TRANSITION = "nelson_transition"
    MADELUNG_EXPONENTS = "madelung_exponents"
    FORWARD_THETA = "forward_theta"
    BACKWARD_THETA = "backward_theta"
    BERNSTEIN_DENSITY = "bernstein_density"
    GAUSSIAN_BRIDGE = "gaussian_bridge"


class Experiment(Enum):
    """Experiment Enum"""

    EVOLVE = "evolve"
    BRIDGE = "bridge"
    SIMULATE = "simulate"
    MARKOV_TEST = "markov-test"
    KERNELS = "kernels"
    JUMPRATE = "jumprate"
    ACCEPTANCE = "acceptance"


class InitialState(Enum):
    """Initial Wave Function Enum"""

    CAUCHY_LORENTZIAN = "cauchy-lorentzian"
    GAUSSIAN = "gaussian"
