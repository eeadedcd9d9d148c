"""
Module that provides exceptions for the Levy Bridge library
"""


class LevyBridgeError(Exception):
    """Base exception class"""

    def __init__(self, message: str = "Computation failed", name: str = "LevyBridge"):
        self.message = message
        self.name = name
        super().__init__(self.message, self.name)


class LevyBridgeValidationError(LevyBridgeError):
    """Validation error"""


class ConfigError(LevyBridgeError):
    """Experiment configuration could not be parsed or validated"""


class NonConvergenceError(LevyBridgeError):
    """Iterative solver did not reach its tolerance"""


class DegenerateMarginalError(LevyBridgeError):
    """A marginal density makes a quotient undefined"""


class NodalRegionError(LevyBridgeError):
    """Evaluation requested where the wave function or density vanishes"""


class PoleProximityError(LevyBridgeError):
    """Ratio kernel evaluated too close to a denominator zero"""


class WitnessNotFoundError(LevyBridgeError):
    """No positive-definiteness violation found"""


class SingularPointError(LevyBridgeError):
    """Pointwise evaluation at an integrable singularity"""


class InsufficientSamplesError(LevyBridgeError):
    """Too few Monte Carlo samples for a statistical comparison"""
