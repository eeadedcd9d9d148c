"""
Module that provides the spectral machinery on uniform periodic grids
"""

import math
from typing import Union

import numpy as np

from levy_bridge.exceptions import LevyBridgeValidationError
from levy_bridge.quadrature import LevyQuadrature
from levy_bridge.schemas import BorelInterval, ComplexField, Grid1D, NoiseKind, RealField

AnyField = Union[RealField, ComplexField]


def fourier_transform(field: AnyField) -> np.ndarray:
    """f^(p) = (2 pi)^(-1/2) int e^{-ipx} f(x) dx at the grid frequencies, in FFT order"""

    grid = field.grid
    return grid.dx / math.sqrt(2.0 * math.pi) * np.exp(-1j * grid.p * grid.x_min) * np.fft.fft(field.samples)


def inverse_fourier_transform(grid: Grid1D, spectrum: np.ndarray) -> ComplexField:
    """Unitary adjoint of fourier_transform"""

    samples = math.sqrt(2.0 * math.pi) / grid.dx * np.fft.ifft(np.exp(1j * grid.p * grid.x_min) * spectrum)
    return ComplexField(grid=grid, samples=samples)


def fourier_transform_at(field: AnyField, p) -> np.ndarray:
    """Direct rectangle-rule quadrature of the transform at arbitrary momenta"""

    grid = field.grid
    phases = np.exp(-1j * np.outer(np.atleast_1d(p), grid.x))
    return grid.dx / math.sqrt(2.0 * math.pi) * (phases @ field.samples)


def _multiply(samples: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(samples) * multiplier)


def exponent_eval(kind: NoiseKind, p: float) -> float:
    """Characteristic exponent F(p)"""

    if not math.isfinite(p):
        raise LevyBridgeValidationError(f"p must be finite: found {p}")
    return float(kind.exponent(p))


def apply_semigroup(field: RealField, kind: NoiseKind, t: float) -> RealField:
    """exp(-tH) f"""

    if t < 0:
        raise LevyBridgeValidationError(f"t must be >= 0: found {t}")
    if t == 0:
        return field
    multiplier = np.exp(-t * kind.exponent(field.grid.p))
    return field.with_samples(_multiply(field.samples, multiplier).real)


def apply_unitary(field: ComplexField, kind: NoiseKind, s: float) -> ComplexField:
    """exp(-isH) f"""

    if s == 0:
        return field
    multiplier = np.exp(-1j * s * kind.exponent(field.grid.p))
    return field.with_samples(_multiply(field.samples, multiplier))


def apply_generator_spectral(field: AnyField, kind: NoiseKind) -> ComplexField:
    """H f = (F(p) f^)^v. Accurate only for fields resolved by the grid"""

    return ComplexField(grid=field.grid, samples=_multiply(field.samples, kind.exponent(field.grid.p)))


def apply_generator_levy(field: AnyField, kind: NoiseKind, eps: float) -> ComplexField:
    """H f = -int [f(x+y) - f(x) - y f'(x)/(1+y^2)] nu(dy) by symmetric-pair quadrature"""

    if not eps > 0:
        raise LevyBridgeValidationError(f"eps must be > 0: found {eps}")
    quadrature = LevyQuadrature(kind, eps, field.grid)
    base = np.asarray(field.samples, dtype=complex)
    shifted = quadrature.shifter(base)
    return ComplexField(grid=field.grid, samples=-quadrature.integrate(lambda y: shifted(y) - base))


def derivative(field: AnyField, order: int = 1) -> ComplexField:
    """Spectral derivative; the Nyquist mode is dropped for odd orders"""

    p = field.grid.p.copy()
    if order % 2 == 1:
        p[field.grid.n // 2] = 0.0
    return ComplexField(grid=field.grid, samples=_multiply(field.samples, (1j * p) ** order))


def laplacian(field: AnyField) -> ComplexField:
    return derivative(field, 2)


def newton_wigner_map(field: ComplexField, m: float) -> ComplexField:
    """((p^2 + m^2)^(1/4) f^)^v"""

    if not m > 0:
        raise LevyBridgeValidationError(f"m must be > 0: found {m}")
    multiplier = (np.square(field.grid.p) + m * m) ** 0.25
    return field.with_samples(_multiply(field.samples, multiplier))


def klein_gordon_product(first: ComplexField, second: ComplexField, m: float) -> complex:
    """Symmetrized Klein-Gordon product 1/2 int [conj(f1) w f2 + conj(w f1) f2] dx, w = (p^2 + m^2)^(1/2),
    evaluated in momentum space"""

    if not m > 0:
        raise LevyBridgeValidationError(f"m must be > 0: found {m}")
    grid = first.grid
    omega = np.sqrt(np.square(grid.p) + m * m)
    dp = 2.0 * math.pi / grid.length
    spectrum1, spectrum2 = fourier_transform(first), fourier_transform(second)
    return complex(dp * np.sum(np.conj(spectrum1) * omega * spectrum2))


def newton_wigner_probability(field: ComplexField, m: float, interval: BorelInterval) -> float:
    """Prob[X in A] = int_A |(-Delta + m^2)^(1/4) f|^2 dx"""

    mapped = newton_wigner_map(field, m)
    inside = interval.contains(field.grid.x)
    return float(field.grid.dx * np.sum(np.abs(mapped.samples[inside]) ** 2))
