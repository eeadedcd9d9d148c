"""Module that provides schema for the Levy Bridge library"""

import math
from pathlib import Path
from typing import Annotated, Any, Callable, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import special

from levy_bridge.common import Experiment, InitialState, JumpSide

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]


def relativistic_levy_density(y, m: float):
    """(m/(pi|y|)) K1(m|y|), evaluated with the exponentially scaled Bessel function"""

    z = m * np.abs(y)
    return m * special.k1e(z) * np.exp(-z) / (math.pi * np.abs(y))


# Noise kinds


class GaussianNoise(BaseModel):
    """Gaussian Noise Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["gaussian"] = "gaussian"
    D: PositiveFloat = 1.0

    @property
    def pure_jump(self) -> bool:
        return False

    def exponent(self, p):
        """F(p) = D p^2"""

        return self.D * np.square(p)


class CauchyNoise(BaseModel):
    """Cauchy Noise Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["cauchy"] = "cauchy"

    @property
    def pure_jump(self) -> bool:
        return True

    def exponent(self, p):
        """F(p) = |p|"""

        return np.abs(p)

    def levy_density(self, y):
        """nu(dy)/dy = 1/(pi y^2)"""

        return 1.0 / (math.pi * np.square(y))


class RelativisticNoise(BaseModel):
    """Relativistic Noise Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["relativistic"] = "relativistic"
    m: PositiveFloat = 1.0

    @property
    def pure_jump(self) -> bool:
        return True

    def exponent(self, p):
        """F(p) = sqrt(p^2 + m^2) - m, written without cancellation near p = 0"""

        p2 = np.square(p)
        return p2 / (np.sqrt(p2 + self.m**2) + self.m)

    def levy_density(self, y):
        return relativistic_levy_density(y, self.m)


NoiseKind = Annotated[Union[GaussianNoise, CauchyNoise, RelativisticNoise], Field(discriminator="family")]


# Kernel kinds


class HeatKernel(BaseModel):
    """Heat Kernel Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["heat"] = "heat"
    D: PositiveFloat = 1.0

    @property
    def noise(self) -> GaussianNoise:
        return GaussianNoise(D=self.D)

    def density(self, r, tau: float):
        """k_tau(r) = [4 pi D tau]^(-1/2) exp(-r^2/(4 D tau))"""

        return np.exp(-np.square(r) / (4.0 * self.D * tau)) / math.sqrt(4.0 * math.pi * self.D * tau)


class CauchyKernel(BaseModel):
    """Cauchy Semigroup Kernel Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["cauchy"] = "cauchy"

    @property
    def noise(self) -> CauchyNoise:
        return CauchyNoise()

    def density(self, r, tau: float):
        """k_tau(r) = tau / (pi (tau^2 + r^2))"""

        return tau / (math.pi * (tau**2 + np.square(r)))


class RelativisticKernel(BaseModel):
    """Relativistic Semigroup Kernel Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Literal["relativistic"] = "relativistic"
    m: PositiveFloat = 1.0

    @property
    def noise(self) -> RelativisticNoise:
        return RelativisticNoise(m=self.m)

    def density(self, r, tau: float):
        """k_tau(r) = (m tau e^{m tau} / pi) K1(m w) / w with w = sqrt(r^2 + tau^2)"""

        w = np.sqrt(np.square(r) + tau**2)
        return self.m * tau * special.k1e(self.m * w) * np.exp(self.m * (tau - w)) / (math.pi * w)


KernelKind = Annotated[Union[HeatKernel, CauchyKernel, RelativisticKernel], Field(discriminator="family")]


# Grids and sampled fields


class Grid1D(BaseModel):
    """Uniform Periodic Grid Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    x_min: FiniteFloat
    x_max: FiniteFloat
    n: Annotated[int, Field(strict=True, ge=16)]

    @field_validator("n")
    @classmethod
    def n_power_of_two(cls, value):
        """Validates that n is a power of two"""

        assert value & (value - 1) == 0, f"n must be a power of two: found {value}"
        return value

    @model_validator(mode="after")
    def domain_non_empty(self):
        """Validates that x_max > x_min"""

        assert self.x_max > self.x_min, f"x_max must be > x_min: found [{self.x_min}, {self.x_max}]"
        return self

    @classmethod
    def symmetric(cls, half_width: float, n: int) -> "Grid1D":
        return cls(x_min=-half_width, x_max=half_width, n=n)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def p(self) -> np.ndarray:
        """Dual frequencies in FFT order, spanning [-pi/dx, pi/dx)"""

        return 2.0 * math.pi * np.fft.fftfreq(self.n, d=self.dx)


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class RealField(BaseModel):
    """Real Sampled Field Schema"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid1D
    samples: np.ndarray

    @field_validator("samples", mode="before")
    @classmethod
    def samples_as_array(cls, value):
        """Copies samples into a read-only float array"""

        return _read_only(np.array(value, dtype=float))

    @model_validator(mode="after")
    def samples_match_grid(self):
        """Validates sample count and finiteness"""

        assert self.samples.shape == (
            self.grid.n,
        ), f"samples must have length {self.grid.n}: found {self.samples.shape}"
        assert np.all(np.isfinite(self.samples)), "samples must be finite"
        return self

    @classmethod
    def from_function(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray]) -> "RealField":
        return cls(grid=grid, samples=fn(grid.x))

    def integral(self) -> float:
        """Rectangle rule on the periodic grid"""

        return float(self.grid.dx * np.sum(self.samples))

    def norm(self) -> float:
        return math.sqrt(self.grid.dx * float(np.sum(np.square(self.samples))))

    def with_samples(self, samples) -> "RealField":
        return RealField(grid=self.grid, samples=samples)


class ComplexField(BaseModel):
    """Complex Sampled Field Schema"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid1D
    samples: np.ndarray

    @field_validator("samples", mode="before")
    @classmethod
    def samples_as_array(cls, value):
        """Copies samples into a read-only complex array"""

        return _read_only(np.array(value, dtype=complex))

    @model_validator(mode="after")
    def samples_match_grid(self):
        """Validates sample count and finiteness"""

        assert self.samples.shape == (
            self.grid.n,
        ), f"samples must have length {self.grid.n}: found {self.samples.shape}"
        assert np.all(np.isfinite(self.samples)), "samples must be finite"
        return self

    @classmethod
    def from_function(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray]) -> "ComplexField":
        return cls(grid=grid, samples=fn(grid.x))

    @classmethod
    def from_real(cls, field: RealField) -> "ComplexField":
        return cls(grid=field.grid, samples=field.samples)

    def integral(self) -> complex:
        return complex(self.grid.dx * np.sum(self.samples))

    def norm(self) -> float:
        return math.sqrt(self.grid.dx * float(np.sum(np.abs(self.samples) ** 2)))

    def density(self) -> RealField:
        """|psi|^2"""

        return RealField(grid=self.grid, samples=np.abs(self.samples) ** 2)

    def with_samples(self, samples) -> "ComplexField":
        return ComplexField(grid=self.grid, samples=samples)


DensityField = RealField


# Bridge


class BridgeProblem(BaseModel):
    """Schrodinger Marginal Problem Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rho1: DensityField
    rho2: DensityField
    t1: FiniteFloat
    t2: FiniteFloat
    kind: KernelKind

    @model_validator(mode="after")
    def marginals_valid(self):
        """Validates time ordering, a shared grid and normalized nonnegative marginals"""

        assert self.t1 < self.t2, f"t1 must be < t2: found t1={self.t1}, t2={self.t2}"
        assert self.rho1.grid == self.rho2.grid, "rho1 and rho2 must share a grid"
        for name, rho in (("rho1", self.rho1), ("rho2", self.rho2)):
            assert np.all(rho.samples >= 0), f"{name} must be nonnegative"
            mass = rho.integral()
            assert abs(mass - 1.0) <= 1e-8, f"{name} must integrate to 1: found {mass}"
        return self

    @property
    def grid(self) -> Grid1D:
        return self.rho1.grid


class BridgeSolution(BaseModel):
    """Schrodinger Marginal Solution Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    f: RealField
    g: RealField
    residual: Annotated[float, Field(ge=0)]
    iterations: Annotated[int, Field(ge=0)]
    residual_history: List[float] = []


class ThetaPair(BaseModel):
    """Propagated Theta Pair Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    theta: RealField
    theta_star: RealField
    t: FiniteFloat

    def density(self) -> RealField:
        """rho(x, t) = theta(x, t) theta*(x, t)"""

        return self.theta.with_samples(self.theta.samples * self.theta_star.samples)


class GaussianPacketParams(BaseModel):
    """Gaussian Packet Parameters Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha2: PositiveFloat = 2.0
    D: PositiveFloat = 1.0


class BernsteinParams(BaseModel):
    """Bernstein Bridge Parameters Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha0: PositiveFloat = 1.0
    D: PositiveFloat = 1.0


class GaussianBridgeParams(BaseModel):
    """Gaussian Endpoint Bridge Parameters Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    var1: PositiveFloat
    var2: PositiveFloat
    D: PositiveFloat = 1.0
    tau: PositiveFloat = 1.0


# Quantum


class MadelungPair(BaseModel):
    """Madelung Exponents Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    R: RealField
    S: RealField

    def reconstruct(self) -> ComplexField:
        """psi = exp(R + iS)"""

        return ComplexField(grid=self.R.grid, samples=np.exp(self.R.samples + 1j * self.S.samples))


class QuantumPotentialField(BaseModel):
    """Quantum Potential Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    Q: RealField


class MadelungResidualReport(BaseModel):
    """Madelung Evolution Residual Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    R: float
    S: float
    theta: float
    theta_star: float
    window: PositiveFloat

    @property
    def worst(self) -> float:
        return max(self.R, self.S, self.theta, self.theta_star)


class WaveResidualReport(BaseModel):
    """Wave Equation Residual Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    equation: str
    residual: float
    scale: float

    @property
    def relative(self) -> float:
        return self.residual / self.scale if self.scale > 0 else self.residual


# Markov diagnostics


class RatioKernel(BaseModel):
    """Characteristic Function Ratio Kernel Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    s: PositiveFloat
    t: PositiveFloat

    @model_validator(mode="after")
    def times_ordered(self):
        """Validates that s < t"""

        assert self.s < self.t, f"s must be < t: found s={self.s}, t={self.t}"
        return self


class TwoPointViolation(BaseModel):
    """Two Point Bochner Test Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    M: float
    det: float

    @property
    def violated(self) -> bool:
        return abs(self.M) > 1.0


class PDWitness(BaseModel):
    """Positive-Definiteness Violation Witness Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    p1: float
    p2: float
    s: float
    t: float
    M: float
    min_eigenvalue: float
    zero_index: int
    offset: float


# Jumps


class BorelInterval(BaseModel):
    """Interval A = [a, b] Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a: FiniteFloat
    b: FiniteFloat

    @model_validator(mode="after")
    def interval_ordered(self):
        """Validates that a < b"""

        assert self.a < self.b, f"a must be < b: found a={self.a}, b={self.b}"
        return self

    def contains(self, x) -> Any:
        return (x >= self.a) & (x <= self.b)

    def indicator(self, x) -> np.ndarray:
        return self.contains(np.asarray(x)).astype(float)


class TruncatedLevy(BaseModel):
    """Eps-Truncated Levy Law Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: NoiseKind
    eps: PositiveFloat
    lambda_eps: PositiveFloat
    b_eps: FiniteFloat = 0.0
    side: JumpSide = JumpSide.BOTH

    @field_validator("kind")
    @classmethod
    def kind_pure_jump(cls, value):
        """Validates that the noise has a Levy measure"""

        assert value.pure_jump, f"kind must be pure-jump: found {value.family}"
        return value


class JumpPath(BaseModel):
    """Compound Poisson Sample Path Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    start: FiniteFloat = 0.0
    T: PositiveFloat
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    seed: int
    index: Annotated[int, Field(ge=0)] = 0

    @field_validator("jump_times", "jump_sizes", mode="before")
    @classmethod
    def as_array(cls, value):
        """Copies into a read-only float array"""

        return _read_only(np.array(value, dtype=float))

    @model_validator(mode="after")
    def jumps_consistent(self):
        """Validates increasing jump times inside (0, T] and matching sizes"""

        assert self.jump_times.shape == self.jump_sizes.shape, "jump_times and jump_sizes must have equal length"
        if self.jump_times.size:
            assert np.all(np.diff(self.jump_times) >= 0), "jump_times must be increasing"
            assert self.jump_times[0] > 0 and self.jump_times[-1] <= self.T, "jump_times must lie in (0, T]"
        return self

    def position(self, t):
        """start + sum of sizes of jumps at times <= t"""

        cumulative = np.concatenate(([0.0], np.cumsum(self.jump_sizes)))
        return self.start + cumulative[np.searchsorted(self.jump_times, t, side="right")]


class PathEnsemble(BaseModel):
    """Aggregated Jump Path Ensemble Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    levy: TruncatedLevy
    T: PositiveFloat
    seed: int
    start: float = 0.0
    times: List[float]
    positions: np.ndarray
    jump_counts: np.ndarray
    band: Optional[BorelInterval] = None
    band_counts: Optional[np.ndarray] = None
    size_edges: np.ndarray
    size_counts: np.ndarray
    size_sums: np.ndarray

    @property
    def n_paths(self) -> int:
        return int(self.jump_counts.size)

    def positions_at(self, t: float) -> np.ndarray:
        return self.positions[self.times.index(t)]


class EmpiricalReport(BaseModel):
    """Monte Carlo Versus Analytic Comparison Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    t: float
    n_paths: int
    l1_error: float
    histogram: RealField
    charfn_p: np.ndarray
    charfn_empirical: np.ndarray
    charfn_model: np.ndarray

    @property
    def charfn_deviation(self) -> float:
        return float(np.max(np.abs(self.charfn_empirical - self.charfn_model)))

    @property
    def charfn_bound(self) -> float:
        return 5.0 / math.sqrt(self.n_paths)


class PoissonSpec(BaseModel):
    """Finite Poisson Atom Collection Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lambdas: List[PositiveFloat]
    sizes: List[FiniteFloat]
    shifts: List[FiniteFloat]

    @model_validator(mode="after")
    def lengths_match(self):
        """Validates equal lengths"""

        assert len(self.lambdas) == len(self.sizes) == len(self.shifts), "lambdas, sizes and shifts must match"
        return self


class FokkerPlanckReport(BaseModel):
    """Truncated Fokker-Planck Residual Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    eps: float
    time_derivative: float
    rate_integral: float

    @property
    def residual(self) -> float:
        return abs(self.time_derivative - self.rate_integral)

    @property
    def relative(self) -> float:
        scale = abs(self.time_derivative)
        return self.residual / scale if scale > 0 else self.residual


# Experiments


class ExperimentConfig(BaseModel):
    """Experiment Config Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: Literal[1] = 1
    experiment: Experiment
    output_dir: Path = Path("out")
    noise: NoiseKind = CauchyNoise()
    grid: Optional[Grid1D] = None
    times: Optional[Annotated[List[FiniteFloat], Field(min_length=1)]] = None
    seed: Annotated[int, Field(ge=0)] = 0
    eps: Optional[PositiveFloat] = None
    horizon: Optional[PositiveFloat] = None
    paths: Optional[Annotated[int, Field(ge=1)]] = None
    s: Optional[PositiveFloat] = None
    t: Optional[PositiveFloat] = None
    p_range: tuple[float, float] = (0.0, 10.0)
    psi0: Union[InitialState, str] = InitialState.CAUCHY_LORENTZIAN
    interval: Optional[BorelInterval] = None
    problem_file: Optional[Path] = None
    tolerances: Dict[str, PositiveFloat] = {}

    @field_validator("psi0", mode="before")
    @classmethod
    def psi0_known(cls, value):
        """Validates the initial state selector"""

        if isinstance(value, str) and not value.startswith("file:"):
            known = [state.value for state in InitialState]
            assert value in known, f"psi0 must be a known state or file:<csv>: found {value}"
            return InitialState(value)
        return value


class CheckResult(BaseModel):
    """Single Check Outcome Schema"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    value: Optional[float] = None
    tolerance: float
    relation: Literal["<=", ">=", "<", ">"] = "<="
    passed: bool


class RunReport(BaseModel):
    """Experiment Run Report Schema"""

    model_config = ConfigDict(extra="forbid")

    experiment: Experiment
    passed: bool
    first_failure: Optional[str] = None
    checks: List[CheckResult] = []
    data: Dict[str, Any] = {}
