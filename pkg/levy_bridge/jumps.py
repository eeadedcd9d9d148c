"""
Module that provides Levy measures, eps-truncated compound Poisson simulation, Poisson characteristic functions
and the jump rates of the truncated Fokker-Planck forms
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from levy_bridge.common import JumpRateMode, JumpSide
from levy_bridge.config import get_config
from levy_bridge.exceptions import InsufficientSamplesError, LevyBridgeValidationError, NodalRegionError
from levy_bridge.quadrature import GAUSS_ORDER, panel_edges, require_pure_jump
from levy_bridge.schemas import (
    BorelInterval,
    CauchyKernel,
    CauchyNoise,
    EmpiricalReport,
    FokkerPlanckReport,
    Grid1D,
    JumpPath,
    NoiseKind,
    PathEnsemble,
    PoissonSpec,
    RealField,
    RelativisticKernel,
    TruncatedLevy,
)

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1024
MIN_PATHS = 10_000
EXPONENT_REACH = 64.0
SIZE_BANDS_PER_DECADE = 4
SIZE_DECADES = 8
NODAL_THRESHOLD = 1e-12
QUAD_OPTIONS = {"epsabs": 1e-13, "epsrel": 1e-10, "limit": 400}
RATE_TAIL = 1e3
TAIL_PANELS = 8


def levy_density(kind: NoiseKind, y):
    """nu(dy)/dy for a pure-jump kind"""

    require_pure_jump(kind)
    y = np.asarray(y, dtype=float)
    if np.any(y == 0):
        raise LevyBridgeValidationError("y must be nonzero")
    value = kind.levy_density(y)
    return float(value) if np.ndim(value) == 0 else value


def _positive_tail(kind: NoiseKind, eps: float, weight: Callable[[float], float]) -> float:
    """int_eps^inf weight(y) nu(y) dy, split geometrically below 1"""

    total = 0.0
    edges = np.geomspace(eps, 1.0, max(2, math.ceil(math.log2(1.0 / eps)) + 1)) if eps < 1.0 else [eps]
    for lower, upper in zip(edges[:-1], edges[1:]):
        value, _ = integrate.quad(lambda y: weight(y) * kind.levy_density(y), lower, upper, **QUAD_OPTIONS)
        total += value
    value, _ = integrate.quad(lambda y: weight(y) * kind.levy_density(y), max(1.0, eps), np.inf, **QUAD_OPTIONS)
    return total + value


def truncate(kind: NoiseKind, eps: float, side: JumpSide = JumpSide.BOTH) -> TruncatedLevy:
    """Total rate lambda_eps and compensator b_eps of the jumps beyond eps on the chosen side"""

    require_pure_jump(kind)
    if not eps > 0:
        raise LevyBridgeValidationError(f"eps must be > 0: found {eps}")
    if isinstance(kind, CauchyNoise):
        rate = 1.0 / (math.pi * eps)
        drift = math.log1p(1.0 / eps**2) / (2.0 * math.pi)
    else:
        rate = _positive_tail(kind, eps, lambda y: 1.0)
        drift = _positive_tail(kind, eps, lambda y: y / (1.0 + y * y))
    if side == JumpSide.BOTH:
        return TruncatedLevy(kind=kind, eps=eps, lambda_eps=2.0 * rate, b_eps=0.0, side=side)
    sign = 1.0 if side == JumpSide.POSITIVE else -1.0
    return TruncatedLevy(kind=kind, eps=eps, lambda_eps=rate, b_eps=sign * drift, side=side)


# Characteristic exponents


def cauchy_truncated_exponent(p, eps: float):
    """-(2/pi)[(1 - cos(p eps))/eps + |p|(pi/2 - Si(|p| eps))]"""

    a = np.abs(p)
    si, _ = special.sici(a * eps)
    return -(2.0 / math.pi) * ((1.0 - np.cos(a * eps)) / eps + a * (math.pi / 2.0 - si))


def truncated_exponent(
    kind: NoiseKind, eps: float, p: float, upper: Optional[float] = None, side: JumpSide = JumpSide.BOTH
) -> complex:
    """phi(p) = int_{eps < |y| <= upper} (e^{ipy} - 1) nu(dy) over the chosen side, without compensator"""

    require_pure_jump(kind)
    if not eps > 0:
        raise LevyBridgeValidationError(f"eps must be > 0: found {eps}")
    if upper is not None and not upper > eps:
        raise LevyBridgeValidationError(f"upper must be > eps: found {upper}")
    if p == 0:
        return 0j

    reach = upper if upper is not None else max(EXPONENT_REACH, 2.0 * eps)
    edges = panel_edges(eps, reach)
    real, imag = 0.0, 0.0
    for lower, high in zip(edges[:-1], edges[1:]):
        value, _ = integrate.quad(lambda y: (math.cos(p * y) - 1.0) * kind.levy_density(y), lower, high, **QUAD_OPTIONS)
        real += value
        if side != JumpSide.BOTH:
            value, _ = integrate.quad(lambda y: math.sin(p * y) * kind.levy_density(y), lower, high, **QUAD_OPTIONS)
            imag += value
    if upper is None:
        cosine, _ = integrate.quad(kind.levy_density, reach, np.inf, weight="cos", wvar=p)
        mass, _ = integrate.quad(kind.levy_density, reach, np.inf, **QUAD_OPTIONS)
        real += cosine - mass
        if side != JumpSide.BOTH:
            sine, _ = integrate.quad(kind.levy_density, reach, np.inf, weight="sin", wvar=p)
            imag += sine

    if side == JumpSide.BOTH:
        return complex(2.0 * real, 0.0)
    sign = 1.0 if side == JumpSide.POSITIVE else -1.0
    return complex(real, sign * imag)


def levy_exponent(levy: TruncatedLevy, p) -> np.ndarray:
    """truncated_exponent of a truncated law at each p"""

    p = np.atleast_1d(np.asarray(p, dtype=float))
    if isinstance(levy.kind, CauchyNoise) and levy.side == JumpSide.BOTH:
        return cauchy_truncated_exponent(p, levy.eps).astype(complex)
    return np.array([truncated_exponent(levy.kind, levy.eps, float(q), side=levy.side) for q in p])


def discretize_measure(kind: NoiseKind, eps: float, upper: float, n: int) -> PoissonSpec:
    """Poisson atoms on n logarithmic cells of [eps, upper] per side: exact cell mass at the nu-weighted centroid"""

    require_pure_jump(kind)
    if not upper > eps > 0:
        raise LevyBridgeValidationError(f"must have 0 < eps < upper: found eps={eps}, upper={upper}")
    if n < 1:
        raise LevyBridgeValidationError(f"n must be >= 1: found {n}")
    edges = np.geomspace(eps, upper, n + 1)
    lower, high = edges[:-1], edges[1:]
    if isinstance(kind, CauchyNoise):
        mass = (1.0 / lower - 1.0 / high) / math.pi
        first = np.log(high / lower) / math.pi
    else:
        mass = np.array([integrate.quad(kind.levy_density, a, b, **QUAD_OPTIONS)[0] for a, b in zip(lower, high)])
        first = np.array(
            [integrate.quad(lambda y: y * kind.levy_density(y), a, b, **QUAD_OPTIONS)[0] for a, b in zip(lower, high)]
        )
    centroid = first / mass
    return PoissonSpec(
        lambdas=np.concatenate([mass, mass]).tolist(),
        sizes=np.concatenate([centroid, -centroid]).tolist(),
        shifts=[0.0] * (2 * n),
    )


def poisson_exponent(spec: PoissonSpec, p) -> np.ndarray:
    """sum_j [i p b_j + lambda_j (e^{i p y_j} - 1)]"""

    p = np.atleast_1d(np.asarray(p, dtype=float))[:, None]
    lambdas, sizes, shifts = (np.asarray(v, dtype=float)[None, :] for v in (spec.lambdas, spec.sizes, spec.shifts))
    return np.sum(1j * p * shifts + lambdas * np.expm1(1j * p * sizes), axis=1)


def poisson_char_fn(spec: PoissonSpec, p) -> np.ndarray:
    """Characteristic function of a sum of shifted independent Poisson atoms"""

    return np.exp(poisson_exponent(spec, p))


def poisson_series_char_fn(rate: float, size: float, p, terms: int = 60) -> np.ndarray:
    """sum_k e^{-lambda} lambda^k / k! e^{ikpy}, truncated after terms"""

    p = np.atleast_1d(np.asarray(p, dtype=float))
    k = np.arange(terms + 1)
    weights = np.exp(-rate + k * math.log(rate) - special.gammaln(k + 1))
    return np.sum(weights[None, :] * np.exp(1j * np.outer(p, k) * size), axis=1)


def compensated(spec: PoissonSpec) -> PoissonSpec:
    """The same atoms with shifts -lambda_j y_j / (1 + y_j^2)"""

    lambdas, sizes = np.asarray(spec.lambdas), np.asarray(spec.sizes)
    return PoissonSpec(lambdas=spec.lambdas, sizes=spec.sizes, shifts=(-lambdas * sizes / (1.0 + sizes**2)).tolist())


# Simulation


def path_generator(seed: int, index: int) -> np.random.Generator:
    """Counter-based substream for path `index`"""

    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _rejection_constant(levy: TruncatedLevy) -> float:
    z = levy.kind.m * levy.eps
    return z * special.k1(z)


def sample_jump_sizes(levy: TruncatedLevy, count: int, rng: np.random.Generator) -> np.ndarray:
    """Independent sizes from the normalized truncated measure"""

    if count == 0:
        return np.empty(0)
    if isinstance(levy.kind, CauchyNoise):
        magnitudes = levy.eps / (1.0 - rng.random(count))
    else:
        bound, m = _rejection_constant(levy), levy.kind.m
        accepted: List[np.ndarray] = []
        needed = count
        while needed > 0:
            proposal = levy.eps / (1.0 - rng.random(2 * needed))
            z = m * proposal
            keep = proposal[rng.random(proposal.size) * bound < z * special.k1(z)]
            accepted.append(keep[:needed])
            needed -= accepted[-1].size
        magnitudes = np.concatenate(accepted)
    if levy.side == JumpSide.POSITIVE:
        return magnitudes
    if levy.side == JumpSide.NEGATIVE:
        return -magnitudes
    return np.where(rng.random(count) < 0.5, -magnitudes, magnitudes)


def sample_path(levy: TruncatedLevy, T: float, seed: int, index: int = 0, start: float = 0.0) -> JumpPath:
    """Poisson(lambda T) jumps at sorted uniform times in (0, T]"""

    if not T > 0:
        raise LevyBridgeValidationError(f"T must be > 0: found {T}")
    rng = path_generator(seed, index)
    count = int(rng.poisson(levy.lambda_eps * T))
    times = np.sort(T * (1.0 - rng.random(count)))
    sizes = sample_jump_sizes(levy, count, rng)
    return JumpPath(start=start, T=T, jump_times=times, jump_sizes=sizes, seed=seed, index=index)


def size_band_edges(eps: float) -> np.ndarray:
    """Logarithmic |size| bands from eps, SIZE_BANDS_PER_DECADE per decade, the last one unbounded"""

    bands = SIZE_BANDS_PER_DECADE * SIZE_DECADES
    return np.append(eps * np.logspace(0.0, SIZE_DECADES, bands + 1), np.inf)


def _simulate_chunk(levy, T, seed, indices, times, band, edges, start):
    positions = np.empty((len(times), len(indices)))
    counts = np.empty(len(indices), dtype=np.int64)
    band_counts = np.zeros(len(indices), dtype=np.int64)
    size_counts = np.zeros(edges.size - 1, dtype=np.int64)
    size_sums = np.zeros(edges.size - 1)
    for column, index in enumerate(indices):
        path = sample_path(levy, T, seed, index, start)
        positions[:, column] = path.position(times)
        counts[column] = path.jump_sizes.size
        if band is not None:
            band_counts[column] = int(np.count_nonzero(band.contains(path.jump_sizes)))
        magnitudes = np.abs(path.jump_sizes)
        slot = np.searchsorted(edges, magnitudes, side="right") - 1
        np.add.at(size_counts, slot, 1)
        np.add.at(size_sums, slot, magnitudes)
    return positions, counts, band_counts, size_counts, size_sums


def simulate_ensemble(
    levy: TruncatedLevy,
    T: float,
    n_paths: int,
    seed: int,
    times: Sequence[float],
    band: Optional[BorelInterval] = None,
    start: float = 0.0,
    threads: Optional[int] = None,
) -> PathEnsemble:
    """Simulates n_paths paths in fixed-size chunks and reduces them in path order"""

    if n_paths < 1:
        raise LevyBridgeValidationError(f"n_paths must be >= 1: found {n_paths}")
    times = [float(t) for t in times]
    if any(not 0 <= t <= T for t in times):
        raise LevyBridgeValidationError(f"times must lie in [0, {T}]: found {times}")
    threads = threads or get_config().LEVY_BRIDGE_THREADS
    edges = size_band_edges(levy.eps)
    chunks = [range(begin, min(begin + CHUNK_SIZE, n_paths)) for begin in range(0, n_paths, CHUNK_SIZE)]
    logger.info("Simulating %d paths (lambda_eps=%.6g, T=%g) on %d threads", n_paths, levy.lambda_eps, T, threads)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(
            pool.map(lambda chunk: _simulate_chunk(levy, T, seed, chunk, times, band, edges, start), chunks)
        )

    positions = np.concatenate([r[0] for r in results], axis=1)
    return PathEnsemble(
        levy=levy,
        T=T,
        seed=seed,
        start=start,
        times=times,
        positions=positions,
        jump_counts=np.concatenate([r[1] for r in results]),
        band=band,
        band_counts=np.concatenate([r[2] for r in results]) if band is not None else None,
        size_edges=edges,
        size_counts=np.sum([r[3] for r in results], axis=0),
        size_sums=np.sum([r[4] for r in results], axis=0),
    )


def _bin_probabilities(kind: NoiseKind, t: float, edges: np.ndarray) -> np.ndarray:
    """Exact mass of the free law at time t in each bin, bins shifted to the start point"""

    if isinstance(kind, CauchyNoise):
        cdf = 0.5 + np.arctan(edges / t) / math.pi
        return np.diff(cdf)
    kernel = RelativisticKernel(m=kind.m)
    return np.array(
        [integrate.quad(lambda r: kernel.density(r, t), a, b, **QUAD_OPTIONS)[0] for a, b in zip(edges[:-1], edges[1:])]
    )


def empirical_vs_analytic(
    ensemble: PathEnsemble, t: float, grid: Optional[Grid1D] = None, p_values: Optional[np.ndarray] = None
) -> EmpiricalReport:
    """Histogram and characteristic function of X(t) - start against the free law and exp(t phi_eps)"""

    if ensemble.n_paths < MIN_PATHS:
        raise InsufficientSamplesError(f"at least {MIN_PATHS} paths are required: found {ensemble.n_paths}")
    if t not in ensemble.times or not t > 0:
        raise LevyBridgeValidationError(f"t must be a positive simulated time: found {t}")
    grid = grid or Grid1D.symmetric(16.0, 64)
    p_values = np.linspace(0.1, 5.0, 32) if p_values is None else np.asarray(p_values, dtype=float)
    displacement = ensemble.positions_at(t) - ensemble.start
    n = ensemble.n_paths

    edges = grid.x_min - grid.dx / 2.0 + grid.dx * np.arange(grid.n + 1)
    counts, _ = np.histogram(displacement, bins=edges)
    exact = _bin_probabilities(ensemble.levy.kind, t, edges)
    empirical = counts / n
    outside_empirical = 1.0 - float(np.sum(empirical))
    outside_exact = 1.0 - float(np.sum(exact))
    l1_error = float(np.sum(np.abs(empirical - exact)) + abs(outside_empirical - outside_exact))

    charfn_empirical = np.mean(np.exp(1j * np.outer(p_values, displacement)), axis=1)
    charfn_model = np.exp(t * levy_exponent(ensemble.levy, p_values))
    logger.info("Empirical comparison at t=%g over %d paths: L1 error %.4f", t, n, l1_error)
    return EmpiricalReport(
        t=t,
        n_paths=n,
        l1_error=l1_error,
        histogram=RealField(grid=grid, samples=empirical / grid.dx),
        charfn_p=p_values,
        charfn_empirical=charfn_empirical,
        charfn_model=charfn_model,
    )


# Jump rates


def _jump_intervals(x: float, interval: BorelInterval, eps: float, side: JumpSide = JumpSide.BOTH) -> List[Tuple]:
    """(lower, upper, sign) pieces of {|y| > eps : chi_A(x+y) != chi_A(x)} on the allowed side"""

    a, b = interval.a - x, interval.b - x
    if interval.contains(x):
        pieces = [(-np.inf, min(a, -eps), -1.0), (max(b, eps), np.inf, -1.0)]
    elif a > 0:
        pieces = [(max(a, eps), b, 1.0)]
    else:
        pieces = [(a, min(b, -eps), 1.0)]
    if side == JumpSide.POSITIVE:
        pieces = [(max(lo, eps), hi, sign) for lo, hi, sign in pieces]
    elif side == JumpSide.NEGATIVE:
        pieces = [(lo, min(hi, -eps), sign) for lo, hi, sign in pieces]
    return [(lo, hi, sign) for lo, hi, sign in pieces if hi > lo]


def _ratio_weight(mode: JumpRateMode, ratio):
    if mode == JumpRateMode.GROUND:
        return np.real(ratio)
    if mode == JumpRateMode.QUANTUM:
        return np.abs(ratio) + np.imag(ratio)
    return np.imag(ratio)


def jump_rate_q(mode: JumpRateMode, field: Callable, x: float, interval: BorelInterval, levy: TruncatedLevy) -> float:
    """q(x,A) = int_{|y|>eps} w(x,y) [chi_A(x+y) - chi_A(x)] nu(dy) with w the theta ratio (ground),
    |r| + Im r (quantum) or Im r (quantum_raw) for r = psi(x+y)/psi(x)"""

    base = complex(field(x))
    if abs(base) <= NODAL_THRESHOLD:
        raise NodalRegionError(f"field vanishes at x={x}")
    density = levy.kind.levy_density
    total = 0.0
    for lower, upper, sign in _jump_intervals(x, interval, levy.eps, levy.side):

        def weighted(y):
            return float(_ratio_weight(mode, complex(field(x + y)) / base)) * density(y)

        value, _ = integrate.quad(weighted, lower, upper, **QUAD_OPTIONS)
        total += sign * value
    return total


def _piece_rule(lower: float, upper: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and dy-weights on a one-signed jump piece; jumps beyond RATE_TAIL use y = top/u"""

    flip = upper <= 0
    lo, hi = (-upper, -lower) if flip else (lower, upper)
    top = min(hi, max(RATE_TAIL, 2.0 * lo))
    edges = panel_edges(lo, top)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    left, right = edges[:-1, None], edges[1:, None]
    y = (0.5 * (right - left) * nodes + 0.5 * (right + left)).ravel()
    dy = (0.5 * (right - left) * weights).ravel()
    if hi > top:
        u_edges = np.linspace(top / hi, 1.0, TAIL_PANELS + 1)[:, None]
        u = (0.5 * (u_edges[1:] - u_edges[:-1]) * nodes + 0.5 * (u_edges[1:] + u_edges[:-1])).ravel()
        du = (0.5 * (u_edges[1:] - u_edges[:-1]) * weights).ravel()
        y = np.concatenate([y, top / u])
        dy = np.concatenate([dy, top * du / np.square(u)])
    return (-y if flip else y), dy


def panel_jump_rate(
    mode: JumpRateMode, field: Callable, x: float, interval: BorelInterval, levy: TruncatedLevy
) -> float:
    """jump_rate_q on fixed panel nodes, with one vectorized field evaluation per x"""

    base = complex(field(x))
    if abs(base) <= NODAL_THRESHOLD:
        raise NodalRegionError(f"field vanishes at x={x}")
    total = 0.0
    for lower, upper, sign in _jump_intervals(x, interval, levy.eps, levy.side):
        y, dy = _piece_rule(lower, upper)
        ratio = np.broadcast_to(np.asarray(field(x + y), dtype=complex), y.shape) / base
        total += sign * float(np.sum(_ratio_weight(mode, ratio) * levy.kind.levy_density(y) * dy))
    return total


def jump_rate_profile(
    mode: JumpRateMode, field: Callable, xs: Sequence[float], interval: BorelInterval, levy: TruncatedLevy
):
    return np.array([jump_rate_q(mode, field, float(x), interval, levy) for x in xs])


def points_outside(interval: BorelInterval, count: int = 100, reach: float = 10.0, gap: float = 0.05) -> np.ndarray:
    """count points of [-reach, reach] at distance >= gap from A, split between the two sides by length"""

    left, right = max(interval.a - gap + reach, 0.0), max(reach - interval.b - gap, 0.0)
    if left + right <= 0:
        raise LevyBridgeValidationError(f"no room outside [{interval.a}, {interval.b}] within reach {reach}")
    n_left = round(count * left / (left + right))
    return np.concatenate(
        [np.linspace(-reach, interval.a - gap, n_left), np.linspace(interval.b + gap, reach, count - n_left)]
    )


def free_jump_rate(x: float, interval: BorelInterval, levy: TruncatedLevy) -> float:
    """int_{|y|>eps} [chi_A(x+y) - chi_A(x)] nu(dy) in closed form for the Cauchy measure"""

    if not isinstance(levy.kind, CauchyNoise):
        return jump_rate_q(JumpRateMode.GROUND, lambda _: 1.0, x, interval, levy)
    total = 0.0
    for lower, upper, sign in _jump_intervals(x, interval, levy.eps, levy.side):
        # antiderivative of 1/(pi y^2) is -1/(pi y), zero at infinity
        primitive = [0.0 if math.isinf(v) else -1.0 / (math.pi * v) for v in (lower, upper)]
        total += sign * (primitive[1] - primitive[0])
    return total


def rate_symmetry_defect(field: Callable, interval: BorelInterval, levy: TruncatedLevy, reach: float = 200.0) -> float:
    """int int |psi(x+y) psi(x)| [chi_A(x+y) - chi_A(x)] nu(dy) dx over |x| <= reach; vanishes for even nu"""

    density = levy.kind.levy_density
    breaks = _interval_breaks(interval, levy.eps, reach)

    def inner(x: float) -> float:
        weight = abs(complex(field(x)))
        total = 0.0
        for lower, upper, sign in _jump_intervals(x, interval, levy.eps, levy.side):
            value, _ = integrate.quad(lambda y: abs(complex(field(x + y))) * density(y), lower, upper, **QUAD_OPTIONS)
            total += sign * value
        return weight * total

    value, _ = integrate.quad(inner, -reach, reach, points=breaks, epsabs=1e-12, epsrel=1e-10, limit=400)
    return value


def _interval_breaks(interval: BorelInterval, eps: float, reach: float) -> List[float]:
    candidates = [interval.a - eps, interval.a, interval.a + eps, interval.b - eps, interval.b, interval.b + eps]
    return sorted(v for v in candidates if -reach < v < reach)


def fokker_planck_residual(
    mode: JumpRateMode,
    evolution: Callable[[float], Callable],
    interval: BorelInterval,
    levy: TruncatedLevy,
    t: float,
    dt: float = 1e-3,
    density: Optional[Callable[[float], Callable]] = None,
) -> FokkerPlanckReport:
    """Compares d/dt int_A rho with int q(x,t,A) rho(x,t) dx.

    evolution(t) returns the field entering the rate (theta for the ground form, psi for the quantum forms);
    density(t) returns rho(., t) and defaults to |psi|^2.
    """

    if not dt > 0 or not t - dt > 0:
        raise LevyBridgeValidationError(f"need 0 < dt < t: found t={t}, dt={dt}")
    if density is None:
        if mode == JumpRateMode.GROUND:
            raise LevyBridgeValidationError("ground mode requires an explicit density")

        def density(time: float) -> Callable:
            psi = evolution(time)
            return lambda x: abs(complex(psi(x))) ** 2

    def mass(time: float) -> float:
        rho = density(time)
        value, _ = integrate.quad(
            lambda x: float(rho(x)), interval.a, interval.b, epsabs=1e-13, epsrel=1e-11, limit=200
        )
        return value

    time_derivative = (mass(t + dt) - mass(t - dt)) / (2.0 * dt)
    field, rho = evolution(t), density(t)
    reach = max(200.0, 2.0 * max(abs(interval.a), abs(interval.b)))
    breaks = _interval_breaks(interval, levy.eps, reach)
    rate_integral, _ = integrate.quad(
        lambda x: panel_jump_rate(mode, field, x, interval, levy) * float(rho(x)),
        -reach,
        reach,
        points=breaks,
        epsabs=1e-10,
        epsrel=1e-8,
        limit=400,
    )
    logger.debug(
        "Fokker-Planck check at eps=%g: d/dt=%.6g, rate integral=%.6g", levy.eps, time_derivative, rate_integral
    )
    return FokkerPlanckReport(eps=levy.eps, time_derivative=time_derivative, rate_integral=rate_integral)


def free_cauchy_density(t: float) -> Callable:
    """x -> k_t(x) of the free Cauchy semigroup"""

    kernel = CauchyKernel()
    return lambda x: kernel.density(x, t)
