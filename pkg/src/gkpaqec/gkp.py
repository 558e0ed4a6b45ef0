"""Single GKP-qubit primitives: lattice folding, measurement, likelihoods,
squeezing conversions, and hashing-bound rate calculators.

A GKP qubit encodes a bit in an oscillator quadrature as a comb of peaks
spaced sqrt(pi); bit value = parity of the nearest lattice index. The
Gaussian quantum channel displaces the quadrature by N(0, sigma^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy.integrate import quad

SQRT_PI = math.sqrt(math.pi)
HALF_SQRT_PI = SQRT_PI / 2.0


@dataclass(frozen=True)
class NoiseParams:
    """Gaussian displacement channel with standard deviation sigma per quadrature."""

    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be finite and positive, got {self.sigma}")


class MeasurementOutcome(NamedTuple):
    """Digitized quadrature measurement: bit value and residual deviation."""

    bit: int
    dev_m: float


class LikelihoodPair(NamedTuple):
    """Gaussian likelihoods of the two explanations of a residual deviation."""

    no_flip: float
    flip: float


def fold(x: float, period: float) -> float:
    """Map x into the half-open window [-period/2, period/2)."""
    if not period > 0.0:
        raise ValueError(f"period must be positive, got {period}")
    return x - period * math.floor(x / period + 0.5)


def measure(raw: float) -> MeasurementOutcome:
    """Digitize a quadrature value against the sqrt(pi) lattice.

    Returns the parity bit of the nearest lattice index and the residual
    deviation in [-sqrt(pi)/2, sqrt(pi)/2). A boundary value raw = k*sqrt(pi)
    + sqrt(pi)/2 belongs to index k+1, keeping the residual range half-open.
    """
    index = math.floor(raw / SQRT_PI + 0.5)
    return MeasurementOutcome(bit=index & 1, dev_m=raw - index * SQRT_PI)


def likelihood_f(dev: float, sigma: float) -> float:
    """Gaussian density of a deviation of size dev under channel width sigma."""
    return math.exp(-dev * dev / (2.0 * sigma * sigma)) / math.sqrt(2.0 * math.pi * sigma * sigma)


def leaf_pair(dev_m: float, sigma: float) -> LikelihoodPair:
    """Likelihoods that a residual deviation means no flip vs a bit flip.

    no_flip assumes the true peak is the nearest one (distance |dev_m|);
    flip assumes the adjacent peak (distance sqrt(pi) - |dev_m|).
    """
    if abs(dev_m) > HALF_SQRT_PI:
        raise ValueError(f"dev_m out of range [-sqrt(pi)/2, sqrt(pi)/2]: {dev_m}")
    return LikelihoodPair(
        no_flip=likelihood_f(dev_m, sigma),
        flip=likelihood_f(SQRT_PI - abs(dev_m), sigma),
    )


def p_corr(sigma: float) -> float:
    """Probability a single measurement lands within sqrt(pi)/2 of the true peak."""
    return math.erf(SQRT_PI / (2.0 * math.sqrt(2.0) * sigma))


def sigma_to_db(sigma: float) -> float:
    """Squeezing level in dB for a peak of standard deviation sigma."""
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return -10.0 * math.log10(2.0 * sigma * sigma)


def _lattice_terms(sigma: float) -> int:
    # enough lattice images that the neglected Gaussian tail is < 1e-300 relative
    return max(8, math.ceil(8.0 * sigma / SQRT_PI) + 2)


def posterior_flip(dev_m: float, sigma: float) -> float:
    """Posterior probability of a bit flip given the residual deviation.

    Sums Gaussian weights over all lattice images, odd-index mass over total.
    """
    if abs(dev_m) > HALF_SQRT_PI:
        raise ValueError(f"dev_m out of range [-sqrt(pi)/2, sqrt(pi)/2]: {dev_m}")
    n = _lattice_terms(sigma)
    inv = 1.0 / (2.0 * sigma * sigma)
    # max-exponent subtraction keeps the ratio finite for small sigma
    exps = [-((k * SQRT_PI + dev_m) ** 2) * inv for k in range(-n, n + 1)]
    top = max(exps)
    odd = sum(math.exp(e - top) for k, e in zip(range(-n, n + 1), exps) if k & 1)
    total = sum(math.exp(e - top) for e in exps)
    return odd / total


def _h2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def hashing_rate_digital(sigma: float) -> float:
    """Achievable rate 1 - 2*H2(flip probability) using binary outcomes only."""
    return 1.0 - 2.0 * _h2(1.0 - p_corr(sigma))


def _deviation_density(dev_m: float, sigma: float) -> float:
    # marginal density of the residual deviation on [-sqrt(pi)/2, sqrt(pi)/2)
    n = _lattice_terms(sigma)
    return sum(likelihood_f(k * SQRT_PI + dev_m, sigma) for k in range(-n, n + 1))


def hashing_rate_analog(sigma: float) -> float:
    """Achievable rate when the flip probability is conditioned on the deviation.

    Averages H2(posterior_flip) over the residual-deviation distribution.
    """
    integrand = lambda d: _deviation_density(d, sigma) * _h2(posterior_flip(d, sigma))
    avg, _ = quad(integrand, -HALF_SQRT_PI, HALF_SQRT_PI, epsabs=1e-9, limit=200)
    return 1.0 - 2.0 * avg


def find_threshold(
    rate_fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-4
) -> float:
    """Bisect for the sigma where a monotone-decreasing rate function crosses zero.

    Requires rate_fn(lo) > 0 > rate_fn(hi); returns the bracket midpoint once
    the bracket width is at most tol.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    f_lo, f_hi = rate_fn(lo), rate_fn(hi)
    if not (f_lo > 0.0 > f_hi):
        raise ValueError(
            f"bracket does not straddle the root: rate({lo})={f_lo:.6g}, rate({hi})={f_hi:.6g}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rate_fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_displacement(params: NoiseParams, rng) -> float:
    """Draw one Gaussian channel displacement from an exclusively-owned stream."""
    return float(rng.normal(0.0, params.sigma))
