"""Three-qubit bit-flip code over GKP qubits: deviation propagation through
syndrome extraction, analog maximum-likelihood and conventional binary
decoders, and an exact quadrature oracle for the failure probability.

Only the q quadrature is tracked; the code corrects bit flips alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gkp import HALF_SQRT_PI, SQRT_PI, fold, measure

TWO_SQRT_PI = 2.0 * SQRT_PI

# an error pattern is the set of flipped physical qubits, subset of {1, 2, 3}
ErrorPattern = frozenset

_NO_ERROR: ErrorPattern = frozenset()


@dataclass(frozen=True)
class BlockState:
    """True channel deviations of the three data qubits, q quadrature."""

    dev: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.dev) != 3 or not all(math.isfinite(d) for d in self.dev):
            raise ValueError(f"dev must be 3 finite reals, got {self.dev}")


@dataclass(frozen=True)
class Syndrome:
    """Folded ancilla measurement residuals plus ancilla 3's peak parity bit."""

    a1: float
    a2: float
    a3: float
    k3: int

    def __post_init__(self) -> None:
        if not (-SQRT_PI <= self.a1 < SQRT_PI and -SQRT_PI <= self.a2 < SQRT_PI):
            raise ValueError(f"a1, a2 must lie in [-sqrt(pi), sqrt(pi)): {self.a1}, {self.a2}")
        if not -HALF_SQRT_PI <= self.a3 < HALF_SQRT_PI:
            raise ValueError(f"a3 must lie in [-sqrt(pi)/2, sqrt(pi)/2): {self.a3}")
        if self.k3 not in (0, 1):
            raise ValueError(f"k3 must be 0 or 1, got {self.k3}")


def extract_syndrome(state: BlockState, rng) -> Syndrome:
    """Propagate deviations onto fresh ancillae and measure them.

    Ancillae 1 and 2 accumulate neighbor sums, folded to one period; ancilla 3
    sits on a random peak of the |+> comb (a fresh uniform bit r), so its
    measurement returns (k3, a3) with k3 carried but unused by decoders.
    """
    d1, d2, d3 = state.dev
    a1 = fold(d1 + d2, TWO_SQRT_PI)
    a2 = fold(d2 + d3, TWO_SQRT_PI)
    r = int(rng.integers(0, 2))
    k3, a3 = measure(d3 + r * SQRT_PI)
    return Syndrome(a1=a1, a2=a2, a3=a3, k3=k3)


def m_values(s: Syndrome) -> tuple[float, float]:
    """Combine ancilla residuals into the per-qubit decision values (M1, M2)."""
    delta1 = s.a1 - s.a2 + s.a3
    delta2 = s.a2 - s.a3
    return fold(delta1, TWO_SQRT_PI), fold(delta2, TWO_SQRT_PI)


def _starred_sq(x: float) -> float:
    # squared distance of the complementary-peak explanation, sign(0) = +1
    star = x - (SQRT_PI if x >= 0.0 else -SQRT_PI)
    return star * star


def decode_analog(
    M1: float, M2: float, a3: float, sigma: float, all_flip_variant: bool = False
) -> ErrorPattern:
    """Maximum-likelihood choice between the two consistent error patterns.

    If both |Mi| < sqrt(pi)/2 the no-error pattern is returned outright.
    Otherwise P1 flips the qubits whose M crossed the half-cell boundary and
    P2 is its complement; the Gaussian likelihood comparison F1 >= F2 reduces
    to comparing summed squared deviations, so the decision is sigma-free.
    The non-default all_flip_variant also challenges the no-error branch
    against the all-three-flips explanation.
    """
    if abs(M1) > SQRT_PI or abs(M2) > SQRT_PI:
        raise ValueError(f"M values out of range [-sqrt(pi), sqrt(pi)]: {M1}, {M2}")
    if abs(a3) > HALF_SQRT_PI:
        raise ValueError(f"a3 out of range [-sqrt(pi)/2, sqrt(pi)/2]: {a3}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    below1, below2 = abs(M1) < HALF_SQRT_PI, abs(M2) < HALF_SQRT_PI
    s_near = M1 * M1 + M2 * M2 + a3 * a3
    s_far = _starred_sq(M1) + _starred_sq(M2) + _starred_sq(a3)
    if below1 and below2:
        if all_flip_variant and s_near > s_far:
            return frozenset({1, 2, 3})
        return _NO_ERROR
    p1 = frozenset(i for i, hit in ((1, not below1), (2, not below2)) if hit)
    return p1 if s_near <= s_far else frozenset({1, 2, 3}) - p1


def decode_digital(s: Syndrome) -> ErrorPattern:
    """Conventional decoder: binarize the M values and look up the
    minimum-weight pattern consistent with the two parity bits."""
    M1, M2 = m_values(s)
    m1, m2 = abs(M1) >= HALF_SQRT_PI, abs(M2) >= HALF_SQRT_PI
    if m1 and m2:
        return frozenset({3})
    if m1:
        return frozenset({1})
    if m2:
        return frozenset({2})
    return _NO_ERROR


def true_pattern(state: BlockState) -> ErrorPattern:
    """Qubits whose deviation crossed into an odd lattice cell."""
    return frozenset(i for i, d in enumerate(state.dev, start=1) if measure(d).bit == 1)


def run_trial(sigma: float, rng, decoder: str) -> bool:
    """Run one Monte Carlo trial; returns True on success.

    Draws the three data deviations, extracts the syndrome with the given
    exclusively-owned stream, and succeeds iff the decoded pattern equals the
    true pattern.
    """
    if decoder not in ("analog", "digital"):
        raise ValueError(f"unknown decoder {decoder!r}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    dev = rng.normal(0.0, sigma, 3)
    state = BlockState(dev=(float(dev[0]), float(dev[1]), float(dev[2])))
    s = extract_syndrome(state, rng)
    if decoder == "analog":
        M1, M2 = m_values(s)
        decoded = decode_analog(M1, M2, s.a3, sigma)
    else:
        decoded = decode_digital(s)
    return decoded == true_pattern(state)


def _fold_arr(x: np.ndarray, period: float) -> np.ndarray:
    return x - period * np.floor(x / period + 0.5)


def _decode_masks(a1, a2, a3, decoder: str) -> np.ndarray:
    # vectorized decoders returning bitmasks (bit i-1 set <=> qubit i flipped)
    M1 = _fold_arr(a1 - a2 + a3, TWO_SQRT_PI)
    M2 = _fold_arr(a2 - a3, TWO_SQRT_PI)
    c1 = np.abs(M1) >= HALF_SQRT_PI
    c2 = np.abs(M2) >= HALF_SQRT_PI
    if decoder == "digital":
        return (
            np.where(c1 & ~c2, 1, 0) + np.where(~c1 & c2, 2, 0) + np.where(c1 & c2, 4, 0)
        ).astype(np.uint8)
    p1 = c1.astype(np.uint8) + 2 * c2.astype(np.uint8)
    s_near = M1 * M1 + M2 * M2 + a3 * a3
    M1s = M1 - np.where(M1 >= 0, SQRT_PI, -SQRT_PI)
    M2s = M2 - np.where(M2 >= 0, SQRT_PI, -SQRT_PI)
    a3s = a3 - np.where(a3 >= 0, SQRT_PI, -SQRT_PI)
    s_far = M1s * M1s + M2s * M2s + a3s * a3s
    return np.where(~c1 & ~c2, 0, np.where(s_near <= s_far, p1, 7 ^ p1)).astype(np.uint8)


def _batch_failures(sigma: float, devs: np.ndarray, rbits: np.ndarray, decoder: str) -> np.ndarray:
    """Vectorized equivalent of run_trial over pre-drawn deviations.

    devs: (T, 3) data deviations; rbits: (T,) ancilla-3 peak bits. Returns a
    boolean failure mask. Bit-compatible with the scalar pipeline.
    """
    a1 = _fold_arr(devs[:, 0] + devs[:, 1], TWO_SQRT_PI)
    a2 = _fold_arr(devs[:, 1] + devs[:, 2], TWO_SQRT_PI)
    raw3 = devs[:, 2] + rbits * SQRT_PI
    a3 = raw3 - SQRT_PI * np.floor(raw3 / SQRT_PI + 0.5)
    dec = _decode_masks(a1, a2, a3, decoder)
    par = (np.floor(devs / SQRT_PI + 0.5).astype(np.int64) & 1).astype(np.uint8)
    truth = par[:, 0] + 2 * par[:, 1] + 4 * par[:, 2]
    return dec != truth


def _simpson_weights(n: int, h: float) -> np.ndarray:
    # composite Simpson; even node counts get a 3/8 rule on the last 3 intervals
    w = np.zeros(n)
    if n % 2 == 1:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= h / 3.0
    else:
        m = n - 3
        w[0] = w[m - 1] = 1.0
        w[1:m - 1:2] = 4.0
        w[2:m - 1:2] = 2.0
        w[:m] *= h / 3.0
        w[m - 1:] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    return w


def oracle_failure_probability(sigma: float, decoder: str, grid: int) -> float:
    """Deterministic failure probability by 3-D tensor-product Simpson quadrature.

    Integrates the indicator "decoded pattern != true pattern" against the
    Gaussian deviation density over [-8 sigma, 8 sigma]^3 with `grid` nodes
    per axis. The random ancilla peak bit does not affect decisions, so the
    integrand omits it. Slabs over the first axis are accumulated in fixed
    order, making the result independent of any parallel schedule.
    """
    if not isinstance(grid, int) or isinstance(grid, bool):
        raise ValueError(f"grid must be an integer, got {grid!r}")
    if grid < 100:
        raise ValueError(f"grid must be >= 100, got {grid}")
    if decoder not in ("analog", "digital"):
        raise ValueError(f"unknown decoder {decoder!r}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.linspace(-8.0 * sigma, 8.0 * sigma, grid)
    h = x[1] - x[0]
    density = np.exp(-x * x / (2.0 * sigma * sigma)) / math.sqrt(2.0 * math.pi * sigma * sigma)
    wg = _simpson_weights(grid, h) * density

    idx = np.floor(x / SQRT_PI + 0.5)
    par = (idx.astype(np.int64) & 1).astype(np.uint8)
    a3v = x - idx * SQRT_PI
    a2_plane = _fold_arr(x[:, None] + x[None, :], TWO_SQRT_PI)  # (d2, d3)

    total = 0.0
    for i in range(grid):
        a1_row = _fold_arr(x[i] + x, TWO_SQRT_PI)  # over d2
        dec = _decode_masks(a1_row[:, None], a2_plane, a3v[None, :], decoder)
        truth = par[i] + 2 * par[:, None] + 4 * par[None, :]
        fail = (dec != truth).astype(np.float64)
        total += wg[i] * float(wg @ fail @ wg)
    return total
