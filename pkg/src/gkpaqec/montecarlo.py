"""Deterministic parallel Monte Carlo execution.

Every trial owns a counter-derived random stream keyed by (master_seed,
trial_index), so results never depend on worker count or scheduling. Cells
of a plan (sigma x level x decoder) aggregate failure counts into Wilson
interval estimates; decoders share per-trial streams for paired comparison.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bitflip, c4c6
from .gkp import sigma_to_db

_EXPERIMENTS = ("bitflip", "c4c6")
_DECODERS = ("analog", "digital")

# fixed per-experiment trial chunk sizes; results must not depend on them,
# only scheduling does
_BITFLIP_CHUNK = 8192
_C4C6_CHUNK = 2048

DEFAULT_TRIALS_BITFLIP = 10**6
DEFAULT_TRIALS_C4C6_LOW = 10**5  # levels 1..3
DEFAULT_TRIALS_C4C6_HIGH = 10**4  # levels 4..5


@dataclass(frozen=True)
class TrialPlan:
    """A full sweep request: experiment, decoder choice, grids, and seed."""

    experiment: str
    decoder: str
    sigmas: tuple[float, ...]
    levels: tuple[int, ...] = ()
    trials: int | None = None
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.experiment not in _EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.decoder not in _DECODERS + ("both",):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if len(self.sigmas) == 0:
            raise ValueError("sigma grid must be nonempty")
        for s in self.sigmas:
            if not (math.isfinite(s) and s > 0.0):
                raise ValueError(f"sigma values must be positive finite, got {s}")
        if any(b <= a for a, b in zip(self.sigmas, self.sigmas[1:])):
            raise ValueError(f"sigma grid must be strictly increasing: {self.sigmas}")
        if self.experiment == "c4c6":
            if len(self.levels) == 0:
                raise ValueError("c4c6 plans need at least one level")
            if any(not 1 <= lv <= 5 for lv in self.levels):
                raise ValueError(f"levels must be within 1..5, got {self.levels}")
            if len(set(self.levels)) != len(self.levels):
                raise ValueError(f"duplicate levels: {self.levels}")
        elif self.levels:
            raise ValueError("bitflip plans take no levels")
        if self.trials is not None and self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned, got {self.master_seed}")


@dataclass(frozen=True)
class Estimate:
    """Failure-rate estimate for one cell with a 95% Wilson interval."""

    experiment: str
    decoder: str
    level: int
    basis_mode: str
    sigma: float
    squeezing_db: float
    trials: int
    failures: int
    p_fail: float
    ci_low: float
    ci_high: float
    seed: int
    error: str | None = field(default=None, compare=False)


def wilson_interval(failures: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% score interval; stays informative at zero observed failures."""
    if trials < 1 or not 0 <= failures <= trials:
        raise ValueError(f"bad counts: {failures}/{trials}")
    zz = z * z
    denom = trials + zz
    center = (failures + zz / 2.0) / denom
    half = z * math.sqrt(failures * (trials - failures) / trials + zz / 4.0) / denom
    # the score interval straddles the point estimate; keep that under rounding
    pt = failures / trials
    return max(0.0, min(center - half, pt)), min(1.0, max(center + half, pt))


def derive_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """The exclusively-owned random stream of one trial.

    Counter-based: stream identity is a pure function of (master_seed,
    trial_index), independent of which worker runs the trial.
    """
    bg = np.random.Philox(key=master_seed, counter=[0, 0, trial_index, 0])
    return np.random.Generator(bg)


class _StreamBank:
    """Reusable generator that jumps to any trial's stream by state reset.

    Byte-equivalent to a fresh derive_stream(seed, index) but ~20x cheaper
    per trial inside chunk loops.
    """

    def __init__(self, master_seed: int):
        self._bg = np.random.Philox(key=master_seed)
        self.gen = np.random.Generator(self._bg)
        self._template = self._bg.state
        self._key = self._template["state"]["key"]

    def reset(self, trial_index: int) -> np.random.Generator:
        st = dict(self._template)
        st["state"] = {
            "counter": np.array([0, 0, trial_index, 0], dtype=np.uint64),
            "key": self._key,
        }
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        self._bg.state = st
        return self.gen


def _worker_count() -> int:
    env = os.environ.get("GKPAQEC_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ValueError(f"GKPAQEC_THREADS must be a positive integer, got {env!r}") from exc
        if cap < 1:
            raise ValueError(f"GKPAQEC_THREADS must be a positive integer, got {env!r}")
        return cap
    return min(8, os.cpu_count() or 1)


def _default_trials(experiment: str, level: int) -> int:
    if experiment == "bitflip":
        return DEFAULT_TRIALS_BITFLIP
    return DEFAULT_TRIALS_C4C6_LOW if level <= 3 else DEFAULT_TRIALS_C4C6_HIGH


def _bitflip_chunk(seed: int, sigma: float, start: int, end: int,
                   decoders: tuple[str, ...]) -> dict[str, int]:
    m = end - start
    bank = _StreamBank(seed)
    devs = np.empty((m, 3))
    rbits = np.empty(m, dtype=np.int64)
    for t in range(m):
        gen = bank.reset(start + t)
        devs[t] = gen.normal(0.0, sigma, 3)
        rbits[t] = gen.integers(0, 2)
    return {
        dec: int(bitflip._batch_failures(sigma, devs, rbits, dec).sum())
        for dec in decoders
    }


def _c4c6_chunk(seed: int, sigma: float, level: int, start: int, end: int,
                decoders: tuple[str, ...]) -> dict[str, tuple[int, int]]:
    m = end - start
    n = 4 * 3 ** (level - 1)
    bank = _StreamBank(seed)
    dev_q = np.empty((m, n))
    dev_p = np.empty((m, n))
    for t in range(m):
        gen = bank.reset(start + t)
        dev_q[t] = gen.normal(0.0, sigma, n)
        dev_p[t] = gen.normal(0.0, sigma, n)
    out: dict[str, tuple[int, int]] = {}
    for dec in decoders:
        fail_q, tie_q = c4c6._decode_batch(dev_q, sigma, dec)
        fail_p, tie_p = c4c6._decode_batch(dev_p, sigma, dec)
        # ties consume a guess bit from the trial's own stream, q basis first;
        # replay the deviation draws to reach the right stream position
        for t in np.flatnonzero(tie_q | tie_p):
            gen = bank.reset(start + t)
            gen.normal(0.0, sigma, n)
            gen.normal(0.0, sigma, n)
            if tie_q[t]:
                fail_q[t] = bool(gen.integers(0, 2))
            if tie_p[t]:
                fail_p[t] = bool(gen.integers(0, 2))
        out[dec] = (int(fail_q.sum()) + int(fail_p.sum()), int((fail_q | fail_p).sum()))
    return out


def _chunks(trials: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def _estimate(experiment: str, decoder: str, level: int, basis_mode: str,
              sigma: float, trials: int, failures: int, seed: int) -> Estimate:
    lo, hi = wilson_interval(failures, trials)
    return Estimate(
        experiment=experiment,
        decoder=decoder,
        level=level,
        basis_mode=basis_mode,
        sigma=sigma,
        squeezing_db=sigma_to_db(sigma),
        trials=trials,
        failures=failures,
        p_fail=failures / trials,
        ci_low=lo,
        ci_high=hi,
        seed=seed,
    )


def _failed_estimate(experiment: str, decoder: str, level: int, basis_mode: str,
                     sigma: float, seed: int, message: str) -> Estimate:
    return Estimate(
        experiment=experiment,
        decoder=decoder,
        level=level,
        basis_mode=basis_mode,
        sigma=sigma,
        squeezing_db=sigma_to_db(sigma),
        trials=0,
        failures=0,
        p_fail=math.nan,
        ci_low=math.nan,
        ci_high=math.nan,
        seed=seed,
        error=message,
    )


def run_plan(plan: TrialPlan) -> list[Estimate]:
    """Execute every cell of the plan and aggregate deterministic Estimates.

    bitflip yields one Estimate per (sigma, decoder); c4c6 yields two per
    (sigma, level, decoder): basis_mode "per_basis" pools the q and p basis
    outcomes over 2*trials observations, "combined" counts either-basis
    failures over trials. A cell that raises is reported as a failed
    Estimate (error set, NaN rate) without aborting sibling cells.
    """
    decoders = _DECODERS if plan.decoder == "both" else (plan.decoder,)
    seed = plan.master_seed
    estimates: list[Estimate] = []
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        if plan.experiment == "bitflip":
            for sigma in plan.sigmas:
                trials = plan.trials or _default_trials("bitflip", 1)
                jobs = [
                    pool.submit(_bitflip_chunk, seed, sigma, s, e, decoders)
                    for s, e in _chunks(trials, _BITFLIP_CHUNK)
                ]
                try:
                    counts = [j.result() for j in jobs]
                    for dec in decoders:
                        failures = sum(c[dec] for c in counts)
                        estimates.append(
                            _estimate("bitflip", dec, 1, "q", sigma, trials, failures, seed)
                        )
                except Exception as exc:  # noqa: BLE001 - cell isolation
                    for dec in decoders:
                        estimates.append(
                            _failed_estimate("bitflip", dec, 1, "q", sigma, seed, str(exc))
                        )
        else:
            for sigma in plan.sigmas:
                for level in plan.levels:
                    trials = plan.trials or _default_trials("c4c6", level)
                    jobs = [
                        pool.submit(_c4c6_chunk, seed, sigma, level, s, e, decoders)
                        for s, e in _chunks(trials, _C4C6_CHUNK)
                    ]
                    try:
                        counts = [j.result() for j in jobs]
                        for dec in decoders:
                            basis_fails = sum(c[dec][0] for c in counts)
                            comb_fails = sum(c[dec][1] for c in counts)
                            estimates.append(
                                _estimate("c4c6", dec, level, "per_basis", sigma,
                                          2 * trials, basis_fails, seed)
                            )
                            estimates.append(
                                _estimate("c4c6", dec, level, "combined", sigma,
                                          trials, comb_fails, seed)
                            )
                    except Exception as exc:  # noqa: BLE001 - cell isolation
                        for dec in decoders:
                            for basis_mode in ("per_basis", "combined"):
                                estimates.append(
                                    _failed_estimate("c4c6", dec, level, basis_mode,
                                                     sigma, seed, str(exc))
                                )
    return estimates
