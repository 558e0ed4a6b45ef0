"""Concatenated C4/C6 code: codeword-class tables, bottom-up message-passing
decoders (analog and digital), and the teleportation-QEC round simulation.

Level 1 is a [[4,2,2]] block; every level above stacks [[6,2,2]] blocks whose
six positions carry the bit pairs of three child blocks. A logical block at
level L spans 4 * 3^(L-1) physical GKP qubits per quadrature.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .gkp import SQRT_PI, MeasurementOutcome, NoiseParams, leaf_pair, measure, p_corr

# one physical measurement per leaf position; same shape as MeasurementOutcome
LeafOutcome = MeasurementOutcome

# equal message sums within this relative width count as a decoding tie
TIE_REL_EPS = 1e-12

_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


class MessageVector(NamedTuple):
    """Class likelihoods of a block's bit pair, indexed (0,0),(0,1),(1,0),(1,1)."""

    f00: float
    f01: float
    f10: float
    f11: float


@dataclass(frozen=True)
class CssCodeSpec:
    """Codeword classes of one concatenation block plus its child-pair layout.

    classes maps each logical pair value to the set of block codewords
    consistent with it; words are bit strings with position 1 leftmost.
    pair_layout groups the n positions (1-based) into n/2 child pairs.
    """

    n: int
    classes: Mapping[tuple[int, int], tuple[str, ...]]
    pair_layout: tuple[tuple[int, int], ...]


def c4_spec() -> CssCodeSpec:
    """The level-1 [[4,2,2]] block."""
    return CssCodeSpec(
        n=4,
        classes={
            (0, 0): ("0000", "1111"),
            (0, 1): ("0101", "1010"),
            (1, 0): ("0011", "1100"),
            (1, 1): ("0110", "1001"),
        },
        pair_layout=((1, 2), (3, 4)),
    )


def _xor_words(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def c6_spec() -> CssCodeSpec:
    """The level>=2 [[6,2,2]] block.

    Classes are cosets of span{111100, 001111} shifted by the logical leaders
    110000 and 011010. Child pairs interleave across the block, (p, p+3), so
    no weight-2 codeword is confined to a single child pair; a lone child
    error therefore never explains a logical flip, which keeps concatenation
    profitable for the analog decoder.
    """
    base = ("000000", "111100", "001111", "110011")
    leaders = {(0, 0): "000000", (0, 1): "011010", (1, 0): "110000", (1, 1): "101010"}
    classes = {
        pair: tuple(sorted(_xor_words(lead, c) for c in base))
        for pair, lead in leaders.items()
    }
    return CssCodeSpec(n=6, classes=classes, pair_layout=((1, 4), (2, 5), (3, 6)))


def validate_css(spec: CssCodeSpec) -> str | None:
    """Brute-force every CssCodeSpec invariant; None if valid, else a report."""
    if set(spec.classes.keys()) != set(_PAIRS):
        return f"classes must be keyed by the four pair values, got {sorted(spec.classes)}"
    for pair, words in spec.classes.items():
        for w in words:
            if len(w) != spec.n or any(ch not in "01" for ch in w):
                return f"class {pair}: word {w!r} is not a {spec.n}-bit string"
    sizes = {pair: len(set(words)) for pair, words in spec.classes.items()}
    if len(set(sizes.values())) != 1:
        return f"classes must have equal cardinality, got sizes {sizes}"
    zero = "0" * spec.n
    base = set(spec.classes[(0, 0)])
    if zero not in base:
        return f"class (0, 0) must contain the all-zeros word {zero}"
    for a in base:
        for b in base:
            if _xor_words(a, b) not in base:
                return f"class (0, 0) not closed under XOR: {a} ^ {b}"
    for pair, words in spec.classes.items():
        lead = words[0]
        if {_xor_words(lead, c) for c in base} != set(words):
            return f"class {pair} is not a coset of class (0, 0): witness {lead}"
    seen: dict[str, tuple[int, int]] = {}
    for pair, words in spec.classes.items():
        for w in words:
            if w in seen and seen[w] != pair:
                return f"word {w} appears in classes {seen[w]} and {pair}"
            seen[w] = pair
    for w, pair in seen.items():
        if w != zero and w.count("1") < 2:
            return f"word {w} in class {pair} has weight < 2"
    flat = [i for ab in spec.pair_layout for i in ab]
    if len(spec.pair_layout) != spec.n // 2 or sorted(flat) != list(range(1, spec.n + 1)):
        return f"pair_layout must partition positions 1..{spec.n}, got {spec.pair_layout}"
    return None


def css_from_json(doc: str | dict) -> CssCodeSpec:
    """Load a CssCodeSpec from its JSON document form and validate it."""
    data = json.loads(doc) if isinstance(doc, str) else doc
    try:
        spec = CssCodeSpec(
            n=int(data["n"]),
            classes={
                (int(k[0]), int(k[1])): tuple(str(w) for w in words)
                for k, words in data["classes"].items()
            },
            pair_layout=tuple((int(a), int(b)) for a, b in data["pair_layout"]),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed code spec document: {exc}") from exc
    report = validate_css(spec)
    if report is not None:
        raise ValueError(f"invalid code spec: {report}")
    return spec


def _log(v: float) -> float:
    # likelihoods can underflow to exact zero at small sigma
    return math.log(v) if v > 0.0 else -math.inf


def _leaf_loglik(leaf: LeafOutcome, mode: str, sigma: float) -> tuple[float, float]:
    # log likelihood of the leaf's true bit being (its measured bit, the flip)
    if mode == "analog":
        pair = leaf_pair(leaf.dev_m, sigma)
        return _log(pair.no_flip), _log(pair.flip)
    q = p_corr(sigma)
    return _log(q), _log(1.0 - q)


def block_message(
    spec: CssCodeSpec, children: Sequence, mode: str, sigma: float
) -> MessageVector:
    """Likelihoods of a block's logical pair from its children, normalized.

    children is one LeafOutcome per position (level-1 block) or one
    MessageVector per pair_layout entry (higher blocks). Each class sums,
    over its codewords, the product of child likelihoods of the child values
    that codeword dictates. Sums run in log domain so deep concatenations
    cannot underflow.
    """
    if mode not in ("analog", "digital"):
        raise ValueError(f"unknown mode {mode!r}")
    leaves = len(children) == spec.n and all(
        isinstance(c, MeasurementOutcome) for c in children
    )
    pairs = len(children) == spec.n // 2 and all(
        isinstance(c, MessageVector) for c in children
    )
    if not leaves and not pairs:
        raise ValueError(
            f"expected {spec.n} leaf outcomes or {spec.n // 2} child messages, "
            f"got {len(children)} children"
        )
    if leaves:
        ll = [_leaf_loglik(c, mode, sigma) for c in children]

        def word_loglik(word: str) -> float:
            return sum(
                ll[j][0] if int(word[j]) == children[j].bit else ll[j][1]
                for j in range(spec.n)
            )
    else:
        def log_entry(msg: MessageVector, b1: int, b2: int) -> float:
            return _log(msg[2 * b1 + b2])

        def word_loglik(word: str) -> float:
            return sum(
                log_entry(children[p], int(word[i - 1]), int(word[j - 1]))
                for p, (i, j) in enumerate(spec.pair_layout)
            )

    class_logs = [
        np.logaddexp.reduce([word_loglik(w) for w in spec.classes[pair]])
        for pair in _PAIRS
    ]
    top = max(class_logs)
    raw = [math.exp(c - top) for c in class_logs]
    total = sum(raw)
    return MessageVector(*(v / total for v in raw))


def decode_top(F: MessageVector) -> int:
    """Top-level logical bit: 0 unless the flipped classes strictly dominate."""
    return 0 if F.f00 + F.f01 >= F.f10 + F.f11 else 1


@dataclass(frozen=True)
class TeleportationRound:
    """One teleportation-QEC round configuration."""

    level: int
    sigma: NoiseParams
    decoder: str

    def __post_init__(self) -> None:
        if not 1 <= self.level <= 5:
            raise ValueError(f"level must be in 1..5, got {self.level}")
        if self.decoder not in ("analog", "digital"):
            raise ValueError(f"unknown decoder {self.decoder!r}")

    @property
    def n_physical(self) -> int:
        return 4 * 3 ** (self.level - 1)


@dataclass(frozen=True)
class RoundResult:
    """Per-basis and combined outcome of one teleportation round."""

    q_fail: bool
    p_fail: bool

    @property
    def failure(self) -> bool:
        return self.q_fail or self.p_fail


def _decode_bit_scalar(level: int, leaves: Sequence[LeafOutcome], mode: str,
                       sigma: float, rng) -> bool:
    # bottom-up decode of one basis; ties are guessed from the trial's stream
    c4, c6 = c4_spec(), c6_spec()
    msgs = [
        block_message(c4, leaves[i : i + 4], mode, sigma)
        for i in range(0, len(leaves), 4)
    ]
    while len(msgs) > 1:
        msgs = [
            block_message(c6, msgs[i : i + 3], mode, sigma)
            for i in range(0, len(msgs), 3)
        ]
    F = msgs[0]
    s0, s1 = F.f00 + F.f01, F.f10 + F.f11
    if abs(s1 - s0) <= TIE_REL_EPS * (s0 + s1):
        return bool(rng.integers(0, 2))
    return s1 > s0


def simulate_round(round: TeleportationRound, rng) -> RoundResult:
    """Simulate one round: all-zeros codeword through the channel, both bases.

    Draws one deviation per physical qubit for the q register, then the p
    register, digitizes each into a LeafOutcome, and decodes bottom-up.
    A basis fails when its decoded logical bit is nonzero. Message-sum ties
    (generic for the digital C4, which only detects errors) are resolved by
    a fresh bit from the same stream, q basis first.
    """
    n = round.n_physical
    sigma = round.sigma.sigma
    dev_q = rng.normal(0.0, sigma, n)
    dev_p = rng.normal(0.0, sigma, n)
    fails = []
    for dev in (dev_q, dev_p):
        leaves = [measure(float(d)) for d in dev]
        fails.append(_decode_bit_scalar(round.level, leaves, round.decoder, sigma, rng))
    return RoundResult(q_fail=fails[0], p_fail=fails[1])


def run_level_sweep(levels, sigma: float, trials: int | None, decoder: str,
                    master_seed: int):
    """Estimates for each requested level at one sigma, common master seed.

    Returns the montecarlo Estimates (per-basis and combined rows per level).
    """
    from .montecarlo import TrialPlan, run_plan

    plan = TrialPlan(
        experiment="c4c6",
        decoder=decoder,
        sigmas=(sigma,),
        levels=tuple(levels),
        trials=trials,
        master_seed=master_seed,
    )
    return run_plan(plan)


# ---------------------------------------------------------------------------
# vectorized kernels used by the montecarlo driver


def _compiled_tables(spec: CssCodeSpec):
    # class index and per-position bits for every codeword, decode order
    words = []
    cls = []
    for k, pair in enumerate(_PAIRS):
        for w in spec.classes[pair]:
            words.append([int(ch) for ch in w])
            cls.append(k)
    return np.array(cls, dtype=np.int64), np.array(words, dtype=np.int64)


_C4_CLS, _C4_BITS = _compiled_tables(c4_spec())
_C6_CLS, _C6_BITS = _compiled_tables(c6_spec())
_C6_LAYOUT = c6_spec().pair_layout


def _c4_messages(L: np.ndarray) -> np.ndarray:
    """C4 class messages from leaf likelihoods L: (T, B, 4, 2) -> (T, B, 4)."""
    out = np.zeros(L.shape[:2] + (4,))
    for cls, bits in zip(_C4_CLS, _C4_BITS):
        prod = L[:, :, 0, bits[0]]
        for j in range(1, 4):
            prod = prod * L[:, :, j, bits[j]]
        out[:, :, cls] += prod
    total = out.sum(axis=-1, keepdims=True)
    return out / total


def _c6_messages(M: np.ndarray) -> np.ndarray:
    """C6 class messages from child messages M: (T, B, 3, 4) -> (T, B, 4)."""
    out = np.zeros(M.shape[:2] + (4,))
    for cls, bits in zip(_C6_CLS, _C6_BITS):
        prod = None
        for p, (i, j) in enumerate(_C6_LAYOUT):
            entry = M[:, :, p, 2 * bits[i - 1] + bits[j - 1]]
            prod = entry if prod is None else prod * entry
        out[:, :, cls] += prod
    total = out.sum(axis=-1, keepdims=True)
    return out / total


def _decode_batch(dev: np.ndarray, sigma: float, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bottom-up decode of one basis for T trials.

    dev: (T, n) raw deviations on the all-zeros codeword. Returns
    (fail, tie): fail is the strict decision F10+F11 > F00+F01, tie flags
    trials whose margin is inside the relative epsilon band and must be
    resolved by the caller with the trial's own stream.
    """
    T, n = dev.shape
    idx = np.floor(dev / SQRT_PI + 0.5)
    wbit = (idx.astype(np.int64) & 1).astype(np.int64)
    if mode == "analog":
        dm = dev - idx * SQRT_PI
        inv = 1.0 / (2.0 * sigma * sigma)
        lik_match = np.exp(-dm * dm * inv)
        alt = SQRT_PI - np.abs(dm)
        lik_mis = np.exp(-alt * alt * inv)
    else:
        q = p_corr(sigma)
        lik_match = np.full(dev.shape, q)
        lik_mis = np.full(dev.shape, 1.0 - q)
    L = np.empty((T, n, 2))
    L[..., 0] = np.where(wbit == 0, lik_match, lik_mis)
    L[..., 1] = np.where(wbit == 1, lik_match, lik_mis)
    M = _c4_messages(L.reshape(T, n // 4, 4, 2))
    while M.shape[1] > 1:
        M = _c6_messages(M.reshape(T, M.shape[1] // 3, 3, 4))
    F = M[:, 0, :]
    s0 = F[:, 0] + F[:, 1]
    s1 = F[:, 2] + F[:, 3]
    bad = ~np.isfinite(s0 + s1)
    if bad.any():
        # extreme underflow (tiny sigma at depth): redo those trials in log domain
        for t in np.flatnonzero(bad):
            leaves = [measure(float(d)) for d in dev[t]]
            msgs = [
                block_message(c4_spec(), leaves[i : i + 4], mode, sigma)
                for i in range(0, n, 4)
            ]
            while len(msgs) > 1:
                msgs = [
                    block_message(c6_spec(), msgs[i : i + 3], mode, sigma)
                    for i in range(0, len(msgs), 3)
                ]
            s0[t] = msgs[0].f00 + msgs[0].f01
            s1[t] = msgs[0].f10 + msgs[0].f11
    tie = np.abs(s1 - s0) <= TIE_REL_EPS * (s0 + s1)
    return (s1 > s0) & ~tie, tie
