"""Random binning/covering code and Monte-Carlo validation of its error bound.

The code under test: source symbols are binned uniformly at random; the
helper draws ceil(2^r2) codewords i.i.d. from P_U and sends the first index
whose codeword is jointly typical with its observation (membership in the
covering set F); the decoder returns the unique bin member compatible with
the smoothed support.  Trials classify the three error events

  E1: no codeword covers y,
  E2: (x, selected codeword) outside the smoothed support,
  E3: another bin member is support-compatible with the selected codeword,

and the report compares empirical frequencies against the analytic pieces of
the achievability bound.

PRNG contract: Philox (counter-based, named "philox4x64") keyed as
  codebook stream: key = seed
  trial t stream:  key = seed XOR (t + 1)
so trials are independent substreams and every report is bit-reproducible
from (seed, config) alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BudgetError, InputError, ResourceError
from .prob import CELL_CAP, Channel, JointPmf, compose_markov, marginalize
from .region import EpsilonBudget, RatePair, helper_joints, validate_budget
from .smooth import smooth_conditional_h0

PRNG_NAME = "philox4x64"
STREAM_RULE = "codebook: key=seed; trial t: key=seed^(t+1)"


@dataclass(frozen=True)
class SupportSet:
    """Support of the optimal smoothing of P_XU at eps11, as a boolean mask."""

    membership: np.ndarray  # bool, shape (|X|, |U|)
    eps11: float
    max_column_support: int


@dataclass(frozen=True)
class CoveringSet:
    """Pairs (u, y) whose residual support mass g(u,y) is within sqrt(eps11)."""

    membership: np.ndarray  # bool, shape (|U|, |Y|)
    threshold: float


@dataclass(frozen=True)
class Codebook:
    bin_of: np.ndarray  # bin index per x-symbol
    u_words: np.ndarray  # codeword symbols, length ceil(2^r2)
    n_bins: int
    seed: int


class DecodeResult(NamedTuple):
    symbol: int | None
    candidate_count: int


def build_support_set(p_xu: JointPmf, eps11: float) -> SupportSet:
    """Membership mask of the deterministic optimal smoothing at eps11."""
    result = smooth_conditional_h0(p_xu, eps11)
    membership = result.smoothing.mass > 0
    membership.flags.writeable = False
    return SupportSet(membership, float(eps11), result.max_support)


def g_value(u: int, y: int, p_xyu: JointPmf, s: SupportSet) -> float:
    """Conditional mass escaping the smoothed support: sum_x P(x|y) [x,u excluded].

    Zero-probability y uses the degenerate convention g = 0.
    """
    if p_xyu.ndim != 3:
        raise InputError("g_value expects a 3-D joint over X x Y x U")
    p_xy = p_xyu.mass.sum(axis=2)
    p_y = p_xy.sum(axis=0)
    if p_y[y] <= 0.0:
        return 0.0
    cond = p_xy[:, y] / p_y[y]
    excluded = ~s.membership[:, u]
    return float(cond[excluded].sum())


def build_covering_set(p_xyu: JointPmf, s: SupportSet, eps11: float) -> CoveringSet:
    """Vectorized construction of F = {(u, y): g(u, y) <= sqrt(eps11)}."""
    p_xy = p_xyu.mass.sum(axis=2)
    p_y = p_xy.sum(axis=0)
    cond = np.zeros_like(p_xy)
    pos = p_y > 0
    cond[:, pos] = p_xy[:, pos] / p_y[pos]
    g = (~s.membership).astype(float).T @ cond  # (|U|, |Y|)
    threshold = math.sqrt(eps11)
    membership = g <= threshold
    membership.flags.writeable = False
    return CoveringSet(membership, threshold)


def _codeword_count(rate_bits: float) -> int:
    count = math.ceil(2.0**rate_bits)
    if count < 1 or count > CELL_CAP:
        raise ResourceError(f"codebook of size {count} exceeds cap {CELL_CAP}")
    return count


def _draw_codebook(
    rng: np.random.Generator, n_x: int, p_u: np.ndarray, m1: int, m2: int, seed: int
) -> Codebook:
    bin_of = rng.integers(0, m1, size=n_x)
    cum = np.cumsum(p_u)
    u_words = np.searchsorted(cum, rng.random(m2), side="right")
    u_words = np.minimum(u_words, len(p_u) - 1)
    return Codebook(bin_of, u_words, m1, seed)


def generate_code(
    p_xyu: JointPmf, r1_bits: float, r2_bits: float, seed: int
) -> Codebook:
    """Draw a codebook from the named PRNG: uniform bins, codewords from P_U."""
    if p_xyu.ndim != 3:
        raise InputError("generate_code expects a 3-D joint over X x Y x U")
    m1 = _codeword_count(r1_bits)
    m2 = _codeword_count(r2_bits)
    p_u = p_xyu.mass.sum(axis=(0, 1))
    rng = np.random.Generator(np.random.Philox(key=seed))
    return _draw_codebook(rng, p_xyu.shape[0], p_u, m1, m2, seed)


def encode_source(x: int, cb: Codebook) -> int:
    """Bin index of the observed source symbol."""
    return int(cb.bin_of[x])


def encode_helper(y: int, cb: Codebook, f: CoveringSet) -> int:
    """Smallest codeword index covering y; index 0 when none qualifies."""
    mask = f.membership[cb.u_words, y]
    hits = np.nonzero(mask)[0]
    return int(hits[0]) if hits.size else 0


def decode(
    bin_index: int, helper_index: int, cb: Codebook, s: SupportSet
) -> DecodeResult:
    """Unique bin member compatible with the selected codeword, else failure.

    Failure (zero or several candidates) reports the candidate count.
    """
    u = int(cb.u_words[helper_index])
    candidates = np.nonzero((cb.bin_of == bin_index) & s.membership[:, u])[0]
    if candidates.size == 1:
        return DecodeResult(int(candidates[0]), 1)
    return DecodeResult(None, int(candidates.size))


@dataclass(frozen=True)
class SimReport:
    """Counts, empirical frequencies, and analytic bound pieces of one run."""

    trials: int
    seed: int
    codebook_mode: str
    r1_bits: float
    r2_bits: float
    m1_bins: int
    m2_words: int
    h0_bits: float
    divergence_bits: float
    budget: EpsilonBudget
    errors_total: int
    e1_count: int
    e2_count: int
    e1c_and_e2_count: int
    e3_count: int
    fallback_success_count: int
    classification_mismatches: int
    empirical_error: float
    bound_eps: float
    bound_smoothing_term: float
    bound_exponential_term: float
    bound_binning_term: float
    exceeded_bound: bool
    prng: str = PRNG_NAME
    streams: str = STREAM_RULE

    def to_json(self) -> str:
        payload = {
            "config": {
                "trials": self.trials,
                "seed": self.seed,
                "codebook_mode": self.codebook_mode,
                "prng": self.prng,
                "streams": self.streams,
                "r1_bits": self.r1_bits,
                "r2_bits": self.r2_bits,
                "m1_bins": self.m1_bins,
                "m2_words": self.m2_words,
                "eps": self.budget.eps,
                "eps1": self.budget.eps1,
                "eps11": self.budget.eps11,
            },
            "witness": {
                "h0_bits": self.h0_bits,
                "divergence_bits": self.divergence_bits,
            },
            "counts": {
                "errors_total": self.errors_total,
                "e1": self.e1_count,
                "e2": self.e2_count,
                "e1c_and_e2": self.e1c_and_e2_count,
                "e3": self.e3_count,
                "fallback_successes": self.fallback_success_count,
                "classification_mismatches": self.classification_mismatches,
            },
            "results": {
                "empirical_error": self.empirical_error,
                "bound_eps": self.bound_eps,
                "bound_smoothing_term": self.bound_smoothing_term,
                "bound_exponential_term": self.bound_exponential_term,
                "bound_binning_term": self.bound_binning_term,
                "exceeded_bound": self.exceeded_bound,
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def sample_xyu(
    p_xy: JointPmf, helper: Channel, n: int, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagnostic sampler: (x, y) from the joint, then u through the channel."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    flat = p_xy.mass.ravel()
    cum = np.cumsum(flat)
    idx = np.searchsorted(cum, rng.random(n), side="right")
    idx = np.minimum(idx, flat.size - 1)
    xs, ys = np.unravel_index(idx, p_xy.shape)
    cum_rows = np.cumsum(helper.matrix, axis=1)
    us = (rng.random(n)[:, None] > cum_rows[ys]).sum(axis=1)
    return xs, ys, us


def simulate(
    p_xy: JointPmf,
    helper: Channel,
    b: EpsilonBudget,
    rates: RatePair,
    trials: int,
    seed: int,
    *,
    resample_codebook: bool = True,
) -> SimReport:
    """Monte-Carlo error estimate of the random code at the given rates.

    In the default resampled mode every trial draws a fresh codebook, so the
    empirical error estimates the random-coding average that the analytic
    bound controls.  Fixed-codebook mode draws one codebook from the seed and
    reuses it; an unlucky codebook may then exceed the bound, which the
    report flags via ``exceeded_bound`` rather than hiding.

    Every trial asserts the provable classification identity
    ``decode failed  <=>  E2 or E3`` (the selected-codeword events); trials
    where E1 fired but the fallback codeword happened to decode correctly are
    counted separately, as are any mismatches of the looser union check
    ``decode failed <=> E1 or E2 or E3``.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    xyu = compose_markov(p_xy, helper)
    p_xu = marginalize(xyu, (0, 2))
    check = validate_budget(b, rates.divergence_bits)
    if not check.valid:
        raise BudgetError(check.violations)

    support = build_support_set(p_xu, b.eps11)
    covering = build_covering_set(xyu, support, b.eps11)
    m1 = _codeword_count(rates.r1_bits)
    m2 = _codeword_count(rates.r2_bits)
    p_u = xyu.mass.sum(axis=(0, 1))
    n_x = p_xy.shape[0]
    flat = p_xy.mass.ravel()
    cum_xy = np.cumsum(flat)

    fixed_cb = None
    if not resample_codebook:
        rng0 = np.random.Generator(np.random.Philox(key=seed))
        fixed_cb = _draw_codebook(rng0, n_x, p_u, m1, m2, seed)

    errors = e1s = e2s = e1c_e2s = e3s = fallback_ok = mismatches = 0
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(key=seed ^ (t + 1)))
        cb = (
            _draw_codebook(rng, n_x, p_u, m1, m2, seed)
            if resample_codebook
            else fixed_cb
        )
        idx = int(np.searchsorted(cum_xy, rng.random(), side="right"))
        idx = min(idx, flat.size - 1)
        x, y = np.unravel_index(idx, p_xy.shape)
        x, y = int(x), int(y)

        k = encode_helper(y, cb, covering)
        e1 = not bool(covering.membership[cb.u_words, y].any())
        u = int(cb.u_words[k])
        e2 = not bool(support.membership[x, u])
        bin_index = encode_source(x, cb)
        result = decode(bin_index, k, cb, support)
        others = result.candidate_count - (0 if e2 else 1)
        e3 = others >= 1
        err = result.symbol != x

        if err != (e2 or e3):
            raise RuntimeError(
                "classification invariant broken: decode failure must "
                "coincide with E2 or E3"
            )
        mismatches += int(err != (e1 or e2 or e3))
        fallback_ok += int(e1 and not err)
        errors += int(err)
        e1s += int(e1)
        e2s += int(e2)
        e1c_e2s += int((not e1) and e2)
        e3s += int(e3)

    smoothing_term = b.eps11 + 2.0 * math.sqrt(b.eps11)
    exp_term = math.exp(-(2.0**rates.r2_bits) * 2.0 ** (-rates.divergence_bits))
    binning_term = 2.0 ** (-rates.r1_bits) * support.max_column_support
    empirical = errors / trials
    return SimReport(
        trials=trials,
        seed=seed,
        codebook_mode="resampled" if resample_codebook else "fixed",
        r1_bits=rates.r1_bits,
        r2_bits=rates.r2_bits,
        m1_bins=m1,
        m2_words=m2,
        h0_bits=rates.h0_bits,
        divergence_bits=rates.divergence_bits,
        budget=b,
        errors_total=errors,
        e1_count=e1s,
        e2_count=e2s,
        e1c_and_e2_count=e1c_e2s,
        e3_count=e3s,
        fallback_success_count=fallback_ok,
        classification_mismatches=mismatches,
        empirical_error=empirical,
        bound_eps=b.eps,
        bound_smoothing_term=smoothing_term,
        bound_exponential_term=exp_term,
        bound_binning_term=binning_term,
        exceeded_bound=empirical > b.eps,
    )
