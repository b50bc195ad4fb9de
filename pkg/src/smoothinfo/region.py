"""One-shot achievable rate pairs for source coding with a helper.

Evaluates, for a source joint P_XY and a helper channel P_{U|Y}, the rate
pair guaranteed achievable at a given epsilon budget; searches helper
channels on a simplex grid for the Pareto frontier; and computes the
classical asymptotic comparison point (H(X|U), I(U;Y)).
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, InputError
from .prob import Channel, JointPmf, Pmf, compose_markov, marginalize, shannon_quantities
from .smooth import smooth_conditional_h0, smooth_max_divergence


@dataclass(frozen=True)
class EpsilonBudget:
    """Total error eps split into coding slack eps1 and smoothing slack eps11.

    Construction does not validate; ``validate_budget`` reports violations so
    that infeasible budgets can be examined and rejected with diagnostics.
    """

    eps: float
    eps1: float
    eps11: float


@dataclass(frozen=True)
class BudgetCheck:
    valid: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class RatePair:
    """Achievable (r1, r2) plus the witness quantities behind it."""

    r1_bits: float
    r2_bits: float
    h0_bits: float
    divergence_bits: float
    budget: EpsilonBudget
    helper: Channel


@dataclass(frozen=True)
class FrontierPoint:
    rates: RatePair
    helper: Channel
    budget: EpsilonBudget


def validate_budget(b: EpsilonBudget, divergence_bits: float) -> BudgetCheck:
    """Check every budget constraint plus nonnegativity of the divergence.

    Returns a verdict with one diagnostic per violated constraint.
    """
    v: list[str] = []
    if not 0.0 < b.eps < 1.0:
        v.append(f"eps must be in (0, 1), got {b.eps!r}")
    if b.eps1 < 0 or b.eps11 < 0:
        v.append(f"eps1 and eps11 must be nonnegative, got {b.eps1!r}, {b.eps11!r}")
    if not b.eps1 < b.eps:
        v.append(f"eps1 must be smaller than eps ({b.eps1!r} >= {b.eps!r})")
    if b.eps11 >= 0 and not b.eps11 + 2.0 * math.sqrt(b.eps11) < b.eps1:
        v.append(
            "eps11 + 2*sqrt(eps11) must be smaller than eps1 "
            f"({b.eps11 + 2.0 * math.sqrt(max(b.eps11, 0.0)):g} >= {b.eps1!r})"
        )
    if divergence_bits < 0.0:
        v.append(
            f"smooth divergence must be nonnegative, got {divergence_bits:g}"
        )
    return BudgetCheck(not v, tuple(v))


def helper_joints(p_xy: JointPmf, helper: Channel) -> tuple[JointPmf, JointPmf, Pmf, Pmf]:
    """Compose the chain and return (P_XU, P_UY, P_U, P_Y)."""
    xyu = compose_markov(p_xy, helper)
    p_xu = marginalize(xyu, (0, 2))
    p_uy_raw = marginalize(xyu, (1, 2))  # axes (Y, U); reorder to (U, Y)
    p_uy = JointPmf(p_uy_raw.mass.T, sum_atol=1e-9)
    p_u = Pmf(p_uy.mass.sum(axis=1), sum_atol=1e-9)
    p_y = Pmf(p_uy.mass.sum(axis=0), sum_atol=1e-9)
    return p_xu, p_uy, p_u, p_y


def helper_divergence(p_xy: JointPmf, helper: Channel, eps11: float) -> float:
    """Smooth max divergence of P_UY against the product of its marginals."""
    _, p_uy, p_u, p_y = helper_joints(p_xy, helper)
    product = Pmf(np.outer(p_u.mass, p_y.mass).ravel(), sum_atol=1e-9)
    flat = Pmf(p_uy.mass.ravel(), sum_atol=1e-9)
    return smooth_max_divergence(flat, product, eps11).value_bits


def achievable_pair(p_xy: JointPmf, helper: Channel, b: EpsilonBudget) -> RatePair:
    """One-shot rate pair achievable for (P_XY, helper) under budget b.

    r1 = H0^(eps11)(X|U) - log2(eps - eps1)
    r2 = D_inf^(eps11)(P_UY || P_U x P_Y) + log2(-ln(eps1 - eps11 - 2*sqrt(eps11)))

    The inner logarithm is natural; everything else is base 2.  Budgets that
    fail their constraints (including a negative smoothed divergence) raise
    ``BudgetError`` with full diagnostics.
    """
    p_xu, p_uy, p_u, p_y = helper_joints(p_xy, helper)
    product = Pmf(np.outer(p_u.mass, p_y.mass).ravel(), sum_atol=1e-9)
    flat = Pmf(p_uy.mass.ravel(), sum_atol=1e-9)
    div = smooth_max_divergence(flat, product, b.eps11).value_bits
    check = validate_budget(b, div)
    if not check.valid:
        raise BudgetError(check.violations)
    h0 = smooth_conditional_h0(p_xu, b.eps11).value_bits
    r1 = h0 - math.log2(b.eps - b.eps1)
    arg = b.eps1 - b.eps11 - 2.0 * math.sqrt(b.eps11)
    if arg >= 1.0:
        raise BudgetError(
            (f"penalty argument eps1 - eps11 - 2*sqrt(eps11) = {arg:g} >= 1 "
             "makes log2(-ln(.)) undefined",)
        )
    r2 = div + math.log2(-math.log(arg))
    return RatePair(r1, r2, h0, div, b, helper)


def wyner_point(p_xy: JointPmf, helper: Channel) -> dict[str, float]:
    """Asymptotic per-symbol benchmark (H(X|U), I(U;Y)) for this helper."""
    xyu = compose_markov(p_xy, helper)
    q = shannon_quantities(xyu)
    return {"h_x_given_u_bits": q["h_x_given_u"], "i_uy_bits": q["i_uy"]}


def _simplex_rows(parts: int, resolution: int):
    """All pmfs on ``parts`` symbols with entries k/(resolution-1)."""
    total = resolution - 1
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        counts = []
        prev = -1
        for c in cuts:
            counts.append(c - prev - 1)
            prev = c
        counts.append(total + parts - 2 - prev)
        yield tuple(k / total for k in counts)


def enumerate_channels(input_size: int, output_size: int, resolution: int):
    """Deterministic enumeration of channels with rows on a simplex grid."""
    if resolution < 2:
        raise InputError("channel grid resolution must be >= 2")
    rows = list(_simplex_rows(output_size, resolution))
    for combo in itertools.product(rows, repeat=input_size):
        yield Channel(np.array(combo))


def default_budget_grid(eps: float) -> list[EpsilonBudget]:
    """Default split of the total error for frontier searches.

    eps1 = eps/2 and eps11 in {eps1^2/16, eps1^2/64}; both satisfy
    eps11 + 2*sqrt(eps11) <= eps1/2 + eps1^2/16 < eps1.
    """
    eps1 = eps / 2.0
    return [
        EpsilonBudget(eps, eps1, eps1 * eps1 / 16.0),
        EpsilonBudget(eps, eps1, eps1 * eps1 / 64.0),
    ]


def frontier_search(
    p_xy: JointPmf,
    u_size: int,
    channel_grid: int,
    budget_grid: list[EpsilonBudget],
) -> list[FrontierPoint]:
    """Pareto-nondominated rate pairs over a grid of helpers and budgets.

    Helpers are enumerated with rows on the probability simplex at the given
    resolution; (helper, budget) cells whose budget fails validation are
    skipped.  A point is dropped iff another evaluated point is at least as
    good in both coordinates and strictly better in one; exact duplicates
    keep their first occurrence.  Output is sorted by (r1, r2).
    """
    if u_size < 1:
        raise InputError("u_size must be >= 1")
    if not budget_grid:
        raise InputError("budget grid must be nonempty")
    evaluated: list[tuple[float, float, int, RatePair]] = []
    index = 0
    for helper in enumerate_channels(p_xy.shape[1], u_size, channel_grid):
        for b in budget_grid:
            try:
                pair = achievable_pair(p_xy, helper, b)
            except BudgetError:
                continue
            evaluated.append((pair.r1_bits, pair.r2_bits, index, pair))
            index += 1
    points: list[FrontierPoint] = []
    seen: set[tuple[float, float]] = set()
    for r1, r2, _, pair in sorted(evaluated, key=lambda e: (e[0], e[1], e[2])):
        if (r1, r2) in seen:
            continue
        dominated = any(
            (o1 <= r1 and o2 <= r2) and (o1 < r1 or o2 < r2)
            for o1, o2, _, _ in evaluated
        )
        if not dominated:
            seen.add((r1, r2))
            points.append(FrontierPoint(pair, pair.helper, pair.budget))
    return points


def frontier_csv(points: list[FrontierPoint]) -> str:
    """CSV form of a frontier: rates, budget, flattened helper rows."""
    out = io.StringIO()
    if points:
        h = points[0].helper.matrix
        helper_cols = [
            f"h_{y}_{u}" for y in range(h.shape[0]) for u in range(h.shape[1])
        ]
    else:
        helper_cols = []
    out.write(",".join(["r1_bits", "r2_bits", "eps", "eps1", "eps11"] + helper_cols))
    out.write("\n")
    for pt in points:
        row = [
            pt.rates.r1_bits,
            pt.rates.r2_bits,
            pt.budget.eps,
            pt.budget.eps1,
            pt.budget.eps11,
        ] + list(pt.helper.matrix.ravel())
        out.write(",".join(f"{v:.12g}" for v in row))
        out.write("\n")
    return out.getvalue()
