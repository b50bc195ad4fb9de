"""Exact max Renyi divergence / entropy of order zero and their smooth variants.

Four routes to the smoothed divergence are provided on purpose:

  * ``max_divergence``            -- the unsmoothed value,
  * ``smooth_max_divergence``     -- exact, by piecewise-linear threshold
                                     inversion over sorted ratio breakpoints,
  * ``smooth_divergence_procedure`` -- exact, by iteratively lowering the
                                     highest-ratio class in discrete rounds,
  * ``smooth_divergence_oracle``  -- a deliberately dumb grid search used as
                                     an independent upper-bounding check.

The two exact algorithms must agree to 1e-10; the oracle converges to them
from above as its grid is refined.  The conditional order-zero entropy gets
the same treatment (exact support-reduction optimum plus a subset-enumeration
oracle).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, SupportError
from .prob import JointPmf, Pmf, SubPmf


@dataclass(frozen=True)
class SmoothDivergenceResult:
    """Optimal value in bits plus the smoothing witness that attains it."""

    value_bits: float
    smoothing: SubPmf
    epsilon: float


@dataclass(frozen=True)
class SmoothEntropyResult:
    """Optimal value (log2 of the max column support) plus its witness."""

    value_bits: float
    smoothing: SubPmf
    epsilon: float
    max_support: int


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise InputError(f"smoothing parameter must be in [0, 1), got {eps!r}")
    return eps


def _check_support(p: Pmf, q: Pmf) -> np.ndarray:
    if p.size != q.size:
        raise InputError("p and q must share one alphabet")
    supp = p.support()
    bad = supp[q.mass[supp] <= 0]
    if bad.size:
        raise SupportError(
            f"support violation: p({bad[0]}) > 0 but q({bad[0]}) = 0"
        )
    return supp


def max_entropy_h0(p: Pmf) -> float:
    """Order-zero Renyi entropy: log2 of the support cardinality."""
    return math.log2(len(p.support()))


def max_divergence(p: Pmf, q: Pmf) -> float:
    """log2 of the largest ratio p(x)/q(x) over the support of p."""
    supp = _check_support(p, q)
    return math.log2(float(np.max(p.mass[supp] / q.mass[supp])))


def _threshold_scale(p: np.ndarray, q: np.ndarray, eps: float) -> float:
    """Smallest t with sum(min(p, t*q)) >= sum(p) - eps, solved exactly.

    ``p`` and ``q`` are positive mass arrays (entries may be aggregated level
    masses; only the ratio multiset matters).  The feasible-mass curve
    f(t) = sum(min(p, t*q)) is piecewise linear and increasing with
    breakpoints at the ratios p/q, so the crossing is found by sorting the
    breakpoints and inverting the active linear segment.
    """
    target = float(p.sum()) - eps
    r = p / q
    order = np.argsort(r, kind="stable")
    rs, ps, qs = r[order], p[order], q[order]
    cum_p = np.cumsum(ps)
    cum_q = np.cumsum(qs)
    total_q = cum_q[-1]
    # f evaluated at each breakpoint level; ties share the level's value
    # because min(p, t*q) = p = t*q when p/q equals t.
    f = cum_p + rs * (total_q - cum_q)
    idx = int(np.searchsorted(f, target - 1e-12))
    if idx >= len(rs):
        return float(rs[-1])
    # first index of the tie group containing the crossing segment's end
    g = int(np.searchsorted(rs, rs[idx], side="left"))
    p_below = float(cum_p[g - 1]) if g > 0 else 0.0
    q_capped = float(total_q - (cum_q[g - 1] if g > 0 else 0.0))
    t = (target - p_below) / q_capped
    return min(t, float(rs[idx]))


def smooth_max_divergence(p: Pmf, q: Pmf, eps: float) -> SmoothDivergenceResult:
    """Smooth max divergence by exact threshold inversion.

    The optimal sub-pmf caps every ratio at one common level t*, the smallest
    scale at which the capped mass still reaches 1 - eps; the value is
    log2(t*).  For eps in [0, 1) the cap is strictly positive, so the witness
    keeps the full support of p.
    """
    eps = _check_eps(eps)
    supp = _check_support(p, q)
    if eps == 0.0:
        return SmoothDivergenceResult(
            max_divergence(p, q), SubPmf(p.mass, p.mass), 0.0
        )
    t = _threshold_scale(p.mass[supp], q.mass[supp], eps)
    phi = np.minimum(p.mass, t * q.mass)
    phi[p.mass == 0] = 0.0
    return SmoothDivergenceResult(math.log2(t), SubPmf(phi, p.mass), eps)


def smooth_divergence_procedure(p: Pmf, q: Pmf, eps: float) -> SmoothDivergenceResult:
    """Smooth max divergence by iterative highest-ratio lowering.

    Starting from phi = p, the class of coordinates currently sharing the
    highest ratio phi/q is lowered in lockstep (equal ratios maintained
    inside the class) until the class ratio either meets the next-highest
    ratio -- a merge event, after which lowering continues with the enlarged
    class -- or the removed mass reaches eps.  The trajectory is piecewise
    linear in spent mass, so running it as discrete merge rounds over the
    sorted distinct ratios is exact and ends within one round per level.
    """
    eps = _check_eps(eps)
    supp = _check_support(p, q)
    pm = p.mass.astype(float)
    qm = q.mass.astype(float)
    phi = pm.copy()
    if eps > 0.0:
        ratios = pm[supp] / qm[supp]
        levels = np.unique(ratios)  # ascending, exact-float grouping
        members = {lv: supp[ratios == lv] for lv in levels}
        top = np.array(members[levels[-1]], dtype=int)
        next_level = len(levels) - 2
        budget = eps
        while True:
            q_top = float(qm[top].sum())
            phi_top = float(phi[top].sum())
            r2 = float(levels[next_level]) if next_level >= 0 else 0.0
            cost = phi_top - r2 * q_top
            if cost <= budget:
                phi[top] = r2 * qm[top]
                budget -= cost
                top = np.concatenate([top, members[levels[next_level]]])
                next_level -= 1
            else:
                r = (phi_top - budget) / q_top
                phi[top] = r * qm[top]
                break
        phi = np.minimum(phi, pm)
    value = math.log2(float(np.max(phi[supp] / qm[supp])))
    return SmoothDivergenceResult(value, SubPmf(phi, pm), eps)


def smooth_divergence_oracle(p: Pmf, q: Pmf, eps: float, grid: int) -> float:
    """Upper-bounding grid search for the smooth max divergence.

    Scans candidate ratio caps on a geometric grid between 1 - eps (a
    universal lower bound on the optimum for normalized q) and the raw
    maximum ratio, keeping the first cap whose per-coordinate reductions fit
    in the removal budget eps.  Returns log2 of that cap: an upper bound on
    the true value that tightens as ``grid`` grows.
    """
    eps = _check_eps(eps)
    supp = _check_support(p, q)
    if grid < 1:
        raise InputError("grid must be a positive integer")
    ps = p.mass[supp]
    qs = q.mass[supp]
    r_hi = float(np.max(ps / qs))
    if eps == 0.0:
        return math.log2(r_hi)
    t_lo = 1.0 - eps
    ts = np.geomspace(t_lo, r_hi, grid + 1)
    masses = np.minimum(ps[None, :], ts[:, None] * qs[None, :]).sum(axis=1)
    feasible = np.nonzero(masses >= (1.0 - eps) - 1e-12)[0]
    return math.log2(float(ts[feasible[0]]))


def _column_prefixes(mass2d: np.ndarray) -> list[np.ndarray]:
    """Per column: cumulative sums of the nonzero entries sorted ascending."""
    prefixes = []
    for u in range(mass2d.shape[1]):
        col = mass2d[:, u]
        nz = np.sort(col[col > 0])
        prefixes.append(np.concatenate([[0.0], np.cumsum(nz)]))
    return prefixes


def smooth_conditional_h0(p_xu: JointPmf, eps: float) -> SmoothEntropyResult:
    """Conditional smooth Renyi entropy of order zero of X given U (axis 1).

    Removing mass only helps the objective when a cell is zeroed outright, so
    for a target max column support k the cheapest sub-pmf zeroes, in each
    column u, the (s_u - k)+ smallest entries (s_u = column support size).
    The optimum is log2 of the smallest k whose total zeroing cost fits in
    eps.  The returned witness realizes that pattern and then keeps zeroing
    the smallest surviving cells while budget remains -- this cannot change
    the max column support (a cheaper pattern would contradict minimality of
    k) and gives downstream codebooks a deterministic, maximally thinned
    support.  Ties break toward lower symbol indices.
    """
    eps = _check_eps(eps)
    if p_xu.ndim != 2:
        raise InputError("smooth_conditional_h0 expects a 2-D joint over X x U")
    mass = p_xu.mass
    prefixes = _column_prefixes(mass)
    supports = np.array([len(pre) - 1 for pre in prefixes])
    k_max = int(supports.max())
    k_star = k_max
    for k in range(k_max + 1):
        cost = sum(
            float(pre[max(s - k, 0)]) for pre, s in zip(prefixes, supports)
        )
        if cost <= eps + 1e-12:
            k_star = k
            break

    witness = mass.copy()
    spent = 0.0
    for u in range(mass.shape[1]):
        col = mass[:, u]
        nz = np.nonzero(col > 0)[0]
        drop = len(nz) - k_star
        if drop > 0:
            order = sorted(nz, key=lambda x: (col[x], x))
            for x in order[:drop]:
                spent += float(col[x])
                witness[x, u] = 0.0
    # spend any leftover budget on the smallest surviving cells
    survivors = sorted(
        ((float(mass[x, u]), u, x) for x, u in zip(*np.nonzero(witness > 0))),
    )
    for value, u, x in survivors:
        if spent + value > eps + 1e-12:
            break
        spent += value
        witness[x, u] = 0.0

    return SmoothEntropyResult(
        math.log2(k_star), SubPmf(witness, mass), eps, k_star
    )


@functools.lru_cache(maxsize=4)
def _subset_bits(m: int) -> np.ndarray:
    """All subsets of m items as a (2^m, m) 0/1 float matrix."""
    bits = ((np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1).astype(float)
    bits.flags.writeable = False
    return bits


def smooth_h0_oracle(p_xu: JointPmf, eps: float) -> float:
    """Exhaustive zeroing-subset search for the conditional smooth entropy.

    Enumerates every subset of the joint's nonzero cells, keeps the subsets
    whose total mass fits in eps, and returns log2 of the smallest max column
    support achievable by zeroing one of them.  Partial reductions never
    shrink a support, so full-cell subsets cover the whole feasible set.
    Capped at 16 total cells.
    """
    eps = _check_eps(eps)
    if p_xu.ndim != 2:
        raise InputError("smooth_h0_oracle expects a 2-D joint over X x U")
    mass = p_xu.mass
    if mass.size > 16:
        raise InputError(f"oracle capped at 16 cells, got {mass.size}")
    xs, us = np.nonzero(mass > 0)
    values = mass[xs, us]
    m = len(values)
    bits = _subset_bits(m)
    costs = bits @ values
    col_support = np.zeros((1 << m, mass.shape[1]))
    base = np.zeros(mass.shape[1])
    for u in range(mass.shape[1]):
        cells = np.nonzero(us == u)[0]
        base[u] = len(cells)
        if len(cells):
            col_support[:, u] = base[u] - bits[:, cells].sum(axis=1)
        else:
            col_support[:, u] = 0.0
    objective = col_support.max(axis=1)
    feasible = costs <= eps + 1e-12
    k_min = int(objective[feasible].min())
    return math.log2(k_min)
