"""Numerical convergence of per-symbol smooth quantities on i.i.d. products.

For i.i.d. inputs the smoothed divergence of an n-fold product depends only
on the multiset of per-tuple (P, Q) masses, and tuples sharing a symbol-count
vector share both masses; aggregating by type (multinomial counting) keeps
the computation polynomial in n where full enumeration would be |X|^n.  The
information-spectrum mass uses the same aggregation with exact rational
accumulation, so a brute-force enumeration over tuples reproduces it bit for
bit.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .prob import JointPmf, Pmf, product_extend, shannon_quantities
from .smooth import _check_eps, _check_support, _threshold_scale, smooth_conditional_h0


@dataclass(frozen=True)
class ConvergenceSeries:
    """Per-symbol values at n = 1..n_max against their asymptotic target."""

    eps: float
    entries: tuple[tuple[int, float], ...]
    target_bits: float

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("n,value_bits,target_bits,eps\n")
        for n, value in self.entries:
            out.write(
                f"{n},{value:.12g},{self.target_bits:.12g},{self.eps:.12g}\n"
            )
        return out.getvalue()


def _iter_counts(n: int, parts: int):
    """All count vectors of length ``parts`` summing to n (types of a tuple)."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _iter_counts(n - first, parts - 1):
            yield (first,) + rest


def _multinomial(n: int, counts: tuple[int, ...]) -> int:
    coeff = 1
    remaining = n
    for k in counts[:-1]:
        coeff *= math.comb(remaining, k)
        remaining -= k
    return coeff


def _type_stats(
    p_supp: np.ndarray, q_supp: np.ndarray, counts: np.ndarray
) -> tuple[float, float]:
    """Per-tuple (mass, log2 ratio) of any tuple with the given symbol counts.

    This is the one shared arithmetic recipe for both the type-aggregated
    path and brute-force tuple enumeration, so the two round identically.
    """
    mass = float(np.prod(np.power(p_supp, counts)))
    logratio = float(np.dot(counts, np.log2(p_supp / q_supp)))
    return mass, logratio


def _product_levels(p: Pmf, q: Pmf, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Aggregated (P, Q) level masses of the n-fold products, one per type."""
    supp = _check_support(p, q)
    ps = p.mass[supp]
    qs = q.mass[supp]
    p_levels = []
    q_levels = []
    for counts in _iter_counts(n, len(supp)):
        coeff = _multinomial(n, counts)
        arr = np.array(counts)
        p_levels.append(coeff * float(np.prod(np.power(ps, arr))))
        q_levels.append(coeff * float(np.prod(np.power(qs, arr))))
    return np.array(p_levels), np.array(q_levels)


def divergence_series(p: Pmf, q: Pmf, eps: float, n_max: int) -> ConvergenceSeries:
    """Per-symbol smooth max divergence of the n-fold products, n = 1..n_max.

    Exact: the threshold inversion runs on type-aggregated level masses,
    which carry the same ratio multiset as the full product.  The target is
    the Kullback-Leibler divergence D(P||Q).
    """
    eps = _check_eps(eps)
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    supp = _check_support(p, q)
    ps, qs = p.mass[supp], q.mass[supp]
    target = float(np.dot(ps, np.log2(ps / qs)))
    entries = []
    for n in range(1, n_max + 1):
        p_lv, q_lv = _product_levels(p, q, n)
        if eps == 0.0:
            t = float(np.max(p_lv / q_lv))
        else:
            t = _threshold_scale(p_lv, q_lv, eps)
        entries.append((n, math.log2(t) / n))
    return ConvergenceSeries(eps, tuple(entries), target)


def entropy_series(p_xy: JointPmf, eps: float, n_max: int) -> ConvergenceSeries:
    """Per-symbol conditional smooth order-zero entropy on materialized products.

    The target is the Shannon conditional entropy H(X|Y).
    """
    eps = _check_eps(eps)
    if p_xy.ndim != 2:
        raise InputError("entropy_series expects a 2-D joint")
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    target = shannon_quantities(p_xy)["h_x_given_y"]
    entries = []
    for n in range(1, n_max + 1):
        joint_n = product_extend(p_xy, n)
        value = smooth_conditional_h0(joint_n, eps).value_bits
        entries.append((n, value / n))
    return ConvergenceSeries(eps, tuple(entries), target)


def spectral_mass(p: Pmf, q: Pmf, n: int, lam: float) -> float:
    """P-probability that the per-symbol log ratio of an n-tuple is <= lam.

    Evaluated exactly by type counting: each count vector contributes
    multinomial(n; counts) tuples of identical mass and log ratio.  The
    aggregation is exact (integer coefficients times rationals), so the
    result equals a correctly rounded brute-force enumeration.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    supp = _check_support(p, q)
    ps = p.mass[supp]
    qs = q.mass[supp]
    bound = float(lam) * n
    total = Fraction(0)
    for counts in _iter_counts(n, len(supp)):
        arr = np.array(counts)
        mass, logratio = _type_stats(ps, qs, arr)
        if logratio <= bound:
            total += _multinomial(n, counts) * Fraction(mass)
    return float(total)
