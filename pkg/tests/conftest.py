"""Shared seeded-instance generators and brute-force oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np

from smoothinfo import JointPmf, Pmf
from smoothinfo.asymptotics import _type_stats


def random_pq(rng: np.random.Generator, size: int, allow_zero_p: bool = True):
    """A (P, Q) pair with Supp(P) contained in Supp(Q) and bounded ratios.

    Q is floored away from zero so grid oracles stay tight; P occasionally
    drops a symbol so sub-support cases are exercised.
    """
    q = 0.85 * rng.dirichlet(np.ones(size)) + 0.15 / size
    p = rng.dirichlet(np.ones(size))
    if allow_zero_p and size > 2 and rng.random() < 0.3:
        p[rng.integers(0, size)] = 0.0
        p = p / p.sum()
    return Pmf(p), Pmf(q / q.sum())


def random_joint(rng: np.random.Generator, n_x: int, n_u: int) -> JointPmf:
    """Random dense joint; occasionally zeroes cells for support variety."""
    m = rng.dirichlet(np.ones(n_x * n_u))
    if rng.random() < 0.4:
        kill = rng.choice(n_x * n_u, size=rng.integers(1, n_x * n_u // 2 + 1),
                          replace=False)
        m[kill] = 0.0
        m = m / m.sum()
    return JointPmf(m.reshape(n_x, n_u))


def brute_spectral_mass(p: Pmf, q: Pmf, n: int, lam: float) -> float:
    """Oracle: enumerate every tuple explicitly instead of counting types.

    Per-tuple mass and log ratio come from the tuple's symbol counts via the
    same arithmetic recipe as the type-aggregated path, so the aggregation
    (the multinomial counting) is what gets checked -- exactly: fsum of the
    tuple masses and the exact rational accumulation both return the
    correctly rounded sum.
    """
    supp = p.support()
    ps = p.mass[supp]
    qs = q.mass[supp]
    bound = lam * n
    masses = []
    for tup in itertools.product(range(len(supp)), repeat=n):
        counts = np.bincount(np.array(tup), minlength=len(supp))
        mass, logratio = _type_stats(ps, qs, counts)
        if logratio <= bound:
            masses.append(mass)
    return math.fsum(masses)
