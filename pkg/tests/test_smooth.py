import math

import numpy as np
import pytest

from conftest import random_joint, random_pq
from smoothinfo import (
    InputError,
    JointPmf,
    Pmf,
    SupportError,
    max_divergence,
    max_entropy_h0,
    smooth_conditional_h0,
    smooth_divergence_oracle,
    smooth_divergence_procedure,
    smooth_h0_oracle,
    smooth_max_divergence,
)


def test_max_entropy_h0():
    assert max_entropy_h0(Pmf([0.5, 0.5])) == 1.0
    assert max_entropy_h0(Pmf([1.0, 0.0, 0.0, 0.0])) == 0.0
    assert max_entropy_h0(Pmf([0.5, 0.25, 0.25, 0.0])) == math.log2(3)


def test_max_divergence():
    p = Pmf([0.5, 0.5])
    assert max_divergence(p, p) == 0.0
    assert max_divergence(Pmf([1.0, 0.0]), p) == 1.0
    assert max_divergence(Pmf([0.75, 0.25]), p) == pytest.approx(math.log2(1.5))
    with pytest.raises(SupportError, match="1"):
        max_divergence(Pmf([0.5, 0.5]), Pmf([1.0, 0.0]))


def test_smooth_divergence_eps_zero():
    p, q = Pmf([0.6, 0.4]), Pmf([0.3, 0.7])
    r = smooth_max_divergence(p, q, 0.0)
    assert r.value_bits == max_divergence(p, q)
    assert r.smoothing.mass == pytest.approx(p.mass)
    r2 = smooth_divergence_procedure(p, q, 0.0)
    assert r2.value_bits == max_divergence(p, q)
    assert r2.smoothing.mass == pytest.approx(p.mass)


def test_smooth_divergence_known_values():
    p = Pmf([0.5, 0.5])
    q = Pmf([0.75, 0.25])
    r = smooth_max_divergence(p, q, 0.1)
    # optimal cap solves 0.5 + 0.25 t = 0.9
    assert r.value_bits == pytest.approx(math.log2(1.6), abs=1e-12)
    assert float(r.smoothing.mass.sum()) == pytest.approx(0.9, abs=1e-12)

    same = smooth_max_divergence(p, Pmf([0.5, 0.5]), 0.2)
    assert same.value_bits == pytest.approx(math.log2(0.8), abs=1e-12)
    assert same.smoothing.mass == pytest.approx([0.4, 0.4])


def test_procedure_single_ratio_class():
    # constant ratio: every coordinate lowers in lockstep until eps is spent
    p = Pmf([0.25, 0.25, 0.25, 0.25])
    r = smooth_divergence_procedure(p, p, 0.2)
    assert r.value_bits == pytest.approx(math.log2(0.8), abs=1e-12)
    assert r.smoothing.mass == pytest.approx(np.full(4, 0.2))


def test_procedure_matches_threshold():
    p = Pmf([0.5, 0.5])
    q = Pmf([0.75, 0.25])
    a = smooth_max_divergence(p, q, 0.1)
    b = smooth_divergence_procedure(p, q, 0.1)
    assert b.value_bits == pytest.approx(a.value_bits, abs=1e-12)

    rng = np.random.default_rng(17)
    for i in range(200):
        p, q = random_pq(rng, int(rng.integers(2, 13)))
        eps = [0.0, 0.05, 0.2][i % 3]
        va = smooth_max_divergence(p, q, eps).value_bits
        vb = smooth_divergence_procedure(p, q, eps).value_bits
        assert abs(va - vb) < 1e-10


def test_oracle():
    p = Pmf([0.5, 0.5])
    q = Pmf([0.75, 0.25])
    assert smooth_divergence_oracle(p, q, 0.0, 100) == max_divergence(p, q)
    v = smooth_divergence_oracle(p, q, 0.1, 10**4)
    assert abs(v - math.log2(1.6)) < 1e-3
    assert v >= smooth_max_divergence(p, q, 0.1).value_bits
    rng = np.random.default_rng(5)
    for _ in range(25):
        p, q = random_pq(rng, int(rng.integers(2, 7)))
        assert smooth_divergence_oracle(p, q, 0.2, 2000) <= (
            smooth_divergence_oracle(p, q, 0.1, 2000) + 1e-12
        )


def test_divergence_monotone_in_eps():
    rng = np.random.default_rng(23)
    for _ in range(30):
        p, q = random_pq(rng, int(rng.integers(2, 10)))
        values = [
            smooth_max_divergence(p, q, eps).value_bits
            for eps in np.arange(0.0, 0.31, 0.02)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def _check_witness(p, q, eps, result):
    phi = result.smoothing.mass
    assert np.all(phi <= p.mass)
    assert np.all(phi >= 0)
    assert float(phi.sum()) >= 1.0 - eps - 1e-10
    assert np.array_equal(phi > 0, p.mass > 0)  # support preserved
    decreased = phi < p.mass
    if decreased.any():
        ratios = phi[decreased] / q.mass[decreased]
        spread = float(ratios.max() - ratios.min())
        assert spread <= 1e-10 * max(1.0, float(ratios.max()))


def test_witness_validity_both_algorithms():
    rng = np.random.default_rng(29)
    for i in range(150):
        p, q = random_pq(rng, int(rng.integers(2, 13)))
        eps = [0.0, 0.05, 0.2][i % 3]
        _check_witness(p, q, eps, smooth_max_divergence(p, q, eps))
        _check_witness(p, q, eps, smooth_divergence_procedure(p, q, eps))


def test_divergence_input_errors():
    p = Pmf([0.5, 0.5])
    with pytest.raises(InputError):
        smooth_max_divergence(p, p, 1.0)
    with pytest.raises(InputError):
        smooth_divergence_procedure(p, p, -0.1)
    with pytest.raises(SupportError):
        smooth_max_divergence(p, Pmf([1.0, 0.0]), 0.1)
    with pytest.raises(InputError):
        smooth_divergence_oracle(p, p, 0.1, 0)


def test_smooth_conditional_h0_examples():
    uniform = JointPmf([[0.25, 0.25], [0.25, 0.25]])
    assert smooth_conditional_h0(uniform, 0.0).value_bits == 1.0
    assert smooth_conditional_h0(uniform, 0.5).value_bits == 0.0

    j = JointPmf([[0.4, 0.25], [0.3, 0.0], [0.05, 0.0]])
    r = smooth_conditional_h0(j, 0.05)
    assert r.value_bits == 1.0 and r.max_support == 2
    # the zeroed cell is the cheapest one: (x=2, u=0)
    assert r.smoothing.mass[2, 0] == 0.0
    assert r.smoothing.mass[0, 0] == 0.4


def test_smooth_h0_oracle_examples():
    j = JointPmf([[0.4, 0.25], [0.3, 0.0], [0.05, 0.0]])
    assert smooth_h0_oracle(j, 0.0) == math.log2(3)
    # keeping only the single largest cell is feasible once eps allows it
    assert smooth_h0_oracle(j, 0.6000001) == 0.0
    with pytest.raises(InputError):
        smooth_h0_oracle(JointPmf(np.full((5, 4), 0.05)), 0.1)


def test_h0_oracle_agreement_random():
    rng = np.random.default_rng(31)
    for i in range(200):
        j = random_joint(rng, 3, 3)
        eps = [0.0, 0.1, 0.3][i % 3]
        exact = smooth_conditional_h0(j, eps)
        assert exact.value_bits == smooth_h0_oracle(j, eps)
        # value is always log2 of an integer in [1, |X|]
        k = round(2.0**exact.value_bits)
        assert 1 <= k <= 3 and exact.value_bits == math.log2(k)


def test_h0_monotone_and_witness():
    rng = np.random.default_rng(37)
    for _ in range(30):
        j = random_joint(rng, 4, 3)
        values = []
        for eps in np.arange(0.0, 0.31, 0.02):
            r = smooth_conditional_h0(j, eps)
            values.append(r.value_bits)
            w = r.smoothing.mass
            assert np.all(w <= j.mass) and np.all(w >= 0)
            assert float(w.sum()) >= 1.0 - eps - 1e-10
            supports = (w > 0).sum(axis=0)
            assert supports.max() == r.max_support
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
