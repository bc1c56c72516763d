import math
from itertools import product

import numpy as np
import pytest

from latticeprop.contmult import (ContMultArgs, SmirnovWord, TruncationPolicy,
                                  continuous_multinomial,
                                  convolution_identity_check,
                                  discrete_multinomial_asymptotic,
                                  disctocont_ratio, path_polytope_volume,
                                  smirnov_type_count, smirnov_words, t_cont_apply)
from latticeprop.errors import InfeasibleWord, TruncationNotReached

# golden value: independent series sum_{|k1-k2|<=1} over adjacency patterns,
# equal to 2 (I0(2) + I1(2))
VALUE_11 = 7.740444313946793


def test_word_counts_small():
    assert sum(1 for _ in smirnov_words(1, 2)) == 2
    assert [w.letters for w in smirnov_words(3, 2)] == [(1, 2, 1), (2, 1, 2)]
    assert sum(1 for _ in smirnov_words(2, 3)) == 6


@pytest.mark.parametrize("n,l", [(n, l) for n in (1, 4, 8, 12) for l in (2, 3, 4)])
def test_word_count_formula(n, l):
    assert sum(1 for _ in smirnov_words(n, l)) == l * (l - 1) ** (n - 1)


def test_type_counts_against_enumeration():
    for counts in [(2, 1), (2, 2), (3, 2, 1), (2, 2, 2), (1, 1, 1, 1)]:
        l = len(counts)
        brute = 0
        n = sum(counts)
        for w in product(range(1, l + 1), repeat=n):
            if any(a == b for a, b in zip(w, w[1:])):
                continue
            if tuple(w.count(i) for i in range(1, l + 1)) == counts:
                brute += 1
        assert smirnov_type_count(counts) == brute


def test_polytope_volume_examples():
    assert path_polytope_volume((1.0, 2.0), SmirnovWord((1, 2))) == 1.0
    assert path_polytope_volume((3.0, 2.0), SmirnovWord((1, 2, 1))) == 3.0
    assert path_polytope_volume((2.0, 3.0), SmirnovWord((1, 2, 1, 2))) == 6.0
    with pytest.raises(InfeasibleWord):
        path_polytope_volume((1.0, 1.0, 1.0), SmirnovWord((1, 2, 1)))


def test_polytope_volume_monte_carlo_matches_closed_form():
    basis = ((1.0, 0.0), (0.0, 1.0))
    for word, q, want in [(SmirnovWord((1, 2, 1)), (3.0, 2.0), 3.0),
                          (SmirnovWord((1, 2, 1, 2)), (2.0, 3.0), 6.0)]:
        est, se = path_polytope_volume(q, word, basis, samples=60000, seed=7)
        assert se > 0
        assert abs(est - want) < 3 * se + 1e-9


def test_continuous_multinomial_golden_and_symmetry():
    val = continuous_multinomial(ContMultArgs((1.0, 1.0)))
    assert val == pytest.approx(VALUE_11, rel=1e-9)
    a = continuous_multinomial(ContMultArgs((1.0, 2.0)))
    b = continuous_multinomial(ContMultArgs((2.0, 1.0)))
    assert a == b
    perm3 = {continuous_multinomial(ContMultArgs(p))
             for p in ((1.0, 2.0, 3.0), (3.0, 1.0, 2.0), (2.0, 3.0, 1.0))}
    assert max(perm3) - min(perm3) < 1e-9 * max(perm3)


def test_continuous_multinomial_zero_rule():
    assert continuous_multinomial(ContMultArgs((0.0, 1.0))) == 0.0
    assert continuous_multinomial(ContMultArgs((1.0, 0.0, 2.0))) == 0.0


def test_continuous_multinomial_monotone_and_positive():
    grid = [0.5, 1.0, 1.7, 2.5]
    vals = [continuous_multinomial(ContMultArgs((x, 1.3))) for x in grid]
    assert all(v > 0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_truncation_not_reached():
    with pytest.raises(TruncationNotReached):
        continuous_multinomial(ContMultArgs((30.0, 30.0)),
                               TruncationPolicy(max_word_length=20))


def test_gaussian_ratio_form():
    """conttails as a ratio law: {40|20+d,20-d}/{40|20,20} vs the Gaussian."""
    pol = TruncationPolicy(max_word_length=200)
    bal = continuous_multinomial(ContMultArgs((20.0, 20.0)), pol)
    for delta, tol in ((2.0, 0.01), (4.0, 0.02)):
        off = continuous_multinomial(ContMultArgs((20.0 + delta, 20.0 - delta)), pol)
        gauss = math.exp(-(2.0 / 80.0) * 2 * delta * delta)
        assert off / bal == pytest.approx(gauss, rel=tol)


def test_discrete_asymptotic_balanced_and_sqrt_regime():
    assert math.comb(1000, 500) / discrete_multinomial_asymptotic((500, 500)) \
        == pytest.approx(1.0, abs=0.01)
    # deviations of order sqrt(total): the o(1) regime
    assert math.comb(1000, 532) / discrete_multinomial_asymptotic((532, 468)) \
        == pytest.approx(1.0, abs=0.02)
    # balanced arguments: exponential factor is exactly 1
    l, s = 2, 1000
    assert discrete_multinomial_asymptotic((500, 500)) \
        == pytest.approx(l ** (s + 1) / math.sqrt(2 * math.pi * s))


def test_discrete_asymptotic_out_of_regime_documented():
    # proportional imbalance leaves the theorem's o(1) regime: the ratio
    # saturates near 0.89 at (600, 400) and does not tend to 1
    ratio = math.comb(1000, 600) / discrete_multinomial_asymptotic((600, 400))
    assert ratio == pytest.approx(0.891, abs=0.01)


def test_t_cont_apply():
    assert t_cont_apply({2: [(1.0, 0.0)]}, 7.0, 2) == pytest.approx(1.0)
    assert t_cont_apply({3: [(1.0, 0.0)]}, 10.0, 2) == pytest.approx(0.1)
    toy = {2: [(2.0, math.pi)], 3: [(1.0, 0.0)]}
    m = 5.0
    want = 2.0 * complex(math.cos(math.pi / m), math.sin(math.pi / m)) + 1.0 / m
    assert t_cont_apply(toy, m, 2) == pytest.approx(want)


def test_disctocont_balanced_is_one():
    for m in (10, 25):
        r, _ = disctocont_ratio((1.0, 1.0), m)
        assert r == pytest.approx(1.0)


def test_disctocont_refinement_and_limit():
    r40, _ = disctocont_ratio((1.0, 2.0), 40)
    r80, diag = disctocont_ratio((1.0, 2.0), 80)
    assert abs(r80 - r40) < 0.05
    assert diag == pytest.approx(r40, rel=1e-12)
    pol = TruncationPolicy(max_word_length=200)
    cont = continuous_multinomial(ContMultArgs((1.0, 2.0)), pol) \
        / continuous_multinomial(ContMultArgs((1.5, 1.5)), pol)
    assert r80 == pytest.approx(cont, rel=0.05)


def test_convolution_identity():
    assert convolution_identity_check((1.0, 1.0, 1.0)) < 0.02
    assert convolution_identity_check((0.5, 1.0, 1.5)) < 0.02
    assert convolution_identity_check((0.0, 1.0, 1.0)) == 0.0
    with pytest.raises(AssertionError):
        convolution_identity_check((1.0, 1.0))


def test_continuous_multinomial_general_directions_mc():
    from latticeprop.contmult import continuous_multinomial_with_info
    basis = ((1.0, 0.0), (0.0, 1.0))
    val, info = continuous_multinomial_with_info(ContMultArgs((1.0, 1.0), basis))
    assert info["monte_carlo"] and info["standard_error"] > 0
    closed = continuous_multinomial(ContMultArgs((1.0, 1.0)))
    assert abs(val - closed) < 4 * info["standard_error"] + 0.02 * closed
