"""Continuous multinomial coefficients via Smirnov-word series.

For standard basis directions every word of letter type (k_1..k_l)
contributes prod_i x_i^(k_i-1)/(k_i-1)! (a product of simplex volumes), so
the series collapses to a sum over types weighted by the number of Smirnov
words of that type.  General direction sets fall back to Monte Carlo fiber
volumes per word.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import InfeasibleWord, QuadratureFailure, TruncationNotReached


@dataclass(frozen=True)
class SmirnovWord:
    letters: tuple  # values in 1..l, no equal adjacent pair

    def __post_init__(self):
        ls = self.letters
        assert all(a != b for a, b in zip(ls, ls[1:])), "adjacent letters equal"

    def type_counts(self, l: int) -> tuple:
        return tuple(self.letters.count(i) for i in range(1, l + 1))


@dataclass(frozen=True)
class ContMultArgs:
    x: tuple
    directions: Optional[tuple] = None  # default: standard basis

    def __post_init__(self):
        assert len(self.x) >= 2, "need at least two arguments"
        assert all(xi >= 0 for xi in self.x)


@dataclass(frozen=True)
class TruncationPolicy:
    tail_epsilon: float = 1e-10
    max_word_length: int = 60


def smirnov_words(n: int, l: int):
    """All Smirnov words of length n over 1..l, lexicographic order."""
    assert n >= 1 and l >= 2

    def rec(prefix):
        if len(prefix) == n:
            yield SmirnovWord(tuple(prefix))
            return
        for letter in range(1, l + 1):
            if prefix and prefix[-1] == letter:
                continue
            prefix.append(letter)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


@lru_cache(maxsize=None)
def _smirnov_suffix(rem: tuple, last: int) -> int:
    if sum(rem) == 0:
        return 1
    total = 0
    for i, r in enumerate(rem):
        if r and i != last:
            total += _smirnov_suffix(rem[:i] + (r - 1,) + rem[i + 1:], i)
    return total


def smirnov_type_count(counts: Sequence[int]) -> int:
    """Number of Smirnov words with the given letter multiplicities."""
    return _smirnov_suffix(tuple(int(c) for c in counts), -1)


def _basis_volume(xs, counts) -> float:
    v = 1.0
    for x, k in zip(xs, counts):
        if k == 0:
            if x != 0:
                return 0.0
            continue
        v *= x ** (k - 1) / math.factorial(k - 1)
    return v


def path_polytope_volume(q, c: SmirnovWord, directions=None,
                         samples: int = 20000, seed: int = 0,
                         box_scale: float = 1.0):
    """Volume of {lambda >= 0 : sum lambda_k e_{c_k} = q}.

    Basis directions: exact product of simplex volumes.  General directions:
    Monte Carlo over the free coordinates of a deterministic column basis,
    weighted by 1/|det A_B| (the delta-calculus fiber measure); returns
    (estimate, standard_error).
    """
    letters = c.letters
    n = len(letters)
    if directions is None:
        l = max(letters)
        q = tuple(q)
        counts = [0] * l
        for a in letters:
            counts[a - 1] += 1
        if len(q) < l or any(qc > 0 and counts[i] == 0 for i, qc in enumerate(q[:l])) \
                or any(qc > 0 for qc in q[l:]):
            raise InfeasibleWord(f"target {q} needs letters missing from the word")
        return _basis_volume(q[:l], counts)
    dirs = [np.asarray(directions[a - 1], dtype=float) for a in letters]
    A = np.stack(dirs, axis=1)
    q = np.asarray(q, dtype=float)
    # deterministic basic set: greedy independent columns from the end
    basis_cols = []
    for j in range(n - 1, -1, -1):
        trial = basis_cols + [j]
        if np.linalg.matrix_rank(A[:, trial]) == len(trial):
            basis_cols = trial
        if len(basis_cols) == A.shape[0]:
            break
    r = len(basis_cols)
    if np.linalg.matrix_rank(np.column_stack([A, q])) > np.linalg.matrix_rank(A):
        raise InfeasibleWord("target outside the span of the word's directions")
    free_cols = [j for j in range(n) if j not in basis_cols]
    AB = A[:, basis_cols]
    det = abs(np.linalg.det(AB)) if r == A.shape[0] else 1.0
    if not free_cols:
        lam = np.linalg.solve(AB, q)
        return (1.0 / det if np.all(lam >= -1e-12) else 0.0), 0.0
    rng = np.random.default_rng(seed)
    hi = box_scale * float(np.max(np.abs(q)) + 1.0)
    pts = rng.uniform(0.0, hi, size=(samples, len(free_cols)))
    rhs = q[:, None] - A[:, free_cols] @ pts.T
    lam_b = np.linalg.solve(AB, rhs)
    ok = np.all(lam_b >= 0.0, axis=0)
    p = float(np.mean(ok))
    box_vol = hi ** len(free_cols)
    est = box_vol * p / det
    se = box_vol * math.sqrt(max(p * (1 - p), 0.0) / samples) / det
    return est, se


def _types_of_length(n: int, l: int):
    """Compositions of n into l positive parts."""
    for cuts in itertools.combinations(range(1, n), l - 1):
        prev = 0
        parts = []
        for c in cuts:
            parts.append(c - prev)
            prev = c
        parts.append(n - prev)
        yield tuple(parts)


def continuous_multinomial(args: ContMultArgs, pol: TruncationPolicy = TruncationPolicy()) -> float:
    """Smirnov-word series of path polytope volumes, basis directions.

    Returns 0.0 when any argument is zero (degenerate-fiber convention).
    Truncates once a word length contributes less than tail_epsilon of the
    accumulated sum; factorial decay guarantees this is reached quickly.
    """
    return continuous_multinomial_with_info(args, pol)[0]


def continuous_multinomial_with_info(args: ContMultArgs,
                                     pol: TruncationPolicy = TruncationPolicy()):
    """continuous_multinomial plus truncation/sampling diagnostics."""
    xs = tuple(args.x)
    l = len(xs)
    if any(x == 0 for x in xs):
        return 0.0, {"zero_argument": True}
    if args.directions is not None:
        val, se, max_len = _continuous_multinomial_mc(args, pol)
        return val, {"monte_carlo": True, "standard_error": se,
                     "max_word_length_used": max_len}
    total = 0.0
    for n in range(l, pol.max_word_length + 1):
        contrib = 0.0
        for counts in _types_of_length(n, l):
            w = smirnov_type_count(counts)
            if w:
                contrib += w * _basis_volume(xs, counts)
        total += contrib
        if n > l + 1 and contrib < pol.tail_epsilon * total:
            return total, {"monte_carlo": False, "max_word_length_used": n,
                           "last_length_contribution": contrib}
    raise TruncationNotReached(
        f"word length {pol.max_word_length} hit before tail {pol.tail_epsilon}")


def _continuous_multinomial_mc(args: ContMultArgs, pol: TruncationPolicy,
                               samples: int = 4000, seed: int = 0):
    xs = tuple(args.x)
    l = len(xs)
    q = np.zeros(len(args.directions[0]))
    for x, e in zip(xs, args.directions):
        q = q + x * np.asarray(e, dtype=float)
    total = 0.0
    var = 0.0
    cap = min(pol.max_word_length, 14)  # word count is exponential here
    used = 0
    for n in range(1, cap + 1):
        contrib = 0.0
        for k, w in enumerate(smirnov_words(n, l)):
            try:
                est, se = path_polytope_volume(q, w, args.directions,
                                               samples=samples, seed=seed + 31 * k + n)
            except InfeasibleWord:
                continue
            contrib += est
            var += se * se
        total += contrib
        used = n
        if n > 2 and contrib < pol.tail_epsilon * max(total, 1e-300):
            break
    return total, math.sqrt(var), used


def discrete_multinomial_asymptotic(x: Sequence[int]) -> float:
    """l^(S + l/2) / sqrt(2 pi S)^(l-1) * exp(-(l/2S) sum (x_i - mean)^2)."""
    xs = list(x)
    l = len(xs)
    s = sum(xs)
    mean = s / l
    dev = sum((xi - mean) ** 2 for xi in xs)
    return l ** (s + l / 2) / math.sqrt(2 * math.pi * s) ** (l - 1) \
        * math.exp(-(l / (2 * s)) * dev)


def t_cont_apply(grouped: dict, m: float, d: int) -> complex:
    """sum_{n >= d} sum_(r, theta) r * m^(d-n) * exp(i theta / m)."""
    total = 0j
    for n, terms in grouped.items():
        if n < d:
            continue
        for r, theta in terms:
            total += r * m ** (d - n) * complex(math.cos(theta / m), math.sin(theta / m))
    return total


def _tcont_discrete_multinomial(a: Sequence[int], m: int) -> float:
    """T_cont applied to the multinomial C(sum a; a) via its run structure.

    Paths 0 -> a with n maximal segments group as prod C(a_i-1, j_i-1) runs
    arranged in a Smirnov word of type j; weight m^(l-n). Log-space sum.
    """
    a = [int(v) for v in a]
    l = len(a)
    logs = []
    for js in itertools.product(*(range(1, v + 1) for v in a)):
        w = smirnov_type_count(js)
        if not w:
            continue
        n = sum(js)
        lt = math.log(w) + (l - n) * math.log(m)
        for ai, ji in zip(a, js):
            lt += math.lgamma(ai) - math.lgamma(ji) - math.lgamma(ai - ji + 1)
        logs.append(lt)
    if not logs:
        return 0.0
    peak = max(logs)
    return math.exp(peak) * sum(math.exp(v - peak) for v in logs)


def disctocont_ratio(x: Sequence[float], m: int):
    """T_cont-weighted discrete multinomial at [m x] over the balanced one.

    Returns (ratio, diagnostic) where the diagnostic is the same ratio at
    refinement m//2, for convergence monitoring.
    """
    assert m >= 1
    xs = list(x)
    l = len(xs)

    def ratio_at(mm):
        a = [max(1, round(mm * xi)) for xi in xs]
        s = sum(a)
        base, rem = divmod(s, l)
        bal = [base + (1 if i < rem else 0) for i in range(l)]
        return _tcont_discrete_multinomial(a, mm) / _tcont_discrete_multinomial(bal, mm)

    r = ratio_at(m)
    diag = ratio_at(max(1, m // 2))
    return r, diag


# --- merged-mass refinement of the convolution property -------------------

@lru_cache(maxsize=None)
def _single_block(a: int, b: int) -> int:
    """Nonempty Smirnov words over two letters with counts (a, b)."""
    if a < 0 or b < 0 or a + b == 0:
        return 0
    if a == 0 or b == 0:
        return 1 if a + b == 1 else 0
    if a == b:
        return 2
    return 1 if abs(a - b) == 1 else 0


@lru_cache(maxsize=None)
def _blocks(j: int, a: int, b: int) -> int:
    """Ordered j-tuples of nonempty two-letter Smirnov words, totals (a, b)."""
    if j == 0:
        return 1 if a == 0 and b == 0 else 0
    total = 0
    for aa in range(a + 1):
        for bb in range(b + 1):
            s = _single_block(aa, bb)
            if s:
                total += s * _blocks(j - 1, a - aa, b - bb)
    return total


def convolution_identity_check(x: Sequence[float], grid=None,
                               pol: TruncationPolicy = TruncationPolicy()) -> float:
    """Relative error of the merge-refinement identity at x (l >= 3).

    The last two letters merge into one whose mass density enters through its
    Gamma moments G_j (j-block Smirnov refinements); the identity
    {sum x | x} = sum_j A_j(x_1..x_{l-2}) G_j(x_{l-1}, x_l) carries the
    printed dI integral out analytically.  Exact up to series truncation.
    """
    xs = tuple(x)
    l = len(xs)
    assert l >= 3, "identity needs at least three arguments"
    if any(xi == 0 for xi in xs):
        return 0.0
    lhs = continuous_multinomial(ContMultArgs(xs), pol)
    head, tail = xs[:-2], xs[-2:]
    jmax = pol.max_word_length
    kcap = pol.max_word_length

    def merged_coefficient(j):
        # A_j: coefficient of I^(j-1)/(j-1)! in {head..., I}
        lm = l - 1
        total = 0.0
        for n in range(lm, kcap + 1):
            for counts in _types_of_length(n, lm):
                if counts[-1] != j:
                    continue
                w = smirnov_type_count(counts)
                if w:
                    total += w * _basis_volume(head, counts[:-1])
        return total

    rhs = 0.0
    last = 0.0
    for j in range(1, jmax + 1):
        gj = 0.0
        for a in range(1, kcap):
            for b in range(1, kcap - a):
                cnt = _blocks(j, a, b)
                if cnt:
                    gj += cnt * tail[0] ** (a - 1) * tail[1] ** (b - 1) \
                        / (math.factorial(a - 1) * math.factorial(b - 1))
        term = merged_coefficient(j) * gj
        rhs += term
        if j > 2 and term < pol.tail_epsilon * max(rhs, 1e-300) and last < pol.tail_epsilon * max(rhs, 1e-300):
            break
        last = term
    else:
        raise QuadratureFailure("merged-mass series did not converge")
    return abs(lhs - rhs) / abs(lhs)
