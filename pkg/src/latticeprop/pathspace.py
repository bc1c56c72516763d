"""Achronal local lattice paths: enumeration, canonical forms, proper times.

The explicit DFS enumerator here is the library's brute-force oracle; the
counting variant (memoized over remaining displacement and length, i.e. a
dynamic program over the same state space) backs the analytic length-spectrum
checks.  Both are deliberately desk-scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import BudgetExceeded, NotGenerated, SpacelikeSegment
from .mink import AxisSet, AxisVector, LatticeVec, minkowski_length, polygonal_metric

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class LatticePath:
    points: tuple

    def __post_init__(self):
        ts = [p.t for p in self.points]
        assert all(b >= a for a, b in zip(ts, ts[1:])), "time must be non-decreasing"

    def steps(self) -> list:
        return [b - a for a, b in zip(self.points, self.points[1:])]

    def __len__(self) -> int:
        return len(self.points) - 1


@dataclass(frozen=True)
class StepMultiset:
    counts: tuple  # ((AxisVector, count), ...) sorted by axis sort key

    @staticmethod
    def from_dict(d) -> "StepMultiset":
        items = tuple(sorted(((a, int(c)) for a, c in d.items() if c),
                             key=lambda it: it[0].sort_key()))
        return StepMultiset(items)

    def total_steps(self) -> int:
        return sum(c for _, c in self.counts)

    def total_length(self) -> int:
        return sum(a.length * c for a, c in self.counts)

    def displacement(self) -> LatticeVec:
        if not self.counts:
            return LatticeVec((), 0)
        d = self.counts[0][0].step.d
        acc = LatticeVec((0,) * d, 0)
        for a, c in self.counts:
            acc = acc + a.step.scale(c)
        return acc


@dataclass(frozen=True)
class PathConstraints:
    displacement: LatticeVec
    total_length: Optional[int] = None


def canonicalize(path: LatticePath, axes: AxisSet) -> LatticePath:
    """Unique representative: every step an axis vector, collinear runs split.

    Raises NotGenerated when a segment direction is not an axis multiple.
    """
    by_dir = {a.step.coords(): a for a in axes.members}
    pts = [path.points[0]]
    for seg in path.steps():
        comps = seg.coords()
        if all(c == 0 for c in comps):
            continue
        g = 0
        for c in comps:
            g = gcd(g, abs(c))
        prim = tuple(c // g for c in comps)
        axis = by_dir.get(prim)
        if axis is None:
            raise NotGenerated(f"segment {comps} not generated by the axis set")
        for _ in range(g):
            pts.append(pts[-1] + axis.step)
    # merge collinear runs is implicit: subdivision points are direction changes
    return LatticePath(tuple(pts))


def proper_time(path: LatticePath, metric: str = "minkowski",
                axes: Optional[AxisSet] = None):
    """Sum of per-segment lengths under the chosen metric."""
    total = 0
    for seg in path.steps():
        if metric == "minkowski":
            try:
                total += minkowski_length(seg)
            except Exception as exc:
                raise SpacelikeSegment(str(exc)) from exc
        elif metric == "polygonal":
            assert axes is not None, "polygonal proper time needs an axis set"
            o = LatticeVec((0,) * seg.d, 0)
            total += polygonal_metric(o, seg, axes)
        else:
            raise ValueError(f"unknown metric {metric!r}")
    return total


def _reachable(dx: tuple, dt: int) -> bool:
    # every axis step satisfies |x_i| <= t componentwise
    return dt >= 0 and all(abs(c) <= dt for c in dx)


def enumerate_paths(x: LatticeVec, y: LatticeVec, axes: AxisSet,
                    I: Optional[int] = None,
                    budget: int = DEFAULT_NODE_BUDGET) -> list:
    """All canonical paths x -> y with steps in the axis set, optionally
    filtered to total polygonal length I.  Deterministic step order."""
    steps = sorted(axes.members, key=lambda a: a.sort_key())
    target = y - x
    out = []
    nodes = 0
    cur = [x]

    def dfs(dx, dt, length):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} DFS nodes")
        if dt == 0:
            if all(c == 0 for c in dx) and (I is None or length == I):
                out.append(LatticePath(tuple(cur)))
            return
        for a in steps:
            ndt = dt - a.step.t
            ndx = tuple(c - s for c, s in zip(dx, a.step.x))
            if not _reachable(ndx, ndt):
                continue
            if I is not None and length + a.length > I:
                continue
            cur.append(cur[-1] + a.step)
            dfs(ndx, ndt, length + a.length)
            cur.pop()

    if not _reachable(target.x, target.t):
        return []
    dfs(target.x, target.t, 0)
    return out


def count_paths(x: LatticeVec, y: LatticeVec, axes: AxisSet) -> dict:
    """Big-integer path counts keyed by total length (memoized DFS / DP)."""
    steps = sorted(axes.members, key=lambda a: a.sort_key())
    target = y - x
    if not _reachable(target.x, target.t):
        return {}
    memo = {}

    def rec(dx, dt):
        key = (dx, dt)
        got = memo.get(key)
        if got is not None:
            return got
        if dt == 0:
            res = {0: 1} if all(c == 0 for c in dx) else {}
            memo[key] = res
            return res
        res = {}
        for a in steps:
            ndt = dt - a.step.t
            ndx = tuple(c - s for c, s in zip(dx, a.step.x))
            if not _reachable(ndx, ndt):
                continue
            for length, cnt in rec(ndx, ndt).items():
                k = length + a.length
                res[k] = res.get(k, 0) + cnt
        memo[key] = res
        return res

    return dict(rec(target.x, target.t))


def step_solutions(c: PathConstraints, axes: AxisSet) -> list:
    """All nonnegative-integer axis multiplicities meeting the displacement
    constraints (every coordinate and, when given, the total length)."""
    steps = sorted(axes.members, key=lambda a: a.sort_key())
    target = c.displacement
    out = []
    counts = {}

    def rec(i, dx, dt, length):
        if dt < 0 or (c.total_length is not None and length > c.total_length):
            return
        if i == len(steps):
            if dt == 0 and all(v == 0 for v in dx) and \
                    (c.total_length is None or length == c.total_length):
                out.append(StepMultiset.from_dict(counts))
            return
        a = steps[i]
        cap = dt // a.step.t
        if c.total_length is not None and a.length > 0:
            cap = min(cap, (c.total_length - length) // a.length)
        for k in range(cap + 1):
            if k:
                counts[a] = k
            rec(i + 1,
                tuple(v - k * s for v, s in zip(dx, a.step.x)),
                dt - k * a.step.t,
                length + k * a.length)
            counts.pop(a, None)

    if _reachable(target.x, target.t):
        rec(0, target.x, target.t, 0)
    return out


def orderings_count(s: StepMultiset) -> int:
    """Multinomial (sum I_a)! / prod I_a! as an exact big integer."""
    total = s.total_steps()
    result = 1
    rem = total
    for _, cnt in s.counts:
        result *= math.comb(rem, cnt)
        rem -= cnt
    return result
