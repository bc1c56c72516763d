"""Propagators on quotients and hyperbolic orbit sums.

Flat quotients (pacman circles) are exact: the quotient path sum equals the
orbit sum of free-lattice spectra over in-cone lifts.  Hyperbolic manifolds
enter through explicit unit-disk deck transformations, orbit enumeration by
Smirnov words, and proper times on sheet-indexed hyperboloids.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BoundaryPoint, BudgetExceeded, EmptyOrbit
from .mink import AxisSet, LatticeVec
from .pathspace import DEFAULT_NODE_BUDGET
from .propagator import density_fourier


# --- flat quotients ---------------------------------------------------------

@dataclass(frozen=True)
class QuotientLattice:
    """d=1 spatial segment {0..circumference-1} with wrapped (pacman) ends.

    An explicit boundary pairing list is accepted when it encodes the same
    wrap rule; the identified class [0] is the boundary of the quotient.
    """
    circumference: int
    pairing: Optional[tuple] = None

    def __post_init__(self):
        assert self.circumference >= 1
        if self.pairing is not None:
            assert tuple(sorted(self.pairing)) == (0, self.circumference)

    def wrap(self, x: int) -> int:
        return x % self.circumference


def quotient_count_paths(q: QuotientLattice, x: int, y: int, t: int,
                         axes: AxisSet, budget: int = DEFAULT_NODE_BUDGET) -> dict:
    """Brute-force quotient path counts keyed by total length (exact ints)."""
    steps = sorted(axes.members, key=lambda a: a.sort_key())
    counts = {}
    nodes = 0

    def dfs(pos, dt, length):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"over {budget} nodes")
        if dt == 0:
            if pos == q.wrap(y):
                counts[length] = counts.get(length, 0) + 1
            return
        for a in steps:
            if a.step.t > dt:
                continue
            dfs(q.wrap(pos + a.step.x[0]), dt - a.step.t, length + a.length)

    dfs(q.wrap(x), t, 0)
    return counts


def quotient_spectrum_by_lifts(q: QuotientLattice, x: int, y: int, t: int,
                               axes: AxisSet) -> dict:
    """Orbit sum of free-lattice spectra over all in-cone lifts of y."""
    from .pathspace import count_paths
    o = LatticeVec((0,), 0)
    total = {}
    dxs = set()
    base = (q.wrap(y) - q.wrap(x))
    kmax = t // q.circumference + 2
    for k in range(-kmax, kmax + 1):
        dx = base + k * q.circumference
        if abs(dx) <= t:
            dxs.add(dx)
    for dx in sorted(dxs):
        for length, cnt in count_paths(o, LatticeVec((dx,), t), axes).items():
            total[length] = total.get(length, 0) + cnt
    return total


def quotient_propagator_flat(q: QuotientLattice, x: int, y: int, t: int,
                             axes: AxisSet, m: float) -> complex:
    spec = quotient_spectrum_by_lifts(q, x, y, t, axes)
    return sum(c * cmath.exp(1j * m * I) for I, c in spec.items())


# --- Teichmuller-style boundary decomposition (desk scale) ------------------

def _quotient_paths_with_marks(q: QuotientLattice, x: int, y: int, t: int,
                               axes: AxisSet, budget: int):
    """Enumerate quotient paths as (trail, total length).

    A trail is ((pos, step), ...) starting at (x, None); the identified
    boundary class is position 0.
    """
    steps = sorted(axes.members, key=lambda a: a.sort_key())
    out = []
    nodes = 0
    trail = [(q.wrap(x), None)]

    def dfs(pos, tcur, length):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"over {budget} nodes")
        if tcur == t:
            if pos == q.wrap(y):
                out.append((tuple(trail), length))
            return
        for a in steps:
            if tcur + a.step.t > t:
                continue
            trail.append((q.wrap(pos + a.step.x[0]), a))
            dfs(q.wrap(pos + a.step.x[0]), tcur + a.step.t, length + a.length)
            trail.pop()

    dfs(q.wrap(x), 0, 0)
    return out


def boundary_decomposition_check(q: QuotientLattice, x: int, y: int, t: int,
                                 axes: AxisSet,
                                 budget: int = DEFAULT_NODE_BUDGET) -> dict:
    """Partition quotient paths by intermediate boundary-visit count.

    Verifies (i) the classes partition the full path set exactly and
    (ii) the M-visit class count equals the convolution of interior-segment
    counts over boundary visit times and intermediate lengths (total length
    constrained), returning the report dict.  Exact integers throughout.
    """
    paths = _quotient_paths_with_marks(q, x, y, t, axes, budget)
    total_by_length = {}
    class_counts = {}
    directions = {}
    for trail, length in paths:
        total_by_length[length] = total_by_length.get(length, 0) + 1
        times = []
        tcur = 0
        for i in range(1, len(trail)):
            tcur += trail[i][1].step.t
            if trail[i][0] == 0 and tcur < t:
                times.append(tcur)
        mcount = len(times)
        class_counts[mcount] = class_counts.get(mcount, 0) + 1
        first = trail[1][1] if len(trail) > 1 else None
        last = trail[-1][1] if len(trail) > 1 else None
        if first is not None:
            key = (first.step.coords(), last.step.coords())
            directions[key] = directions.get(key, 0) + 1

    # interior counts: no intermediate boundary visit, keyed by (x, y, t, I)
    def interior_counts(a, b, dt):
        steps = sorted(axes.members, key=lambda s: s.sort_key())
        res = {}

        def dfs(pos, tcur, length):
            if tcur == dt:
                if pos == q.wrap(b):
                    res[length] = res.get(length, 0) + 1
                return
            for s in steps:
                if tcur + s.step.t > dt:
                    continue
                np_ = q.wrap(pos + s.step.x[0])
                if np_ == 0 and tcur + s.step.t < dt:
                    continue  # interior paths avoid the boundary class
                dfs(np_, tcur + s.step.t, length + s.length)

        dfs(q.wrap(a), 0, 0)
        return res

    # convolution identity for each visit count M >= 1
    def conv_class(mcount):
        # choose visit times 0 < t1 < ... < tM < t, all at boundary pos 0
        out = {}

        def rec(prev_t, prev_pos, left, acc_spec):
            if left == 0:
                seg = interior_counts(prev_pos, y, t - prev_t)
                for L0, c0 in acc_spec.items():
                    for L1, c1 in seg.items():
                        out[L0 + L1] = out.get(L0 + L1, 0) + c0 * c1
                return
            for tv in range(prev_t + 1, t):
                seg = interior_counts(prev_pos, 0, tv - prev_t)
                if not seg:
                    continue
                nxt = {}
                for L0, c0 in acc_spec.items():
                    for L1, c1 in seg.items():
                        nxt[L0 + L1] = nxt.get(L0 + L1, 0) + c0 * c1
                rec(tv, 0, left - 1, nxt)

        rec(0, x, mcount, {0: 1})
        return sum(out.values())

    interior_total = sum(interior_counts(x, y, t).values())
    checks = {
        "partition_exact": sum(class_counts.values()) == len(paths),
        "zero_class_equals_interior": class_counts.get(0, 0) == interior_total,
    }
    conv = {}
    for mcount in sorted(class_counts):
        if mcount == 0:
            continue
        conv[mcount] = conv_class(mcount)
        checks[f"class_{mcount}_matches_convolution"] = \
            conv[mcount] == class_counts[mcount]
    return {
        "total_paths": len(paths),
        "class_counts": class_counts,
        "convolution_counts": conv,
        "direction_classes": {str(k): v for k, v in directions.items()},
        "checks": checks,
        "all_exact": all(checks.values()),
    }


# --- Mobius maps and the hyperboloid ----------------------------------------

@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex

    def __post_init__(self):
        det = abs(self.a) ** 2 - abs(self.b) ** 2
        assert abs(det - 1.0) < 1e-9, f"not unit-disk normalized: {det}"

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.b.conjugate() * z + self.a.conjugate())

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        a = self.a * other.a + self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        det = abs(a) ** 2 - abs(b) ** 2
        r = math.sqrt(abs(det))
        return MobiusMap(a / r, b / r)

    @staticmethod
    def identity() -> "MobiusMap":
        return MobiusMap(1.0 + 0j, 0j)

    @staticmethod
    def rotation(phi: float) -> "MobiusMap":
        return MobiusMap(cmath.exp(0.5j * phi), 0j)


def mobius_apply(g: MobiusMap, z: complex) -> complex:
    assert abs(z) < 1.0
    return g.apply(z)


def mobius_compose(g: MobiusMap, h: MobiusMap) -> MobiusMap:
    return g.compose(h)


_SQRT3 = math.sqrt(3.0)


def branched_cylinder_generators() -> list:
    """Deck transformations of the 3-branched cylinder on the unit disk.

    The first map fixes e^{i(pi/2 + 2pi/3)} and sends e^{i pi/2} to
    e^{i(pi/2 + pi/3)}; the other two are its rotations by e^{-2pi i/3} and
    e^{-4pi i/3}.
    """
    a = complex(-1.0, -1.0 / _SQRT3)
    b = complex(0.5 / _SQRT3, -0.5)
    d1 = MobiusMap(a, b)
    d2 = MobiusMap.rotation(-2.0 * math.pi / 3.0).compose(d1)
    d3 = MobiusMap.rotation(-4.0 * math.pi / 3.0).compose(d1)
    return [d1, d2, d3]


def poincare_to_hyperboloid(z: complex):
    """Unit disk -> {t^2 - x^2 - y^2 = 1}, t >= 1."""
    r2 = abs(z) ** 2
    if r2 >= 1.0:
        raise BoundaryPoint(f"|z| = {math.sqrt(r2)} not inside the disk")
    den = 1.0 - r2
    return ((1.0 + r2) / den, 2.0 * z.real / den, 2.0 * z.imag / den)


def hyperboloid_to_poincare(t: float, x: float, y: float) -> complex:
    assert t >= 1.0 - 1e-12
    return complex(x, y) / (1.0 + t)


@dataclass(frozen=True)
class OrbitSet:
    points: tuple          # hyperboloid (t, x, y) triples
    taus: tuple            # proper times from the base event
    words: tuple           # generator words producing each point
    disk_points: tuple
    sheet_offset: float


def orbit_enumerate(gens: Sequence[MobiusMap], base: complex, max_word: int,
                    dedupe_tol: float = 1e-9,
                    sheet_offset: float = 0.0) -> OrbitSet:
    """Images of the base point under Smirnov words in the generators.

    Words never repeat a generator adjacently (3 * 2^(n-1) words per length
    n); images are deduplicated within tolerance in disk coordinates.  The
    target sheet offset enters the event times: an image z sits at the event
    (offset + sqrt(1 + x^2 + y^2) - 1, x, y) and tau is its Minkowski
    distance from the base event on sheet 0.
    """
    assert abs(base) < 1.0
    found = []  # (z, word)

    def push(z, word):
        for zz, _ in found:
            if abs(zz - z) < dedupe_tol:
                return
        found.append((z, word))

    push(base, ())
    frontier = [(base, (), None)]
    for _ in range(max_word):
        nxt = []
        for z, word, last in frontier:
            for gi, g in enumerate(gens):
                if gi == last:
                    continue
                z2 = g.apply(z)
                nxt.append((z2, word + (gi,), gi))
                push(z2, word + (gi,))
        frontier = nxt
    tb, xb, yb = poincare_to_hyperboloid(base)
    base_event = (tb - 1.0, xb, yb)  # sheet 0: apex height 0
    pts, taus, words, zs = [], [], [], []
    for z, word in found:
        th, xh, yh = poincare_to_hyperboloid(z)
        ev = (sheet_offset + th - 1.0, xh, yh)
        dt = ev[0] - base_event[0]
        dx = ev[1] - base_event[1]
        dy = ev[2] - base_event[2]
        s = dt * dt - dx * dx - dy * dy
        tau = math.sqrt(s) if s >= 0 else -math.sqrt(-s)  # negative marks out-of-cone
        pts.append(ev)
        taus.append(tau)
        words.append(word)
        zs.append(z)
    return OrbitSet(points=tuple(pts), taus=tuple(taus), words=tuple(words),
                    disk_points=tuple(zs), sheet_offset=sheet_offset)


def in_cone_taus(orbit: OrbitSet) -> list:
    return [tau for tau in orbit.taus if tau >= 0.0]


def orbit_sum_propagator(orbit: OrbitSet, m: float, d: int = 2) -> complex:
    """Average of free propagators over the in-cone lifts.

    Free value per lift: closed-form Fourier transform of the radial length
    density at proper time tau (density_fourier).
    """
    taus = in_cone_taus(orbit)
    if not taus:
        raise EmptyOrbit("no lift inside the light cone")
    total = sum(density_fourier(tau, m, d) for tau in taus if tau > 0)
    total += sum(1 for tau in taus if tau == 0) * 0.0
    return complex(total) / len(taus)


# --- Kallen-Lehmann estimator ------------------------------------------------

@dataclass(frozen=True)
class SpectralDensity:
    grid: np.ndarray
    values: np.ndarray
    normalization: str

    def peak_near(self, center: float, halfwidth: float) -> float:
        lo = np.searchsorted(self.grid, center - halfwidth)
        hi = np.searchsorted(self.grid, center + halfwidth)
        if hi <= lo:
            raise ValueError("window off the grid")
        idx = lo + int(np.argmax(np.abs(self.values[lo:hi])))
        return float(self.grid[idx])


def kl_spectrum(taus: Sequence[float], m_grid: Sequence[float],
                mode: str = "1/N") -> SpectralDensity:
    """rho(m) = (1/N or 1/sqrt(N)) sum_i tau_i sinc(tau_i m / 2)."""
    assert mode in ("1/N", "1/sqrtN")
    taus = np.asarray(list(taus), dtype=float)
    assert taus.size > 0
    grid = np.asarray(list(m_grid), dtype=float)
    assert np.all(np.diff(grid) > 0)
    u = 0.5 * np.outer(grid, taus)
    sinc = np.where(u == 0.0, 1.0, np.sin(u) / np.where(u == 0.0, 1.0, u))
    norm = taus.size if mode == "1/N" else math.sqrt(taus.size)
    vals = (sinc * taus[None, :]).sum(axis=1) / norm
    return SpectralDensity(grid=grid, values=vals, normalization=mode)


def kl_running_average(taus: Sequence[float], m: float,
                       checkpoints: Sequence[int]) -> list:
    """|rho_N(m)| under 1/N normalization at the requested prefix sizes N."""
    taus = np.asarray(list(taus), dtype=float)
    u = 0.5 * m * taus
    terms = np.where(u == 0.0, taus, taus * np.sin(u) / np.where(u == 0.0, 1.0, u))
    csum = np.cumsum(terms)
    return [abs(float(csum[n - 1])) / n for n in checkpoints]
