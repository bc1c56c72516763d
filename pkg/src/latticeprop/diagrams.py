"""Scalar-theory Feynman diagrams as path-volume convolutions.

Two evaluators must agree: position space (product of closed-form edge
propagators, integrated over internal vertex positions) and length domain
(per-edge length densities convolved under the total-length constraint,
Fourier transformed once at the end).  Their equality is the convolution
theorem; the lattice counter realizes the same factorization with exact
integers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DegreeMismatch
from .mink import AxisSet, LatticeVec, polygonal_metric, in_polygonal_cone
from .pathspace import count_paths, enumerate_paths
from .propagator import density_fourier


@dataclass(frozen=True)
class TheorySpec:
    d: int
    m: float
    couplings: dict  # degree -> coefficient

    def __post_init__(self):
        assert all(int(k) >= 3 for k in self.couplings), "vertices need degree >= 3"


@dataclass(frozen=True)
class DiagramSpec:
    externals: tuple   # spacetime points, (x..., t) tuples
    vertices: tuple    # vertex degrees
    edges: tuple       # (i, j) over externals then vertices

    def __post_init__(self):
        n_nodes = len(self.externals) + len(self.vertices)
        for i, j in self.edges:
            assert 0 <= i < n_nodes and 0 <= j < n_nodes
        for vi, degree in enumerate(self.vertices):
            node = len(self.externals) + vi
            incidence = sum((i == node) + (j == node) for i, j in self.edges)
            if incidence != degree:
                raise DegreeMismatch(
                    f"vertex {vi} has incidence {incidence}, degree {degree}")
        if not self._connected():
            raise DegreeMismatch("diagram graph is not connected")

    def _connected(self) -> bool:
        n_nodes = len(self.externals) + len(self.vertices)
        if n_nodes == 0:
            return True
        adj = {k: set() for k in range(n_nodes)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == n_nodes


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    t_min: float
    t_max: float
    step: float
    i_step: float = 0.05
    mc_budget: int = 20000
    seed: int = 0
    shards: int = 1  # MC shards; per-shard seeds, reduction in shard order

    def __post_init__(self):
        assert self.step > 0 and self.i_step > 0 and self.shards >= 1


def diagram_prefactor(diag: DiagramSpec, theory: TheorySpec) -> complex:
    """prod over vertices (i a_degree) * (1/i)^(#edges)."""
    pref = 1.0 + 0j
    for degree in diag.vertices:
        if degree not in theory.couplings:
            raise DegreeMismatch(f"no coupling of degree {degree}")
        pref *= 1j * theory.couplings[degree]
    pref *= (1 / 1j) ** len(diag.edges)
    return pref


def _edge_tau(a, b):
    """(tau, dt) for a forward-timelike edge, else None."""
    dt = b[-1] - a[-1]
    dx2 = sum((p - q) ** 2 for p, q in zip(a[:-1], b[:-1]))
    if dt <= 0 or dt * dt <= dx2:
        return None
    return math.sqrt(dt * dt - dx2), dt


def edge_propagator(a, b, m: float, d: int) -> complex:
    """Closed-form FT of the edge length density, zero off the forward cone."""
    td = _edge_tau(a, b)
    if td is None:
        return 0j
    tau, dt = td
    return complex(density_fourier(tau, m, d) * dt ** (2 - d))


def _undirected_edge_value(pa, pb, m, d):
    # free edges are symmetric in their endpoints: orient forward in time
    v = edge_propagator(pa, pb, m, d)
    if v == 0:
        v = edge_propagator(pb, pa, m, d)
    return v


def _vertex_grid(grid: GridSpec):
    xs = np.arange(grid.x_min, grid.x_max + 0.5 * grid.step, grid.step)
    ts = np.arange(grid.t_min, grid.t_max + 0.5 * grid.step, grid.step)
    return [(float(x), float(t)) for t in ts for x in xs]


def contribution_position_space(diag: DiagramSpec, theory: TheorySpec,
                                grid: GridSpec, method: str = "quadrature"):
    """Prefactor times the vertex-position integral of the edge product.

    method='quadrature' sums the product grid deterministically;
    method='mc' samples vertex positions uniformly over the grid box.
    Returns (value, standard_error).
    """
    assert theory.d == 1, "position-space evaluator is desk-scale d=1"
    pref = diagram_prefactor(diag, theory)
    nv = len(diag.vertices)
    exts = [tuple(map(float, e)) for e in diag.externals]

    def product_at(vpos):
        nodes = exts + list(vpos)
        prod = 1.0 + 0j
        for i, j in diag.edges:
            v = _undirected_edge_value(nodes[i], nodes[j], theory.m, theory.d)
            if v == 0:
                return 0j
            prod *= v
        return prod

    if nv == 0:
        return pref * product_at([]), 0.0
    cell = grid.step ** 2  # (x, t) measure per vertex
    if method == "quadrature":
        pts = _vertex_grid(grid)
        if len(pts) ** nv > 4_000_000:
            raise BudgetExceeded("vertex grid too large")
        total = 0j
        stack = [[]]
        for _ in range(nv):
            stack = [s + [p] for s in stack for p in pts]
        for vpos in stack:
            total += product_at(vpos)
        return pref * total * cell ** nv, 0.0
    vol = ((grid.x_max - grid.x_min) * (grid.t_max - grid.t_min)) ** nv
    samples = []
    per_shard = max(1, grid.mc_budget // grid.shards)
    for shard in range(grid.shards):
        rng = np.random.default_rng((grid.seed, shard))
        for _ in range(per_shard):
            vpos = [(rng.uniform(grid.x_min, grid.x_max),
                     rng.uniform(grid.t_min, grid.t_max)) for _ in range(nv)]
            samples.append(product_at(vpos))
    arr = np.asarray(samples)
    est = pref * vol * complex(arr.mean())
    se = vol * float(np.std(arr) / math.sqrt(len(arr)))
    return est, se


# --- length-domain evaluator -------------------------------------------------

def _edge_density_masses(a, b, d: int, i_step: float):
    """Per-cell masses of the edge length density on a symmetric I-grid.

    d=1 cells integrate the inverse-sqrt profile exactly via the arcsine
    antiderivative; d=2 is the flat profile.  Returns (masses, offset) with
    cell centers at (offset + k) * i_step.
    """
    td = _edge_tau(a, b)
    if td is None:
        return None
    tau, dt = td
    ncell = int(math.ceil(tau / i_step))
    centers = (np.arange(-ncell, ncell + 1)) * i_step
    lo = np.clip(centers - 0.5 * i_step, -tau, tau)
    hi = np.clip(centers + 0.5 * i_step, -tau, tau)
    if d == 1:
        anti = lambda I: dt * np.arcsin(np.clip(I / tau, -1.0, 1.0))
    elif d == 2:
        anti = lambda I: I
    else:
        anti = lambda I: (I * np.sqrt(np.maximum(tau * tau - I * I, 0.0))
                          + tau * tau * np.arcsin(np.clip(I / tau, -1.0, 1.0))) / (2 * dt)
    masses = anti(hi) - anti(lo)
    return masses, -ncell


def contribution_length_domain(diag: DiagramSpec, theory: TheorySpec,
                               grid: GridSpec):
    """Convolve per-edge length densities, then Fourier transform once.

    The total-length delta is realized by grid convolution of per-cell
    masses (linear binning, mass preserving); the final sum applies
    e^{i m I} at cell centers.  Returns (value, standard_error).
    """
    assert theory.d in (1, 2), "length-domain evaluator is desk-scale"
    pref = diagram_prefactor(diag, theory)
    nv = len(diag.vertices)
    exts = [tuple(map(float, e)) for e in diag.externals]
    h = grid.i_step

    def joint_value(vpos) -> complex:
        nodes = exts + list(vpos)
        conv = np.array([1.0])
        offset = 0
        for i, j in diag.edges:
            dm = _edge_density_masses(nodes[i], nodes[j], theory.d, h)
            if dm is None:
                dm = _edge_density_masses(nodes[j], nodes[i], theory.d, h)
            if dm is None:
                return 0j
            masses, off = dm
            conv = np.convolve(conv, masses)
            offset += off
        centers = (np.arange(len(conv)) + offset) * h
        return complex(np.sum(conv * np.exp(1j * theory.m * centers)))

    if nv == 0:
        return pref * joint_value([]), 0.0
    cell = grid.step ** 2
    pts = _vertex_grid(grid)
    if len(pts) ** nv > 4_000_000:
        raise BudgetExceeded("vertex grid too large")
    stack = [[]]
    for _ in range(nv):
        stack = [s + [p] for s in stack for p in pts]
    total = 0j
    for vpos in stack:
        total += joint_value(vpos)
    return pref * total * cell ** nv, 0.0


# --- exact lattice counting --------------------------------------------------

def lattice_diagram_count(diag: DiagramSpec, axes: AxisSet, box: dict,
                          total_length: Optional[int] = None):
    """Exact count of lattice realizations of the diagram.

    Internal vertices range over box['x'] x box['t']; per-edge canonical
    path counts multiply, with an optional total-length constraint summed
    over per-edge splits.  Returns {I: count} when constrained, a single
    integer otherwise.
    """
    exts = [LatticeVec((int(e[0]),), int(e[1])) for e in diag.externals]
    nv = len(diag.vertices)
    xs = range(box["x"][0], box["x"][1] + 1)
    ts = range(box["t"][0], box["t"][1] + 1)
    positions = [LatticeVec((x,), t) for t in ts for x in xs]

    def edge_spectrum(a: LatticeVec, b: LatticeVec) -> dict:
        if b.t < a.t:
            a, b = b, a
        return count_paths(a, b, axes)

    def assignments(k, acc):
        if k == nv:
            yield list(acc)
            return
        for p in positions:
            acc.append(p)
            yield from assignments(k + 1, acc)
            acc.pop()

    total_unconstrained = 0
    total_by_length = {}
    for vpos in assignments(0, []):
        nodes = exts + vpos
        spec = {0: 1}
        ok = True
        for i, j in diag.edges:
            es = edge_spectrum(nodes[i], nodes[j])
            if not es:
                ok = False
                break
            nxt = {}
            for L0, c0 in spec.items():
                for L1, c1 in es.items():
                    nxt[L0 + L1] = nxt.get(L0 + L1, 0) + c0 * c1
            spec = nxt
        if not ok:
            continue
        for L, c in spec.items():
            total_by_length[L] = total_by_length.get(L, 0) + c
        total_unconstrained += sum(spec.values())
    if total_length is not None:
        return {total_length: total_by_length.get(total_length, 0)}
    return total_unconstrained, total_by_length


def lattice_diagram_count_joint_dfs(diag: DiagramSpec, axes: AxisSet, box: dict):
    """Oracle: enumerate explicit path tuples per vertex assignment."""
    exts = [LatticeVec((int(e[0]),), int(e[1])) for e in diag.externals]
    nv = len(diag.vertices)
    xs = range(box["x"][0], box["x"][1] + 1)
    ts = range(box["t"][0], box["t"][1] + 1)
    positions = [LatticeVec((x,), t) for t in ts for x in xs]
    total = 0
    by_length = {}

    def rec_edges(nodes, k, length):
        nonlocal total
        if k == len(diag.edges):
            total += 1
            by_length[length] = by_length.get(length, 0) + 1
            return
        i, j = diag.edges[k]
        a, b = nodes[i], nodes[j]
        if b.t < a.t:
            a, b = b, a
        from .pathspace import proper_time
        for p in enumerate_paths(a, b, axes):
            rec_edges(nodes, k + 1, length + int(proper_time(p)))

    def rec_vertices(k, acc):
        if k == nv:
            rec_edges(exts + acc, 0, 0)
            return
        for p in positions:
            acc.append(p)
            rec_vertices(k + 1, acc)
            acc.pop()

    rec_vertices(0, [])
    return total, by_length


def photon_density(x, y, d: int, axes: Optional[AxisSet] = None):
    """Light-cone density of the spin-1 propagator (Feynman gauge).

    Discrete (axes given): indicator of polygonal-null separation over the
    count of null lattice points at that time slice.  Continuum: surface
    density 1 / Vol(S^(d-1)(dt)) on the cone.
    """
    if axes is not None:
        assert isinstance(x, LatticeVec) and isinstance(y, LatticeVec)
        delta = y - x
        assert delta.t > 0
        if not in_polygonal_cone(x, y, axes):
            return 0.0
        val = polygonal_metric(x, y, axes)
        if val != 0:
            return 0.0
        o = LatticeVec((0,) * delta.d, 0)
        slice_nulls = 0
        rng = range(-delta.t, delta.t + 1)
        import itertools as _it
        for xs in _it.product(*([rng] * delta.d)):
            z = LatticeVec(xs, delta.t)
            if any(c != 0 for c in xs) or delta.t:
                if in_polygonal_cone(o, z, axes) and polygonal_metric(o, z, axes) == 0:
                    slice_nulls += 1
        return 1.0 / slice_nulls
    dt = float(y[-1] - x[-1])
    assert dt > 0
    dx2 = sum((p - q) ** 2 for p, q in zip(x[:-1], y[:-1]))
    on_cone = abs(dt * dt - dx2) < 1e-12
    if not on_cone:
        return 0.0
    if d == 1:
        area = 2.0
    elif d == 2:
        area = 2.0 * math.pi * dt
    elif d == 3:
        area = 4.0 * math.pi * dt * dt
    else:
        area = 2.0 * math.pi ** (d / 2) / math.gamma(d / 2) * dt ** (d - 1)
    return 1.0 / area
