"""Acceptance criteria, one callable per criterion.

Each runner returns (name, passed, detail).  ``run_all`` drives the CLI
``verify`` subcommand and the acceptance test module; tolerances are pinned
here and nowhere else.
"""

from __future__ import annotations

import cmath
import math
import time

import numpy as np

from . import bessel
from .contmult import (ContMultArgs, TruncationPolicy, continuous_multinomial,
                       convolution_identity_check, discrete_multinomial_asymptotic,
                       disctocont_ratio)
from .diagrams import (DiagramSpec, GridSpec, TheorySpec,
                       contribution_length_domain, contribution_position_space,
                       lattice_diagram_count, lattice_diagram_count_joint_dfs)
from .manifold import (QuotientLattice, boundary_decomposition_check,
                       branched_cylinder_generators, kl_running_average,
                       kl_spectrum, MobiusMap, poincare_to_hyperboloid,
                       hyperboloid_to_poincare, quotient_count_paths,
                       quotient_spectrum_by_lifts)
from .mink import (LatticeVec, circle_positions, density_check, generate_axes,
                   star_discrepancy)
from .pathspace import PathConstraints, count_paths, orderings_count, step_solutions
from .propagator import (density_fourier_quadrature, fit_constant, kg_closed_form)
from .spinor import (cosh_factorization_residual, dirac_relation_check,
                     gamma_basis)


def crit_1_path_oracle(tmax: int = 10):
    """Length spectrum from the constrained multinomial sum equals DFS counts."""
    t0 = time.time()
    origin = None
    mismatches = 0
    cases = 0
    for n in (1, 3):
        axes = generate_axes(1, n)
        origin = LatticeVec((0,), 0)
        for t in range(0, tmax + 1):
            for x in range(-t, t + 1):
                target = LatticeVec((x,), t)
                dfs = count_paths(origin, target, axes)
                spec = {}
                for sol in step_solutions(PathConstraints(displacement=target), axes):
                    I = sol.total_length()
                    spec[I] = spec.get(I, 0) + orderings_count(sol)
                cases += 1
                if spec != dfs:
                    mismatches += 1
    elapsed = time.time() - t0
    ok = mismatches == 0 and elapsed < 120.0
    return ("1 path oracle equality (d=1, n in {1,3}, t <= %d)" % tmax, ok,
            f"{cases} cases, {mismatches} mismatches, {elapsed:.1f}s")


def crit_2_pythagorean_density():
    """Quadruple count law at n=2000; discrepancy shrinks from n=500 to 5000."""
    t0 = time.time()
    count, predicted = density_check(2, 2000)
    ratio = count / predicted
    disc_small = star_discrepancy(circle_positions(generate_axes(1, 500)))
    disc_large = star_discrepancy(circle_positions(generate_axes(1, 5000)))
    elapsed = time.time() - t0
    ok = abs(ratio - 1.0) <= 0.10 and disc_large < disc_small and elapsed < 60.0
    return ("2 Pythagorean density and equidistribution", ok,
            f"count {count} / predicted {predicted:.1f} = {ratio:.4f}; "
            f"D*(500) = {disc_small:.4f} > D*(5000) = {disc_large:.4f}; {elapsed:.1f}s")


def crit_3_kg_closed_form():
    """d=1 FT identity to 1e-6; d=3 shape fit within 1% off the lightcone."""
    worst1 = 0.0
    for mt in np.linspace(0.01, 10.0, 80):
        lhs = density_fourier_quadrature(1.0, mt, 1)
        worst1 = max(worst1, abs(lhs - math.pi * bessel.besselj(0, mt)))
    m = 2.0
    taus = np.linspace(0.4, 5.0, 40)
    ft = np.array([density_fourier_quadrature(t, m, 3, normalized=True) for t in taus])
    shape = np.array([kg_closed_form(t, m, 3).real for t in taus])
    alpha = fit_constant(ft, shape).real
    resid = float(np.max(np.abs(ft - alpha * shape)) / np.max(np.abs(ft)))
    ok = worst1 < 1e-6 and resid < 0.01
    return ("3 Klein-Gordon closed forms (d=1 exact, d=3 one-constant fit)", ok,
            f"d=1 max abs err {worst1:.2e}; d=3 fit C = {alpha:.6f}, max rel resid {resid:.2e}")


def crit_4_continuous_multinomial():
    """Symmetry, convolution identity, Gaussian asymptotics, refinement Cauchy."""
    sym = abs(continuous_multinomial(ContMultArgs((1.0, 2.0)))
              - continuous_multinomial(ContMultArgs((2.0, 1.0))))
    conv_err = convolution_identity_check((1.0, 1.0, 1.0))
    # Gaussian form at Sum x = 40: discrete theorem and continuous ratio form
    disc_ratio = math.comb(40, 20) / discrete_multinomial_asymptotic((20, 20))
    pol = TruncationPolicy(max_word_length=200)
    f_bal = continuous_multinomial(ContMultArgs((20.0, 20.0)), pol)
    delta = 4.0
    f_off = continuous_multinomial(ContMultArgs((20.0 + delta, 20.0 - delta)), pol)
    gauss = math.exp(-(2.0 / 80.0) * 2.0 * delta * delta)
    cont_ratio_err = abs(f_off / f_bal - gauss) / gauss
    r80, _ = disctocont_ratio((1.0, 2.0), 80)
    r40, _ = disctocont_ratio((1.0, 2.0), 40)
    refine = abs(r80 - r40)
    ok = (sym == 0.0 and conv_err < 0.02
          and abs(disc_ratio - 1.0) < 0.02 and cont_ratio_err < 0.02
          and refine < 0.05)
    return ("4 continuous multinomial identities", ok,
            f"symmetry {sym:.1e}; convolution rel err {conv_err:.2e}; "
            f"discrete(20,20) ratio {disc_ratio:.4f}; Gaussian ratio err {cont_ratio_err:.4f}; "
            f"|r80 - r40| = {refine:.2e}")


def crit_5_quotient_orbit(tmax: int = 10):
    """Quotient brute force equals in-cone orbit sum of free spectra, exact."""
    t0 = time.time()
    axes = generate_axes(1, 1)
    mismatches = 0
    cases = 0
    for circ in (2, 3, 4):
        q = QuotientLattice(circ)
        for t in range(0, tmax + 1):
            for x in range(circ):
                for y in range(circ):
                    cases += 1
                    if quotient_count_paths(q, x, y, t, axes) != \
                            quotient_spectrum_by_lifts(q, x, y, t, axes):
                        mismatches += 1
    elapsed = time.time() - t0
    ok = mismatches == 0
    return ("5 quotient = orbit sum (circumference 2,3,4; t <= %d)" % tmax, ok,
            f"{cases} cases, {mismatches} mismatches, {elapsed:.1f}s")


def crit_6_branched_cylinder():
    """Deck-map fixed points, composition closure, hyperboloid round trip."""
    d1 = branched_cylinder_generators()[0]
    fix = cmath.exp(1j * (math.pi / 2 + 2 * math.pi / 3))
    err_fix = abs(d1.apply(fix) - fix)
    err_map = abs(d1.apply(cmath.exp(1j * math.pi / 2))
                  - cmath.exp(1j * (math.pi / 2 + math.pi / 3)))
    gens = branched_cylinder_generators()
    g = MobiusMap.identity()
    for k in range(20):
        g = g.compose(gens[k % 3])
    err_norm = abs(abs(g.a) ** 2 - abs(g.b) ** 2 - 1.0)
    rng = np.random.default_rng(5)
    err_rt = 0.0
    for _ in range(100):
        z = complex(*rng.uniform(-0.65, 0.65, size=2))
        t, x, y = poincare_to_hyperboloid(z)
        err_rt = max(err_rt, abs(hyperboloid_to_poincare(t, x, y) - z),
                     abs(t * t - x * x - y * y - 1.0))
    ok = max(err_fix, err_map, err_norm, err_rt) < 1e-12
    return ("6 three-branched cylinder deck maps and hyperboloid", ok,
            f"fix {err_fix:.1e}, map {err_map:.1e}, 20-fold norm {err_norm:.1e}, "
            f"round trip {err_rt:.1e}")


def crit_7_kallen_lehmann():
    """Periodic peaks at 4 pi k / alpha; irrational-ratio running average decays."""
    alpha = 1.0
    n = 10_000
    taus = [alpha * k for k in range(1, n + 1)]
    step = 0.02
    grid = np.arange(0.05, 45.0, step)
    sd = kl_spectrum(taus, grid)
    peak_errs = []
    for k in (1, 2, 3):
        target = 4 * math.pi * k / alpha
        peak_errs.append(abs(sd.peak_near(target, 2.0) - target))
    m_irr = math.sqrt(2.0) * math.pi
    r100, r10000 = kl_running_average(taus, m_irr, [100, 10_000])
    decay = r10000 / r100
    ok = all(e <= step + 1e-12 for e in peak_errs) and decay < 0.05
    return ("7 Kallen-Lehmann estimator (peaks and Weyl decay)", ok,
            f"peak errors {['%.4f' % e for e in peak_errs]} vs step {step}; "
            f"decay ratio {decay:.4f}")


def crit_8_fermion_relations():
    """FD check of the fermionic density relation, cosh factorization, Clifford."""
    fd_err = dirac_relation_check(d=3, step=1e-4)
    resid = cosh_factorization_residual(2.0, (0.3, -0.4, 0.2), 0.5, 3, pairs=200)
    try:
        for d in (1, 2, 3):
            gamma_basis(d)  # Clifford relations asserted at construction
        clifford = True
    except AssertionError:
        clifford = False
    ok = fd_err < 1e-4 and resid < 1e-9 and clifford
    return ("8 fermion relations (density FD, cosh factorization, Clifford)", ok,
            f"FD max rel err {fd_err:.2e}; 1-corr {resid:.2e}; Clifford exact {clifford}")


def crit_9_diagram_evaluators():
    """Cross-evaluator agreement within 2%; lattice factorization exact."""
    theory = TheorySpec(d=1, m=1.0, couplings={3: 0.5})
    grid = GridSpec(x_min=-2.0, x_max=2.0, t_min=0.5, t_max=2.5,
                    step=0.25, i_step=0.02)
    single = DiagramSpec(externals=((0.0, 0.0), (0.0, 3.0)), vertices=(),
                         edges=((0, 1),))
    tree = DiagramSpec(externals=((0.0, 0.0), (-1.0, 4.0), (1.0, 4.0)),
                       vertices=(3,), edges=((0, 3), (1, 3), (2, 3)))
    loop = DiagramSpec(externals=((0.0, 0.0), (0.0, 4.0)), vertices=(3, 3),
                       edges=((0, 2), (2, 3), (2, 3), (3, 1)))
    loop_grid = GridSpec(x_min=-1.5, x_max=1.5, t_min=0.5, t_max=3.5,
                         step=0.5, i_step=0.04)
    rels = {}
    for name, dg, gr in (("single", single, grid), ("tree", tree, grid),
                         ("loop", loop, loop_grid)):
        a, _ = contribution_position_space(dg, theory, gr)
        b, _ = contribution_length_domain(dg, theory, gr)
        rels[name] = abs(a - b) / abs(a)
    axes = generate_axes(1, 1)
    vertex = DiagramSpec(externals=((0, 0), (0, 6)), vertices=(3,),
                         edges=((0, 2), (0, 2), (2, 1)))
    box = {"x": (-3, 3), "t": (0, 6)}
    tot_fac, spec_fac = lattice_diagram_count(vertex, axes, box)
    tot_dfs, spec_dfs = lattice_diagram_count_joint_dfs(vertex, axes, box)
    exact = tot_fac == tot_dfs and spec_fac == spec_dfs
    ok = all(r < 0.02 for r in rels.values()) and exact
    detail = ", ".join(f"{k} {v:.4f}" for k, v in rels.items())
    return ("9 diagram evaluators (position vs length domain; lattice count)", ok,
            f"rel errs: {detail}; lattice {tot_fac} vs joint DFS {tot_dfs}")


def crit_10_teichmuller(tmax: int = 8):
    """Crossing-count partition and boundary convolution, exact integers."""
    axes = generate_axes(1, 1)
    q = QuotientLattice(3)
    rep = boundary_decomposition_check(q, 1, 2, tmax, axes)
    ok = rep["all_exact"]
    return ("10 Teichmuller boundary decomposition (width-3 strip, t <= %d)" % tmax,
            ok, f"{rep['total_paths']} paths in classes {rep['class_counts']}; "
            f"checks all exact: {ok}")


ALL_CRITERIA = [
    crit_1_path_oracle,
    crit_2_pythagorean_density,
    crit_3_kg_closed_form,
    crit_4_continuous_multinomial,
    crit_5_quotient_orbit,
    crit_6_branched_cylinder,
    crit_7_kallen_lehmann,
    crit_8_fermion_relations,
    crit_9_diagram_evaluators,
    crit_10_teichmuller,
]

QUICK_CRITERIA = {
    "1 quick": lambda: crit_1_path_oracle(tmax=6),
    "5 quick": lambda: crit_5_quotient_orbit(tmax=6),
    "6 quick": crit_6_branched_cylinder,
    "10 quick": lambda: crit_10_teichmuller(tmax=6),
}


def run_all(quick: bool = False):
    """Run criteria, return (results, all_passed)."""
    results = []
    if quick:
        for name, fn in QUICK_CRITERIA.items():
            label, ok, detail = fn()
            results.append((label, ok, detail))
    else:
        for fn in ALL_CRITERIA:
            results.append(fn())
    return results, all(ok for _, ok, _ in results)
