import cmath
import math

import numpy as np
import pytest

from latticeprop.errors import DimensionMismatch, NullOrSpacelike, NullStep
from latticeprop.mink import LatticeVec, generate_axes
from latticeprop.pathspace import LatticePath
from latticeprop.propagator import kg_closed_form
from latticeprop.spinor import (FrameVector, GammaBasis, SpinorPair,
                                bosonic_density, cosh_factorization_residual,
                                dirac_closed_form, dirac_relation_check,
                                discrete_fermion_propagator,
                                fermion_density_closed, fermion_path_weight,
                                frame_vector, gamma_basis, rapidity)

O = LatticeVec((0,), 0)
AX5 = generate_axes(1, 5)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_clifford_relations_exact(d):
    g = gamma_basis(d)
    eye = np.eye(g.dim)
    for mu in range(d + 1):
        for nu in range(d + 1):
            anti = g.matrices[mu] @ g.matrices[nu] + g.matrices[nu] @ g.matrices[mu]
            want = 2.0 * eye * (1.0 if mu == nu == 0 else (-1.0 if mu == nu else 0.0))
            assert np.array_equal(anti, want)


def test_gamma_basis_unsupported_dim():
    with pytest.raises(DimensionMismatch):
        gamma_basis(4)


def test_frame_vector_explicit_d1():
    g = gamma_basis(1)  # gamma0 = sx, gamma1 = i sy
    v = np.array([1.0, 0.0], dtype=complex)
    p = SpinorPair(v, v)
    fv = frame_vector(p, g)
    # v+ sx v = 0, v+ (i sy) v = 0, -(v+ v) = -1
    assert fv.components == (0j, 0j, -1 - 0j)
    w = np.array([0.0, 1.0], dtype=complex)
    fv2 = frame_vector(SpinorPair(v, w), g)
    assert fv2.components == (1 + 0j, 1 + 0j, 0j)


def test_frame_vector_linear_in_w():
    g = gamma_basis(1)
    rng = np.random.default_rng(4)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    w = rng.normal(size=2) + 1j * rng.normal(size=2)
    a = frame_vector(SpinorPair(v, w), g).components
    b = frame_vector(SpinorPair(v, 2.5 * w), g).components
    assert all(abs(2.5 * x - y) < 1e-12 for x, y in zip(a, b))


def test_rapidity_examples():
    assert rapidity(LatticeVec((0,), 1), LatticeVec((0,), 4)) == 0.0
    assert rapidity(LatticeVec((0,), 1), LatticeVec((3,), 5)) == \
        pytest.approx(math.acosh(1.25))
    with pytest.raises(NullOrSpacelike):
        rapidity(LatticeVec((1,), 1), LatticeVec((0,), 1))


def test_rapidity_additive_along_ordered_boosts():
    a, b, c = LatticeVec((0,), 1), LatticeVec((3,), 5), LatticeVec((4,), 5)
    assert rapidity(a, c) == pytest.approx(rapidity(a, b) + rapidity(b, c))


def test_fermion_weight_aligned_frame():
    frame = FrameVector((1.0 + 0j, 0j, 0j))
    p = LatticePath((O, LatticeVec((0,), 1), LatticeVec((0,), 2)))
    m = 0.7
    assert fermion_path_weight(p, m, frame) == pytest.approx(cmath.exp(2j * m))


def test_fermion_weight_magnitude_bounded():
    g = gamma_basis(1)
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        frame = frame_vector(SpinorPair(v, w), g)
        path = LatticePath((O, LatticeVec((3,), 5), LatticeVec((3,), 10)))
        try:
            wt = fermion_path_weight(path, 1.3, frame)
        except NullOrSpacelike:
            continue
        assert abs(wt) <= 1.0 + 1e-12


def test_fermion_weight_two_segment_hand_value():
    frame = FrameVector((1.0 + 0j, 0j, 0j))
    path = LatticePath((O, LatticeVec((3,), 5), LatticeVec((3,), 10)))
    m = 1.1
    # steps (3,5) then (0,5), lengths 4 and 5
    eta0 = cmath.acosh(5.0 / 4.0)              # <(1,0,0),(5,3,-4)> / (1*4)
    eta1 = math.acosh((5 * 5 - 3 * 0) / (4.0 * 5.0))
    want = cmath.exp(1j * m * 9) * cmath.exp(-(eta0 + eta1))
    assert fermion_path_weight(path, m, frame) == pytest.approx(want)


def test_fermion_weight_rejects_null_steps():
    frame = FrameVector((1.0 + 0j, 0j, 0j))
    path = LatticePath((O, LatticeVec((1,), 1)))
    with pytest.raises(NullStep):
        fermion_path_weight(path, 1.0, frame)


def test_discrete_fermion_propagator_single_path():
    """(0, 5) with n=5 axes admits only the straight 5-step path."""
    g = gamma_basis(1)
    v = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
    w = np.array([1.0, -0.4j], dtype=complex)
    pair = SpinorPair(v, w)
    frame = frame_vector(pair, g)
    m = 1.2
    got = discrete_fermion_propagator(O, LatticeVec((0,), 5), m, pair, AX5)
    path = LatticePath(tuple(LatticeVec((0,), t) for t in range(6)))
    assert got == pytest.approx(fermion_path_weight(path, m, frame))


def test_discrete_fermion_propagator_two_paths():
    """(1, 10) decomposes as {(4,5), (-3,5)} in both orders."""
    g = gamma_basis(1)
    rng = np.random.default_rng(3)
    pair = SpinorPair(rng.normal(size=2) + 1j * rng.normal(size=2),
                      rng.normal(size=2) + 1j * rng.normal(size=2))
    frame = frame_vector(pair, g)
    m = 0.9
    got = discrete_fermion_propagator(O, LatticeVec((1,), 10), m, pair, AX5)
    s1, s2 = LatticeVec((4,), 5), LatticeVec((-3,), 5)
    want = 0j
    for first, second in ((s1, s2), (s2, s1)):
        path = LatticePath((O, first, first + second))
        want += fermion_path_weight(path, m, frame)
    assert got == pytest.approx(want)
    assert abs(got) <= 2.0


def test_fermion_weights_m0_positive_real_sum():
    """At m=0 with a timelike real frame, the path sum is a positive real."""
    frame = FrameVector((1.0 + 0j, 0j, 0j))
    s1, s2 = LatticeVec((4,), 5), LatticeVec((-3,), 5)
    total = 0j
    for first, second in ((s1, s2), (s2, s1)):
        total += fermion_path_weight(LatticePath((O, first, first + second)), 0.0, frame)
    assert total.imag == pytest.approx(0.0, abs=1e-12)
    assert 0 < total.real <= 2.0


def test_fermion_density_closed_examples():
    g = gamma_basis(3)
    d = 3
    t, I = 2.0, 0.0
    val = fermion_density_closed(t, (0.0, 0.0, 0.0), I, d, g)
    want = 1j * (d - 2) * g.matrices[0] * t * (t * t) ** ((d - 4) / 2)
    assert np.allclose(val, want)
    # antisymmetry of the gamma^1 component under x -> -x
    vp = fermion_density_closed(2.0, (0.4, 0.0, 0.0), 0.3, d, g)
    vm = fermion_density_closed(2.0, (-0.4, 0.0, 0.0), 0.3, d, g)
    comp_p = np.trace(g.matrices[1] @ vp)
    comp_m = np.trace(g.matrices[1] @ vm)
    assert comp_p == pytest.approx(-comp_m)
    # zero outside the support
    assert np.all(fermion_density_closed(1.0, (2.0, 0.0, 0.0), 0.0, d, g) == 0)


def test_dirac_relation_finite_difference():
    assert dirac_relation_check(d=3, step=1e-4) < 1e-4


def test_dirac_relation_linearity():
    g = gamma_basis(3)
    a = fermion_density_closed(2.0, (0.3, -0.2, 0.1), 0.4, 3, g)
    b = fermion_density_closed(2.0, (0.3, -0.2, 0.1), 0.4, 3, g) * 3.0
    assert np.allclose(3.0 * a, b)


def test_cosh_factorization():
    res = cosh_factorization_residual(2.0, (0.3, -0.4, 0.2), 0.5, 3, pairs=200)
    assert res < 1e-9


def test_dirac_closed_form_matches_fd():
    g = gamma_basis(3)
    tau, m, h = 2.0, 1.3, 1e-6
    fd = (kg_closed_form(tau + h, m, 3) - kg_closed_form(tau - h, m, 3)) / (2 * h)
    want = 1j * fd * g.matrices[0] - m * kg_closed_form(tau, m, 3) * np.eye(4)
    got = dirac_closed_form(tau, m, 3)
    assert np.max(np.abs(got - want)) < 1e-6


def test_dirac_closed_form_d1_uses_j0_j1():
    # d=1: f = H0(m tau); dH0 = -H1, so the gamma^0 part is -i m H1
    from latticeprop import bessel
    tau, m = 2.0, 1.1
    got = dirac_closed_form(tau, m, 1)
    g = gamma_basis(1)
    want = -1j * m * bessel.hankel2(1, m * tau) * g.matrices[0] \
        - m * bessel.hankel2(0, m * tau) * np.eye(2)
    assert np.max(np.abs(got - want)) < 1e-9


def test_dirac_closed_form_small_mass_continuous_d3():
    vals = [np.max(np.abs(dirac_closed_form(2.0, m, 3))) for m in (1e-3, 5e-4)]
    assert abs(vals[0] - vals[1]) / vals[0] < 0.05  # finite m -> 0 trend


def test_bosonic_density_support():
    assert bosonic_density(2.0, (0.0, 0.0, 0.0), 0.0, 3) == pytest.approx(4.0 ** 0.5)
    assert bosonic_density(1.0, (2.0, 0.0, 0.0), 0.0, 3) == 0.0


def test_curved_fermion_exploratory():
    from latticeprop.manifold import branched_cylinder_generators, orbit_enumerate
    from latticeprop.spinor import curved_fermion_spectrum_exploratory
    orb = orbit_enumerate(branched_cylinder_generators(), 0j, 2, sheet_offset=10.0)
    val = curved_fermion_spectrum_exploratory(orb, 1.0)
    assert val.imag == 0.0
    # every term is bounded by 2 cosh(eta) * tau
    taus = [t for t in orb.taus if t > 0]
    assert abs(val) <= max(2.72 * 2 * t for t in taus)


def test_dirac_relation_error_grows_near_boundary():
    """The FD check's safe-interior restriction is real: boundary blows up."""
    interior = dirac_relation_check(d=3, grid=[(2.0, (0.3, -0.2, 0.1), 0.4)])
    near = dirac_relation_check(d=3, grid=[(2.0, (0.0, 0.0, 0.0), 1.9995)])
    assert interior < 1e-4 < near
