import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from latticeprop import bessel
from latticeprop.errors import NearLightcone
from latticeprop.mink import LatticeVec, generate_axes
from latticeprop.pathspace import count_paths
from latticeprop.propagator import (PropagatorRequest, continuum_density,
                                    continuum_length_density,
                                    continuum_propagator_small,
                                    density_fourier, density_fourier_quadrature,
                                    discrete_propagator, fit_constant,
                                    kg_closed_form, length_spectrum,
                                    signed_length_spectrum)

O = LatticeVec((0,), 0)
AX1 = generate_axes(1, 1)
AX5 = generate_axes(1, 5)


def test_length_spectrum_examples():
    spec = length_spectrum(O, LatticeVec((0,), 2), AX1)
    assert spec.as_dict() == {0: 2, 2: 1}
    assert length_spectrum(O, LatticeVec((2,), 2), AX1).as_dict() == {0: 1}
    assert length_spectrum(O, LatticeVec((3,), 2), AX1).entries == ()


def test_length_spectrum_total_is_unconstrained_count():
    for t in range(0, 8):
        for x in range(-t, t + 1):
            target = LatticeVec((x,), t)
            spec = length_spectrum(O, target, AX1)
            assert spec.total() == sum(count_paths(O, target, AX1).values())


def test_length_spectrum_matches_dfs_exactly():
    for axes in (AX1, AX5):
        for t in range(0, 9):
            for x in range(-t, t + 1):
                target = LatticeVec((x,), t)
                assert length_spectrum(O, target, axes).as_dict() == \
                    count_paths(O, target, axes)


def test_spatial_reflection_symmetry():
    for t in range(0, 9):
        for x in range(0, t + 1):
            a = length_spectrum(O, LatticeVec((x,), t), AX5).as_dict()
            b = length_spectrum(O, LatticeVec((-x,), t), AX5).as_dict()
            assert a == b


def test_discrete_propagator_values():
    target = LatticeVec((0,), 2)
    req0 = PropagatorRequest(d=1, n=1, m=0.0, source=O, target=target)
    assert discrete_propagator(req0, AX1) == 3  # total path count at m=0
    reqpi = PropagatorRequest(d=1, n=1, m=math.pi, source=O, target=target)
    assert discrete_propagator(reqpi, AX1) == pytest.approx(2 + cmath.exp(2j * math.pi))


def test_discrete_propagator_triangle_bound():
    target = LatticeVec((1,), 5)
    spec = length_spectrum(O, target, AX5)
    for m in (0.3, 1.0, 2.7):
        req = PropagatorRequest(d=1, n=5, m=m, source=O, target=target)
        assert abs(discrete_propagator(req, AX5)) <= spec.total() + 1e-12


def test_discrete_propagator_causality():
    req = PropagatorRequest(d=1, n=1, m=1.0, source=O, target=LatticeVec((4,), 2))
    assert discrete_propagator(req, AX1) == 0


def test_feynman_variant_signed_spectrum():
    spec = signed_length_spectrum(O, LatticeVec((0,), 2), AX1)
    # two time steps sign independently; the null zig-zags stay at 0
    assert spec == {2: 1, -2: 1, 0: 4}
    req = PropagatorRequest(d=1, n=1, m=0.5, source=O, target=LatticeVec((0,), 2),
                            variant="feynman")
    want = 4 + 2 * math.cos(1.0)
    assert discrete_propagator(req, AX1) == pytest.approx(want)


def test_continuum_density_profile():
    assert continuum_density((0.0,), 0.0, 2.0, 1) == 1.0
    assert continuum_density((0.0, 0.0), 0.0, 2.0, 2) == 1.0
    assert continuum_density((3.0,), 1.0, 2.0, 1) == 0.0  # outside support
    assert continuum_density((0.0,), 2.0, 2.0, 2) == 1.0  # d=2 boundary indicator
    assert continuum_density((0.0,), 2.0, 2.0, 3) == 0.0
    assert continuum_density((0.0,), 2.0, 2.0, 1) == math.inf  # flagged singularity
    # d=2 is the rect profile
    assert continuum_density((0.6, 0.0), 1.0, 2.0, 2) == 1.0


def test_kg_d1_quadrature_identity():
    worst = 0.0
    for mt in np.linspace(0.01, 10.0, 60):
        lhs = density_fourier_quadrature(1.0, mt, 1)
        worst = max(worst, abs(lhs - math.pi * bessel.besselj(0, mt)))
    assert worst < 1e-6


def test_kg_closed_form_values():
    val = kg_closed_form(2.0, 1.5, 1)
    assert val == pytest.approx(complex(bessel.besselj(0, 3.0), -bessel.bessely(0, 3.0)))
    with pytest.raises(NearLightcone):
        kg_closed_form(1e-12, 1.0, 1)


def test_kg_d3_shape_fit():
    m = 2.0
    taus = np.linspace(0.4, 5.0, 40)
    ft = np.array([density_fourier_quadrature(t, m, 3, normalized=True) for t in taus])
    shape = np.array([kg_closed_form(t, m, 3).real for t in taus])
    alpha = fit_constant(ft, shape).real
    assert alpha == pytest.approx(math.pi / m ** 2, rel=1e-9)
    resid = np.max(np.abs(ft - alpha * shape)) / np.max(np.abs(ft))
    assert resid < 0.01
    # the fit constant is reported, never silently absorbed
    assert not math.isclose(alpha, 1.0)


def test_density_fourier_closed_forms_match_quadrature():
    for d in (1, 2, 3):
        for tau, m in ((1.0, 0.7), (2.5, 1.3), (0.8, 4.0)):
            lhs = density_fourier(tau, m, d)
            rhs = density_fourier_quadrature(tau, m, d)
            assert lhs == pytest.approx(rhs, abs=1e-9)


def test_continuum_length_density_support_and_symmetry():
    assert continuum_length_density(0.0, 4.0, 5.0) == 0.0   # beyond support
    assert continuum_length_density(2.0, 1.0, 0.5) == 0.0   # outside cone
    a = continuum_length_density(1.0, 4.0, 0.7)
    b = continuum_length_density(-1.0, 4.0, 0.7)
    assert a == pytest.approx(b)
    assert a > 0


def test_continuum_propagator_small():
    val, se = continuum_propagator_small(0.0, 3.0, 1.0, n=1)
    assert val != 0
    assert se == 0.0
    # zero outside the light cone
    assert continuum_propagator_small(4.0, 3.0, 1.0)[0] == 0
    # n=1 and n=3 share the d=1 axis set: identical densities
    v3, _ = continuum_propagator_small(0.0, 3.0, 1.0, n=3)
    assert v3 == pytest.approx(val, rel=1e-12)
