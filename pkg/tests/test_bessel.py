import math

import numpy as np
import pytest
from scipy import special

from latticeprop import bessel


@pytest.mark.parametrize("nu", [0, 1])
def test_j_against_scipy(nu):
    zs = np.concatenate([np.linspace(0.01, 11.99, 200), np.linspace(12.0, 40.0, 200)])
    worst = max(abs(bessel.besselj(nu, z) - special.jv(nu, z)) for z in zs)
    assert worst < 5e-9


@pytest.mark.parametrize("nu", [0, 1])
def test_y_against_scipy(nu):
    zs = np.concatenate([np.linspace(0.05, 11.99, 200), np.linspace(12.0, 40.0, 200)])
    worst = max(abs(bessel.bessely(nu, z) - special.yv(nu, z)) for z in zs)
    assert worst < 5e-9


@pytest.mark.parametrize("nu", [0.5, 1.5])
def test_half_integer_orders(nu):
    zs = np.linspace(0.05, 30.0, 150)
    worst = max(abs(bessel.besselj(nu, z) - special.jv(nu, z)) for z in zs)
    assert worst < 1e-12


def test_special_values():
    assert bessel.besselj(0, 0.0) == 1.0
    assert bessel.besselj(1, 0.0) == 0.0


def test_series_asymptotic_crossover():
    """Both evaluations agree through the switchover window."""
    for nu in (0, 1):
        for z in np.linspace(10.5, 13.5, 13):
            s = bessel._j_series(nu, z)
            a = bessel._jy_asymptotic(nu, z)[0]
            assert abs(s - a) < 5e-8


def test_hankel2():
    for nu in (0, 0.5, 1):
        for z in (0.3, 2.0, 9.0, 20.0):
            got = bessel.hankel2(nu, z)
            want = special.hankel2(nu, z)
            assert abs(got - want) < 1e-8


def test_derivative_identities():
    # dJ0/dz = -J1 and dJ1/dz = J0 - J1/z
    for z in (0.7, 3.7, 15.0):
        assert bessel.besselj_derivative(0, z) == pytest.approx(-special.jv(1, z), abs=1e-8)
        assert bessel.besselj_derivative(1, z) == pytest.approx(
            special.jv(0, z) - special.jv(1, z) / z, abs=1e-8)


def test_derivative_matches_finite_difference():
    h = 1e-6
    for nu in (0, 1):
        for z in (1.1, 5.3, 17.0):
            fd = (bessel.hankel2(nu, z + h) - bessel.hankel2(nu, z - h)) / (2 * h)
            assert abs(bessel.hankel2_derivative(nu, z) - fd) < 1e-6
