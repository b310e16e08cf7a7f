import math

import numpy as np
import pytest
from scipy.special import jv, jn_zeros

from glvortex.oracles import bessel_first_zero, bessel_j, dirichlet_lambda1, shoot_profile


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("x", [0.3, 2.0, 7.5])
def test_bessel_series_matches_scipy(nu, x):
    assert bessel_j(nu, x) == pytest.approx(jv(nu, x), rel=1e-12, abs=1e-15)


def test_first_zeros():
    assert bessel_first_zero(0.0) == pytest.approx(jn_zeros(0, 1)[0], rel=1e-13)
    assert bessel_first_zero(1.0) == pytest.approx(jn_zeros(1, 1)[0], rel=1e-13)
    assert dirichlet_lambda1(3) == pytest.approx(math.pi**2, rel=1e-13)


def test_shooting_harmonic_case():
    s = shoot_profile(5, math.inf)
    r = np.linspace(0, 1, 11)
    assert np.max(np.abs(s(r) - r)) < 1e-9
    assert s.slope == pytest.approx(1.0, rel=1e-9)


def test_shooting_profile_monotone():
    s = shoot_profile(8, 0.3, "huber:0.1")
    f = s(np.linspace(0, 1, 201))
    assert np.all(np.diff(f) > 0)
    assert f[-1] == pytest.approx(1.0, abs=1e-9)
