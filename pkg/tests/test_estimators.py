import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import profile
from glvortex.energy import random_coefficient
from glvortex.estimators import SectorSpectrum, VortexProfileSolver
from glvortex.exceptions import InputError


@pytest.fixture(scope="module")
def solver():
    return VortexProfileSolver(N=7, eps=0.5, n=500).fit()


def test_params_roundtrip():
    est = VortexProfileSolver(N=8, eps=0.3, potential="huber:0.1")
    params = est.get_params()
    assert params == {"N": 8, "eps": 0.3, "potential": "huber:0.1", "n": 2000, "grading": 2.0, "tolerance": 1e-7}
    est.set_params(eps=2.0)
    assert est.eps == 2.0
    assert clone(est).get_params() == est.get_params()
    assert SectorSpectrum(ell_max=4).get_params() == {"ell_max": 4, "weight": "hardy"}


def test_fit_predict(solver):
    assert solver.residual_sup_ <= 1e-7
    assert solver.n_iter_ >= 1
    vals = solver.predict([0.0, 0.5, 1.0])
    assert vals[0] == 0.0 and vals[2] == 1.0
    assert vals[1] == pytest.approx(0.53983628, abs=1e-5)
    assert np.array_equal(solver.predict(np.array([[0.5]])), vals[1:2])
    with pytest.raises(InputError):
        solver.predict([1.5])


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        VortexProfileSolver().predict([0.5])


def test_spectrum_fit_matches_functional(solver):
    from glvortex.spectral import hardy_gap

    spec = SectorSpectrum(ell_max=3).fit(solver)
    scan = hardy_gap(solver.profile_, ell_max=3)
    assert np.array_equal(spec.mu_, np.array(scan.mu))
    assert spec.eigvecs_.shape == (4, 501)


def test_transform_bounded_by_mu():
    prof = profile(7, 0.5)
    spec = SectorSpectrum(ell_max=3).fit(prof)
    rows = np.stack([random_coefficient(prof.mesh, 1, s) for s in range(4)] + [spec.eigvecs_[2]])
    Q = spec.transform(rows)
    assert Q.shape == (5, 4)
    assert np.all(Q >= spec.mu_[None, :] * (1 - 1e-12))
    assert Q[4, 2] == pytest.approx(spec.mu_[2], rel=1e-9)
    # fit_transform from the mixin goes through the same path
    with pytest.raises(InputError):
        spec.transform(np.zeros((1, prof.mesh.n + 1)))
    with pytest.raises(InputError):
        spec.transform(np.ones((1, 10)))


def test_spectrum_rejects_bad_input():
    with pytest.raises(InputError):
        SectorSpectrum(weight="x").fit(profile(7, 0.5))
    with pytest.raises(InputError):
        SectorSpectrum().fit(np.ones(3))
    with pytest.raises(NotFittedError):
        SectorSpectrum().fit(VortexProfileSolver())


def test_harmonic_solver():
    est = VortexProfileSolver(N=3, eps=math.inf, n=200).fit()
    assert est.predict([0.25])[0] == pytest.approx(0.25, abs=1e-12)
