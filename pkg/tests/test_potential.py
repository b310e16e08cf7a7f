import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glvortex.exceptions import InputError, PotentialDomainError
from glvortex.potential import (
    check_admissible,
    custom,
    dW_slope,
    eval_dW,
    eval_W,
    huber,
    load_custom_csv,
    parse_potential,
    quadratic,
)


def test_quadratic_values():
    q = quadratic()
    assert eval_W(q, 0.0) == 0.0
    assert eval_W(q, 1.0) == 0.5
    assert eval_dW(q, 1.0) == 1.0


def test_huber_values():
    h = huber(0.1)
    assert eval_W(h, 0.5) == pytest.approx(0.045, abs=1e-15)
    assert eval_dW(h, 0.05) == pytest.approx(0.05, abs=1e-15)
    assert eval_dW(h, 0.5) == pytest.approx(0.1, abs=1e-15)
    assert eval_dW(h, -2.0) == pytest.approx(-0.1, abs=1e-15)


def test_huber_derivative_continuous_at_kink():
    h = huber(0.1)
    left, right = eval_dW(h, 0.1 - 1e-12), eval_dW(h, 0.1 + 1e-12)
    assert abs(left - right) < 1e-11


@pytest.mark.parametrize("p", [quadratic(), huber(0.1)])
def test_domain_violation(p):
    with pytest.raises(PotentialDomainError):
        eval_W(p, 1.0 + 1e-12)
    with pytest.raises(PotentialDomainError):
        eval_dW(p, np.array([0.0, 1.5]))


def test_vectorized_shapes():
    t = np.linspace(-3, 1, 11)
    assert eval_W(quadratic(), t).shape == t.shape
    assert isinstance(eval_W(quadratic(), 0.3), float)


@pytest.mark.parametrize("p", [quadratic(), huber(0.1)])
def test_builtins_admissible(p):
    rep = check_admissible(p, n_samples=100, seed=1)
    assert rep.passed, rep.as_dict()


def test_negative_custom_fails_positivity():
    t = np.linspace(-1.0, 1.0, 41)
    p = custom(t, -t, -np.ones_like(t))
    rep = check_admissible(p, n_samples=100)
    assert not rep.positive
    assert 0.5 in rep.positivity_violations
    assert not rep.passed


def test_concave_custom_fails_convexity():
    t = np.linspace(-1.0, 1.0, 41)
    p = custom(t, np.abs(t) - t**2 / 4, np.sign(t) - t / 2)
    rep = check_admissible(p, n_samples=50)
    assert not rep.convex
    assert rep.worst_triple is not None


def test_custom_no_extrapolation():
    t = np.linspace(-1.0, 1.0, 5)
    p = custom(t, t**2 / 2, t)
    with pytest.raises(PotentialDomainError):
        eval_W(p, -1.5)


def test_custom_csv_roundtrip(tmp_path):
    t = np.linspace(-3.0, 1.0, 81)
    path = tmp_path / "w.csv"
    rows = ["t,W,dW"] + [f"{a:.17g},{a * a / 2:.17g},{a:.17g}" for a in t]
    path.write_text("\n".join(rows) + "\n")
    p = parse_potential(f"file:{path}")
    assert p.kind == "custom"
    assert eval_W(p, 0.5) == pytest.approx(0.125, abs=2e-4)
    assert check_admissible(p, n_samples=100).passed


def test_custom_csv_bad_header(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("x,y,z\n0,0,0\n")
    with pytest.raises(InputError):
        load_custom_csv(path)


@pytest.mark.parametrize("selector", ["cubic", "huber:abc", "huber:-1"])
def test_bad_selectors(selector):
    with pytest.raises(InputError):
        parse_potential(selector)


@pytest.mark.parametrize("p", [quadratic(), huber(0.1)])
def test_derivative_matches_central_difference(p):
    # away from the Huber kink the centered difference is O(h^2) accurate
    t = np.array([-2.0, -0.5, 0.03, 0.3, 0.9])
    for h in (1e-3, 1e-4):
        fd = (eval_W(p, t + h) - eval_W(p, t - h)) / (2 * h)
        assert np.max(np.abs(fd - eval_dW(p, t))) <= 10 * h**2 + 1e-10


def test_dW_slope_surrogate():
    assert dW_slope(quadratic(), 0.3) == pytest.approx(1.0, abs=1e-9)
    # clamped at the right end of the domain
    assert dW_slope(quadratic(), 1.0) == pytest.approx(1.0, abs=1e-9)
    assert dW_slope(huber(0.1), 0.5) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    delta=st.floats(0.01, 2.0),
    ts=st.lists(st.floats(-3.0, 1.0), min_size=3, max_size=3, unique=True),
)
def test_huber_secant_convexity(delta, ts):
    t1, t2, t3 = sorted(ts)
    if t2 - t1 < 1e-6 or t3 - t2 < 1e-6:
        return
    p = huber(delta)
    W = [eval_W(p, t) for t in (t1, t2, t3)]
    s1 = (W[1] - W[0]) / (t2 - t1)
    s2 = (W[2] - W[1]) / (t3 - t2)
    assert s1 <= s2 + 1e-9


@settings(max_examples=100, deadline=None)
@given(f=st.floats(0.0, 1.0), delta=st.floats(0.01, 2.0))
def test_dW_monotone_on_profile_range(f, delta):
    for p in (quadratic(), huber(delta)):
        assert eval_dW(p, 1.0 - f * f) <= eval_dW(p, 1.0)


def test_custom_csv_bad_row(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("t,W,dW\n0,zero,0\n")
    with pytest.raises(InputError):
        load_custom_csv(path)
