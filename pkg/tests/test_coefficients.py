import numpy as np
import pytest

from ellipticsde import InvalidInputError, parse_sigma
from ellipticsde.coefficients import Coefficient, constant_coefficient, tanh_coefficient


def test_constant_family():
    c = constant_coefficient(0.25)
    y = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(c.fn(y), 0.25)
    np.testing.assert_allclose(c.d1(y), 0.0)
    assert c.sup_bounds == (0.25, 0.0, 0.0)
    assert c.lower_bound == 0.25
    assert constant_coefficient(0.0).lower_bound is None


def test_tanh_family_bounds_are_sharp():
    c = tanh_coefficient(0.05, 0.02)
    y = np.linspace(-50, 50, 100_001)
    assert np.max(np.abs(c.fn(y))) <= c.sup_bounds[0] + 1e-12
    assert np.max(np.abs(c.d1(y))) <= c.sup_bounds[1] + 1e-12
    assert np.max(np.abs(c.d2(y))) <= c.sup_bounds[2] + 1e-12
    # second-derivative bound 4|a1|/(3 sqrt 3) is attained near atanh(1/sqrt 3)
    attained = np.max(np.abs(c.d2(np.linspace(0, 2, 100_000))))
    assert attained == pytest.approx(c.sup_bounds[2], rel=1e-6)
    assert c.lower_bound == pytest.approx(0.03)
    assert tanh_coefficient(0.01, 0.02).lower_bound is None


def test_declared_bounds_are_probed():
    with pytest.raises(InvalidInputError):
        Coefficient(
            fn=lambda y: np.tanh(y),
            d1=lambda y: 1 / np.cosh(y) ** 2,
            d2=lambda y: -2 * np.tanh(y) / np.cosh(y) ** 2,
            sup_bounds=(0.5, 1.0, 1.0),  # sup|tanh| = 1 > 0.5
        )
    with pytest.raises(InvalidInputError):
        Coefficient(
            fn=lambda y: np.tanh(y),
            d1=lambda y: 1 / np.cosh(y) ** 2,
            d2=lambda y: -2 * np.tanh(y) / np.cosh(y) ** 2,
            sup_bounds=(1.0, 1.0, 1.0),
            lower_bound=0.1,  # tanh(0) = 0
        )


def test_smallness_report():
    c = tanh_coefficient(0.05, 0.02)
    rep = c.smallness_report(level=2.0)
    assert rep["threshold"] == pytest.approx(1.0 / 3.0)
    assert rep["holds"] is True
    rep2 = tanh_coefficient(0.5, 0.2).smallness_report(level=2.0)
    assert rep2["holds"] is False
    assert len(rep2["margins"]) == 3


def test_parse_sigma():
    assert parse_sigma("const:0.1").label == "const:0.1"
    c = parse_sigma("tanh:0.05,0.02")
    assert c.lower_bound == pytest.approx(0.03)
    for bad in ("const:", "tanh:1", "gauss:1,2", "const:abc"):
        with pytest.raises(InvalidInputError):
            parse_sigma(bad)
