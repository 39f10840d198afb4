import math

import pytest

import gaslie


def test_expressions():
    assert gaslie.simplify("sin(x)^2 + cos(x)^2", variables=["x"]) == "1"
    assert gaslie.differentiate("ln|t|", "t", variables=["t"]) == gaslie.simplify("t^(-1)", variables=["t"])
    assert gaslie.evaluate("a*x + 1", {"x": 2.0, "a": 3.0}, parameters=["a"]) == 7.0
    with pytest.raises(gaslie.EvalError):
        gaslie.evaluate("1/t", {"t": 0.0})


def test_algebra_and_catalog():
    alg = gaslie.verify_algebra()
    assert alg["passed"]
    assert len(gaslie.catalog_ids()) == 28
    cat = gaslie.verify_invariants(["4.77"])
    assert cat["passed"]
    with pytest.raises(gaslie.UnknownEntry):
        gaslie.verify_invariants(["4.99"])


def test_classes_and_solutions():
    cls = gaslie.classify(["4.77", "4.1"])
    assert cls["passed"]
    sol = gaslie.verify_solution(["isochoric-reduced"])
    assert sol["passed"]


def test_trace():
    samples, error = gaslie.trace("isochoric-reduced", {"x0": 0, "y0": 0, "z0": 1}, 0.0, 1.0, step=1e-2)
    assert samples[0] == (0.0, 0.0, 0.0, 1.0)
    assert math.isclose(samples[-1][0], 1.0)
    assert error < 1e-6
