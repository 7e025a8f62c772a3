import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wpmin.errors import QuadratureError
from wpmin.quadrature import (
    circle_mean, gauss_kronrod, integrate, path_integral, segment_integral,
)


def test_kronrod_exact_for_polynomials():
    for k in range(0, 22):
        v, _ = gauss_kronrod(lambda x: x**k, 0.0, 1.0)
        assert v == pytest.approx(1 / (k + 1), rel=1e-14)


def test_adaptive_handles_peak():
    f = lambda x: 1 / (1e-4 + (x - 0.3) ** 2)
    exact = (math.atan(0.7 / 1e-2) + math.atan(0.3 / 1e-2)) / 1e-2
    assert integrate(f, 0.0, 1.0, tol=1e-10) == pytest.approx(exact, rel=1e-10)


def test_vector_valued():
    v = integrate(lambda x: np.stack([np.sin(x), np.cos(x)], axis=-1), 0, math.pi)
    assert np.allclose(v, [2.0, 0.0], atol=1e-13)


def test_nonconvergence_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1 / np.abs(x - 0.4), 0.0, 1.0, max_panels=50)


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
@settings(max_examples=50, deadline=None)
def test_entire_function_path_independent(a, b):
    f = lambda z: np.exp(z) * z
    prim = lambda z: np.exp(z) * (z - 1)
    direct = segment_integral(f, a, b)
    bent = path_integral(f, [a, 0.5 * (a + b) + 1j, b])
    exact = prim(b) - prim(a)
    assert abs(direct - exact) <= 1e-9 * max(1, abs(exact))
    assert abs(bent - exact) <= 1e-9 * max(1, abs(exact))


def test_circle_mean_residue():
    assert abs(circle_mean(lambda z: 3 / (z - 0.2) + z**2, 0.2, 0.1) - 3) < 1e-13
    assert abs(circle_mean(lambda z: 1 / (z - 0.2) ** 2, 0.2, 0.1)) < 1e-13
