import numpy as np
import pytest

from wpmin.elliptic import W1, W2, W3
from wpmin.identities import (
    ANTIDERIVATIVE_MARGIN, antiderivative_identities, check_antiderivative,
    check_value_identity, printed_fourth_difference_primitive, run_identity_suite,
    sample_points, value_identities,
)


@pytest.fixture(scope="module")
def suite():
    return {c.id: c for c in run_identity_suite(n=50, seed=0)}


def test_inventory():
    vals = {i.id for i in value_identities()}
    prims = {i.id for i in antiderivative_identities()}
    assert {f"difference_power{k}" for k in range(5)} <= vals
    assert {"differential_equation", "square_from_second_derivative"} <= vals
    assert {f"primitive_difference_power{k}" for k in range(5)} <= prims
    assert {f"primitive_power{k}_over_shift_half" for k in range(4)} <= prims


@pytest.mark.parametrize("ident", value_identities(), ids=lambda i: i.id)
def test_value_identity(ident, suite):
    assert suite[ident.id].max_residual <= ident.tolerance


@pytest.mark.parametrize("ident", antiderivative_identities(), ids=lambda i: i.id)
def test_antiderivative(ident, suite):
    c = suite[ident.id]
    assert c.max_residual <= 1e-6
    assert c.exact_residual <= 1e-9


def test_key_residuals(suite):
    assert suite["differential_equation"].max_residual <= 1e-9
    assert suite["square_from_second_derivative"].max_residual <= 1e-9


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_other_seeds(seed):
    assert all(c.passed for c in run_identity_suite(n=50, seed=seed))


def test_printed_fourth_primitive_is_wrong(suite):
    c = suite["primitive_difference_power3"]
    assert c.note
    assert c.extra["printed_form_residual"] > 1.0
    d = c.to_dict()
    assert "discrepancy" in d and d["pass"]


def test_sample_points_margin():
    z = sample_points(200, 4, ANTIDERIVATIVE_MARGIN)
    for p in (0, W1, W3, W2):
        d = z - p
        d = d - np.round(d.real) - 1j * np.round(d.imag)
        assert np.min(np.abs(d)) >= ANTIDERIVATIVE_MARGIN


def test_a_false_identity_is_caught():
    # negative control for the harness: perturb the right side of one identity
    ident = value_identities()[0]
    bad = type(ident)(ident.id, ident.description, ident.lhs, lambda z: ident.rhs(z) * (1 + 1e-6),
                      ident.tolerance)
    assert not check_value_identity(bad, sample_points(20, 0)).passed
