import json
import math

import numpy as np
import pytest

from wpmin import periods as per
from wpmin.elliptic import W1, W2, W3, lattice_constants, wp, wp_second
from wpmin.errors import ContourError, NonpositiveRadicandError
from wpmin.surfaces import make_family, puncture_distance

E1 = lattice_constants().e1
PI = math.pi


@pytest.mark.parametrize("form", ["wp", "wp_shift_half", "wp_shift_ihalf", "wp_shift_w2"])
def test_cycle_integrals_of_wp(form):
    assert abs(per.cycle_integral(form, "alpha") + PI) < 1e-9
    assert abs(per.cycle_integral(form, "beta") - 1j * PI) < 1e-9


def test_cycle_integrals_from_zeta_quasiperiods():
    # oracle: int wp over a period = -(zeta(z + w) - zeta(z)) = -2 zeta(w/2)
    from wpmin.elliptic import zeta_w
    assert abs(per.cycle_integral("wp", "alpha") + 2 * zeta_w(W1)) < 1e-9
    assert abs(per.cycle_integral("wp", "beta") + 2 * zeta_w(W3)) < 1e-9


@pytest.mark.parametrize("name", ["vilhena3", "weber2", "chen-gackstatter"])
def test_cycles_avoid_punctures(name):
    family = make_family(name)
    t = np.linspace(0, 1, 2001)
    for cyc in per.CYCLES.values():
        assert np.min(puncture_distance(cyc(t), family)) >= 1 / 6 - 1e-12


def test_solve_lambda_vilhena3(vilhena3):
    sol = per.solve_lambda(vilhena3)
    assert sol.roots == pytest.approx([E1, 3 * E1], rel=1e-9)
    assert sol.degenerate == [True, False]
    assert sol.admissible == pytest.approx([3 * E1], rel=1e-9)
    assert sol.normalized == pytest.approx([1, -4 * E1, 3 * E1**2], rel=1e-8)
    assert sol.fit_residual < 1e-8


def test_solve_lambda_weber2(weber2):
    sol = per.solve_lambda(weber2)
    assert sol.roots == pytest.approx([E1, 3 * E1], rel=1e-9)


@pytest.mark.parametrize("name,radicand", [("vilhena3", 6 * PI / 73), ("weber2", 6 * PI / 7)])
def test_solve_c(name, radicand):
    c = per.solve_c(make_family(name), 3 * E1)
    assert c == pytest.approx(math.sqrt(radicand) / E1, rel=1e-10)
    assert c == pytest.approx(per.closed_form_c(name, 3 * E1), rel=1e-10)


def test_degenerate_branch_gives_weber2_scale(vilhena3):
    assert per.solve_c(vilhena3, E1) == pytest.approx(math.sqrt(6 * PI / 7) / E1, rel=1e-10)


@pytest.mark.parametrize("name", ["vilhena3", "weber2"])
@pytest.mark.parametrize("k", [2.0, 3.0, 5.0])
def test_closed_form_periods_match_quadrature(name, k):
    family = make_family(name).with_parameters(k * E1, 0.2)
    m = per.period_matrix(family)
    a, b = per.closed_form_periods(name, k * E1, 0.2)
    assert m[("phi1", "alpha")].real == pytest.approx(a, abs=1e-9)
    assert m[("phi2", "beta")].real == pytest.approx(b, abs=1e-9)


def test_period_residual_at_solution(vilhena3, weber2, cg):
    for f in (vilhena3, weber2, cg):
        assert per.period_residual(f) <= 1e-8


@pytest.mark.parametrize("c", [0.05, 1.0, 3.0])
def test_period_residual_off_solution(vilhena3, c):
    assert per.period_residual(vilhena3, 2 * E1, c) > 0.1


def test_nonpositive_radicand():
    with pytest.raises(NonpositiveRadicandError):
        per.closed_form_c("vilhena3", 0.5 * E1)


@pytest.mark.parametrize("name", ["vilhena3", "weber2"])
@pytest.mark.parametrize("k", [1.0, 2.0, 3.0, 5.0])
def test_phi3_periods_have_no_real_part(name, k):
    family = make_family(name).with_parameters(k * E1, 0.3)
    for cyc in ("alpha", "beta"):
        assert abs(per.cycle_integral("phi3", cyc, family).real) < 1e-9


@pytest.mark.parametrize("name", ["vilhena3", "weber2"])
def test_phi3_imaginary_period_is_log_winding(name):
    # int phi3 = 2c [poly(wp) + sum B_r log(wp - r)]; only the logs can change
    # along a closed cycle, by 2 pi i times their winding number
    family = make_family(name)
    t = np.linspace(0, 1, 20001)
    for cyc in per.CYCLES.values():
        pred = 0.0
        for r, b in family.data.phi3_residues.items():
            v = wp(cyc(t)) - r
            wind = np.sum(np.angle(v[1:] / v[:-1])) / (2 * PI)
            pred += 2 * family.c * b * 2 * PI * round(wind)
        assert per.cycle_integral("phi3", cyc, family).imag == pytest.approx(pred, abs=1e-9)


def test_residues_vilhena3(vilhena3):
    c = vilhena3.c
    assert abs(per.residue_at("phi3", W1, vilhena3) + 4 * c * E1) < 1e-8
    assert abs(per.residue_at("phi3", W3, vilhena3) - 4 * c * E1) < 1e-8
    assert abs(per.residue_at("phi3", 0, vilhena3)) < 1e-8


def test_residues_weber2(weber2):
    assert abs(per.residue_at("phi3", W1, weber2) + 2 * weber2.c * E1) < 1e-8
    assert abs(per.residue_at("phi3", 0, weber2) - 2 * weber2.c * E1) < 1e-8


@pytest.mark.parametrize("name", ["vilhena3", "weber2", "chen-gackstatter"])
def test_residue_report_invariants(name):
    rep = per.period_report(make_family(name))
    assert rep.max_phi12_residue <= 1e-8
    assert abs(rep.residue_sum_phi3) <= 1e-8
    family = make_family(name)
    for p, claim in per.published_residues(family).items():
        assert abs(per.residue_at("phi3", p, family) - claim) < 1e-8
        assert abs(per.closed_form_residue(family, p) - claim) < 1e-8


def test_residue_contour_guard(vilhena3):
    with pytest.raises(ContourError):
        per.residue_at("phi3", W1, vilhena3, radius=0.4)
    with pytest.raises(ValueError):
        per.residue_at("phi3", W2, vilhena3)


def test_residue_radius_independent(vilhena3):
    a = per.residue_at("phi3", W1, vilhena3, radius=0.05)
    b = per.residue_at("phi3", W1, vilhena3, radius=0.2)
    assert abs(a - b) < 1e-10


def test_wp_second_at_half_periods():
    assert wp_second(W1).real == pytest.approx(4 * E1**2, rel=1e-9)
    assert wp_second(W3).real == pytest.approx(4 * E1**2, rel=1e-9)


@pytest.mark.parametrize("genus,orders,expected", [
    (1, [1, 1, 3], -16), (1, [1, 3], -12), (0, [1, 1], -4), (1, [3], -8),
])
def test_jorge_meeks(genus, orders, expected):
    assert per.jorge_meeks_total_curvature(genus, orders) == pytest.approx(expected * PI, rel=1e-15)


def test_jorge_meeks_rejects_bad_orders():
    with pytest.raises(ValueError):
        per.jorge_meeks_total_curvature(1, [0, 3])


def test_period_report_json_keys(vilhena3):
    d = json.loads(json.dumps(per.period_report(vilhena3).to_dict()))
    assert set(d) >= {"family", "lambda", "c", "cycle_integrals", "residues", "residual_norm"}
    assert set(d["cycle_integrals"][0]) >= {"form", "cycle", "re", "im"}
    assert set(d["residues"][0]) >= {"puncture", "re", "im"}
