"""Cycle integrals, residues and the numerical period problem.

The homology basis of the torus is ``alpha(t) = i/3 + t`` and
``beta(t) = 1/3 + i t``; both stay at distance >= 1/6 from every puncture.

Writing ``phi1 = wp - c^2 S`` and ``phi2 = i (wp + c^2 S)`` with ``S`` the
lambda-dependent part of ``g^2 wp``, the two nontrivial real periods are

    Re int_alpha phi1 = p_alpha + c^2 A_alpha(lambda),
    Re int_beta  phi2 = p_beta  + c^2 A_beta(lambda),

with ``A`` quadratic in lambda.  Both vanish iff the balance
``A_alpha p_beta - A_beta p_alpha`` vanishes and ``c^2 = -p_alpha / A_alpha``.
The quadratic is reconstructed from numerical integrals at three lambda
samples and validated at a fourth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import W1, W2, W3, lattice_constants, wp, wp_second
from .errors import ContourError, FitDegeneracyError, NonpositiveRadicandError
from .quadrature import circle_mean, segment_integral
from .surfaces import SurfaceFamily, lattice_distance, phi_forms


def _e1():
    return lattice_constants().e1


@dataclass(frozen=True)
class HomologyCycle:
    name: str
    start: complex
    direction: complex

    def __call__(self, t):
        return self.start + self.direction * np.asarray(t)

    @property
    def end(self) -> complex:
        return self.start + self.direction


ALPHA = HomologyCycle("alpha", 1j / 3, 1.0 + 0j)
BETA = HomologyCycle("beta", 1.0 / 3, 1j)
CYCLES = {"alpha": ALPHA, "beta": BETA}

FORMS = ("phi1", "phi2", "phi3", "wp", "wp_shift_half", "wp_shift_ihalf", "wp_shift_w2")

QUADRATURE_TOL = 1e-10
RESIDUE_RADIUS = 0.05
RESIDUE_NODES = 512
FIT_SAMPLES = (0.0, 2.0, 4.0)        # multiples of e1
FIT_VALIDATION = 5.0


def form_function(form: str, family: SurfaceFamily | None = None):
    """Vectorised integrand ``z -> f(z)`` for a named form."""
    if form == "wp":
        return wp
    if form == "wp_shift_half":
        return lambda z: wp(z - W1)
    if form == "wp_shift_ihalf":
        return lambda z: wp(z - W3)
    if form == "wp_shift_w2":
        return lambda z: wp(z - W2)
    if form in ("phi1", "phi2", "phi3"):
        if family is None:
            raise ValueError(f"form {form!r} needs a surface family")
        idx = int(form[-1]) - 1
        return lambda z: phi_forms(z, family).as_array()[..., idx]
    raise ValueError(f"unknown form {form!r}; choose from {FORMS}")


def cycle_integral(form: str, cycle: HomologyCycle | str, family: SurfaceFamily | None = None,
                   lam: float | None = None, c: float | None = None,
                   tol: float = QUADRATURE_TOL) -> complex:
    """``int_cycle form dz`` by adaptive Gauss-Kronrod quadrature."""
    if isinstance(cycle, str):
        cycle = CYCLES[cycle]
    if family is not None and (lam is not None or c is not None):
        if (lam is not None and lam <= 0) or (c is not None and c <= 0):
            raise ValueError("lambda and c must be positive")
        family = family.with_parameters(lam, c)
    f = form_function(form, family)
    return complex(segment_integral(f, cycle.start, cycle.end, tol=tol))


def period_matrix(family: SurfaceFamily, tol: float = QUADRATURE_TOL) -> dict:
    """All six cycle integrals ``{(form, cycle): complex}`` of phi1..phi3."""
    out = {}
    for cyc in (ALPHA, BETA):
        vals = segment_integral(lambda z: phi_forms(z, family).as_array(),
                                cyc.start, cyc.end, tol=tol)
        for j in range(3):
            out[(f"phi{j + 1}", cyc.name)] = complex(vals[j])
    return out


def period_residual(family: SurfaceFamily, lam: float | None = None, c: float | None = None,
                    tol: float = QUADRATURE_TOL) -> float:
    """``max |Re int phi_j|`` over both cycles and j = 1, 2, 3."""
    fam = family.with_parameters(lam, c)
    return max(abs(v.real) for v in period_matrix(fam, tol).values())


def _balance_terms(family: SurfaceFamily, lam: float, tol: float):
    """``(p_alpha, A_alpha, p_beta, A_beta)`` at the given lambda."""
    fam = family.with_parameters(lam, 1.0)
    m = period_matrix(fam, tol)
    pa = cycle_integral("wp", ALPHA, tol=tol).real
    pb = (1j * cycle_integral("wp", BETA, tol=tol)).real
    return pa, m[("phi1", "alpha")].real - pa, pb, m[("phi2", "beta")].real - pb


@dataclass
class LambdaSolution:
    family: str
    roots: list
    coefficients: list              # balance quadratic, highest degree first
    normalized: list                # divided by the leading coefficient
    degenerate: list                # per root: True if lambda = e1
    fit_residual: float
    samples: dict = field(default_factory=dict)

    @property
    def admissible(self) -> list:
        return [r for r, d in zip(self.roots, self.degenerate) if not d and r > 0]

    def to_dict(self) -> dict:
        e1 = _e1()
        return {
            "family": self.family,
            "roots": self.roots,
            "roots_over_e1": [r / e1 for r in self.roots],
            "degenerate": self.degenerate,
            "coefficients": self.coefficients,
            "normalized": self.normalized,
            "fit_residual": self.fit_residual,
        }


def solve_lambda(family: SurfaceFamily, tol: float = QUADRATURE_TOL,
                 fit_tol: float = 1e-8) -> LambdaSolution:
    """Roots of the period-balance quadratic, reconstructed numerically.

    Raises :class:`FitDegeneracyError` if the fourth sample departs from
    the fitted quadratic by more than ``fit_tol`` relative.
    """
    e1 = _e1()
    lams = [k * e1 for k in FIT_SAMPLES]
    vals = []
    for lam in lams:
        pa, aa, pb, ab = _balance_terms(family, lam, tol)
        vals.append(aa * pb - ab * pa)
    coef = np.polyfit(lams, vals, 2)
    lv = FIT_VALIDATION * e1
    pa, aa, pb, ab = _balance_terms(family, lv, tol)
    check = aa * pb - ab * pa
    scale = max(abs(check), max(abs(v) for v in vals))
    resid = abs(np.polyval(coef, lv) - check) / scale
    if resid > fit_tol:
        raise FitDegeneracyError(
            f"cycle integrals are not quadratic in lambda (relative misfit {resid:.2e})")
    roots = np.roots(coef)
    if np.any(np.abs(roots.imag) > 1e-9 * np.abs(roots)):
        real_roots = []
    else:
        real_roots = sorted(float(r) for r in roots.real)
    degenerate = [abs(r - e1) <= 1e-6 * e1 for r in real_roots]
    return LambdaSolution(
        family.name, real_roots, [float(x) for x in coef],
        [float(x / coef[0]) for x in coef], degenerate, float(resid),
        {"lambda": lams + [lv], "balance": vals + [check]})


def solve_c(family: SurfaceFamily, lam: float, tol: float = QUADRATURE_TOL) -> float:
    """Positive ``c`` with ``Re int_alpha phi1 = 0`` at the given lambda."""
    pa, aa, _, _ = _balance_terms(family, lam, tol)
    c2 = -pa / aa
    if not c2 > 0:
        raise NonpositiveRadicandError(f"c^2 = {c2:.6g} is not positive at lambda = {lam:.6g}")
    return math.sqrt(c2)


def closed_form_c(name: str, lam: float) -> float:
    """Scale constant from the hand-derived period formulas.

    vilhena3: valid on the roots of the balance quadratic only.
    weber2: from the closed-form alpha-period of phi1.
    """
    e1 = _e1()
    pi = math.pi
    if name == "vilhena3":
        rad = 6 * pi / (33 * e1 * lam - 26 * e1 * e1)
    elif name == "weber2":
        rad = -4 * pi / ((4 / 3 * e1 * e1 - 3 * e1 * pi) + (4 * pi - 2 * e1) * lam - pi / e1 * lam * lam)
    else:
        raise ValueError(f"no closed-form c for {name!r}")
    if rad <= 0:
        raise NonpositiveRadicandError(f"closed-form radicand {rad:.6g} is not positive")
    return math.sqrt(rad)


def closed_form_periods(name: str, lam: float, c: float) -> tuple[float, float]:
    """Hand-derived ``(int_alpha phi1, int_beta phi2)`` as functions of lambda, c."""
    e1 = _e1()
    pi = math.pi
    if name == "weber2":
        a = -pi - c * c / 4 * ((4 / 3 * e1 ** 2 - 3 * e1 * pi) + (4 * pi - 2 * e1) * lam - pi / e1 * lam ** 2)
        b = -pi - c * c / 4 * ((4 / 3 * e1 ** 2 + 3 * e1 * pi) - (4 * pi + 2 * e1) * lam + pi / e1 * lam ** 2)
        return a, b
    if name == "vilhena3":
        k = c * c / (8 * e1)
        a = -pi - k * ((5 / 3 * e1 ** 3 + 18 * e1 ** 2 * pi + 9 * e1 ** 3)
                       + (-24 * e1 * pi - 12 * e1 ** 2) * lam + (-8 * e1 + 6 * pi) * lam ** 2)
        b = -pi - k * ((5 / 3 * e1 ** 3 - 18 * e1 ** 2 * pi + 9 * e1 ** 3)
                       + (24 * e1 * pi - 12 * e1 ** 2) * lam + (-8 * e1 - 6 * pi) * lam ** 2)
        return a, b
    raise ValueError(f"no closed-form periods for {name!r}")


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------

def residue_at(form: str, puncture: complex, family: SurfaceFamily,
               radius: float = RESIDUE_RADIUS, nodes: int = RESIDUE_NODES) -> complex:
    """``(1 / 2 pi i) contour integral`` of a form around one puncture."""
    if form not in ("phi1", "phi2", "phi3"):
        raise ValueError(f"residues are defined for phi1, phi2, phi3, not {form!r}")
    puncture = complex(puncture)
    if not any(lattice_distance(puncture, p) < 1e-12 for p in family.punctures):
        raise ValueError(f"{puncture} is not a puncture of {family.name}")
    for p in family.punctures:
        for m in (-1, 0, 1):
            for n in (-1, 0, 1):
                q = p + m + 1j * n
                if abs(q - puncture) > 1e-12 and abs(q - puncture) <= radius * 1.5:
                    raise ContourError(f"another pole at {q} lies within the residue contour")
    f = form_function(form, family)
    return complex(circle_mean(f, puncture, radius, nodes))


def closed_form_residue(family: SurfaceFamily, puncture: complex) -> complex:
    """Residue of phi3 from the partial-fraction coefficients.

    Near a half period where ``wp = r`` the term ``wp'/(wp - r)`` has residue
    2; the lattice puncture collects minus the sum of the others.
    """
    d = family.data
    e1 = _e1()
    where = {e1: W1, -e1: W3}
    vals = {where[r]: 4.0 * family.c * b for r, b in d.phi3_residues.items()}
    puncture = complex(puncture)
    for h, v in vals.items():
        if lattice_distance(puncture, h) < 1e-12:
            return complex(v)
    if lattice_distance(puncture, 0j) < 1e-12:
        return complex(-sum(vals.values()))
    return 0j


def published_residues(family: SurfaceFamily) -> dict:
    """phi3 residues as stated for the solved surfaces, via wp''(1/2) and wp''(i/2)."""
    c = family.c
    e1 = _e1()
    d_half = wp_second(W1).real
    d_ihalf = wp_second(W3).real
    if family.name == "vilhena3":
        return {W1: -(c / e1) * d_half, 0j: 0.0, W3: (c / e1) * d_ihalf}
    if family.name == "weber2":
        r = -(c / (2 * e1)) * d_half
        return {W1: r, 0j: -r}
    return {}


def residue_table(family: SurfaceFamily) -> list[dict]:
    rows = []
    for p in family.punctures:
        for form in ("phi1", "phi2", "phi3"):
            r = residue_at(form, p, family)
            rows.append({"form": form, "puncture": _fmt_point(p), "re": r.real, "im": r.imag})
    return rows


def _fmt_point(p: complex) -> str:
    p = complex(p)
    names = {0j: "0", W1: "1/2", W3: "i/2", W2: "(1+i)/2"}
    for k, v in names.items():
        if abs(p - k) < 1e-12:
            return v
    return f"{p.real:g}{p.imag:+g}i"


# ---------------------------------------------------------------------------
# Curvature accounting
# ---------------------------------------------------------------------------

def jorge_meeks_total_curvature(genus: int, end_orders) -> float:
    """``2 pi (2 - 2 genus - N - sum k)`` for N ends of orders ``k``."""
    end_orders = list(end_orders)
    if genus < 0 or any(k < 1 for k in end_orders):
        raise ValueError("genus must be >= 0 and every end order >= 1")
    return 2 * math.pi * (2 - 2 * genus - len(end_orders) - sum(end_orders))


# Catenoid ends have order 1, the Enneper-type end order 3.
END_ORDERS = {
    "vilhena3": [1, 1, 3],
    "weber2": [1, 3],
    "chen-gackstatter": [3],
}


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

@dataclass
class PeriodReport:
    family: str
    lam: float
    c: float
    cycle_integrals: list
    residues: list
    residual_norm: float

    @property
    def residue_sum_phi3(self) -> complex:
        return sum(complex(r["re"], r["im"]) for r in self.residues if r["form"] == "phi3")

    @property
    def max_phi12_residue(self) -> float:
        vals = [abs(complex(r["re"], r["im"])) for r in self.residues if r["form"] != "phi3"]
        return max(vals) if vals else 0.0

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "lambda": self.lam,
            "c": self.c,
            "cycle_integrals": self.cycle_integrals,
            "residues": self.residues,
            "residual_norm": self.residual_norm,
        }


def period_report(family: SurfaceFamily, tol: float = QUADRATURE_TOL) -> PeriodReport:
    m = period_matrix(family, tol)
    ints = [{"form": f, "cycle": cyc, "re": v.real, "im": v.imag} for (f, cyc), v in m.items()]
    residual = max(abs(v.real) for v in m.values())
    return PeriodReport(family.name, family.lam, family.c, ints, residue_table(family), residual)
