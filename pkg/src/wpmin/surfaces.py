"""Weierstrass data, forms and immersions for the square-torus families.

All three families share the shape::

    g = c (wp + a)(wp + b) / wp',    eta = 2 wp dz.

Because ``wp'**2 = D(wp)`` with ``D(P) = 4 P (P**2 - e1**2)``, every quantity
of interest is a rational function of ``P = wp(z)`` (times ``wp'`` for the
odd ones).  Common roots of ``N = (P + a)(P + b)`` and ``D`` are cancelled
once, per family, which yields

    g = c * Nr(P) wp' / Dr(P),      Dr = P * E(P),   N = Nr * C,  D = Dr * C,

and from it forms, metric and curvature that stay finite at the
non-puncture half periods where the Gauss map has poles (including the
base point ``(1+i)/2``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .elliptic import (
    DEFAULT_CONFIG,
    W1,
    W2,
    W3,
    EvaluationConfig,
    lattice_constants,
    wp,
    wp_and_derivative,
    zeta_w,
)
from .errors import GaussMapPoleError, PathThroughPoleError, PoleProximityError, WpminError
from .quadrature import path_integral

FAMILY_NAMES = ("chen-gackstatter", "weber2", "vilhena3")


class UnknownFamilyError(WpminError, ValueError):
    """Raised for family names outside :data:`FAMILY_NAMES`."""


def _e1():
    return lattice_constants().e1


def published_solution(name: str) -> tuple[float, float]:
    """Closed-form (lambda, c) solving the period problem for a family."""
    e1 = _e1()
    if name == "vilhena3":
        return 3.0 * e1, math.sqrt(6.0 * math.pi / 73.0) / e1
    if name == "weber2":
        return 3.0 * e1, math.sqrt(6.0 * math.pi / 7.0) / e1
    if name == "chen-gackstatter":
        # g = (c/4) wp'/wp with c/4 = sqrt(3 pi / 2) / (2 e1)
        return e1, 4.0 * math.sqrt(1.5 * math.pi) / (2.0 * e1)
    raise UnknownFamilyError(f"unknown family {name!r}; choose from {FAMILY_NAMES}")


@dataclass(frozen=True)
class SurfaceFamily:
    """Weierstrass datum ``g = c (wp + a)(wp + b)/wp'``, ``eta = 2 wp dz``.

    ``punctures`` are representatives in the fundamental square; lattice
    translates are implied.
    """

    name: str
    a: float
    b: float
    c: float
    punctures: tuple = ()
    base_point: complex = W2

    @property
    def lam(self) -> float:
        """Free parameter lambda in the family's own sign convention."""
        if self.name == "vilhena3":
            return self.b
        return -self.b

    def with_parameters(self, lam: float | None = None, c: float | None = None):
        """Copy with a different lambda and/or scale constant."""
        lam = self.lam if lam is None else lam
        b = lam if self.name == "vilhena3" else -lam
        return SurfaceFamily(self.name, self.a, b, self.c if c is None else c,
                             self.punctures, self.base_point)

    @functools.cached_property
    def data(self) -> "_RationalData":
        return _RationalData.build(self.a, self.b)


def make_family(name: str, lam: float | None = None, c: float | None = None) -> SurfaceFamily:
    """Construct a named family, defaulting to its solved parameters."""
    lam0, c0 = published_solution(name)
    lam = lam0 if lam is None else float(lam)
    c = c0 if c is None else float(c)
    e1 = _e1()
    if name == "vilhena3":
        return SurfaceFamily(name, -3.0 * e1, lam, c, (W1, 0j, W3))
    if name == "weber2":
        return SurfaceFamily(name, e1, -lam, c, (W1, 0j))
    return SurfaceFamily(name, e1, -e1, c, (0j,))


def check_family_name(name: str) -> str:
    if name not in FAMILY_NAMES:
        raise UnknownFamilyError(f"unknown family {name!r}; choose from {FAMILY_NAMES}")
    return name


@dataclass(frozen=True)
class _RationalData:
    """Polynomials in P = wp(z) describing one (a, b) pair after cancellation."""

    n_red: Polynomial          # Nr
    common: Polynomial         # C
    e_poly: Polynomial         # E, with Dr = P * E
    p_cancelled: bool          # True if P itself divided out of D (branch point at w2)
    h_poly: Polynomial         # g' = c * H / Dr
    s_num: Polynomial          # g^2 wp = c^2 s_num / E
    t_num: Polynomial          # g eta = 2 c wp' t_num / E
    quotient: Polynomial       # s_num / E = quotient + sum(phi1_residues[r] / (P - r))
    phi1_residues: dict = field(default_factory=dict)
    phi3_quotient: Polynomial = Polynomial([0.0])  # t_num / E, polynomial part
    phi3_residues: dict = field(default_factory=dict)

    @classmethod
    def build(cls, a: float, b: float) -> "_RationalData":
        e1 = _e1()
        P = Polynomial([0.0, 1.0])
        N = (P + a) * (P + b)
        D = 4.0 * P * (P - e1) * (P + e1)
        C = Polynomial([1.0])
        Dr = D
        p_cancelled = False
        scale = max(1.0, abs(a), abs(b), e1) ** 2
        for r in (0.0, e1, -e1):
            if abs(N(r)) <= 1e-12 * scale:
                lin = P - r
                N = _exact_div(N, lin)
                Dr = _exact_div(Dr, lin)
                C = C * lin
                p_cancelled = p_cancelled or r == 0.0
        E = Dr if p_cancelled else _exact_div(Dr, P)
        P2 = 6.0 * P ** 2 - 2.0 * e1 ** 2
        H = N.deriv() * D + N * P2 - N * Dr.deriv() * C

        extra = P if p_cancelled else Polynomial([1.0])
        s_num = N ** 2 * C * extra
        t_num = N * extra
        e_roots = [r for r in (e1, -e1) if _has_root(E, r)]
        quotient = _exact_div(s_num, E)
        res1 = {r: float(s_num(r) / E.deriv()(r)) for r in e_roots}
        q3 = _exact_div(t_num, E)
        res3 = {r: float(t_num(r) / E.deriv()(r)) for r in e_roots}
        return cls(N, C, E, p_cancelled, H, s_num, t_num, quotient, res1, q3, res3)


def _has_root(poly: Polynomial, r: float) -> bool:
    return abs(poly(r)) <= 1e-9 * max(1.0, np.max(np.abs(poly.coef))) * max(1.0, abs(r)) ** poly.degree()


def _exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    q, _ = divmod(num, den)
    return q


# ---------------------------------------------------------------------------
# Point quantities
# ---------------------------------------------------------------------------

def lattice_distance(z, p) -> np.ndarray:
    """Distance from ``z`` to the nearest lattice translate of ``p``."""
    d = np.asarray(z, dtype=complex) - p
    d = d - np.floor(d.real + 0.5) - 1j * np.floor(d.imag + 0.5)
    return np.abs(d)


def puncture_distance(z, family: SurfaceFamily) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not family.punctures:
        return np.full(z.shape, np.inf)
    return np.min([lattice_distance(z, p) for p in family.punctures], axis=0)


def _check_punctures(z, family, radius):
    if family.punctures and np.any(puncture_distance(z, family) < radius):
        raise PoleProximityError(f"point within {radius:g} of a puncture of {family.name}")


def gauss_poles(family: SurfaceFamily) -> list[complex]:
    """Representatives of the poles of g: 0 and the half periods not cancelled."""
    e1 = _e1()
    poles = [0j]
    dr = family.data.e_poly * (Polynomial([1.0]) if family.data.p_cancelled else Polynomial([0.0, 1.0]))
    for h, eh in ((W1, e1), (W3, -e1), (W2, 0.0)):
        if _has_root(dr, eh):
            poles.append(h)
    return poles


def gauss_map(z, family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """Stereographic Gauss map ``g(z)``.

    Raises :class:`GaussMapPoleError` within ``pole_exclusion_radius`` of a
    pole of g; the mesh layer stores ``inf`` there instead.
    """
    for p in gauss_poles(family):
        if np.any(lattice_distance(z, p) < config.pole_exclusion_radius):
            raise GaussMapPoleError(f"g has a pole at {p} (family {family.name})")
    P, dP = wp_and_derivative(z, config)
    d = family.data
    dr = d.e_poly(P) * (1.0 if d.p_cancelled else P)
    return family.c * d.n_red(P) * dP / dr


def gauss_map_derivative(z, family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """``g'(z) = c H(P) / Dr(P)``, analytic (no finite differences)."""
    P = wp(z, config)
    d = family.data
    dr = d.e_poly(P) * (1.0 if d.p_cancelled else P)
    return family.c * d.h_poly(P) / dr


@dataclass(frozen=True)
class FormSample:
    """dz-coefficients of the three Weierstrass 1-forms (scalars or arrays)."""

    phi1: complex
    phi2: complex
    phi3: complex

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.phi1, self.phi2, self.phi3), axis=-1)

    def conformality(self):
        """``phi1**2 + phi2**2 + phi3**2`` (zero for a conformal immersion)."""
        return self.phi1 ** 2 + self.phi2 ** 2 + self.phi3 ** 2

    def scale(self):
        return np.abs(self.phi1) ** 2 + np.abs(self.phi2) ** 2 + np.abs(self.phi3) ** 2


def phi_forms(z, family: SurfaceFamily, method: str = "rational",
              config: EvaluationConfig = DEFAULT_CONFIG) -> FormSample:
    """Evaluate phi1, phi2, phi3 at ``z``.

    method
        ``"product"``  -- literally ``(1 - g^2) eta / 2``, ``i (1 + g^2) eta / 2``,
        ``g eta``; undefined at poles of g.
        ``"rational"`` -- the cancelled rational form in wp (regular at every
        non-puncture point); the default.
        ``"partial"``  -- partial fractions with ``1/(wp -+ e1)`` replaced by
        the half-period-shifted wp, as in the integration formulas.
    """
    _check_punctures(z, family, config.pole_exclusion_radius)
    c = family.c
    d = family.data
    if method == "product":
        g = gauss_map(z, family, config)
        eta = 2.0 * wp(z, config)
        return FormSample(0.5 * (1 - g * g) * eta, 0.5j * (1 + g * g) * eta, g * eta)
    P, dP = wp_and_derivative(z, config)
    if method == "rational":
        s = c * c * d.s_num(P) / d.e_poly(P)
        return FormSample(P - s, 1j * (P + s), 2.0 * c * d.t_num(P) * dP / d.e_poly(P))
    if method == "partial":
        e1 = _e1()
        z = np.asarray(z, dtype=complex)
        inv = {}
        for r in d.phi1_residues:
            if r > 0:   # 1/(wp - e1) = (wp(z - 1/2) - e1) / (2 e1^2)
                inv[r] = (wp(z - W1, config) - e1) / (2 * e1 * e1)
            else:       # 1/(wp + e1) = (wp(z - i/2) + e1) / (2 e1^2)
                inv[r] = (wp(z - W3, config) + e1) / (2 * e1 * e1)
        s = d.quotient(P) + sum(d.phi1_residues[r] * inv[r] for r in inv)
        s = c * c * s
        t = d.phi3_quotient(P) + sum(d.phi3_residues[r] * inv[r] for r in inv)
        return FormSample(P - s, 1j * (P + s), 2.0 * c * dP * t)
    raise ValueError(f"unknown method {method!r}")


def metric_curvature(z, family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """Conformal factor ``(1 + |g|^2)|eta/dz| / 2`` and Gauss curvature K.

    Both are evaluated in cancelled form, so the base point and the other
    non-puncture poles of g are ordinary points.
    """
    _check_punctures(z, family, config.pole_exclusion_radius)
    P = wp(z, config)
    return _metric_from_wp(P, family)


def _metric_from_wp(P, family):
    d = family.data
    c = family.c
    E = np.abs(d.e_poly(P))
    Dr = E if d.p_cancelled else E * np.abs(P)
    bracket = Dr + c * c * np.abs(d.n_red(P)) ** 2 * np.abs(d.common(P))
    if d.p_cancelled:
        lam = np.abs(P) * bracket / E
        K = -4.0 * c * c * np.abs(d.h_poly(P)) ** 2 * E ** 2 / (np.abs(P) ** 2 * bracket ** 4)
    else:
        lam = bracket / E
        K = -4.0 * c * c * np.abs(d.h_poly(P)) ** 2 * E ** 2 / bracket ** 4
    return lam, K


def curvature_density(z, family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """``K dA / (du dv) = -4 |g'|^2 / (1 + |g|^2)^2``; smooth on the whole torus."""
    P = wp(z, config)
    d = family.data
    c = family.c
    Dr = np.abs(d.e_poly(P)) * (1.0 if d.p_cancelled else np.abs(P))
    bracket = Dr + c * c * np.abs(d.n_red(P)) ** 2 * np.abs(d.common(P))
    return -4.0 * c * c * np.abs(d.h_poly(P)) ** 2 / bracket ** 2


def total_curvature_torus(family: SurfaceFamily, n: int = 256) -> float:
    """Integral of K dA over the whole torus, ends included.

    Uses the periodic midpoint rule on a cell-centred n x n grid (no node
    falls on a lattice point or half period); the integrand is smooth and
    doubly periodic, so convergence is spectral.
    """
    u = (np.arange(n) + 0.5) / n
    z = u[None, :] + 1j * u[:, None]
    return float(np.sum(curvature_density(z, family)) / n ** 2)


# ---------------------------------------------------------------------------
# Immersion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImmersionPoint:
    x1: float
    x2: float
    x3: float
    z: complex
    gauss: complex
    conformal_factor: float
    curvature: float

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


def _primitive(z, family: SurfaceFamily, config: EvaluationConfig):
    """Real parts of antiderivatives of phi1, phi2, phi3 (no additive constant)."""
    e1 = _e1()
    d = family.data
    c = family.c
    z = np.asarray(z, dtype=complex)
    P, dP = wp_and_derivative(z, config)
    Z = zeta_w(z, config)
    if d.quotient.degree() > 2:
        raise NotImplementedError("closed form needs a wp-polynomial part of degree <= 2")
    q = np.zeros(3)
    q[: d.quotient.degree() + 1] = d.quotient.coef
    # int wp^2 = wp'/6 + e1^2 z / 3, int wp = -zeta
    integral = q[2] * (dP / 6.0 + e1 * e1 * z / 3.0) - q[1] * Z + q[0] * z
    log3 = 0.0
    for r, coef in d.phi1_residues.items():
        if coef == 0.0:
            continue
        if r > 0:
            integral = integral + coef * (-zeta_w(z - W1, config) / (2 * e1 * e1) - z / (2 * e1))
        else:
            integral = integral + coef * (-zeta_w(z - W3, config) / (2 * e1 * e1) + z / (2 * e1))
    for r, coef in d.phi3_residues.items():
        if coef != 0.0:
            log3 = log3 + coef * np.log(np.abs(P - r))
    f1 = -Z - c * c * integral
    f2 = -1j * Z + 1j * c * c * integral
    f3 = 2.0 * c * (d.phi3_quotient.integ()(P).real + log3)
    return np.stack(np.broadcast_arrays(f1.real, f2.real, f3), axis=-1)


def additive_constants(family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """Constants making the closed form vanish at the base point."""
    return -_primitive(family.base_point, family, config)


def immersion_coordinates(z, family: SurfaceFamily, config: EvaluationConfig = DEFAULT_CONFIG):
    """Vectorised closed-form immersion; returns an array of shape ``z.shape + (3,)``."""
    _check_punctures(z, family, config.pole_exclusion_radius)
    return _primitive(z, family, config) + additive_constants(family, config)


def _point(z, x, family, config):
    lam, K = metric_curvature(z, family, config)
    try:
        g = complex(gauss_map(z, family, config))
    except GaussMapPoleError:
        g = complex(np.inf, 0.0)
    return ImmersionPoint(float(x[0]), float(x[1]), float(x[2]), complex(z), g,
                          float(lam), float(K))


def immersion_closed(z, family: SurfaceFamily,
                     config: EvaluationConfig = DEFAULT_CONFIG) -> ImmersionPoint:
    """Closed-form ``X(z)`` normalised so that ``X(base_point) = 0``."""
    x = immersion_coordinates(complex(z), family, config)
    return _point(z, x, family, config)


def default_path(z, family: SurfaceFamily, clearance: float = DEFAULT_CONFIG.pole_exclusion_radius,
                 detour: complex = 0.013 + 0.017j) -> list[complex]:
    """Two-segment path base -> (Re z + i Im base) -> z, with detours.

    Whenever a segment comes within ``clearance`` of a puncture a vertex
    displaced by ``detour`` from the closest-approach point is inserted.
    """
    base = complex(family.base_point)
    z = complex(z)
    path = [base, complex(z.real, base.imag), z]
    for _ in range(8):
        out = [path[0]]
        changed = False
        for p0, p1 in zip(path[:-1], path[1:]):
            hit = _closest_puncture_on_segment(p0, p1, family)
            if hit is not None and hit[0] < clearance:
                out.append(hit[1] + detour)
                changed = True
            out.append(p1)
        path = out
        if not changed:
            break
    return path


def _closest_puncture_on_segment(p0, p1, family):
    best = None
    seg = p1 - p0
    if seg == 0 or not family.punctures:
        return None
    for p in family.punctures:
        for m in (-1, 0, 1, 2):
            for n in (-1, 0, 1, 2):
                q = p + m + 1j * n
                t = ((q - p0) * seg.conjugate()).real / abs(seg) ** 2
                t = min(1.0, max(0.0, t))
                foot = p0 + t * seg
                dist = abs(q - foot)
                if best is None or dist < best[0]:
                    best = (dist, foot)
    return best


def immersion_numeric(z, family: SurfaceFamily, path=None, tol: float = 1e-9,
                      config: EvaluationConfig = DEFAULT_CONFIG) -> ImmersionPoint:
    """``X(z)`` by adaptive quadrature of Re phi_j along a polyline from the base point."""
    if path is None:
        path = default_path(z, family, config.pole_exclusion_radius)
    path = [complex(p) for p in path]
    if abs(path[0] - family.base_point) > 1e-14 or abs(path[-1] - complex(z)) > 1e-14:
        raise ValueError("path must run from the base point to z")
    for p0, p1 in zip(path[:-1], path[1:]):
        hit = _closest_puncture_on_segment(p0, p1, family)
        if hit is not None and hit[0] < config.pole_exclusion_radius:
            raise PathThroughPoleError(f"segment {p0} -> {p1} passes a puncture")

    def integrand(w):
        return phi_forms(w, family, "rational", config).as_array()

    x = np.real(path_integral(integrand, path, tol=tol))
    return _point(z, x, family, config)


# ---------------------------------------------------------------------------
# Printed closed forms (solved parameters only), for constant comparison
# ---------------------------------------------------------------------------

def published_closed_form(z, name: str, config: EvaluationConfig = DEFAULT_CONFIG) -> np.ndarray:
    """The published solved-surface formulas for X, without their constants.

    Returned so the published additive constants can be compared against
    the ones recomputed from the base-point normalisation.
    """
    e1 = _e1()
    z = np.asarray(z, dtype=complex)
    P, dP = wp_and_derivative(z, config)
    Z = zeta_w(z, config)
    Zh = zeta_w(z - W1, config)
    if name == "vilhena3":
        c = published_solution(name)[1]
        Zi = zeta_w(z - W3, config)
        br = dP / 6 + 16 * e1 * Zi - 16 * e1 * Zh - 146.0 / 3.0 * e1 ** 2 * z
        x3 = (c / 2) * (P.real + 4 * e1 * np.log(np.abs((P + e1) / (P - e1))))
    elif name == "weber2":
        c = published_solution(name)[1]
        br = dP / 6 - 14.0 / 3.0 * e1 ** 2 * z + 4 * e1 * Z - 4 * e1 * Zh
        x3 = (c / 2) * (P.real - 2 * e1 * np.log(np.abs(P - e1)))
    else:
        raise UnknownFamilyError(f"no published closed form for {name!r}")
    x1 = (-Z - c * c / 4 * br).real
    x2 = (-1j * Z + 1j * c * c / 4 * br).real
    return np.stack(np.broadcast_arrays(x1, x2, x3), axis=-1)


def published_additive_constants(name: str) -> np.ndarray:
    """Additive constants as printed alongside the closed forms."""
    e1 = _e1()
    if name == "vilhena3":
        k = 12 * math.pi ** 2 / (73 * e1)
        return np.array([k, k, 0.0])
    if name == "weber2":
        return np.array([3 * math.pi ** 2 / (7 * e1), 0.0, math.sqrt(6 * math.pi / 7) * math.log(e1)])
    raise UnknownFamilyError(f"no published closed form for {name!r}")


def recomputed_additive_constants(name: str) -> np.ndarray:
    """Constants that make the printed formulas vanish at (1+i)/2."""
    return -published_closed_form(W2, name)


# ---------------------------------------------------------------------------
# Symmetry
# ---------------------------------------------------------------------------

A_BETA = np.diag([1.0, -1.0, 1.0])
A_RHO = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])


def beta_map(z):
    """Reflection of the domain in the horizontal line through (1+i)/2."""
    return W2 + np.conj(np.asarray(z, dtype=complex) - W2)


def rho_map(z):
    """Rotation of the domain by pi/2 about (1+i)/2."""
    return W2 + 1j * (np.asarray(z, dtype=complex) - W2)


def gamma_map(z):
    """Reflection of the domain in the vertical line through (1+i)/2."""
    return W2 - np.conj(np.asarray(z, dtype=complex) - W2)


A_GAMMA = np.diag([-1.0, 1.0, 1.0])

# name -> (ambient matrix A, domain map sigma) with X(sigma z) = A X(z)
SYMMETRIES = {
    "beta": (A_BETA, beta_map),
    "rho": (A_RHO, rho_map),
    "gamma": (A_GAMMA, gamma_map),
}

# The two-end surface lacks the quarter turn: its ends at 1/2 and 0 are
# of different type, so only the two reflections survive.
FAMILY_SYMMETRIES = {
    "vilhena3": ("beta", "rho"),
    "chen-gackstatter": ("beta", "rho"),
    "weber2": ("beta", "gamma"),
}


def generate_group(generators, max_order: int = 64) -> list[np.ndarray]:
    """Closure of a set of integer orthogonal matrices under multiplication."""
    ident = np.eye(3)
    elements = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for gen in generators:
                prod = np.rint(gen @ m)
                if not any(np.array_equal(prod, e) for e in elements):
                    elements.append(prod)
                    nxt.append(prod)
                    if len(elements) > max_order:
                        raise ValueError("group does not close within max_order")
        frontier = nxt
    return elements


def group_relations() -> dict:
    """Dihedral relations between the reflection A_beta and the rotatory reflection A_rho."""
    inv = np.linalg.inv(A_RHO)
    return {
        "rho^4 = id": bool(np.allclose(np.linalg.matrix_power(A_RHO, 4), np.eye(3))),
        "rho^2 != id": bool(not np.allclose(np.linalg.matrix_power(A_RHO, 2), np.eye(3))),
        "beta^2 = id": bool(np.allclose(A_BETA @ A_BETA, np.eye(3))),
        "beta rho beta = rho^-1": bool(np.allclose(A_BETA @ A_RHO @ A_BETA, inv)),
        "orthogonal": all(
            np.allclose(m @ m.T, np.eye(3)) for m in generate_group([A_BETA, A_RHO])
        ),
    }


@dataclass
class SymmetryReport:
    generators: tuple
    group_order: int
    expected_order: int
    relations: dict
    deviations: dict
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    @property
    def passed(self) -> bool:
        return (self.group_order == self.expected_order and all(self.relations.values())
                and self.max_deviation <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "group_order": self.group_order,
            "relations": self.relations,
            "deviations": self.deviations,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def symmetry_check(samples, family: SurfaceFamily, tol: float = 1e-7, generators=None,
                   min_distance: float = DEFAULT_CONFIG.pole_exclusion_radius) -> SymmetryReport:
    """Check ``X(sigma z) = A X(z)`` on samples for each generator (A, sigma).

    Defaults to the family's own symmetry generators; the dihedral
    relations are reported when both beta and rho are among them.
    """
    names = tuple(generators or FAMILY_SYMMETRIES.get(family.name, ("beta", "rho")))
    z = np.asarray(samples, dtype=complex).ravel()
    images = {n: SYMMETRIES[n][1](z) for n in names}
    for pts in (z, *images.values()):
        if np.any(puncture_distance(pts, family) < min_distance):
            raise PoleProximityError("symmetry sample (or its image) is near a puncture")
    x = immersion_coordinates(z, family)
    dev = {n: float(np.max(np.abs(immersion_coordinates(images[n], family) - x @ SYMMETRIES[n][0].T)))
           for n in names}
    order = len(generate_group([SYMMETRIES[n][0] for n in names]))
    dihedral = set(names) == {"beta", "rho"}
    return SymmetryReport(names, order, 8 if dihedral else 4,
                          group_relations() if dihedral else {}, dev, tol)


# Domain curves whose images are planar geodesics or straight lines.
GEODESIC_CURVES = {
    "zeta1": (lambda u: u + 0j, (0.0, 0.5), "x2"),
    "zeta2": (lambda u: u + 0j, (0.5, 1.0), "x2"),
    "zeta3": (lambda u: 0.5j + u, (0.0, 1.0), "x2"),
    "zeta4": (lambda u: 1j * u, (0.0, 0.5), "x1"),
    "zeta5": (lambda u: 1j * u, (0.5, 1.0), "x1"),
    "zeta6": (lambda u: 0.5 + 1j * u, (0.0, 1.0), "x1"),
    "zeta7": (lambda u: u + 1j * (1 - u), (0.0, 1.0), "x1+x2,x3"),
    "zeta8": (lambda u: u + 1j * u, (0.0, 1.0), "x1-x2,x3"),
}

# Diagonal lines are fixed by rho-type symmetries only.
FAMILY_CURVES = {
    "weber2": ("zeta1", "zeta2", "zeta3", "zeta4", "zeta5", "zeta6"),
}


def _constraint_residual(x, kind):
    if kind == "x1":
        return np.abs(x[..., 0])
    if kind == "x2":
        return np.abs(x[..., 1])
    if kind == "x1+x2,x3":
        return np.maximum(np.abs(x[..., 0] + x[..., 1]), np.abs(x[..., 2]))
    return np.maximum(np.abs(x[..., 0] - x[..., 1]), np.abs(x[..., 2]))


def geodesic_check(family: SurfaceFamily, samples: int = 25, margin: float = 0.05,
                   curves=None) -> dict:
    """Max constraint residual on each symmetry curve of the family.

    Samples are equally spaced in the curve parameter, excluding points
    within ``margin`` of a puncture.
    """
    names = curves or FAMILY_CURVES.get(family.name, tuple(GEODESIC_CURVES))
    out = {}
    for name in names:
        curve, (u0, u1), kind = GEODESIC_CURVES[name]
        u = np.linspace(u0, u1, samples + 2)[1:-1]
        z = curve(u)
        z = z[puncture_distance(z, family) >= margin]
        x = immersion_coordinates(z, family)
        out[name] = {"constraint": kind, "max_residual": float(np.max(_constraint_residual(x, kind))),
                     "samples": int(z.size)}
    return out


def end_length(family: SurfaceFamily, puncture: complex, r: float, r0: float = 0.1,
               direction: complex = (1 + 1j) / math.sqrt(2), tol: float = 1e-8) -> float:
    """``int (1 + |g|^2)|eta|`` along the ray ``puncture + t*direction``, t in [r, r0].

    Integrated in log t; ``(1 + |g|^2)|eta| = 2 * conformal_factor * |dz|``.
    """
    from .quadrature import gauss_kronrod, integrate

    def f(s):
        t = np.exp(s)
        lam, _ = _metric_from_wp(wp(puncture + t * direction,
                                    EvaluationConfig(pole_exclusion_radius=min(1e-3, r / 2))), family)
        return 2.0 * lam * t

    a, b = math.log(r), math.log(r0)
    # relative tolerance: the length grows like r^-k at an end of order k
    scale = max(1.0, abs(float(gauss_kronrod(f, a, b)[0])))
    return float(integrate(f, a, b, tol=tol * scale))
