"""Weierstrass elliptic functions of the square lattice generated by 1 and i.

Every point is first reduced into the centred period square
``[-1/2, 1/2) x [-1/2, 1/2)`` and then evaluated through Jacobi theta
series with nome ``q = exp(-pi)``; the series converge like
``q**(n*n)``, so a handful of terms reach double precision.  The
quasi-periodicity of zeta is restored with the half-period values
``zeta(1/2)`` and ``zeta(i/2)``.

The raw lattice sums that define wp and zeta converge far too slowly to be
used for evaluation.  They are kept here as an independent oracle
(:func:`wp_lattice_sum`, :func:`zeta_lattice_sum`), with the leading
square-truncation tail added back in closed form.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConvergenceError, PoleProximityError

NOME = math.exp(-math.pi)
W1 = 0.5
W3 = 0.5j
W2 = 0.5 + 0.5j
HALF_PERIODS = {"1/2": W1, "i/2": W3, "(1+i)/2": W2}

_MAX_TERMS = 40


@dataclass(frozen=True)
class EvaluationConfig:
    """Accuracy target and pole guard for point evaluations.

    Parameters
    ----------
    target_accuracy : float
        Absolute error bound requested for theta-series truncation.
    pole_exclusion_radius : float
        Points closer than this to a lattice point are rejected.
    """

    target_accuracy: float = 1e-11
    pole_exclusion_radius: float = 1e-3

    def __post_init__(self):
        if not 1e-14 <= self.target_accuracy <= 1e-6:
            raise ValueError(
                f"target_accuracy must lie in [1e-14, 1e-6], got {self.target_accuracy}"
            )
        if not self.pole_exclusion_radius > 0:
            raise ValueError("pole_exclusion_radius must be positive")


DEFAULT_CONFIG = EvaluationConfig()


@functools.lru_cache(maxsize=None)
def _series_length(target_accuracy: float) -> int:
    # |Im v| <= pi/2 after reduction; bound the first omitted theta term
    # with a 1e-6 safety factor.
    for n in range(2, _MAX_TERMS):
        x = n + 0.5
        if NOME ** (x * x) * math.exp(math.pi * x) < 1e-6 * target_accuracy:
            return n + 1
    raise ConvergenceError(
        f"theta series cannot reach accuracy {target_accuracy} in {_MAX_TERMS} terms"
    )


def _theta_block(v, nterms):
    """Return theta1, theta1', theta2, theta3, theta4 at ``v`` (nome exp(-pi))."""
    v = np.asarray(v, dtype=complex)
    k = np.arange(nterms)
    odd = 2 * k + 1
    qh = NOME ** ((k + 0.5) ** 2)
    sgn = (-1.0) ** k
    arg = np.multiply.outer(v, odd)
    sin_odd = np.sin(arg)
    cos_odd = np.cos(arg)
    t1 = 2.0 * np.sum(sgn * qh * sin_odd, axis=-1)
    t1p = 2.0 * np.sum(sgn * qh * odd * cos_odd, axis=-1)
    t2 = 2.0 * np.sum(qh * cos_odd, axis=-1)

    m = np.arange(1, nterms)
    qm = NOME ** (m * m)
    cos_even = np.cos(np.multiply.outer(v, 2 * m))
    t3 = 1.0 + 2.0 * np.sum(qm * cos_even, axis=-1)
    t4 = 1.0 + 2.0 * np.sum((-1.0) ** m * qm * cos_even, axis=-1)
    return t1, t1p, t2, t3, t4


@dataclass(frozen=True)
class _ThetaNulls:
    t2: float
    t3: float
    t4: float
    t1p: float
    t1ppp: float


@functools.lru_cache(maxsize=None)
def _theta_nulls() -> _ThetaNulls:
    nterms = _series_length(1e-14)
    _, t1p, t2, t3, t4 = (x.real for x in _theta_block(0.0, nterms))
    k = np.arange(nterms)
    t1ppp = float(
        -2.0 * np.sum((-1.0) ** k * NOME ** ((k + 0.5) ** 2) * (2 * k + 1) ** 3)
    )
    return _ThetaNulls(float(t2), float(t3), float(t4), float(t1p), t1ppp)


@dataclass(frozen=True)
class LatticeConstants:
    """Derived constants of the square lattice.

    ``zeta_half`` and ``zeta_half_i`` are the quasi-period constants
    (zeta(z + 1) = zeta(z) + 2*zeta_half, zeta(z + i) = zeta(z) + 2*zeta_half_i).
    """

    e1: float
    g2: float
    g3: float
    zeta_half: complex
    zeta_half_i: complex
    zeta_w2: complex

    def to_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            if isinstance(value, complex):
                out[key] = {"re": value.real, "im": value.imag}
            else:
                out[key] = value
        return out


def _zeta_centred(z0, eta1, nterms):
    t1, t1p, *_ = _theta_block(np.pi * z0, nterms)
    return 2.0 * eta1 * z0 + np.pi * t1p / t1


@functools.lru_cache(maxsize=None)
def lattice_constants() -> LatticeConstants:
    """Compute (once) the constants e1, g2, g3 and the half-period zeta values.

    Nothing is hard-coded: e1 and g2 come from theta-null identities and the
    zeta values from the theta-quotient form of zeta.  Each is therefore an
    independent check of the relations g2 = 4 e1**2, g3 = 0 and
    zeta(1/2) = pi/2.
    """
    th = _theta_nulls()
    pi2 = math.pi ** 2
    e1 = pi2 / 3.0 * (th.t3 ** 4 + th.t4 ** 4)
    g2 = 2.0 * math.pi ** 4 / 3.0 * (th.t2 ** 8 + th.t3 ** 8 + th.t4 ** 8)
    g3 = (
        4.0 * math.pi ** 6 / 27.0
        * (th.t2 ** 4 + th.t3 ** 4)
        * (th.t3 ** 4 + th.t4 ** 4)
        * (th.t4 ** 4 - th.t2 ** 4)
    )
    eta1 = -pi2 / 6.0 * th.t1ppp / th.t1p
    if not all(math.isfinite(x) for x in (e1, g2, g3, eta1)):
        raise ConvergenceError("theta-null series produced non-finite constants")
    nterms = _series_length(1e-14)
    eta3 = complex(_zeta_centred(np.asarray(W3), eta1, nterms))
    # The theta quotient is valid off the centred square too; |Im v| = pi/2 here.
    zeta_w2 = complex(_zeta_centred(np.asarray(W2), eta1, nterms))
    return LatticeConstants(
        e1=e1, g2=g2, g3=g3,
        zeta_half=complex(eta1), zeta_half_i=eta3, zeta_w2=zeta_w2,
    )


def _reduce(z):
    z = np.asarray(z, dtype=complex)
    m = np.floor(z.real + 0.5)
    n = np.floor(z.imag + 0.5)
    return z - m - 1j * n, m, n


def _guard(z0, config):
    if not np.all(np.isfinite(z0)):
        raise ValueError("evaluation point must be finite")
    too_close = np.abs(z0) < config.pole_exclusion_radius
    if np.any(too_close):
        bad = np.asarray(z0)[too_close].ravel()[0]
        raise PoleProximityError(
            f"point is within {config.pole_exclusion_radius:g} of a lattice point "
            f"(reduced offset {bad:.3g})"
        )


def _scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def wp_and_derivative(z, config: EvaluationConfig = DEFAULT_CONFIG):
    """Return ``(wp(z), wp'(z))`` from a single theta evaluation."""
    z0, _, _ = _reduce(z)
    _guard(z0, config)
    th = _theta_nulls()
    e1 = lattice_constants().e1
    t1, _, t2, t3, t4 = _theta_block(np.pi * z0, _series_length(config.target_accuracy))
    r1 = np.pi * th.t3 * th.t4 * t2 / t1
    r2 = np.pi * th.t2 * th.t4 * t3 / t1
    r3 = np.pi * th.t2 * th.t3 * t4 / t1
    return _scalar(e1 + r1 * r1), _scalar(-2.0 * r1 * r2 * r3)


def wp(z, config: EvaluationConfig = DEFAULT_CONFIG):
    """Weierstrass wp of the lattice [1, i]; accepts scalars or arrays."""
    return wp_and_derivative(z, config)[0]


def wp_prime(z, config: EvaluationConfig = DEFAULT_CONFIG):
    """Derivative of wp; odd and doubly periodic."""
    return wp_and_derivative(z, config)[1]


def wp_second(z, config: EvaluationConfig = DEFAULT_CONFIG):
    """Second derivative, ``6 wp**2 - g2/2``."""
    p = wp(z, config)
    return 6.0 * p * p - 0.5 * lattice_constants().g2


def zeta_w(z, config: EvaluationConfig = DEFAULT_CONFIG):
    """Weierstrass zeta (odd, quasi-periodic, zeta' = -wp)."""
    z0, m, n = _reduce(z)
    _guard(z0, config)
    const = lattice_constants()
    val = _zeta_centred(z0, const.zeta_half.real, _series_length(config.target_accuracy))
    val = val + 2.0 * m * const.zeta_half + 2.0 * n * const.zeta_half_i
    return _scalar(val)


def _half_period(half_period):
    if isinstance(half_period, str):
        try:
            return HALF_PERIODS[half_period]
        except KeyError:
            raise ValueError(f"unknown half period {half_period!r}") from None
    h = complex(half_period)
    for value in HALF_PERIODS.values():
        if abs(h - value) < 1e-15:
            return value
    raise ValueError(f"{half_period!r} is not one of 1/2, i/2, (1+i)/2")


def wp_shifted(z, half_period, method: str = "direct",
               config: EvaluationConfig = DEFAULT_CONFIG):
    """Evaluate ``wp(z + h)`` for a half period ``h``.

    ``method="direct"`` evaluates at the shifted point.  ``method="addition"``
    uses the addition theorem with ``wp'(h) = 0``, i.e.
    ``wp(z+h) = (wp'(z) / (wp(z) - e_h))**2 / 4 - wp(z) - e_h``; it is a
    cross-check only and is singular at ``z = 0`` modulo the lattice.
    """
    h = _half_period(half_period)
    if method == "direct":
        return wp(np.asarray(z, dtype=complex) + h, config)
    if method == "addition":
        e_h = wp(h, config)
        p, dp = wp_and_derivative(z, config)
        return 0.25 * (dp / (p - e_h)) ** 2 - p - e_h
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Lattice-sum oracle
# ---------------------------------------------------------------------------

def _lattice(N):
    k = np.arange(-N, N + 1, dtype=float)
    omega = (k[:, None] + 1j * k[None, :]).ravel()
    return omega[omega != 0]


def wp_lattice_sum(z, N: int = 200):
    """Truncated defining double sum for wp over ``|m|, |n| <= N``.

    The symmetric square truncation misses ``3 z**2 * sum(Omega**-4)`` over
    the exterior; that exterior sum is ``1/(3 (N + 1/2)**2)`` to leading
    order, so ``z**2 / (N + 1/2)**2`` is added back.  The remaining error is
    bounded by :func:`lattice_sum_tail_bound`.
    """
    omega = _lattice(N)
    inv_sq = 1.0 / omega ** 2
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(zs.shape, dtype=complex)
    for idx, zz in np.ndenumerate(zs):
        out[idx] = 1.0 / zz ** 2 + np.sum(1.0 / (zz - omega) ** 2 - inv_sq)
    out += zs ** 2 / (N + 0.5) ** 2
    return _scalar(out.reshape(np.shape(z)))


def zeta_lattice_sum(z, N: int = 200):
    """Truncated defining double sum for zeta, tail ``-z**3/(3 (N+1/2)**2)`` restored."""
    omega = _lattice(N)
    inv = 1.0 / omega
    inv_sq = inv * inv
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(zs.shape, dtype=complex)
    for idx, zz in np.ndenumerate(zs):
        out[idx] = 1.0 / zz + np.sum(1.0 / (zz - omega) + inv + zz * inv_sq)
    out -= zs ** 3 / (3.0 * (N + 0.5) ** 2)
    return _scalar(out.reshape(np.shape(z)))


def lattice_sum_tail_bound(z, N: int = 200) -> float:
    """Conservative bound on the error left after the tail correction.

    The next surviving terms are ``O(|z|**4 / N**4)`` (a discretisation
    correction to the Omega**-4 exterior sum and the Omega**-6 sum).
    """
    r = abs(complex(z))
    return 10.0 * (r ** 4 + r ** 2) / N ** 4 + 1e-13


def e1_oracle(N: int = 200) -> float:
    """e1 = wp(1/2) from the truncated lattice sum."""
    return float(np.real(wp_lattice_sum(0.5, N)))


def validate_e1(N: int = 200, tol: float = 1e-9) -> float:
    """Cross-validate the cached e1 against the lattice-sum oracle.

    Returns the absolute deviation; raises :class:`ConvergenceError` if it
    exceeds ``tol``.
    """
    dev = abs(lattice_constants().e1 - e1_oracle(N))
    if dev > tol:
        raise ConvergenceError(f"e1 disagrees with lattice-sum oracle by {dev:.3e}")
    return dev
