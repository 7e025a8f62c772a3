"""Degree of the Gauss map by the argument principle on the torus.

The fundamental square is tiled by an ``n x n`` grid whose edges are offset
from the half-period lines, so no cell boundary passes through a half
period.  For a target ``w0`` the winding number of ``g - w0`` around a cell
equals (zeros - poles) inside it.  Poles of g can only sit at half periods
(``g`` is a rational function of wp times wp'), so each cell holding one is
also measured on a small square around that point; the difference isolates
the zeros in the rest of the cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import W1, W2, W3, EvaluationConfig
from .errors import ContourError, SamplingError
from .surfaces import SurfaceFamily, gauss_map

GRID_OFFSET = 0.0137
MAX_PHASE_STEP = math.pi / 3
_CONFIG = EvaluationConfig(pole_exclusion_radius=1e-9)


def _g(z, family):
    return gauss_map(z, family, _CONFIG)


def contour_winding(f, vertices, initial: int = 16, max_rounds: int = 40,
                    min_modulus: float = 1e-10) -> int:
    """Winding number of ``f`` around a closed polygon.

    Each edge is sampled adaptively until consecutive phase steps are below
    pi/3, so the unwrapped phase is unambiguous.
    """
    total = 0.0
    for z0, z1 in zip(vertices, vertices[1:] + vertices[:1]):
        t = np.linspace(0.0, 1.0, initial + 1)
        v = f(z0 + (z1 - z0) * t)
        for _ in range(max_rounds):
            if np.any(np.abs(v) < min_modulus):
                raise ContourError("contour passes through a zero or pole")
            step = np.angle(v[1:] / v[:-1])
            bad = np.abs(step) > MAX_PHASE_STEP
            if not np.any(bad):
                break
            tm = 0.5 * (t[:-1][bad] + t[1:][bad])
            vm = f(z0 + (z1 - z0) * tm)
            t = np.concatenate([t, tm])
            v = np.concatenate([v, vm])
            order = np.argsort(t)
            t, v = t[order], v[order]
        else:
            raise ContourError("edge phase did not resolve")
        total += float(np.sum(step))
    w = total / (2 * math.pi)
    n = round(w)
    if abs(w - n) > 1e-6:
        raise ContourError(f"non-integer winding {w}")
    return int(n)


def _square(center, half):
    return [center + complex(-half, -half), center + complex(half, -half),
            center + complex(half, half), center + complex(-half, half)]


@dataclass
class DegreeCount:
    target: complex
    zeros: int
    poles: int
    grid: int


def count_preimages(family: SurfaceFamily, w0: complex, n: int = 16,
                    pole_box: float = 0.004) -> DegreeCount:
    """Zeros and poles of ``g - w0`` on the torus."""
    f = lambda z: _g(z, family) - w0
    edges = GRID_OFFSET + np.arange(n + 1) / n
    specials = [0j, W1, W3, W2]
    # lattice translates of the half periods lying in the shifted square
    translates = []
    for s in specials:
        for m in (0, 1):
            for k in (0, 1):
                p = s + m + 1j * k
                if edges[0] < p.real < edges[-1] and edges[0] < p.imag < edges[-1]:
                    translates.append(p)
    zeros = poles = 0
    h = 1.0 / n
    for i in range(n):
        for j in range(n):
            lo = complex(edges[i], edges[j])
            cell = [lo, lo + h, lo + h + 1j * h, lo + 1j * h]
            w = contour_winding(f, cell)
            inside = [p for p in translates
                      if lo.real < p.real < lo.real + h and lo.imag < p.imag < lo.imag + h]
            for p in inside:
                ws = contour_winding(f, _square(p, pole_box))
                w -= ws
                zeros += max(ws, 0)
                poles += max(-ws, 0)
            zeros += max(w, 0)
            poles += max(-w, 0)
    return DegreeCount(complex(w0), zeros, poles, n)


def degree_of_gauss_map(family: SurfaceFamily, targets: int = 5, seed: int = 7,
                        max_retries: int = 20, n: int = 16, max_refine: int = 2) -> int:
    """Number of preimages of a generic value under g, unanimous over targets.

    Targets are drawn with modulus in [0.5, 2].  A target whose contours
    hit a zero is replaced (at most ``max_retries`` times in total); a
    zero/pole imbalance triggers grid refinement.
    """
    rng = np.random.default_rng(seed)
    counts = []
    retries = 0
    while len(counts) < targets:
        w0 = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.random())
        grid, box = n, 0.004
        result = None
        try:
            for _ in range(max_refine + 1):
                dc = count_preimages(family, w0, grid, box)
                if dc.zeros == dc.poles:
                    result = dc.zeros
                    break
                grid, box = 2 * grid, box / 2
        except ContourError:
            result = None
        if result is None:
            retries += 1
            if retries > max_retries:
                raise SamplingError("could not find a generic target value for the Gauss map")
            continue
        counts.append(result)
    if len(set(counts)) != 1:
        raise SamplingError(f"preimage counts disagree across targets: {counts}")
    return counts[0]
