"""Sampling, triangulation, symmetry completion and export of surface meshes."""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .elliptic import DEFAULT_CONFIG, wp, wp_prime
from .errors import SamplingError
from .surfaces import (
    FAMILY_SYMMETRIES,
    SYMMETRIES,
    ImmersionPoint,
    SurfaceFamily,
    _metric_from_wp,
    gauss_poles,
    immersion_coordinates,
    lattice_distance,
    puncture_distance,
)

WELD_TOLERANCE = 1e-7


@dataclass(frozen=True)
class SamplingPlan:
    """Regular grid of ``resolution x resolution`` points ``(k + i l)/resolution``.

    ``resolution`` must be even so the grid contains all four half periods.
    """

    resolution: int = 100
    puncture_cutoff: float = 0.04
    clip_norm: float = 50.0

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 8:
            raise SamplingError(f"resolution must be an integer >= 8, got {self.resolution}")
        if self.resolution % 2:
            raise SamplingError(f"resolution must be even, got {self.resolution}")
        if not self.puncture_cutoff >= DEFAULT_CONFIG.pole_exclusion_radius:
            raise SamplingError(
                f"puncture_cutoff must be >= {DEFAULT_CONFIG.pole_exclusion_radius}")
        if not self.clip_norm > 0:
            raise SamplingError("clip_norm must be positive")


def _grid(plan: SamplingPlan):
    k = np.arange(plan.resolution) / plan.resolution
    return k[None, :] + 1j * k[:, None]     # row = Im index, column = Re index


def _keep_mask(plan: SamplingPlan, family: SurfaceFamily) -> np.ndarray:
    # the slack keeps grid points at exactly the cutoff distance on both sides
    # of every symmetry line, so the sample set is symmetric
    return puncture_distance(_grid(plan), family) >= plan.puncture_cutoff - 1e-12


def sample_domain(plan: SamplingPlan, family: SurfaceFamily) -> np.ndarray:
    """Grid points of the unit square outside every puncture disk, row-major."""
    z = _grid(plan)[_keep_mask(plan, family)]
    if z.size == 0:
        raise SamplingError("puncture disks cover the whole grid")
    return z


@dataclass
class SurfaceMesh:
    vertices: np.ndarray             # (V, 3)
    faces: np.ndarray                # (F, 3) zero-based
    gauss: np.ndarray                # (V,) complex, inf at poles of g
    curvature: np.ndarray            # (V,)
    conformal_factor: np.ndarray     # (V,)
    domain_z: np.ndarray             # (V,) complex
    family: str = ""
    resolution: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_faces(self) -> int:
        return int(self.faces.shape[0])

    def points(self):
        """Vertices as :class:`ImmersionPoint` records."""
        for x, z, g, lam, k in zip(self.vertices, self.domain_z, self.gauss,
                                   self.conformal_factor, self.curvature):
            yield ImmersionPoint(float(x[0]), float(x[1]), float(x[2]), complex(z), complex(g),
                                 float(lam), float(k))


def worker_count() -> int:
    """Thread count, capped by the WPMIN_THREADS environment variable."""
    cap = os.environ.get("WPMIN_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise SamplingError(f"WPMIN_THREADS must be an integer, got {cap!r}") from None
    return n


def _evaluate(z: np.ndarray, family: SurfaceFamily):
    x = immersion_coordinates(z, family)
    P = wp(z)
    lam, K = _metric_from_wp(P, family)
    d = family.data
    dP = wp_prime(z)
    dr = d.e_poly(P) * (1.0 if d.p_cancelled else P)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = family.c * d.n_red(P) * dP / dr
    at_pole = np.zeros(z.shape, dtype=bool)
    for p in gauss_poles(family):
        at_pole |= lattice_distance(z, p) < 1e-12
    g = np.where(at_pole, complex(np.inf, 0.0), g)
    return x, g, K, lam


def _evaluate_parallel(z: np.ndarray, family: SurfaceFamily, workers: int):
    if workers <= 1 or z.size < 2048:
        return _evaluate(z, family)
    chunks = np.array_split(z, workers * 4)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _evaluate(c, family), chunks))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(4))


def build_mesh(plan: SamplingPlan, family: SurfaceFamily, workers: int | None = None) -> SurfaceMesh:
    """Evaluate the closed-form immersion on the grid and triangulate it.

    Faces join grid cells (with periodic wrap-around) whose four corners all
    survive the puncture cutoff and the clip; each cell gives two triangles.
    """
    workers = worker_count() if workers is None else workers
    n = plan.resolution
    keep = _keep_mask(plan, family)
    zgrid = _grid(plan)
    z = zgrid[keep]
    if z.size == 0:
        raise SamplingError("puncture disks cover the whole grid")
    x, g, K, lam = _evaluate_parallel(z, family, workers)
    clipped = np.linalg.norm(x, axis=1) > plan.clip_norm
    flat_keep = keep.copy()
    flat_keep[keep] = ~clipped
    index = -np.ones((n, n), dtype=np.int64)
    index[flat_keep] = np.arange(int(flat_keep.sum()))
    sel = ~clipped
    # cell (l, k) has corners (l, k), (l, k+1), (l+1, k+1), (l+1, k) with wrap
    a = index
    b = np.roll(index, -1, axis=1)
    c = np.roll(np.roll(index, -1, axis=0), -1, axis=1)
    d = np.roll(index, -1, axis=0)
    ok = (a >= 0) & (b >= 0) & (c >= 0) & (d >= 0)
    tri1 = np.stack([a[ok], b[ok], c[ok]], axis=1)
    tri2 = np.stack([a[ok], c[ok], d[ok]], axis=1)
    faces = np.empty((2 * tri1.shape[0], 3), dtype=np.int64)
    faces[0::2] = tri1
    faces[1::2] = tri2
    return SurfaceMesh(x[sel], faces, g[sel], K[sel], lam[sel], z[sel], family.name, n,
                       {"puncture_cutoff": plan.puncture_cutoff, "clip_norm": plan.clip_norm})


def total_curvature(mesh: SurfaceMesh) -> float:
    """``sum K * conformal_factor^2 * h^2`` over vertices, ``h = 1/resolution``."""
    h2 = 1.0 / mesh.resolution ** 2
    return float(np.sum(mesh.curvature * mesh.conformal_factor ** 2) * h2)


# ---------------------------------------------------------------------------
# Symmetry completion
# ---------------------------------------------------------------------------

def _generators(family_name: str):
    return [SYMMETRIES[n] for n in FAMILY_SYMMETRIES.get(family_name, ("beta", "rho"))]


def _group_with_domain_maps(family_name: str):
    """Group elements as (matrix, domain map) pairs, identity first."""
    gens = _generators(family_name)
    elements = [(np.eye(3), lambda z: np.asarray(z, dtype=complex))]
    frontier = list(elements)
    while frontier:
        nxt = []
        for m, f in frontier:
            for gm, gf in gens:
                prod = np.rint(gm @ m)
                if not any(np.array_equal(prod, e[0]) for e in elements):
                    item = (prod, (lambda gf, f: lambda z: gf(f(z)))(gf, f))
                    elements.append(item)
                    nxt.append(item)
        frontier = nxt
    return elements


def weld(vertices: np.ndarray, tol: float = WELD_TOLERANCE):
    """Merge vertices closer than ``tol`` (transitively).

    Returns the representative (smallest index in its cluster) of every
    vertex and a mask of the representatives.
    """
    n = len(vertices)
    pairs = cKDTree(vertices).query_pairs(tol, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    rep = first[labels]
    return rep, rep == np.arange(n)


def symmetry_complete(mesh: SurfaceMesh, family: SurfaceFamily | None = None,
                      tol: float = WELD_TOLERANCE) -> SurfaceMesh:
    """Append the images under the family's symmetry group and weld duplicates.

    Image vertices carry the domain point ``sigma(z)`` with
    ``X(sigma z) = A X(z)``; faces of orientation-reversing images are flipped.
    """
    verts, faces, gauss, curv, lam, dz = [], [], [], [], [], []
    offset = 0
    for m, f in _group_with_domain_maps(mesh.family):
        verts.append(mesh.vertices @ m.T)
        fc = mesh.faces + offset
        if np.linalg.det(m) < 0:
            fc = fc[:, ::-1]
        faces.append(fc)
        curv.append(mesh.curvature)
        lam.append(mesh.conformal_factor)
        zz = f(mesh.domain_z)
        zz = zz - np.floor(zz.real) - 1j * np.floor(zz.imag)
        dz.append(zz)
        gauss.append(mesh.gauss if offset == 0 else np.full(mesh.n_vertices, np.nan + 0j))
        offset += mesh.n_vertices
    V = np.concatenate(verts)
    rep, keep = weld(V, tol)
    new_index = -np.ones(len(V), dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    remap = new_index[rep]
    F = remap[np.concatenate(faces)]
    # Image faces inside the already-covered region triangulate it along the
    # other cell diagonal; keep only those reaching a newly added vertex.
    n_orig = int(keep[: mesh.n_vertices].sum())
    from_image = np.arange(len(F)) >= mesh.n_faces
    F = F[~from_image | np.any(F >= n_orig, axis=1)]
    F = F[(F[:, 0] != F[:, 1]) & (F[:, 1] != F[:, 2]) & (F[:, 0] != F[:, 2])]
    _, first = np.unique(np.sort(F, axis=1), axis=0, return_index=True)
    F = F[np.sort(first)]
    g = np.concatenate(gauss)[keep]
    zd = np.concatenate(dz)[keep]
    missing = np.isnan(g)
    if family is not None and missing.any():
        g[missing] = _evaluate(zd[missing], family)[1]
    meta = dict(mesh.meta, symmetry_completed=True)
    return replace(mesh, vertices=V[keep], faces=F, gauss=g, curvature=np.concatenate(curv)[keep],
                   conformal_factor=np.concatenate(lam)[keep], domain_z=zd, meta=meta)


def symmetry_residual(mesh: SurfaceMesh, tol: float = WELD_TOLERANCE) -> float:
    """Largest distance from ``A X`` to the nearest vertex, over generators A."""
    tree = cKDTree(mesh.vertices)
    worst = 0.0
    for m, _ in _generators(mesh.family):
        d, _ = tree.query(mesh.vertices @ m.T)
        worst = max(worst, float(np.max(d)))
    return worst


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

FORMATS = ("obj", "ply")


def mesh_filename(family: str, resolution: int, fmt: str = "obj") -> str:
    return f"{family}-r{resolution}.{fmt}"


def format_mesh(mesh: SurfaceMesh, fmt: str = "obj") -> str:
    """Serialise to OBJ (``v``/``f`` lines, 1-based) or ASCII PLY 1.0."""
    if mesh.n_vertices == 0:
        raise SamplingError("cannot export an empty mesh")
    buf = io.StringIO()
    if fmt == "obj":
        for x in mesh.vertices:
            buf.write("v %.9g %.9g %.9g\n" % (x[0], x[1], x[2]))
        for f in mesh.faces:
            buf.write("f %d %d %d\n" % (f[0] + 1, f[1] + 1, f[2] + 1))
    elif fmt in ("ply", "ply-ascii"):
        buf.write("ply\nformat ascii 1.0\n")
        buf.write(f"comment {mesh.family} resolution {mesh.resolution}\n")
        buf.write(f"element vertex {mesh.n_vertices}\n")
        buf.write("property float x\nproperty float y\nproperty float z\n")
        buf.write("property float curvature\n")
        buf.write(f"element face {mesh.n_faces}\n")
        buf.write("property list uchar int vertex_indices\nend_header\n")
        for x, k in zip(mesh.vertices, mesh.curvature):
            buf.write("%.9g %.9g %.9g %.9g\n" % (x[0], x[1], x[2], k))
        for f in mesh.faces:
            buf.write("3 %d %d %d\n" % (f[0], f[1], f[2]))
    else:
        raise ValueError(f"unknown mesh format {fmt!r}; choose from {FORMATS}")
    return buf.getvalue()


def export_mesh(mesh: SurfaceMesh, fmt: str, destination) -> int:
    """Write the mesh to a path or binary/text stream; returns bytes written."""
    data = format_mesh(mesh, fmt).encode("ascii")
    if isinstance(destination, (str, os.PathLike)):
        Path(destination).write_bytes(data)
    elif isinstance(destination, io.TextIOBase):
        destination.write(data.decode("ascii"))
    else:
        destination.write(data)
    return len(data)


@dataclass
class LoadedMesh:
    vertices: np.ndarray
    faces: np.ndarray
    curvature: np.ndarray | None = None


def parse_mesh(text: str, fmt: str) -> LoadedMesh:
    """Parse the OBJ or ASCII-PLY subset written by :func:`format_mesh`."""
    if fmt == "obj":
        v, f = [], []
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                v.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                f.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
        return LoadedMesh(np.array(v, dtype=float).reshape(-1, 3), np.array(f, dtype=np.int64).reshape(-1, 3))
    if fmt in ("ply", "ply-ascii"):
        lines = text.splitlines()
        if not lines or lines[0].strip() != "ply":
            raise ValueError("not a PLY file")
        nv = nf = 0
        props = []
        i = 1
        while lines[i].strip() != "end_header":
            p = lines[i].split()
            if p[0] == "element" and p[1] == "vertex":
                nv = int(p[2])
            elif p[0] == "element" and p[1] == "face":
                nf = int(p[2])
            elif p[0] == "property" and p[1] != "list":
                props.append(p[2])
            i += 1
        body = lines[i + 1:]
        vals = np.array([[float(t) for t in body[k].split()] for k in range(nv)]).reshape(nv, -1)
        faces = np.array([[int(t) for t in body[nv + k].split()[1:4]] for k in range(nf)],
                         dtype=np.int64).reshape(nf, 3)
        curv = vals[:, props.index("curvature")] if "curvature" in props else None
        return LoadedMesh(vals[:, :3], faces, curv)
    raise ValueError(f"unknown mesh format {fmt!r}")


def load_mesh(path, fmt: str | None = None) -> LoadedMesh:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".")
    return parse_mesh(path.read_text(encoding="ascii"), fmt)


def mesh_near_puncture(family: SurfaceFamily, puncture: complex, radius: float, n: int = 64):
    """Immersion on a circle of the given radius around a puncture."""
    t = 2 * np.pi * np.arange(n) / n
    return immersion_coordinates(puncture + radius * np.exp(1j * t), family)
