import io

import numpy as np
import pytest

from wpmin.errors import SamplingError
from wpmin.mesh import (
    SamplingPlan, build_mesh, export_mesh, format_mesh, load_mesh, mesh_filename,
    parse_mesh, sample_domain, symmetry_complete, symmetry_residual, total_curvature,
    worker_count,
)
from wpmin.surfaces import immersion_coordinates, lattice_distance, make_family


@pytest.fixture(scope="module")
def mesh50():
    return build_mesh(SamplingPlan(50), make_family("vilhena3"))


@pytest.mark.parametrize("res", [4, 7, 9, 0])
def test_plan_rejects_bad_resolution(res):
    with pytest.raises(SamplingError):
        SamplingPlan(res)


def test_plan_rejects_small_cutoff():
    with pytest.raises(SamplingError):
        SamplingPlan(20, puncture_cutoff=1e-4)


def test_sampling_respects_cutoff(vilhena3):
    z = sample_domain(SamplingPlan(50, 0.04), vilhena3)
    for p in vilhena3.punctures:
        assert np.min(lattice_distance(z, p)) >= 0.04 - 1e-12


def test_sampling_deterministic(vilhena3):
    plan = SamplingPlan(40)
    assert np.array_equal(sample_domain(plan, vilhena3), sample_domain(plan, vilhena3))


def test_mesh_structure(mesh50):
    assert mesh50.n_vertices > 0 and mesh50.n_faces > 0
    assert mesh50.faces.min() >= 0 and mesh50.faces.max() < mesh50.n_vertices
    assert np.all(mesh50.curvature <= 0)
    assert np.all(np.linalg.norm(mesh50.vertices, axis=1) <= 50)
    assert np.all(mesh50.conformal_factor > 0)


def test_vertices_are_the_immersion(mesh50, vilhena3):
    x = immersion_coordinates(mesh50.domain_z, vilhena3)
    assert np.max(np.abs(x - mesh50.vertices)) < 1e-12


def test_worker_count_env(monkeypatch, vilhena3):
    monkeypatch.setenv("WPMIN_THREADS", "1")
    assert worker_count() == 1
    a = build_mesh(SamplingPlan(20), vilhena3, workers=1)
    b = build_mesh(SamplingPlan(20), vilhena3, workers=4)
    assert np.array_equal(a.vertices, b.vertices) and np.array_equal(a.faces, b.faces)


def test_total_curvature_bounded_by_torus_value(vilhena3):
    # excised ends only remove negative curvature
    import math
    for res in (50, 100):
        ct = total_curvature(build_mesh(SamplingPlan(res), vilhena3))
        assert -16 * math.pi < ct < 0


@pytest.mark.parametrize("fmt", ["obj", "ply"])
def test_export_roundtrip(mesh50, fmt, tmp_path):
    path = tmp_path / mesh_filename("vilhena3", 50, fmt)
    n = export_mesh(mesh50, fmt, path)
    assert n == path.stat().st_size
    loaded = load_mesh(path)
    assert loaded.vertices.shape == mesh50.vertices.shape
    assert np.array_equal(loaded.faces, mesh50.faces)
    assert np.allclose(loaded.vertices, mesh50.vertices, rtol=1e-8, atol=1e-8)
    if fmt == "ply":
        assert np.allclose(loaded.curvature, mesh50.curvature, rtol=1e-8)
        assert "property float curvature" in path.read_text()


def test_export_deterministic(vilhena3):
    a = format_mesh(build_mesh(SamplingPlan(30), vilhena3), "ply")
    b = format_mesh(build_mesh(SamplingPlan(30), vilhena3), "ply")
    assert a == b


def test_export_to_stream(mesh50):
    buf = io.BytesIO()
    n = export_mesh(mesh50, "obj", buf)
    assert n == len(buf.getvalue())
    assert buf.getvalue().startswith(b"v ")


def test_unknown_format(mesh50):
    with pytest.raises(ValueError):
        format_mesh(mesh50, "stl")


def test_obj_faces_one_based(mesh50):
    text = format_mesh(mesh50, "obj")
    first_face = next(l for l in text.splitlines() if l.startswith("f "))
    assert min(int(t) for t in first_face.split()[1:]) >= 1
    assert parse_mesh(text, "obj").faces.min() == 0


@pytest.mark.parametrize("name", ["vilhena3", "weber2"])
def test_symmetry_completion(name):
    family = make_family(name)
    mesh = build_mesh(SamplingPlan(40), family)
    full = symmetry_complete(mesh, family)
    assert full.n_vertices >= mesh.n_vertices
    assert full.faces.max() < full.n_vertices
    assert symmetry_residual(full) < 1e-6
    assert np.all(np.isfinite(full.gauss[np.isfinite(full.gauss.real)]))
    # idempotent: the grid already contains its symmetric images
    again = symmetry_complete(full, family)
    assert again.n_vertices == full.n_vertices
    assert again.n_faces == full.n_faces


def _disk_curvature(family, p, radius, nr=400, nt=256):
    """Integral of K dA over a puncture disk in polar coordinates."""
    from wpmin.elliptic import EvaluationConfig
    from wpmin.surfaces import curvature_density
    x, w = np.polynomial.legendre.leggauss(nr)
    r, wr = 0.5 * radius * (x + 1), 0.5 * radius * w
    t = 2 * np.pi * np.arange(nt) / nt
    z = p + r[:, None] * np.exp(1j * t[None, :])
    d = curvature_density(z, family, EvaluationConfig(pole_exclusion_radius=1e-9))
    return float(np.sum(d * (r * wr)[:, None]) * 2 * np.pi / nt)


def test_mesh_deficit_is_the_excised_disks(vilhena3):
    # unclipped mesh sum plus the curvature inside the cutoff disks recovers -16 pi
    import math
    disks = sum(_disk_curvature(vilhena3, p, 0.02) for p in vilhena3.punctures)
    mesh = build_mesh(SamplingPlan(400, 0.02, clip_norm=1e12), vilhena3)
    assert total_curvature(mesh) + disks == pytest.approx(-16 * math.pi, rel=0.01)
    # the order-3 end at 0 carries most of the deficit
    assert _disk_curvature(vilhena3, 0j, 0.02) < -0.8 * math.pi


def test_curvature_error_decreases_with_resolution(vilhena3):
    # stated convergence property at fixed cutoff; the truncation error
    # dominates the grid error, so this is not expected to hold
    import math
    err = [abs(total_curvature(build_mesh(SamplingPlan(n, 0.02), vilhena3)) + 16 * math.pi)
           for n in (100, 200, 400)]
    assert err[0] > err[1] > err[2], err
