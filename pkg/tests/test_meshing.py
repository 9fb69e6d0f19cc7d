"""Mesh assembly, seam welding, Euler characteristics and file export."""

import numpy as np
import pytest

from qlag.catalog import clifford_cone, ellipse, ellipsoid, klein_bottle_cone
from qlag.errors import ConfigInvalid, DimensionUnsupported
from qlag.meshing import (
    build_projective_polyline,
    build_surface_mesh,
    project_vertices,
    riemann_sphere,
    validate_projection,
    write_obj,
    write_projective_cloud,
)


def test_surface_mesh_is_closed_klein_bottle():
    mesh = build_surface_mesh(ellipse(), 64, 32)
    assert mesh.vertex_count == 64 * 32
    assert len(mesh.faces) == 2 * 64 * 32
    assert mesh.is_closed()
    assert mesh.euler_characteristic() == 0


def test_surface_mesh_other_weights_still_closed():
    mesh = build_surface_mesh(ellipse(2, 3, 5.0), 32, 16)
    assert mesh.is_closed()
    assert mesh.euler_characteristic() == 0


def test_surface_mesh_vertices_lie_on_image():
    system = ellipse()
    mesh = build_surface_mesh(system, 16, 8)
    z = mesh.vertices[:, 0] + 1j * mesh.vertices[:, 1]
    w = mesh.vertices[:, 2] + 1j * mesh.vertices[:, 3]
    # |z|^2 + 2|w|^2 = 1 on the image of the weighted circle
    assert np.max(np.abs(np.abs(z) ** 2 + 2 * np.abs(w) ** 2 - 1.0)) <= 1e-12


def test_surface_mesh_guards():
    with pytest.raises(DimensionUnsupported):
        build_surface_mesh(klein_bottle_cone(), 16, 8)
    with pytest.raises(ConfigInvalid):
        build_surface_mesh(ellipse(), 15, 8)  # odd nx breaks the weld
    with pytest.raises(ConfigInvalid):
        build_surface_mesh(ellipse(), 4, 2)


def test_projection_validation():
    with pytest.raises(ConfigInvalid):
        validate_projection(np.ones((3, 4)))
    proj = validate_projection(np.eye(4)[:3])
    assert proj.shape == (3, 4)
    mesh = build_surface_mesh(ellipse(), 16, 8)
    v3 = project_vertices(mesh.vertices)
    assert v3.shape == (mesh.vertex_count, 3)


def test_obj_writer(tmp_path):
    mesh = build_surface_mesh(ellipse(), 16, 8)
    path = tmp_path / "surface.obj"
    write_obj(path, project_vertices(mesh.vertices), mesh.faces)
    text = path.read_text().splitlines()
    nv = sum(1 for line in text if line.startswith("v "))
    nf = sum(1 for line in text if line.startswith("f "))
    assert nv == mesh.vertex_count and nf == len(mesh.faces)
    # indices are 1-based and in range
    for line in text:
        if line.startswith("f "):
            idx = [int(tok) for tok in line.split()[1:]]
            assert all(1 <= i <= nv for i in idx)


def test_projective_polyline_on_equator(tmp_path):
    pts, line = build_projective_polyline(clifford_cone(2), 128)
    assert pts.shape == (128, 3)
    assert np.max(np.abs(pts[:, 0])) <= 1e-12  # Clifford equator
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) <= 1e-12
    assert line[0] == line[-1] == 0  # closed
    write_obj(tmp_path / "line.obj", pts, polyline=line)
    assert (tmp_path / "line.obj").read_text().count("\nl ") == 1


def test_riemann_sphere_unit_norm():
    rng = np.random.default_rng(1)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert np.linalg.norm(riemann_sphere(z)) == pytest.approx(1.0)


def test_projective_cloud_csv(tmp_path):
    path = tmp_path / "cloud.csv"
    write_projective_cloud(path, klein_bottle_cone(), 12, 10)
    rows = path.read_text().splitlines()
    assert rows[0].startswith("t,y,p11")
    assert len(rows) == 1 + 12 * 10
    first = [float(x) for x in rows[1].split(",")]
    # projector trace is one
    assert first[2] + first[3] + first[4] == pytest.approx(1.0)


def test_projective_cloud_guard(tmp_path):
    from qlag.catalog import weighted_cone
    from qlag.errors import NotACone

    with pytest.raises(DimensionUnsupported):
        write_projective_cloud(tmp_path / "c.csv", weighted_cone([1, 1, 1, 3]), 8, 8)
    with pytest.raises(NotACone):
        write_projective_cloud(tmp_path / "c.csv", ellipsoid([1, 1, 1]), 8, 8)
