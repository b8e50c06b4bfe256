from itertools import combinations

import numpy as np
import pytest

from src.common.constants import INDEX_DTYPE, INDEX_MAX
from src.common.exceptions import (ArityMismatch, CapacityOverflow, ConfigurationError, DegenerateElement,
                                   IndexOutOfRange, MeshValidationError)
from src.mesh_core.generators import (generate_delaunay, generate_fan, generate_grid, generate_polygon_grid,
                                      generate_quad_grid, generate_tet_block, parse_grid_spec)
from src.mesh_core.mesh import ElementKind, Mesh, ValidatedMesh, validate_mesh
from src.mesh_core.mesh_stats import mesh_stats


def brute_force_edge_count(mesh: Mesh) -> int:
    edges = set()
    for element in mesh.iter_elements():
        if mesh.element_kind is ElementKind.Tetrahedron:
            pairs = combinations(element, 2)
        else:
            pairs = zip(element, element[1:] + element[:1])
        edges.update(frozenset(pair) for pair in pairs)

    return len(edges)


def test_smallest_triangle_mesh_is_valid(triangle):
    assert isinstance(triangle, ValidatedMesh)
    assert triangle.connectivity.dtype == INDEX_DTYPE
    assert triangle.elements == [(0, 1, 2)]


def test_index_out_of_range_names_element_and_position():
    with pytest.raises(IndexOutOfRange) as error:
        validate_mesh(Mesh.from_elements(3, [(0, 1, 3)]))
    assert (error.value.element_id, error.value.position) == (0, 2)


def test_negative_index_is_out_of_range():
    with pytest.raises(IndexOutOfRange) as error:
        validate_mesh(Mesh.from_elements(4, [(0, 1, 2), (3, -1, 0)]))
    assert (error.value.element_id, error.value.position) == (1, 1)


def test_repeated_index_is_degenerate():
    with pytest.raises(DegenerateElement) as error:
        validate_mesh(Mesh.from_elements(3, [(0, 1, 1)]))
    assert error.value.element_id == 0


def test_degenerate_polygon_is_found_by_element():
    mesh = Mesh.from_elements(6, [(0, 1, 2, 3), (2, 3, 4, 5, 3)], kind=ElementKind.Polygon)
    with pytest.raises(DegenerateElement) as error:
        validate_mesh(mesh)
    assert error.value.element_id == 1


@pytest.mark.parametrize("kind, element", [
    (ElementKind.Triangle, (0, 1, 2, 3)),
    (ElementKind.Quad, (0, 1, 2)),
    (ElementKind.Tetrahedron, (0, 1, 2)),
    (ElementKind.Polygon, (0, 1)),
])
def test_arity_must_fit_kind(kind, element):
    with pytest.raises(ArityMismatch) as error:
        validate_mesh(Mesh.from_elements(4, [element], kind=kind))
    assert error.value.element_id == 0


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate_mesh(Mesh.from_elements(3, [(0, 1, 1)]))
    with pytest.raises(MeshValidationError):
        validate_mesh(Mesh.from_elements(-1, []))


@pytest.mark.parametrize("connectivity", [np.array([0.0, 1.7, 2.2]), np.array([True, False, True])])
def test_non_integer_connectivity_is_rejected(connectivity):
    offsets = np.array([0, 3], dtype=np.int64)
    with pytest.raises(MeshValidationError):
        validate_mesh(Mesh(3, connectivity, offsets, ElementKind.Triangle))


def test_offsets_must_cover_the_connectivity():
    with pytest.raises(MeshValidationError):
        validate_mesh(Mesh(3, np.array([0, 1, 2]), np.array([0, 2], dtype=np.int64), ElementKind.Triangle))


def test_vertex_count_beyond_index_type_overflows():
    with pytest.raises(CapacityOverflow):
        validate_mesh(Mesh.from_elements(INDEX_MAX + 1, [(0, 1, 2)]))


def test_validate_is_idempotent(triangle_pair):
    assert validate_mesh(triangle_pair) is triangle_pair
    revalidated = validate_mesh(Mesh(triangle_pair.vertex_count, triangle_pair.connectivity,
                                     triangle_pair.element_offsets, triangle_pair.element_kind))
    assert np.array_equal(revalidated.connectivity, triangle_pair.connectivity)


def test_from_elements_infers_kind():
    assert Mesh.from_elements(3, [(0, 1, 2)]).element_kind is ElementKind.Triangle
    assert Mesh.from_elements(5, [(0, 1, 2), (1, 2, 3, 4)]).element_kind is ElementKind.Polygon


@pytest.mark.parametrize("rows, cols, vertices, triangles", [(1, 1, 4, 2), (2, 2, 9, 8), (940, 940, 885481, 1767200)])
def test_grid_sizes(rows, cols, vertices, triangles):
    mesh = generate_grid(rows, cols)
    assert (mesh.vertex_count, mesh.element_count) == (vertices, triangles)


def test_grid_is_deterministic():
    first, second = generate_grid(7, 5), generate_grid(7, 5)
    assert np.array_equal(first.connectivity, second.connectivity)


@pytest.mark.parametrize("rows, cols", [(0, 3), (3, 0), (-1, 2)])
def test_grid_rejects_empty_dimensions(rows, cols):
    with pytest.raises(ConfigurationError):
        generate_grid(rows, cols)


def test_grid_rejects_vertex_overflow():
    with pytest.raises(CapacityOverflow):
        generate_grid(50000, 50000)


@pytest.mark.parametrize("rows, cols", [(r, c) for r in range(1, 21, 3) for c in range(1, 21, 4)])
def test_grid_edge_count_formula(rows, cols):
    mesh = generate_grid(rows, cols)
    expected = rows * (cols + 1) + cols * (rows + 1) + rows * cols
    assert mesh_stats(mesh).undirected_edge_count == expected == brute_force_edge_count(mesh)


def test_mesh_stats_examples(triangle, triangle_pair):
    single = mesh_stats(triangle)
    assert (single.vertex_count, single.element_count, single.undirected_edge_count,
            single.isolated_vertex_count) == (3, 1, 3, 0)
    pair = mesh_stats(triangle_pair)
    assert (pair.vertex_count, pair.element_count, pair.undirected_edge_count,
            pair.isolated_vertex_count) == (4, 2, 5, 0)


def test_grid_10x10_edge_count():
    assert mesh_stats(generate_grid(10, 10)).undirected_edge_count == 320


def test_mesh_stats_counts_isolated_vertices():
    stats = mesh_stats(Mesh.from_elements(6, [(1, 2, 4)]))
    assert stats.isolated_vertex_count == 3


def test_mesh_stats_matches_brute_force(corpus_mesh):
    assert mesh_stats(corpus_mesh).undirected_edge_count == brute_force_edge_count(corpus_mesh)


def test_quad_grid():
    mesh = generate_quad_grid(2, 3)
    assert mesh.element_kind is ElementKind.Quad
    assert (mesh.vertex_count, mesh.element_count) == (12, 6)
    assert mesh.element(0) == (0, 1, 5, 4)


def test_polygon_grid_mixes_hexagons_and_trailing_quads():
    mesh = generate_polygon_grid(2, 3)
    assert mesh.element_kind is ElementKind.Polygon
    assert mesh.arities.tolist() == [6, 4, 6, 4]
    assert mesh.element(0) == (0, 1, 2, 6, 5, 4)


def test_tet_block_is_conforming():
    mesh = generate_tet_block(2, 2, 2)
    assert mesh.element_count == 48
    assert mesh.vertex_count == 27
    # every interior face is shared by exactly two tetrahedra, boundary faces by one
    faces = {}
    for tet in mesh.iter_elements():
        for face in combinations(sorted(tet), 3):
            faces[face] = faces.get(face, 0) + 1
    assert set(faces.values()) == {1, 2}
    assert sum(1 for count in faces.values() if count == 1) == 6 * 4 * 2


def test_fan():
    mesh = generate_fan(4)
    assert mesh.vertex_count == 6
    assert mesh.elements == [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5)]


def test_delaunay_is_seeded():
    first, second = generate_delaunay(200, seed=3), generate_delaunay(200, seed=3)
    assert first.vertex_count == 200
    assert np.array_equal(first.connectivity, second.connectivity)
    assert first.vertices.shape == (200, 3)


@pytest.mark.parametrize("grid_spec, expected", [("940x940", (940, 940)), (" 3X7 ", (3, 7))])
def test_parse_grid_spec(grid_spec, expected):
    assert parse_grid_spec(grid_spec) == expected


@pytest.mark.parametrize("grid_spec", ["940", "axb", "3x", "-3x4"])
def test_parse_grid_spec_rejects_garbage(grid_spec):
    with pytest.raises(ConfigurationError):
        parse_grid_spec(grid_spec)


def test_element_array_is_undefined_for_polygons():
    with pytest.raises(TypeError):
        generate_polygon_grid(1, 2).element_array()
