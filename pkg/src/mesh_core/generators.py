import re

from itertools import permutations
from typing import Tuple

import numpy as np

from loguru import logger
from scipy.spatial import Delaunay

from src.common.constants import INDEX_MAX, OFFSET_DTYPE
from src.common.exceptions import CapacityOverflow, ConfigurationError
from src.mesh_core.mesh import ElementKind, Mesh, ValidatedMesh, validate_mesh

GRID_SPEC_REGEX = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def parse_grid_spec(grid_spec: str) -> Tuple[int, int]:
    """
    Parse a "RxC" grid specification.

    :param grid_spec: e.g. "940x940"
    :return: (rows, cols)
    """
    match = GRID_SPEC_REGEX.match(grid_spec)
    if not match:
        raise ConfigurationError(f"Grid spec '{grid_spec}' is not of the form RxC")

    return int(match.group(1)), int(match.group(2))


def _check_grid_size(rows: int, cols: int, vertex_count: int) -> None:
    if rows < 1 or cols < 1:
        raise ConfigurationError(f"Grid dimensions must be positive, got {rows}x{cols}")
    if vertex_count > INDEX_MAX:
        raise CapacityOverflow("vertex_count", vertex_count, INDEX_MAX)


def _grid_corners(rows: int, cols: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Corner vertex ids of every cell, cells ordered row by row. Vertex (i, j) has id i * (cols + 1) + j.
    """
    row_ids, col_ids = np.meshgrid(np.arange(rows, dtype=np.int64), np.arange(cols, dtype=np.int64), indexing='ij')
    lower_left = (row_ids * (cols + 1) + col_ids).ravel()
    lower_right = lower_left + 1
    upper_left = lower_left + cols + 1
    upper_right = upper_left + 1

    return lower_left, lower_right, upper_left, upper_right


def _grid_vertices(rows: int, cols: int) -> np.ndarray:
    row_ids, col_ids = np.meshgrid(np.arange(rows + 1, dtype=np.float64), np.arange(cols + 1, dtype=np.float64),
                                   indexing='ij')

    return np.column_stack([col_ids.ravel(), row_ids.ravel(), np.zeros(row_ids.size)])


def _fixed_arity_mesh(vertex_count: int, elements: np.ndarray, kind: ElementKind,
                      vertices: np.ndarray = None) -> ValidatedMesh:
    element_count, arity = elements.shape
    offsets = np.arange(element_count + 1, dtype=OFFSET_DTYPE) * arity
    mesh = Mesh(vertex_count=vertex_count, connectivity=elements.ravel(), element_offsets=offsets,
                element_kind=kind, vertices=vertices)

    return validate_mesh(mesh)


def generate_grid(rows: int, cols: int) -> ValidatedMesh:
    """
    Triangulated (rows+1) x (cols+1) vertex grid. Every cell is split along its lower-left to upper-right diagonal,
    giving 2 * rows * cols triangles and 6-valent interior vertices.

    :param rows: number of cell rows
    :param cols: number of cell columns
    :return: validated triangle mesh
    """
    vertex_count = (rows + 1) * (cols + 1)
    _check_grid_size(rows, cols, vertex_count)

    lower_left, lower_right, upper_left, upper_right = _grid_corners(rows, cols)
    triangles = np.empty((rows * cols, 2, 3), dtype=np.int64)
    triangles[:, 0, 0], triangles[:, 0, 1], triangles[:, 0, 2] = lower_left, lower_right, upper_right
    triangles[:, 1, 0], triangles[:, 1, 1], triangles[:, 1, 2] = lower_left, upper_right, upper_left
    logger.debug(f"Generated {rows}x{cols} grid: {vertex_count} vertices, {2 * rows * cols} triangles")

    return _fixed_arity_mesh(vertex_count, triangles.reshape(-1, 3), ElementKind.Triangle,
                             _grid_vertices(rows, cols))


def generate_quad_grid(rows: int, cols: int) -> ValidatedMesh:
    vertex_count = (rows + 1) * (cols + 1)
    _check_grid_size(rows, cols, vertex_count)

    lower_left, lower_right, upper_left, upper_right = _grid_corners(rows, cols)
    quads = np.column_stack([lower_left, lower_right, upper_right, upper_left])

    return _fixed_arity_mesh(vertex_count, quads, ElementKind.Quad, _grid_vertices(rows, cols))


def generate_polygon_grid(rows: int, cols: int) -> ValidatedMesh:
    """
    Grid of hexagons made by merging horizontally adjacent cell pairs; an odd trailing column stays a quad, so the
    mesh mixes arities 6 and 4.

    :param rows: number of cell rows
    :param cols: number of cell columns
    :return: validated Polygon mesh
    """
    vertex_count = (rows + 1) * (cols + 1)
    _check_grid_size(rows, cols, vertex_count)

    def vertex_id(i: int, j: int) -> int:
        return i * (cols + 1) + j

    polygons = []
    for i in range(rows):
        for j in range(0, cols - 1, 2):
            polygons.append([vertex_id(i, j), vertex_id(i, j + 1), vertex_id(i, j + 2),
                             vertex_id(i + 1, j + 2), vertex_id(i + 1, j + 1), vertex_id(i + 1, j)])
        if cols % 2:
            polygons.append([vertex_id(i, cols - 1), vertex_id(i, cols), vertex_id(i + 1, cols),
                             vertex_id(i + 1, cols - 1)])

    mesh = Mesh.from_elements(vertex_count, polygons, kind=ElementKind.Polygon, vertices=_grid_vertices(rows, cols))

    return validate_mesh(mesh)


def generate_tet_block(nx: int, ny: int, nz: int) -> ValidatedMesh:
    """
    nx * ny * nz cubes, each split into the six tetrahedra that share its main diagonal. Neighbouring cubes split
    shared faces the same way, so the result is conforming.
    """
    if min(nx, ny, nz) < 1:
        raise ConfigurationError(f"Block dimensions must be positive, got {nx}x{ny}x{nz}")
    vertex_count = (nx + 1) * (ny + 1) * (nz + 1)
    if vertex_count > INDEX_MAX:
        raise CapacityOverflow("vertex_count", vertex_count, INDEX_MAX)

    i, j, k = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing='ij')
    origin = np.stack([i.ravel(), j.ravel(), k.ravel()], axis=1).astype(np.int64)
    strides = np.array([1, nx + 1, (nx + 1) * (ny + 1)], dtype=np.int64)
    unit = np.eye(3, dtype=np.int64)

    tets = []
    for axis_order in permutations(range(3)):
        corner = origin.copy()
        path = [corner @ strides]
        for axis in axis_order:
            corner = corner + unit[axis]
            path.append(corner @ strides)
        tets.append(np.column_stack(path))
    # cube-major order: the six tets of a cube are consecutive
    elements = np.stack(tets, axis=1).reshape(-1, 4)

    return _fixed_arity_mesh(vertex_count, elements, ElementKind.Tetrahedron)


def generate_fan(triangle_count: int) -> ValidatedMesh:
    """
    Open triangle fan around vertex 0: triangles (0, i, i + 1) for i in 1..triangle_count.
    """
    if triangle_count < 1:
        raise ConfigurationError("A fan needs at least one triangle")
    rim = np.arange(1, triangle_count + 1, dtype=np.int64)
    triangles = np.column_stack([np.zeros_like(rim), rim, rim + 1])

    return _fixed_arity_mesh(triangle_count + 2, triangles, ElementKind.Triangle)


def generate_delaunay(point_count: int, seed: int = 0) -> ValidatedMesh:
    """
    Delaunay triangulation of uniformly random points in the unit square.

    :param point_count: number of points (>= 3)
    :param seed: random seed
    :return: validated triangle mesh; points qhull leaves out stay as isolated vertices
    """
    if point_count < 3:
        raise ConfigurationError("A triangulation needs at least three points")
    rng = np.random.default_rng(seed)
    points = rng.random((point_count, 2))
    triangulation = Delaunay(points)
    vertices = np.column_stack([points, np.zeros(point_count)])

    return _fixed_arity_mesh(point_count, triangulation.simplices.astype(np.int64), ElementKind.Triangle, vertices)
