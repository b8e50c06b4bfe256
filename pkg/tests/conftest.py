from functools import lru_cache

import numpy as np
import pytest

from src.mesh_core.generators import (generate_delaunay, generate_fan, generate_grid, generate_polygon_grid,
                                      generate_quad_grid, generate_tet_block)
from src.mesh_core.mesh import ElementKind, Mesh, validate_mesh


def single_triangle():
    return validate_mesh(Mesh.from_elements(3, [(0, 1, 2)]))


def two_triangles():
    return validate_mesh(Mesh.from_elements(4, [(0, 1, 2), (0, 2, 3)]))


def non_manifold():
    # three triangles hinged on edge (0, 1)
    return validate_mesh(Mesh.from_elements(5, [(0, 1, 2), (1, 0, 3), (0, 1, 4)]))


def with_isolated_vertices():
    return validate_mesh(Mesh.from_elements(6, [(1, 2, 4)]))


def single_tetrahedron():
    return validate_mesh(Mesh.from_elements(4, [(0, 1, 2, 3)], kind=ElementKind.Tetrahedron))


def empty_mesh():
    return validate_mesh(Mesh.from_elements(0, [], kind=ElementKind.Triangle))


DELAUNAY_SIZES = [int(size) for size in np.geomspace(10, 10000, 20)]

CORPUS = {
    "single_triangle": single_triangle,
    "two_triangles": two_triangles,
    "non_manifold": non_manifold,
    "isolated_vertices": with_isolated_vertices,
    "empty": empty_mesh,
    "fan_12": lambda: generate_fan(12),
    "single_tetrahedron": single_tetrahedron,
    "quad_grid_6x4": lambda: generate_quad_grid(6, 4),
    "polygon_grid_5x7": lambda: generate_polygon_grid(5, 7),
    "tet_block_3x4x2": lambda: generate_tet_block(3, 4, 2),
    **{f"grid_{n}x{n}": (lambda n=n: generate_grid(n, n)) for n in (1, 2, 3, 10, 50, 100)},
    "grid_3x17": lambda: generate_grid(3, 17),
    **{f"delaunay_{size}": (lambda size=size, seed=seed: generate_delaunay(size, seed))
       for seed, size in enumerate(DELAUNAY_SIZES)},
}


@lru_cache(maxsize=None)
def corpus_mesh_by_name(name: str):
    return CORPUS[name]()


@pytest.fixture(params=sorted(CORPUS))
def corpus_mesh(request):
    return corpus_mesh_by_name(request.param)


@pytest.fixture
def triangle():
    return single_triangle()


@pytest.fixture
def triangle_pair():
    return two_triangles()


@pytest.fixture
def hinged_triangles():
    return non_manifold()
