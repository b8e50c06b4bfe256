from pathlib import Path
from typing import Optional, Union

from loguru import logger

from src.common.constants import MESH_FILE_SUFFIXES
from src.common.exceptions import ConfigurationError
from src.mesh_core.mesh import ValidatedMesh
from src.mesh_io.mesh_cache import MeshCache
from src.mesh_io.obj_reader import load_obj
from src.mesh_io.off_reader import load_off

READERS = {
    ".off": load_off,
    ".obj": load_obj,
}


def load_mesh(path: Union[str, Path], cache: Optional[MeshCache] = None) -> ValidatedMesh:
    """
    Read an OFF or OBJ file, chosen by suffix.

    :param path: mesh file
    :param cache: optional parsed-mesh cache
    :return: validated mesh
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in MESH_FILE_SUFFIXES:
        raise ConfigurationError(f"Unsupported mesh file '{path.name}', expected one of {sorted(MESH_FILE_SUFFIXES)}")

    if cache is not None:
        mesh = cache.get(path)
        if mesh is not None:
            return mesh

    logger.info(f"Loading mesh {path}")
    mesh = READERS[suffix](path.read_bytes())
    logger.info(f"Loaded {path.name}: {mesh.vertex_count} vertices, {mesh.element_count} elements")

    if cache is not None:
        cache.put(path, mesh)

    return mesh
