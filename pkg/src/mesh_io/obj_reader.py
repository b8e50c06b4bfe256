import numpy as np

from loguru import logger

from src.common.exceptions import IndexOutOfRange, MeshSyntaxError, ZeroIndex
from src.mesh_core.mesh import ElementKind, Mesh, ValidatedMesh, validate_mesh
from src.mesh_io.line_reader import iter_content_lines, parse_floats, parse_int


def load_obj(data: bytes) -> ValidatedMesh:
    """
    Parse the "v" and "f" records of an OBJ file; every other record is ignored. Face indices are 1-based, may
    carry "/texture/normal" suffixes and may be negative (relative to the vertices read so far).

    :param data: file contents
    :return: validated mesh
    """
    coordinates = []
    faces = []
    for line_number, tokens in iter_content_lines(data):
        record = tokens[0]
        if record == "v":
            coordinates.append(parse_floats(tokens[1:], line_number))
        elif record == "f":
            faces.append([_resolve_index(token, line_number, len(faces), position, len(coordinates))
                          for position, token in enumerate(tokens[1:])])

    vertices = np.array(coordinates, dtype=np.float64).reshape(-1, 3)
    kind = ElementKind.Triangle if all(len(face) == 3 for face in faces) else ElementKind.Polygon
    logger.debug(f"Parsed OBJ: {len(coordinates)} vertices, {len(faces)} {kind.value} faces")

    return validate_mesh(Mesh.from_elements(len(coordinates), faces, kind=kind, vertices=vertices))


def _resolve_index(token: str, line_number: int, element_id: int, position: int, vertex_count: int) -> int:
    index_token = token.split("/", 1)[0]
    if not index_token:
        raise MeshSyntaxError(line_number, f"face entry '{token[:32]}' has no vertex index")
    index = parse_int(index_token, line_number)
    if index == 0:
        raise ZeroIndex(line_number)
    if index > 0:
        return index - 1

    resolved = vertex_count + index
    if resolved < 0:
        raise IndexOutOfRange(element_id, position, index)

    return resolved
