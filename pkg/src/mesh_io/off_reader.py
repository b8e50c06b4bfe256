import numpy as np

from loguru import logger

from src.common.exceptions import CountMismatch, MeshSyntaxError
from src.mesh_core.mesh import ElementKind, Mesh, ValidatedMesh, validate_mesh
from src.mesh_io.line_reader import iter_content_lines, parse_floats, parse_int


def load_off(data: bytes) -> ValidatedMesh:
    """
    Parse an OFF file: an optional "OFF" header, a "V F [E]" counts line, V vertex lines and F face lines
    "k i0 ... i(k-1)" with 0-based indices. The edge count is ignored. All-triangle files load as Triangle meshes,
    anything else as Polygon.

    :param data: file contents
    :return: validated mesh
    """
    lines = iter_content_lines(data)
    line_number, tokens = next(lines, (0, None))
    if tokens is None:
        raise CountMismatch("OFF file has no counts line")

    if tokens[0].upper().endswith("OFF"):
        tokens = tokens[1:]
        if not tokens:
            line_number, tokens = next(lines, (line_number, None))
            if tokens is None:
                raise CountMismatch("OFF file ends after its header")

    if len(tokens) < 2:
        raise MeshSyntaxError(line_number, "counts line needs a vertex and a face count")
    vertex_count, face_count = parse_int(tokens[0], line_number), parse_int(tokens[1], line_number)
    if vertex_count < 0 or face_count < 0:
        raise MeshSyntaxError(line_number, "counts must be non-negative")

    coordinates = []
    for line_number, tokens in lines if vertex_count else ():
        coordinates.append(parse_floats(tokens, line_number))
        if len(coordinates) == vertex_count:
            break
    if len(coordinates) < vertex_count:
        raise CountMismatch(f"OFF declares {vertex_count} vertices but has {len(coordinates)}")

    faces = []
    for line_number, tokens in lines if face_count else ():
        arity = parse_int(tokens[0], line_number)
        if arity < 0 or len(tokens) - 1 < arity:
            raise MeshSyntaxError(line_number, f"face declares {arity} indices but lists {len(tokens) - 1}")
        faces.append([parse_int(token, line_number) for token in tokens[1:arity + 1]])
        if len(faces) == face_count:
            break
    if len(faces) < face_count:
        raise CountMismatch(f"OFF declares {face_count} faces but has {len(faces)}")

    trailing = next(lines, None)
    if trailing is not None:
        raise CountMismatch(f"Unexpected content after the declared faces on line {trailing[0]}")

    vertices = np.array(coordinates, dtype=np.float64).reshape(-1, 3)
    kind = ElementKind.Triangle if all(len(face) == 3 for face in faces) else ElementKind.Polygon
    logger.debug(f"Parsed OFF: {vertex_count} vertices, {face_count} {kind.value} faces")

    return validate_mesh(Mesh.from_elements(vertex_count, faces, kind=kind, vertices=vertices))
