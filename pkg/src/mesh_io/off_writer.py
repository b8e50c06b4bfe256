import numpy as np

from src.mesh_core.mesh import Mesh


def dump_off(mesh: Mesh) -> bytes:
    """
    Serialise a mesh as OFF. Meshes without coordinates get all-zero vertex lines.

    :param mesh: mesh to write
    :return: OFF file bytes
    """
    vertices = mesh.vertices if mesh.vertices is not None else np.zeros((mesh.vertex_count, 3))
    lines = ["OFF", f"{mesh.vertex_count} {mesh.element_count} 0"]
    lines.extend(" ".join(repr(float(coordinate)) for coordinate in vertex) for vertex in vertices.tolist())
    lines.extend(f"{len(element)} " + " ".join(map(str, element)) for element in mesh.iter_elements())

    return ("\n".join(lines) + "\n").encode("utf-8")
