from dataclasses import dataclass

import numpy as np

from src.mesh_core.mesh import Mesh, validate_mesh
from src.pair_expand.pair_expander import expand_node_pairs


@dataclass(frozen=True)
class MeshStats:
    vertex_count: int
    element_count: int
    undirected_edge_count: int
    isolated_vertex_count: int

    def as_row(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "elements": self.element_count,
            "edges": self.undirected_edge_count,
            "isolated": self.isolated_vertex_count,
        }


def mesh_stats(mesh: Mesh) -> MeshStats:
    """
    Count vertices, elements, distinct undirected edges and vertices no element touches.

    :param mesh: mesh to describe (validated on the way in)
    :return: MeshStats
    """
    mesh = validate_mesh(mesh)
    pairs = expand_node_pairs(mesh)

    # every undirected edge appears as (low, high) at least once
    forward = pairs.keys < pairs.values
    low = pairs.keys[forward].astype(np.uint64)
    high = pairs.values[forward].astype(np.uint64)
    edge_count = int(np.unique((low << np.uint64(32)) | high).size)

    touched = np.bincount(mesh.connectivity, minlength=mesh.vertex_count) if mesh.connectivity.size else \
        np.zeros(mesh.vertex_count, dtype=np.int64)
    isolated_count = int(np.count_nonzero(touched == 0))

    return MeshStats(vertex_count=mesh.vertex_count,
                     element_count=mesh.element_count,
                     undirected_edge_count=edge_count,
                     isolated_vertex_count=isolated_count)
