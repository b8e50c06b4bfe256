from dataclasses import dataclass
from typing import List

import numpy as np

from src.csr_build.csr_adjacency import CsrAdjacency
from src.mesh_core.mesh import Mesh, validate_mesh
from src.pair_expand.pair_list import AdjacencyMode


@dataclass
class OracleAdjacency:
    """
    Growable per-vertex neighbour lists filled by a plain loop over elements.
    """
    mode: AdjacencyMode
    per_vertex: List[List[int]]

    @property
    def vertex_count(self) -> int:
        return len(self.per_vertex)

    def finalize(self) -> "OracleAdjacency":
        for neighbors in self.per_vertex:
            neighbors.sort()

        return self

    def to_csr(self) -> CsrAdjacency:
        counts = np.fromiter((len(neighbors) for neighbors in self.per_vertex), dtype=np.int64,
                             count=self.vertex_count)
        offsets = np.zeros(self.vertex_count + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        indices = np.fromiter((index for neighbors in self.per_vertex for index in neighbors), dtype=np.int64,
                              count=int(offsets[-1]))

        return CsrAdjacency(mode=self.mode, vertex_count=self.vertex_count, offsets=offsets, counts=counts,
                            indices=indices)


def _element_edges(mesh: Mesh, element: List[int]):
    edge_table = mesh.element_kind.edge_table
    if edge_table is not None:
        return [(element[a], element[b]) for a, b in edge_table]

    return [(element[i], element[(i + 1) % len(element)]) for i in range(len(element))]


def oracle_node_neighbors(mesh: Mesh) -> OracleAdjacency:
    """
    Serial baseline: for every element edge {a, b}, add b to a's list and a to b's list unless already there.
    Membership is a linear scan of the list.
    """
    mesh = validate_mesh(mesh)
    per_vertex = [[] for _ in range(mesh.vertex_count)]
    for element in mesh.iter_elements():
        for a, b in _element_edges(mesh, element):
            if b not in per_vertex[a]:
                per_vertex[a].append(b)
            if a not in per_vertex[b]:
                per_vertex[b].append(a)

    return OracleAdjacency(AdjacencyMode.NodeNeighbors, per_vertex).finalize()


def oracle_element_neighbors(mesh: Mesh) -> OracleAdjacency:
    """
    Serial baseline: append every element id to the list of each node it contains. Elements are visited in
    ascending order, so the lists come out sorted.
    """
    mesh = validate_mesh(mesh)
    per_vertex = [[] for _ in range(mesh.vertex_count)]
    for element_id, element in enumerate(mesh.iter_elements()):
        for node in element:
            per_vertex[node].append(element_id)

    return OracleAdjacency(AdjacencyMode.ElementNeighbors, per_vertex)


def build_oracle(mesh: Mesh, mode: AdjacencyMode) -> OracleAdjacency:
    if mode is AdjacencyMode.NodeNeighbors:
        return oracle_node_neighbors(mesh)

    return oracle_element_neighbors(mesh)
