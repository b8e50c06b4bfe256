from typing import Optional

import numpy as np

from loguru import logger

from src.common.constants import INDEX_DTYPE, INDEX_MAX
from src.common.exceptions import CapacityOverflow
from src.exec_backend.backend import Backend
from src.mesh_core.mesh import Mesh, validate_mesh
from src.pair_expand.pair_list import AdjacencyMode, PairList


def pair_count(mesh: Mesh, mode: AdjacencyMode) -> int:
    """
    Number of pairs the expansion of mesh will emit, computed without expanding.

    :param mesh: mesh
    :param mode: adjacency mode
    :return: pair count
    """
    slot_count = len(mesh.connectivity)
    if mode is AdjacencyMode.ElementNeighbors:
        count = slot_count
    elif mesh.element_kind.edge_table is None:
        count = 2 * slot_count
    else:
        count = 2 * len(mesh.element_kind.edge_table) * mesh.element_count

    if count > INDEX_MAX:
        raise CapacityOverflow("pair_count", count, INDEX_MAX)

    return count


def expand_pairs(mesh: Mesh, mode: AdjacencyMode, backend: Optional[Backend] = None) -> PairList:
    if mode is AdjacencyMode.NodeNeighbors:
        return expand_node_pairs(mesh, backend)

    return expand_element_pairs(mesh, backend)


def expand_node_pairs(mesh: Mesh, backend: Optional[Backend] = None) -> PairList:
    """
    Emit both directed pairs of every element edge, element-major, forward pair before reverse pair.
    Surface kinds contribute their ring edges, tetrahedra all six edges.

    :param mesh: mesh to expand
    :param backend: optional backend; parallel backends fill disjoint element slot ranges concurrently
    :return: PairList in NodeNeighbors mode
    """
    mesh = validate_mesh(mesh)
    backend = backend or Backend.serial()
    count = pair_count(mesh, AdjacencyMode.NodeNeighbors)
    keys = np.empty(count, dtype=INDEX_DTYPE)
    values = np.empty(count, dtype=INDEX_DTYPE)

    edge_table = mesh.element_kind.edge_table
    if edge_table is not None:
        elements = mesh.element_array()
        width = 2 * len(edge_table)
        key_rows = keys.reshape(-1, width)
        value_rows = values.reshape(-1, width)

        def fill(bounds):
            start, stop = bounds
            block = elements[start:stop]
            for column, (a, b) in enumerate(edge_table):
                key_rows[start:stop, 2 * column] = block[:, a]
                key_rows[start:stop, 2 * column + 1] = block[:, b]
                value_rows[start:stop, 2 * column] = block[:, b]
                value_rows[start:stop, 2 * column + 1] = block[:, a]

        backend.map(fill, backend.chunks(mesh.element_count))
    else:
        connectivity = mesh.connectivity
        offsets = mesh.element_offsets
        # slot i pairs with the next slot of its element, the last slot wraps to the first
        next_slot = np.arange(1, len(connectivity) + 1, dtype=np.int64)
        if mesh.element_count:
            next_slot[offsets[1:] - 1] = offsets[:-1]

        def fill(bounds):
            start, stop = bounds
            here = connectivity[start:stop]
            there = connectivity[next_slot[start:stop]]
            keys[2 * start:2 * stop:2] = here
            keys[2 * start + 1:2 * stop:2] = there
            values[2 * start:2 * stop:2] = there
            values[2 * start + 1:2 * stop:2] = here

        backend.map(fill, backend.chunks(len(connectivity)))

    logger.debug(f"Expanded {mesh.element_count} elements into {count} node pairs")

    return PairList(keys, values, AdjacencyMode.NodeNeighbors)


def expand_element_pairs(mesh: Mesh, backend: Optional[Backend] = None) -> PairList:
    """
    Emit (node, element) for every node of every element, element-major.

    :param mesh: mesh to expand
    :param backend: optional backend
    :return: PairList in ElementNeighbors mode
    """
    mesh = validate_mesh(mesh)
    backend = backend or Backend.serial()
    count = pair_count(mesh, AdjacencyMode.ElementNeighbors)
    keys = np.empty(count, dtype=INDEX_DTYPE)
    values = np.empty(count, dtype=INDEX_DTYPE)
    offsets = mesh.element_offsets

    def fill(bounds):
        start, stop = bounds
        slot_start, slot_stop = offsets[start], offsets[stop]
        keys[slot_start:slot_stop] = mesh.connectivity[slot_start:slot_stop]
        values[slot_start:slot_stop] = np.repeat(np.arange(start, stop, dtype=INDEX_DTYPE),
                                                 np.diff(offsets[start:stop + 1]))

    backend.map(fill, backend.chunks(mesh.element_count))
    logger.debug(f"Expanded {mesh.element_count} elements into {count} element pairs")

    return PairList(keys, values, AdjacencyMode.ElementNeighbors)
