from typing import Optional

import numpy as np

from loguru import logger

from src.common.constants import INDEX_DTYPE
from src.common.exceptions import VerificationFailed
from src.csr_build.csr_adjacency import CsrAdjacency
from src.exec_backend.backend import Backend
from src.exec_backend.primitives import exclusive_scan, first_positions_by_key, reduce_by_key_ones, sort_pairs
from src.mesh_core.mesh import Mesh, validate_mesh
from src.pair_expand.pair_expander import expand_pairs
from src.pair_expand.pair_list import AdjacencyMode, PairList


def remove_duplicate_pairs(pairs: PairList) -> PairList:
    """
    Drop exact (key, value) repeats from sorted pairs, keeping the first of each.

    :param pairs: pairs sorted by key then value
    :return: new PairList with contiguous arrays
    """
    keys, values = pairs.keys, pairs.values
    if len(keys) < 2:
        return PairList(keys.copy(), values.copy(), pairs.mode)

    keep = np.empty(len(keys), dtype=bool)
    keep[0] = True
    np.not_equal(keys[1:], keys[:-1], out=keep[1:])
    keep[1:] |= values[1:] != values[:-1]

    return PairList(keys[keep], values[keep], pairs.mode)


class AdjacencyBuilder:
    """
    Sort-based adjacency construction: expand elements into (key, value) pairs, sort them, drop repeated node
    pairs, count runs, scan counts into offsets. The values left after sorting are the neighbour indices.
    """

    def __init__(self, backend: Optional[Backend] = None):
        self.backend = backend or Backend.serial()

    def build(self, mesh: Mesh, mode: AdjacencyMode) -> CsrAdjacency:
        """
        :param mesh: mesh to process
        :param mode: NodeNeighbors or ElementNeighbors
        :return: CsrAdjacency covering every vertex, isolated ones with an empty slice
        """
        mesh = validate_mesh(mesh)
        vertex_count = mesh.vertex_count

        pairs = expand_pairs(mesh, mode, self.backend)
        sorted_pairs = sort_pairs(pairs, self.backend)
        del pairs

        if mode is AdjacencyMode.NodeNeighbors:
            unique_pairs = remove_duplicate_pairs(sorted_pairs)
            logger.debug(f"Removed {len(sorted_pairs) - len(unique_pairs)} repeated node pairs")
            del sorted_pairs
        else:
            unique_pairs = sorted_pairs
        keys, values = unique_pairs.keys, unique_pairs.values
        del unique_pairs

        run_keys, run_counts = reduce_by_key_ones(keys, self.backend)
        first_keys, first_index = first_positions_by_key(keys, self.backend)

        counts = np.zeros(vertex_count, dtype=INDEX_DTYPE)
        counts[run_keys] = run_counts
        offsets = exclusive_scan(counts, self.backend)

        if not np.array_equal(run_keys, first_keys) or not np.array_equal(offsets[first_keys], first_index):
            raise VerificationFailed("run counts and first positions disagree")

        indices = np.ascontiguousarray(values)
        logger.debug(f"Built {mode.name} adjacency: {vertex_count} vertices, {len(indices)} neighbour entries, "
                     f"{vertex_count - len(run_keys)} isolated")

        return CsrAdjacency(mode=mode, vertex_count=vertex_count, offsets=offsets, counts=counts, indices=indices)


def build_adjacency(mesh: Mesh, mode: AdjacencyMode, backend: Optional[Backend] = None) -> CsrAdjacency:
    return AdjacencyBuilder(backend).build(mesh, mode)
