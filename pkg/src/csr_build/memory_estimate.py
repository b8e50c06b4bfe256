from dataclasses import dataclass, field
from typing import Dict, Optional

from src.common.constants import INDEX_WIDTH, OFFSET_WIDTH, PACKED_WIDTH
from src.exec_backend.backend import Backend
from src.mesh_core.mesh import Mesh, validate_mesh
from src.pair_expand.pair_expander import pair_count
from src.pair_expand.pair_list import AdjacencyMode

# np.flatnonzero positions and int64 gather results
POSITION_WIDTH = 8


@dataclass(frozen=True)
class MemoryEstimate:
    """
    Byte counts for one build. phase_bytes holds the live total at each step of AdjacencyBuilder.build;
    peak_bytes is the largest of them.
    """
    pair_bytes: int
    helper_bytes: int
    output_bytes: int
    peak_bytes: int
    phase_bytes: Dict[str, int] = field(default_factory=dict)


def _expand_bytes(mesh: Mesh, mode: AdjacencyMode, pair_bytes: int, pairs: int) -> int:
    w = INDEX_WIDTH
    slots = len(mesh.connectivity)
    if mode is AdjacencyMode.ElementNeighbors:
        # per-element arity (int64) and element ids, repeated out to one id per pair
        return pair_bytes + (OFFSET_WIDTH + w) * mesh.element_count + w * pairs
    if mesh.element_kind.edge_table is None:
        # wrap-around successor table plus one gathered column
        return pair_bytes + (OFFSET_WIDTH + w) * slots

    return pair_bytes


def _run_scan_bytes(live: int, pairs: int, keys: int, parallel: bool) -> int:
    """
    Peak of one run scan (reduce_by_key_ones or first_positions_by_key) over `pairs` sorted keys with `keys`
    distinct values: a bool mask, the run start positions, a ones or sequence array and two gathered outputs.
    Parallel scans also hold the per-chunk results while stitching them.
    """
    w = INDEX_WIDTH
    scan = max(pairs + POSITION_WIDTH * keys, POSITION_WIDTH * keys + w * pairs + 2 * w * keys)
    if parallel:
        scan = max(scan, 6 * w * keys + POSITION_WIDTH * keys + keys)

    return live + scan


def estimate_memory(mesh: Mesh, mode: AdjacencyMode, backend: Optional[Backend] = None) -> MemoryEstimate:
    """
    Estimate the memory a build of mesh in mode allocates, from counts alone. The number of pairs surviving
    deduplication is bounded by the pair count, so node-mode figures are upper bounds.

    :param mesh: mesh to estimate for
    :param mode: adjacency mode
    :param backend: backend the build would run on; a parallel sort holds a second packed buffer
    :return: MemoryEstimate
    """
    mesh = validate_mesh(mesh)
    w = INDEX_WIDTH
    vertex_count = mesh.vertex_count
    pairs = pair_count(mesh, mode)
    unique_pairs = pairs
    unique_keys = min(vertex_count, pairs)
    parallel = backend is not None and backend.is_parallel and backend.resolved_workers > 1

    pair_bytes = 2 * pairs * w
    # ones, sequence and the two run-boundary temporaries
    helper_bytes = 4 * max(pairs, vertex_count) * w
    dense_bytes = OFFSET_WIDTH * (vertex_count + 1) + vertex_count * w
    output_bytes = dense_bytes + unique_pairs * w

    packed = PACKED_WIDTH * pairs
    sort = pair_bytes + packed
    if parallel:
        sort += packed

    phases = {"expand": _expand_bytes(mesh, mode, pair_bytes, pairs), "sort": sort}
    if mode is AdjacencyMode.NodeNeighbors:
        # keep mask, one comparison temporary, then the compacted keys and values
        phases["dedup"] = packed + pairs + max(pairs, 2 * unique_pairs * w)

    # deduplicated node pairs are contiguous copies; element pairs stay strided views into the packed buffer
    live = 2 * unique_pairs * w
    phases["runs"] = _run_scan_bytes(live, unique_pairs, unique_keys, parallel)
    live += 2 * unique_keys * w
    phases["first_positions"] = _run_scan_bytes(live, unique_pairs, unique_keys, parallel)
    live += 2 * unique_keys * w + dense_bytes
    # the run consistency check gathers int64 offsets, then element mode copies the strided values out
    tail = (POSITION_WIDTH + 1) * unique_keys
    if mode is AdjacencyMode.ElementNeighbors:
        tail = max(tail, unique_pairs * w)
    phases["output"] = live + tail

    peak_bytes = max(max(phases.values()), pair_bytes + output_bytes)

    return MemoryEstimate(pair_bytes=pair_bytes, helper_bytes=helper_bytes, output_bytes=output_bytes,
                          peak_bytes=peak_bytes, phase_bytes=phases)
