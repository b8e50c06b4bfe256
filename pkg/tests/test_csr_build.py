import tracemalloc

import numpy as np
import pytest

from src.common.constants import INDEX_DTYPE, OFFSET_DTYPE
from src.common.exceptions import VerificationFailed
from src.csr_build.csr_adjacency import CsrAdjacency
from src.csr_build.csr_builder import AdjacencyBuilder, build_adjacency, remove_duplicate_pairs
from src.csr_build.memory_estimate import estimate_memory
from src.exec_backend.backend import Backend
from src.exec_backend.primitives import reduce_by_key_ones, sort_pairs
from src.mesh_core.generators import generate_grid
from src.mesh_core.mesh import Mesh
from src.mesh_core.mesh_stats import mesh_stats
from src.oracle.oracle import build_oracle
from src.pair_expand.pair_expander import expand_node_pairs
from src.pair_expand.pair_list import AdjacencyMode

BACKENDS = [Backend.serial()] + [Backend.parallel(workers) for workers in (1, 2, 4, 8)]


def test_single_triangle_node_adjacency(triangle):
    adjacency = build_adjacency(triangle, AdjacencyMode.NodeNeighbors)
    assert adjacency.offsets.tolist() == [0, 2, 4, 6]
    assert adjacency.indices.tolist() == [1, 2, 0, 2, 0, 1]
    assert adjacency.counts.tolist() == [2, 2, 2]


def test_shared_edge_is_collapsed(triangle_pair):
    adjacency = build_adjacency(triangle_pair, AdjacencyMode.NodeNeighbors)
    assert adjacency.neighbors(0).tolist() == [1, 2, 3]
    assert adjacency.neighbors(2).tolist() == [0, 1, 3]


def test_element_adjacency_pattern(triangle_pair):
    adjacency = build_adjacency(triangle_pair, AdjacencyMode.ElementNeighbors)
    assert adjacency.offsets.tolist() == [0, 2, 3, 5, 6]
    assert adjacency.indices.tolist() == [0, 1, 0, 0, 1, 1]


def test_output_dtypes(triangle):
    adjacency = build_adjacency(triangle, AdjacencyMode.NodeNeighbors)
    assert adjacency.offsets.dtype == OFFSET_DTYPE
    assert adjacency.indices.dtype == INDEX_DTYPE and adjacency.counts.dtype == INDEX_DTYPE


def test_isolated_vertices_get_empty_slices():
    mesh = Mesh.from_elements(6, [(1, 2, 4)])
    for mode in AdjacencyMode:
        adjacency = build_adjacency(mesh, mode, Backend.parallel(4))
        assert adjacency.counts.tolist()[0] == adjacency.counts.tolist()[3] == adjacency.counts.tolist()[5] == 0
        assert len(adjacency.offsets) == 7
        adjacency.check_invariants()


def test_non_manifold_edge(hinged_triangles):
    nodes = build_adjacency(hinged_triangles, AdjacencyMode.NodeNeighbors)
    assert nodes.neighbors(0).tolist().count(1) == 1
    assert nodes.neighbors(0).tolist() == [1, 2, 3, 4]
    elements = build_adjacency(hinged_triangles, AdjacencyMode.ElementNeighbors)
    assert elements.neighbors(0).tolist() == [0, 1, 2]


@pytest.mark.parametrize("mode", list(AdjacencyMode))
def test_matches_oracle_on_corpus(corpus_mesh, mode):
    expected = build_oracle(corpus_mesh, mode).to_csr()
    for backend in BACKENDS:
        actual = build_adjacency(corpus_mesh, mode, backend)
        assert expected.first_divergence(actual) is None, str(backend)
        assert actual.offsets.tobytes() == expected.offsets.tobytes()
        assert actual.indices.tobytes() == expected.indices.tobytes()


def test_handshake(corpus_mesh):
    nodes = build_adjacency(corpus_mesh, AdjacencyMode.NodeNeighbors, Backend.parallel(2))
    elements = build_adjacency(corpus_mesh, AdjacencyMode.ElementNeighbors, Backend.parallel(2))
    assert nodes.counts.sum() == 2 * mesh_stats(corpus_mesh).undirected_edge_count
    assert elements.counts.sum() == corpus_mesh.arities.sum()


def test_invariants_hold(corpus_mesh):
    for mode in AdjacencyMode:
        build_adjacency(corpus_mesh, mode, Backend.parallel(4)).check_invariants()


@pytest.mark.parametrize("n", [3, 10, 50])
def test_grid_interior_valence(n):
    mesh = generate_grid(n, n)
    rows, cols = np.meshgrid(np.arange(1, n), np.arange(1, n), indexing='ij')
    interior = (rows * (n + 1) + cols).ravel()
    for mode in AdjacencyMode:
        adjacency = build_adjacency(mesh, mode, Backend.parallel(4))
        assert np.all(adjacency.counts[interior] == 6)
        assert np.array_equal(adjacency.counts, build_oracle(mesh, mode).to_csr().counts)


def test_remove_duplicate_pairs_keeps_first_of_each(triangle_pair):
    unique_pairs = remove_duplicate_pairs(sort_pairs(expand_node_pairs(triangle_pair)))
    assert len(unique_pairs) == 10
    assert unique_pairs.to_tuples() == sorted(set(unique_pairs.to_tuples()))


def test_builder_reuses_its_backend(triangle_pair):
    builder = AdjacencyBuilder(Backend.parallel(2))
    first = builder.build(triangle_pair, AdjacencyMode.NodeNeighbors)
    second = builder.build(triangle_pair, AdjacencyMode.NodeNeighbors)
    assert first.equals(second)


def test_first_divergence_names_the_vertex(triangle_pair):
    expected = build_adjacency(triangle_pair, AdjacencyMode.NodeNeighbors)
    broken = CsrAdjacency.from_offsets(AdjacencyMode.NodeNeighbors, expected.offsets,
                                       np.where(np.arange(len(expected.indices)) == 4, 0, expected.indices))
    assert "vertex 1" in expected.first_divergence(broken)
    with pytest.raises(VerificationFailed):
        broken.check_invariants()


def test_check_invariants_rejects_asymmetric_adjacency():
    adjacency = CsrAdjacency.from_offsets(AdjacencyMode.NodeNeighbors, [0, 1, 1], [1])
    with pytest.raises(VerificationFailed):
        adjacency.check_invariants()


def test_check_invariants_rejects_self_loops():
    adjacency = CsrAdjacency.from_offsets(AdjacencyMode.NodeNeighbors, [0, 1, 2], [0, 1])
    with pytest.raises(VerificationFailed):
        adjacency.check_invariants()


def test_memory_estimate_examples(triangle):
    estimate = estimate_memory(triangle, AdjacencyMode.NodeNeighbors)
    assert estimate.pair_bytes == 2 * 6 * 4
    assert estimate.helper_bytes == 4 * 6 * 4
    assert estimate.peak_bytes >= estimate.pair_bytes + estimate.output_bytes

    empty = estimate_memory(Mesh.from_elements(0, []), AdjacencyMode.NodeNeighbors)
    assert (empty.pair_bytes, empty.helper_bytes) == (0, 0)
    assert empty.output_bytes == empty.peak_bytes == 8


def test_parallel_sort_raises_the_estimate():
    mesh = generate_grid(20, 20)
    serial = estimate_memory(mesh, AdjacencyMode.ElementNeighbors)
    parallel = estimate_memory(mesh, AdjacencyMode.ElementNeighbors, Backend.parallel(4))
    assert parallel.phase_bytes["sort"] - serial.phase_bytes["sort"] == 8 * 3 * mesh.element_count


def measured_peak(mesh: Mesh, mode: AdjacencyMode, backend: Backend = None) -> int:
    tracemalloc.start()
    try:
        tracemalloc.reset_peak()
        build_adjacency(mesh, mode, backend)
        return tracemalloc.get_traced_memory()[1]
    finally:
        tracemalloc.stop()


@pytest.mark.parametrize("mode", list(AdjacencyMode))
@pytest.mark.parametrize("backend", [Backend.serial(), Backend.parallel(1), Backend.parallel(4)], ids=str)
def test_memory_estimate_tracks_measured_peak(mode, backend):
    mesh = generate_grid(300, 300)
    estimate = estimate_memory(mesh, mode, backend)
    assert estimate.peak_bytes == pytest.approx(measured_peak(mesh, mode, backend), rel=0.10)


def test_reduce_keeps_index_width_counts():
    keys = np.repeat(np.arange(4, dtype=INDEX_DTYPE), 3)
    for backend in (Backend.serial(), Backend.parallel(2)):
        _, counts = reduce_by_key_ones(keys, backend)
        assert counts.dtype == INDEX_DTYPE
        assert counts.tolist() == [3, 3, 3, 3]


@pytest.mark.slow
def test_memory_estimate_at_turbine_blade_scale():
    mesh = generate_grid(940, 940)
    estimate = estimate_memory(mesh, AdjacencyMode.NodeNeighbors)
    assert estimate.peak_bytes == pytest.approx(measured_peak(mesh, AdjacencyMode.NodeNeighbors), rel=0.10)
