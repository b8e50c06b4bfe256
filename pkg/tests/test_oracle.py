import pytest

from src.common.exceptions import VerificationFailed
from src.csr_build.csr_builder import build_adjacency
from src.exec_backend.backend import Backend
from src.mesh_core.generators import generate_grid
from src.mesh_io.mesh_collector import NamedMesh
from src.oracle import adjacency_verifier
from src.oracle.adjacency_verifier import AdjacencyVerifier, verify_against_oracle
from src.oracle.oracle import build_oracle, oracle_element_neighbors, oracle_node_neighbors
from src.pair_expand.pair_list import AdjacencyMode


def test_node_oracle_examples(triangle, triangle_pair):
    assert oracle_node_neighbors(triangle).per_vertex == [[1, 2], [0, 2], [0, 1]]
    assert oracle_node_neighbors(triangle_pair).per_vertex[2] == [0, 1, 3]


def test_element_oracle_examples(triangle, triangle_pair):
    assert oracle_element_neighbors(triangle).per_vertex == [[0], [0], [0]]
    lists = oracle_element_neighbors(triangle_pair).per_vertex
    assert (lists[0], lists[1], lists[3]) == ([0, 1], [0], [1])


def test_oracle_lists_are_sorted_and_unique(corpus_mesh):
    for mode in AdjacencyMode:
        oracle = build_oracle(corpus_mesh, mode)
        assert oracle.vertex_count == corpus_mesh.vertex_count
        for vertex, neighbors in enumerate(oracle.per_vertex):
            assert neighbors == sorted(set(neighbors))
            if mode is AdjacencyMode.NodeNeighbors:
                assert vertex not in neighbors


@pytest.mark.parametrize("mode", list(AdjacencyMode))
def test_grid_30_matches_pipeline(mode):
    mesh = generate_grid(30, 30)
    assert build_oracle(mesh, mode).to_csr().equals(build_adjacency(mesh, mode, Backend.parallel(4)))


def test_oracle_csr_layout(triangle_pair):
    adjacency = build_oracle(triangle_pair, AdjacencyMode.ElementNeighbors).to_csr()
    assert adjacency.offsets.tolist() == [0, 2, 3, 5, 6]
    assert adjacency.to_lists() == [[0, 1], [0], [0, 1], [1]]


def test_verify_against_oracle_passes(triangle_pair):
    expected = verify_against_oracle(triangle_pair, AdjacencyMode.NodeNeighbors, [Backend.parallel(2)])
    assert expected.neighbors(0).tolist() == [1, 2, 3]


def test_verify_against_oracle_reports_divergence(triangle_pair, monkeypatch):
    def drop_last_entry(mesh, mode, backend=None):
        adjacency = build_adjacency(mesh, mode, backend)
        return type(adjacency).from_offsets(mode, [0, 3, 5, 8, 9], adjacency.indices[:-1])

    monkeypatch.setattr(adjacency_verifier, "build_adjacency", drop_last_entry)
    with pytest.raises(VerificationFailed) as error:
        verify_against_oracle(triangle_pair, AdjacencyMode.NodeNeighbors, [Backend.serial()])
    assert error.value.exit_code == 1


def test_verifier_stage_checks_configured_modes(triangle_pair):
    verifier = AdjacencyVerifier({"modes": ["nodes", "elements"], "backend": "parallel", "workers": 2})
    verifier.verify([NamedMesh("pair", triangle_pair)])
