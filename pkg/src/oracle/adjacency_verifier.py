from typing import Iterable, List, Optional, Union

from loguru import logger

from src.common.args import process_args
from src.common.exceptions import VerificationFailed
from src.csr_build.csr_adjacency import CsrAdjacency
from src.csr_build.csr_builder import build_adjacency
from src.exec_backend.backend import Backend
from src.mesh_config.mesh_configuration import AdjacencyConfig
from src.mesh_core.mesh import Mesh
from src.mesh_io.mesh_collector import NamedMesh
from src.oracle.oracle import build_oracle
from src.pair_expand.pair_list import AdjacencyMode
from src.pipeline_object.pipeline_object import PipelineObject


def verify_against_oracle(mesh: Mesh, mode: AdjacencyMode,
                          backends: Optional[Iterable[Backend]] = None) -> CsrAdjacency:
    """
    Build the adjacency on every backend and compare each result with the serial oracle.

    :param mesh: mesh to check
    :param mode: adjacency mode
    :param backends: backends to check, serial and auto-sized parallel by default
    :return: the oracle adjacency in CSR form
    :raises VerificationFailed: with the first divergence found
    """
    backends = list(backends) if backends is not None else [Backend.serial(), Backend.parallel()]
    expected = build_oracle(mesh, mode).to_csr()
    for backend in backends:
        actual = build_adjacency(mesh, mode, backend)
        actual.check_invariants()
        divergence = expected.first_divergence(actual)
        if divergence is not None:
            raise VerificationFailed(f"{mode.name} on {backend}: {divergence}")
        logger.debug(f"{mode.name} on {backend} matches the oracle")

    return expected


class AdjacencyVerifier(PipelineObject):
    """
    Verify stage: oracle equivalence for every mesh and configured mode on the configured backend.
    """

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        super().__init__(config)
        self.backends = [Backend.serial(), Backend.from_name(self.config.backend, self.config.workers)]

    def verify(self, named_meshes: List[NamedMesh]) -> None:
        for named_mesh in named_meshes:
            for mode in AdjacencyMode.from_names(self.config.modes):
                verify_against_oracle(named_mesh.mesh, mode, self.backends)
                logger.info(f"{named_mesh.name}: {mode.name} adjacency matches the oracle")
